//! Finite preorders, monotone maps, 2-cells, squares and enumeration.

pub mod cells;
pub mod downset;
pub mod enumerate;
pub mod map;
pub mod preorder;
pub mod search;

pub use cells::{hom_poset, sq_hom_poset, two_cell, HomPoset, Square, SquarePoset, TwoCell};
pub use downset::{all_downsets, all_upsets, down_closure, is_down_closed, is_up_closed, up_closure, DownSet};
pub use enumerate::{canonical, canonical_form, enumerate_posets, enumerate_preorders, find_isomorphism, is_isomorphic};
pub use map::{compose, MonotoneMap};
pub use preorder::{Completeness, FinPreorder};
pub use search::{free_domains, monotone_search, Search};

/// Convenience predicates mirroring the method forms.
pub fn is_poset(x: &FinPreorder) -> bool {
    x.is_poset()
}

pub fn is_full(f: &MonotoneMap) -> bool {
    f.is_full()
}

pub fn is_order_embedding(f: &MonotoneMap) -> bool {
    f.is_order_embedding()
}

pub fn is_complete_lattice(x: &FinPreorder) -> bool {
    x.is_complete_lattice()
}
