//! The acceptance battery, one test per criterion. Each prints a single
//! PASS/FAIL line; run with `--nocapture` to see them.

use lofs_core::suite;
use lofs_core::Limits;

fn criterion(id: usize) {
    let report = suite::run(id, &Limits::default()).expect("criterion runs within the default limits");
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn criterion_01_factorisation_soundness() {
    criterion(1);
}

#[test]
fn criterion_02_coalgebra_iff_full() {
    criterion(2);
}

#[test]
fn criterion_03_fibrant_is_complete_lattice() {
    criterion(3);
}

#[test]
fn criterion_04_fibrant_replacement() {
    criterion(4);
}

#[test]
fn criterion_05_kz_universal_property() {
    criterion(5);
}

#[test]
fn criterion_06_lax_idempotency() {
    criterion(6);
}

#[test]
fn criterion_07_kan_injectivity_classification() {
    criterion(7);
}

#[test]
fn criterion_08_lifting_families() {
    criterion(8);
}

#[test]
fn criterion_09_finite_topology() {
    criterion(9);
}

#[test]
fn criterion_10_ordinal_stages() {
    criterion(10);
}

#[test]
fn criterion_11_enumeration_counts() {
    criterion(11);
}
