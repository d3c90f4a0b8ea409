//! The down-set monad `P` on preorders: `P(X)` is the lattice of down-sets,
//! the unit is `x ↦ ↓x` and the multiplication is union.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{shape, Result};
use crate::limits::Limits;
use crate::order::preorder::empty_set;
use crate::order::{all_downsets, down_closure, FinPreorder, MonotoneMap};

/// `P(base)`: every down-set of `base`, ordered by inclusion.
#[derive(Debug, Clone)]
pub struct DownSetLattice {
    base: FinPreorder,
    sets: Vec<FixedBitSet>,
    carrier: FinPreorder,
    index: HashMap<FixedBitSet, usize>,
}

impl DownSetLattice {
    pub fn base(&self) -> &FinPreorder {
        &self.base
    }

    pub fn carrier(&self) -> &FinPreorder {
        &self.carrier
    }

    /// Down-sets in lexicographic order of membership vectors.
    pub fn sets(&self) -> &[FixedBitSet] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &FixedBitSet {
        &self.sets[i]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, set: &FixedBitSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// Index of the principal down-set `↓x`.
    pub fn principal(&self, x: usize) -> usize {
        self.index[self.base.down(x)]
    }
}

pub(crate) fn set_label(x: &FinPreorder, set: &FixedBitSet) -> String {
    let parts: Vec<String> = set.ones().map(|i| x.label(i).into_owned()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn downsets(x: &FinPreorder, limits: &Limits) -> Result<DownSetLattice> {
    let sets = all_downsets(x, limits)?;
    limits.check_carrier("down-set lattice", sets.len())?;
    let carrier = FinPreorder::from_fn_trusted(sets.len(), |i, j| sets[i].is_subset(&sets[j]))
        .with_labels_trusted(sets.iter().map(|s| set_label(x, s)).collect());
    let index = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    Ok(DownSetLattice {
        base: x.clone(),
        sets,
        carrier,
        index,
    })
}

/// `x ↦ ↓x`.
pub fn unit(p: &DownSetLattice) -> MonotoneMap {
    let assign = (0..p.base.len()).map(|x| p.principal(x)).collect();
    MonotoneMap::trusted(p.base.clone(), p.carrier.clone(), assign)
}

/// `P(f)(φ) = ↓f[φ]`.
pub fn functor_map(f: &MonotoneMap, pa: &DownSetLattice, pb: &DownSetLattice) -> Result<MonotoneMap> {
    if pa.base != *f.src() || pb.base != *f.tgt() {
        return Err(shape("P(f) needs the down-set lattices of dom f and cod f"));
    }
    let assign = pa
        .sets
        .iter()
        .map(|phi| pb.index[&down_closure(f.tgt(), &f.image_of(phi))])
        .collect();
    Ok(MonotoneMap::trusted(pa.carrier.clone(), pb.carrier.clone(), assign))
}

/// Union `P(P(X)) -> P(X)`; `ppx` must be the down-set lattice of `px.carrier()`.
pub fn mult(px: &DownSetLattice, ppx: &DownSetLattice) -> Result<MonotoneMap> {
    if ppx.base != px.carrier {
        return Err(shape("multiplication needs P(P(X)) built over P(X)"));
    }
    let assign = ppx
        .sets
        .iter()
        .map(|big| {
            let mut union = empty_set(px.base.len());
            for i in big.ones() {
                union.union_with(&px.sets[i]);
            }
            px.index[&union]
        })
        .collect();
    Ok(MonotoneMap::trusted(ppx.carrier.clone(), px.carrier.clone(), assign))
}

/// The supremum map `P(X) -> X`, present iff every down-set has a least
/// upper bound (up to equivalence). Ties go to the lowest index.
pub fn algebra_structure(px: &DownSetLattice) -> Option<MonotoneMap> {
    let x = &px.base;
    let assign: Option<Vec<usize>> = px.sets.iter().map(|phi| x.lub(phi)).collect();
    Some(MonotoneMap::trusted(px.carrier.clone(), x.clone(), assign?))
}

/// Algebra laws up to equivalence: `α(↓x) ≃ x` and `α ∘ μ ≃ α ∘ P(α)`.
pub fn check_algebra_laws(px: &DownSetLattice, ppx: &DownSetLattice, alpha: &MonotoneMap) -> Result<bool> {
    let x = &px.base;
    let unit_law = (0..x.len()).all(|e| x.equiv(alpha.apply(px.principal(e)), e));
    let m = mult(px, ppx)?;
    let p_alpha = functor_map(alpha, ppx, px)?;
    let assoc = (0..ppx.len()).all(|big| x.equiv(alpha.apply(m.apply(big)), alpha.apply(p_alpha.apply(big))));
    Ok(unit_law && assoc)
}

/// `P(unit_X) <= unit_{P X}` pointwise on `P(X)`.
pub fn check_lax_idempotent(x: &FinPreorder, limits: &Limits) -> Result<bool> {
    let px = downsets(x, limits)?;
    let ppx = downsets(px.carrier(), limits)?;
    let p_unit = functor_map(&unit(&px), &px, &ppx)?;
    let unit_p = unit(&ppx);
    Ok(p_unit.le(&unit_p))
}

/// Results of evaluating the monad laws on one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadLaws {
    pub left_unit: bool,
    pub right_unit: bool,
    /// `None` when `P(P(P(X)))` exceeds the carrier bound.
    pub associativity: Option<bool>,
}

impl MonadLaws {
    pub fn hold(&self) -> bool {
        self.left_unit && self.right_unit && self.associativity != Some(false)
    }
}

pub fn check_monad_laws(x: &FinPreorder, limits: &Limits) -> Result<MonadLaws> {
    let px = downsets(x, limits)?;
    let ppx = downsets(px.carrier(), limits)?;
    let m = mult(&px, &ppx)?;
    let id = MonotoneMap::identity(px.carrier());
    let left_unit = unit(&ppx).then(&m)? == id;
    let right_unit = functor_map(&unit(&px), &px, &ppx)?.then(&m)? == id;
    let associativity = match downsets(ppx.carrier(), limits) {
        Ok(pppx) => {
            let outer = mult(&ppx, &pppx)?.then(&m)?;
            let inner = functor_map(&m, &pppx, &ppx)?.then(&m)?;
            Some(outer == inner)
        }
        Err(crate::OrderError::SizeLimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MonadLaws {
        left_unit,
        right_unit,
        associativity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::is_isomorphic;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn downset_examples() {
        let p = downsets(&FinPreorder::chain(2), &lim()).unwrap();
        assert_eq!(p.carrier(), &FinPreorder::chain(3));
        let p = downsets(&FinPreorder::antichain(2), &lim()).unwrap();
        assert!(is_isomorphic(p.carrier(), &FinPreorder::diamond()));
        let p = downsets(&FinPreorder::empty(), &lim()).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn unit_examples() {
        let p = downsets(&FinPreorder::chain(2), &lim()).unwrap();
        let u = unit(&p);
        assert_eq!(p.set(u.apply(1)).ones().collect::<Vec<_>>(), vec![0, 1]);
        let p = downsets(&FinPreorder::antichain(2), &lim()).unwrap();
        assert_eq!(p.set(unit(&p).apply(0)).ones().collect::<Vec<_>>(), vec![0]);
        assert!(unit(&p).is_full());
    }

    #[test]
    fn mult_examples() {
        let x = FinPreorder::chain(2);
        let px = downsets(&x, &lim()).unwrap();
        let ppx = downsets(px.carrier(), &lim()).unwrap();
        let m = mult(&px, &ppx).unwrap();
        let empty = ppx.index_of(&empty_set(px.len())).unwrap();
        assert!(px.set(m.apply(empty)).is_clear());
        for phi in 0..px.len() {
            assert_eq!(m.apply(ppx.principal(phi)), phi);
        }
        let laws = check_monad_laws(&x, &lim()).unwrap();
        assert_eq!(laws.associativity, Some(true));
        assert!(laws.hold());
    }

    #[test]
    fn algebra_examples() {
        let d = downsets(&FinPreorder::diamond(), &lim()).unwrap();
        let alpha = algebra_structure(&d).unwrap();
        assert_eq!(d.len(), 6);
        // ∅ ↦ ⊥, {⊥} ↦ ⊥, {⊥,a} ↦ a, {⊥,b} ↦ b, {⊥,a,b} ↦ ⊤, all ↦ ⊤
        let sups: Vec<String> = alpha.assign().iter().map(|&i| d.base().label(i).into_owned()).collect();
        let mut sorted = sups.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["a", "b", "bot", "bot", "top", "top"]);
        let dd = downsets(d.carrier(), &lim()).unwrap();
        assert!(check_algebra_laws(&d, &dd, &alpha).unwrap());
        assert!(algebra_structure(&downsets(&FinPreorder::antichain(2), &lim()).unwrap()).is_none());
        let one = downsets(&FinPreorder::one(), &lim()).unwrap();
        assert_eq!(algebra_structure(&one).unwrap().assign(), &[0, 0]);
    }

    #[test]
    fn lax_idempotent_examples() {
        for x in [FinPreorder::antichain(2), FinPreorder::chain(3), FinPreorder::empty()] {
            assert!(check_lax_idempotent(&x, &lim()).unwrap());
        }
    }
}
