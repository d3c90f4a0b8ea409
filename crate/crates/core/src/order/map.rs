use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::preorder::{empty_set, FinPreorder};
use crate::error::{invalid, shape, OrderError, Result};

/// An order-preserving function between two finite preorders.
#[derive(Clone)]
pub struct MonotoneMap {
    src: FinPreorder,
    tgt: FinPreorder,
    assign: Arc<[usize]>,
}

impl MonotoneMap {
    pub fn new(src: FinPreorder, tgt: FinPreorder, assign: Vec<usize>) -> Result<Self> {
        if assign.len() != src.len() {
            return Err(invalid(format!(
                "assignment has {} entries for a source of {} elements",
                assign.len(),
                src.len()
            )));
        }
        if let Some(&index) = assign.iter().find(|&&a| a >= tgt.len()) {
            return Err(OrderError::IndexOutOfRange {
                index,
                len: tgt.len(),
            });
        }
        for (i, j) in src.relation_pairs() {
            if !tgt.le(assign[i], assign[j]) {
                return Err(invalid(format!(
                    "map is not monotone: {} <= {} but {} is not <= {}",
                    src.label(i),
                    src.label(j),
                    tgt.label(assign[i]),
                    tgt.label(assign[j])
                )));
            }
        }
        Ok(Self::trusted(src, tgt, assign))
    }

    /// For constructions that are monotone by construction.
    pub(crate) fn trusted(src: FinPreorder, tgt: FinPreorder, assign: Vec<usize>) -> Self {
        debug_assert_eq!(assign.len(), src.len());
        if cfg!(debug_assertions) && src.len() <= 64 {
            for (i, j) in src.relation_pairs() {
                debug_assert!(tgt.le(assign[i], assign[j]), "construction is not monotone");
            }
        }
        MonotoneMap {
            src,
            tgt,
            assign: assign.into(),
        }
    }

    pub fn identity(x: &FinPreorder) -> Self {
        Self::trusted(x.clone(), x.clone(), (0..x.len()).collect())
    }

    pub fn constant(src: &FinPreorder, tgt: &FinPreorder, value: usize) -> Result<Self> {
        if value >= tgt.len() {
            return Err(OrderError::IndexOutOfRange {
                index: value,
                len: tgt.len(),
            });
        }
        Ok(Self::trusted(src.clone(), tgt.clone(), vec![value; src.len()]))
    }

    /// The unique map `x -> one`.
    pub fn terminal(x: &FinPreorder) -> Self {
        Self::trusted(x.clone(), FinPreorder::one(), vec![0; x.len()])
    }

    pub fn src(&self) -> &FinPreorder {
        &self.src
    }

    pub fn tgt(&self) -> &FinPreorder {
        &self.tgt
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.assign[i]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        compose(self, other)
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &MonotoneMap) -> bool {
        self.assign
            .iter()
            .zip(other.assign.iter())
            .all(|(&a, &b)| self.tgt.le(a, b))
    }

    /// Pointwise equivalence in the target preorder.
    pub fn equiv(&self, other: &MonotoneMap) -> bool {
        self.le(other) && other.le(self)
    }

    /// `f(a) <= f(a')` implies `a <= a'`.
    pub fn is_full(&self) -> bool {
        let n = self.src.len();
        (0..n).all(|a| {
            (0..n).all(|b| !self.tgt.le(self.assign[a], self.assign[b]) || self.src.le(a, b))
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = empty_set(self.tgt.len());
        self.assign.iter().all(|&a| !seen.put(a))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().count_ones(..) == self.tgt.len()
    }

    /// Full, and injective on equivalence classes.
    pub fn is_order_embedding(&self) -> bool {
        let n = self.src.len();
        self.is_full()
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    !self.tgt.equiv(self.assign[a], self.assign[b]) || self.src.equiv(a, b)
                })
            })
    }

    pub fn image(&self) -> FixedBitSet {
        let mut out = empty_set(self.tgt.len());
        for &a in self.assign.iter() {
            out.insert(a);
        }
        out
    }

    pub fn image_of(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = empty_set(self.tgt.len());
        for i in set.ones() {
            out.insert(self.assign[i]);
        }
        out
    }

    pub fn preimage(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = empty_set(self.src.len());
        for (i, &a) in self.assign.iter().enumerate() {
            if set.contains(a) {
                out.insert(i);
            }
        }
        out
    }

    /// Same assignment with different (equal) endpoint handles.
    pub fn with_endpoints(&self, src: &FinPreorder, tgt: &FinPreorder) -> Result<MonotoneMap> {
        if src != &self.src || tgt != &self.tgt {
            return Err(shape("replacement endpoints are not equal to the originals"));
        }
        Ok(Self::trusted(src.clone(), tgt.clone(), self.assign.to_vec()))
    }
}

/// `g ∘ f`; requires `f.tgt() == g.src()`.
pub fn compose(f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
    if f.tgt != g.src {
        return Err(shape("compose: codomain of f differs from domain of g"));
    }
    let assign = f.assign.iter().map(|&a| g.assign[a]).collect();
    Ok(MonotoneMap::trusted(f.src.clone(), g.tgt.clone(), assign))
}

pub(crate) fn check_parallel(f: &MonotoneMap, g: &MonotoneMap) -> Result<()> {
    if f.src != g.src || f.tgt != g.tgt {
        return Err(shape("maps are not parallel"));
    }
    Ok(())
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign && self.src == other.src && self.tgt == other.tgt
    }
}

impl Eq for MonotoneMap {}

impl Hash for MonotoneMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.assign.hash(state);
    }
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assign
            .iter()
            .enumerate()
            .map(|(i, &a)| format!("{}->{}", self.src.label(i), self.tgt.label(a)))
            .collect();
        write!(f, "MonotoneMap[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FinPreorder {
        FinPreorder::chain(2)
    }

    #[test]
    fn rejects_non_monotone() {
        assert!(MonotoneMap::new(c2(), c2(), vec![1, 0]).is_err());
        assert!(MonotoneMap::new(c2(), c2(), vec![0, 2]).is_err());
        assert!(MonotoneMap::new(c2(), c2(), vec![0]).is_err());
    }

    #[test]
    fn identity_laws() {
        let f = MonotoneMap::new(c2(), FinPreorder::chain(3), vec![0, 2]).unwrap();
        let id_src = MonotoneMap::identity(f.src());
        let id_tgt = MonotoneMap::identity(f.tgt());
        assert_eq!(compose(&id_src, &f).unwrap(), f);
        assert_eq!(compose(&f, &id_tgt).unwrap(), f);
    }

    #[test]
    fn through_a_point() {
        let one = FinPreorder::one();
        let pick = MonotoneMap::constant(&one, &c2(), 1).unwrap();
        let bang = MonotoneMap::terminal(&c2());
        assert_eq!(compose(&pick, &bang).unwrap(), MonotoneMap::identity(&one));
    }

    #[test]
    fn compose_shape_mismatch() {
        let f = MonotoneMap::identity(&c2());
        let g = MonotoneMap::identity(&FinPreorder::chain(3));
        assert!(matches!(compose(&f, &g), Err(OrderError::ShapeMismatch(_))));
    }

    #[test]
    fn fullness() {
        let a2 = FinPreorder::antichain(2);
        let f = MonotoneMap::new(a2, c2(), vec![0, 1]).unwrap();
        assert!(!f.is_full());
        assert!(!f.is_order_embedding());
        let g = MonotoneMap::new(c2(), FinPreorder::chain(3), vec![0, 2]).unwrap();
        assert!(g.is_full());
        // collapsing an equivalence class is full but not injective
        let ind = FinPreorder::indiscrete(2);
        let h = MonotoneMap::terminal(&ind);
        assert!(h.is_full() && !h.is_injective() && h.is_order_embedding());
    }
}
