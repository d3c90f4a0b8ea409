//! Adjoints between monotone maps, RALIs and LARIs, comma objects and
//! collages, and the two lax-orthogonal factorisations they induce.

use fixedbitset::FixedBitSet;

use crate::error::{invalid, Result};
use crate::limits::Limits;
use crate::order::preorder::empty_set;
use crate::order::{compose, hom_poset, FinPreorder, MonotoneMap};

/// `left ⊣ right`: `left(b) <= a` iff `b <= right(a)`.
pub fn is_adjunction(left: &MonotoneMap, right: &MonotoneMap) -> bool {
    let (a_side, b_side) = (right.src(), right.tgt());
    if left.src() != b_side || left.tgt() != a_side {
        return false;
    }
    (0..a_side.len()).all(|a| {
        (0..b_side.len()).all(|b| a_side.le(left.apply(b), a) == b_side.le(b, right.apply(a)))
    })
}

/// For each `b` in the codomain, the least elements of `{a : b <= f(a)}`.
/// `None` when some such set has no least element.
pub fn left_adjoint_candidates(f: &MonotoneMap) -> Option<Vec<FixedBitSet>> {
    let (a_side, b_side) = (f.src(), f.tgt());
    (0..b_side.len())
        .map(|b| {
            let mut above = empty_set(a_side.len());
            for a in 0..a_side.len() {
                if b_side.le(b, f.apply(a)) {
                    above.insert(a);
                }
            }
            let mins = a_side.minima(&above);
            (!mins.is_clear()).then_some(mins)
        })
        .collect()
}

/// For each `b`, the greatest elements of `{a : f(a) <= b}`.
pub fn right_adjoint_candidates(f: &MonotoneMap) -> Option<Vec<FixedBitSet>> {
    let (a_side, b_side) = (f.src(), f.tgt());
    (0..b_side.len())
        .map(|b| {
            let mut below = empty_set(a_side.len());
            for a in 0..a_side.len() {
                if b_side.le(f.apply(a), b) {
                    below.insert(a);
                }
            }
            let maxs = a_side.maxima(&below);
            (!maxs.is_clear()).then_some(maxs)
        })
        .collect()
}

/// The left adjoint of `f`, taking the lowest-index least element pointwise.
pub fn find_left_adjoint(f: &MonotoneMap) -> Option<MonotoneMap> {
    let cands = left_adjoint_candidates(f)?;
    let assign = cands.iter().map(|m| m.ones().next().expect("nonempty")).collect();
    Some(MonotoneMap::trusted(f.tgt().clone(), f.src().clone(), assign))
}

/// The right adjoint of `f`, taking the lowest-index greatest element pointwise.
pub fn find_right_adjoint(f: &MonotoneMap) -> Option<MonotoneMap> {
    let cands = right_adjoint_candidates(f)?;
    let assign = cands.iter().map(|m| m.ones().next().expect("nonempty")).collect();
    Some(MonotoneMap::trusted(f.tgt().clone(), f.src().clone(), assign))
}

/// A right adjoint left inverse: `f ∘ left = id` and `left ∘ f <= id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaliWitness {
    f: MonotoneMap,
    left_adjoint: MonotoneMap,
}

impl RaliWitness {
    pub fn new(f: MonotoneMap, left_adjoint: MonotoneMap) -> Result<Self> {
        if !is_rali_pair(&f, &left_adjoint) {
            return Err(invalid("not a RALI: section or counit condition fails"));
        }
        Ok(RaliWitness { f, left_adjoint })
    }

    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    pub fn left_adjoint(&self) -> &MonotoneMap {
        &self.left_adjoint
    }
}

pub fn is_rali_pair(f: &MonotoneMap, left: &MonotoneMap) -> bool {
    if left.src() != f.tgt() || left.tgt() != f.src() {
        return false;
    }
    let section = (0..f.tgt().len()).all(|b| f.apply(left.apply(b)) == b);
    let counit = (0..f.src().len()).all(|a| f.src().le(left.apply(f.apply(a)), a));
    section && counit
}

/// A left adjoint right inverse: `right ∘ f = id` and `f ∘ right <= id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LariWitness {
    f: MonotoneMap,
    right_adjoint: MonotoneMap,
}

impl LariWitness {
    pub fn new(f: MonotoneMap, right_adjoint: MonotoneMap) -> Result<Self> {
        if !is_lari_pair(&f, &right_adjoint) {
            return Err(invalid("not a LARI: retraction or counit condition fails"));
        }
        Ok(LariWitness { f, right_adjoint })
    }

    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    pub fn right_adjoint(&self) -> &MonotoneMap {
        &self.right_adjoint
    }
}

pub fn is_lari_pair(f: &MonotoneMap, right: &MonotoneMap) -> bool {
    if right.src() != f.tgt() || right.tgt() != f.src() {
        return false;
    }
    let retraction = (0..f.src().len()).all(|a| right.apply(f.apply(a)) == a);
    let counit = (0..f.tgt().len()).all(|b| f.tgt().le(f.apply(right.apply(b)), b));
    retraction && counit
}

/// RALI structure on `f`, if any. The section at `b` is the lowest-index
/// least element of `{a : b <= f(a)}` that `f` sends exactly to `b`.
pub fn find_rali(f: &MonotoneMap) -> Option<RaliWitness> {
    let cands = left_adjoint_candidates(f)?;
    let mut assign = Vec::with_capacity(cands.len());
    for (b, mins) in cands.iter().enumerate() {
        assign.push(mins.ones().find(|&a| f.apply(a) == b)?);
    }
    let left = MonotoneMap::trusted(f.tgt().clone(), f.src().clone(), assign);
    debug_assert!(is_rali_pair(f, &left));
    Some(RaliWitness {
        f: f.clone(),
        left_adjoint: left,
    })
}

/// LARI structure on `f`, if any.
pub fn find_lari(f: &MonotoneMap) -> Option<LariWitness> {
    if !f.is_injective() {
        return None;
    }
    let cands = right_adjoint_candidates(f)?;
    let mut preimage = vec![None; f.tgt().len()];
    for a in 0..f.src().len() {
        preimage[f.apply(a)] = Some(a);
    }
    let mut assign = Vec::with_capacity(cands.len());
    for (b, maxs) in cands.iter().enumerate() {
        let pick = match preimage[b] {
            Some(a) => maxs.contains(a).then_some(a)?,
            None => maxs.ones().next().expect("nonempty"),
        };
        assign.push(pick);
    }
    let right = MonotoneMap::trusted(f.tgt().clone(), f.src().clone(), assign);
    debug_assert!(is_lari_pair(f, &right));
    Some(LariWitness {
        f: f.clone(),
        right_adjoint: right,
    })
}

/// Every RALI section of `f`, by exhaustive search over `hom(cod f, dom f)`.
pub fn ralis_exhaustive(f: &MonotoneMap, limits: &Limits) -> Result<Vec<MonotoneMap>> {
    let hom = hom_poset(f.tgt(), f.src(), limits)?;
    Ok(hom
        .maps()
        .iter()
        .filter(|s| is_rali_pair(f, s))
        .cloned()
        .collect())
}

/// Every LARI retraction of `f`, by exhaustive search.
pub fn laris_exhaustive(f: &MonotoneMap, limits: &Limits) -> Result<Vec<MonotoneMap>> {
    let hom = hom_poset(f.tgt(), f.src(), limits)?;
    Ok(hom
        .maps()
        .iter()
        .filter(|r| is_lari_pair(f, r))
        .cloned()
        .collect())
}

/// The comma object `f/B`: pairs `(a, b)` with `f(a) <= b`, ordered componentwise.
#[derive(Debug, Clone)]
pub struct CommaObject {
    f: MonotoneMap,
    carrier: FinPreorder,
    pairs: Vec<(usize, usize)>,
    proj_a: MonotoneMap,
    proj_b: MonotoneMap,
}

impl CommaObject {
    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    pub fn carrier(&self) -> &FinPreorder {
        &self.carrier
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.binary_search(&(a, b)).ok()
    }

    pub fn proj_a(&self) -> &MonotoneMap {
        &self.proj_a
    }

    pub fn proj_b(&self) -> &MonotoneMap {
        &self.proj_b
    }
}

pub fn comma(f: &MonotoneMap, limits: &Limits) -> Result<CommaObject> {
    let (a_side, b_side) = (f.src(), f.tgt());
    limits.check_carrier("comma object", a_side.len().saturating_mul(b_side.len()))?;
    let pairs: Vec<(usize, usize)> = (0..a_side.len())
        .flat_map(|a| (0..b_side.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| b_side.le(f.apply(a), b))
        .collect();
    let carrier = FinPreorder::from_fn_trusted(pairs.len(), |x, y| {
        a_side.le(pairs[x].0, pairs[y].0) && b_side.le(pairs[x].1, pairs[y].1)
    })
    .with_labels_trusted(
        pairs
            .iter()
            .map(|&(a, b)| format!("({},{})", a_side.label(a), b_side.label(b)))
            .collect(),
    );
    let proj_a = MonotoneMap::trusted(carrier.clone(), a_side.clone(), pairs.iter().map(|p| p.0).collect());
    let proj_b = MonotoneMap::trusted(carrier.clone(), b_side.clone(), pairs.iter().map(|p| p.1).collect());
    Ok(CommaObject {
        f: f.clone(),
        carrier,
        pairs,
        proj_a,
        proj_b,
    })
}

/// The collage of `f`: `A ⊔ B` with `inr(b) <= inl(a)` iff `b <= f(a)`.
/// Elements of `A` come first.
#[derive(Debug, Clone)]
pub struct Collage {
    f: MonotoneMap,
    carrier: FinPreorder,
    copr_a: MonotoneMap,
    copr_b: MonotoneMap,
}

impl Collage {
    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    pub fn carrier(&self) -> &FinPreorder {
        &self.carrier
    }

    pub fn copr_a(&self) -> &MonotoneMap {
        &self.copr_a
    }

    pub fn copr_b(&self) -> &MonotoneMap {
        &self.copr_b
    }
}

pub fn collage(f: &MonotoneMap, limits: &Limits) -> Result<Collage> {
    let (a_side, b_side) = (f.src(), f.tgt());
    let na = a_side.len();
    let n = na + b_side.len();
    limits.check_carrier("collage", n)?;
    let carrier = FinPreorder::from_fn_trusted(n, |x, y| match (x < na, y < na) {
        (true, true) => a_side.le(x, y),
        (false, false) => b_side.le(x - na, y - na),
        (false, true) => b_side.le(x - na, f.apply(y)),
        (true, false) => false,
    })
    .with_labels_trusted(
        (0..na)
            .map(|a| format!("A.{}", a_side.label(a)))
            .chain((0..b_side.len()).map(|b| format!("B.{}", b_side.label(b))))
            .collect(),
    );
    let copr_a = MonotoneMap::trusted(a_side.clone(), carrier.clone(), (0..na).collect());
    let copr_b = MonotoneMap::trusted(b_side.clone(), carrier.clone(), (na..n).collect());
    Ok(Collage {
        f: f.clone(),
        carrier,
        copr_a,
        copr_b,
    })
}

/// `f = R(f) ∘ L(f)` through the comma object; `L(f)` is a LARI.
#[derive(Debug, Clone)]
pub struct LaxLimitFactorisation {
    pub comma: CommaObject,
    pub left: MonotoneMap,
    pub right: MonotoneMap,
    pub left_lari: LariWitness,
}

pub fn laxlimit_awfs(f: &MonotoneMap, limits: &Limits) -> Result<LaxLimitFactorisation> {
    let c = comma(f, limits)?;
    let assign = (0..f.src().len())
        .map(|a| c.index_of(a, f.apply(a)).expect("(a, f a) is in the comma object"))
        .collect();
    let left = MonotoneMap::trusted(f.src().clone(), c.carrier.clone(), assign);
    let right = c.proj_b.clone();
    debug_assert_eq!(compose(&left, &right)?.assign(), f.assign());
    let left_lari = LariWitness::new(left.clone(), c.proj_a.clone())?;
    Ok(LaxLimitFactorisation {
        comma: c,
        left,
        right,
        left_lari,
    })
}

/// `f = M(f) ∘ E(f)` through the collage; `M(f)` is a RALI with section `inr`.
#[derive(Debug, Clone)]
pub struct LaxColimitFactorisation {
    pub collage: Collage,
    pub left: MonotoneMap,
    pub right: MonotoneMap,
    pub right_rali: RaliWitness,
}

pub fn laxcolimit_awfs(f: &MonotoneMap, limits: &Limits) -> Result<LaxColimitFactorisation> {
    let c = collage(f, limits)?;
    let na = f.src().len();
    let assign = (0..c.carrier.len())
        .map(|x| if x < na { f.apply(x) } else { x - na })
        .collect();
    let right = MonotoneMap::trusted(c.carrier.clone(), f.tgt().clone(), assign);
    let left = c.copr_a.clone();
    let right_rali = RaliWitness::new(right.clone(), c.copr_b.clone())?;
    Ok(LaxColimitFactorisation {
        collage: c,
        left,
        right,
        right_rali,
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
    fn left_adjoint_examples() {
        let c2 = FinPreorder::chain(2);
        let id = MonotoneMap::identity(&c2);
        assert_eq!(find_left_adjoint(&id).unwrap(), id);
        let bang = MonotoneMap::terminal(&c2);
        let g = find_left_adjoint(&bang).unwrap();
        assert_eq!(g.assign(), &[0]);
        assert!(is_adjunction(&g, &bang));
        // brute force: the only map one -> c2 satisfying the adjunction
        let hom = hom_poset(bang.tgt(), bang.src(), &lim()).unwrap();
        let adj: Vec<_> = hom.maps().iter().filter(|m| is_adjunction(m, &bang)).collect();
        assert_eq!(adj.len(), 1);
        assert_eq!(adj[0], &g);
        assert!(find_left_adjoint(&MonotoneMap::terminal(&FinPreorder::antichain(2))).is_none());
    }

    #[test]
    fn rali_examples() {
        let c2 = FinPreorder::chain(2);
        let id = MonotoneMap::identity(&c2);
        assert_eq!(find_rali(&id).unwrap().left_adjoint(), &id);
        let w = find_rali(&MonotoneMap::terminal(&c2)).unwrap();
        assert_eq!(w.left_adjoint().assign(), &[0]);
        assert!(find_rali(&MonotoneMap::terminal(&FinPreorder::antichain(2))).is_none());
    }

    #[test]
    fn comma_examples() {
        let c2 = FinPreorder::chain(2);
        let c = comma(&MonotoneMap::identity(&c2), &lim()).unwrap();
        assert_eq!(c.pairs(), &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(c.carrier(), &FinPreorder::chain(3));
        let a2 = FinPreorder::antichain(2);
        let c = comma(&MonotoneMap::terminal(&a2), &lim()).unwrap();
        assert!(is_isomorphic(c.carrier(), &a2));
    }

    #[test]
    fn collage_examples() {
        let one = FinPreorder::one();
        let c = collage(&MonotoneMap::identity(&one), &lim()).unwrap();
        assert!(c.carrier().le(1, 0) && !c.carrier().le(0, 1));
        assert_eq!(c.carrier(), &FinPreorder::chain(2).op());
    }

    #[test]
    fn lax_limit_factorisation() {
        let one = FinPreorder::one();
        let fac = laxlimit_awfs(&MonotoneMap::identity(&one), &lim()).unwrap();
        assert_eq!(fac.comma.carrier().len(), 1);
        let a2 = FinPreorder::antichain(2);
        let fac = laxlimit_awfs(&MonotoneMap::terminal(&a2), &lim()).unwrap();
        assert_eq!(fac.left.assign(), &[0, 1]);
        assert_eq!(fac.left_lari.right_adjoint(), fac.comma.proj_a());
        let c2 = FinPreorder::chain(2);
        let fac = laxlimit_awfs(&MonotoneMap::identity(&c2), &lim()).unwrap();
        // (0,0) and (1,1) sit at positions 0 and 2 of the 3-chain
        assert_eq!(fac.left.assign(), &[0, 2]);
        assert!(is_lari_pair(&fac.left, fac.comma.proj_a()));
    }

    #[test]
    fn lax_colimit_factorisation() {
        let a2 = FinPreorder::antichain(2);
        let f = MonotoneMap::terminal(&a2);
        let fac = laxcolimit_awfs(&f, &lim()).unwrap();
        let col = fac.collage.carrier();
        assert_eq!(col.len(), 3);
        assert_eq!(fac.right.assign(), &[0, 0, 0]);
        let s = fac.right_rali.left_adjoint().apply(0);
        assert!(col.le(s, 0) && col.le(s, 1));
        assert_eq!(compose(&fac.left, &fac.right).unwrap(), f);
    }
}
