//! Finite spaces as preorders (opens are the up-sets), Scott opens and the
//! way-below relation, the filter monad on open-set lattices, and `f_*`.

use std::collections::HashMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::downset_monad::set_label;
use crate::error::{shape, OrderError, Result};
use crate::limits::Limits;
use crate::order::preorder::{empty_set, full_set, lex_cmp};
use crate::order::{all_upsets, is_up_closed, monotone_search, FinPreorder, MonotoneMap};

/// A finite space, stored as its specialization preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    points: FinPreorder,
}

impl FiniteSpace {
    pub fn new(points: FinPreorder) -> Self {
        FiniteSpace { points }
    }

    pub fn points(&self) -> &FinPreorder {
        &self.points
    }

    pub fn is_t0(&self) -> bool {
        self.points.is_poset()
    }
}

/// `O(X)`: the opens of a finite space ordered by inclusion.
#[derive(Debug, Clone)]
pub struct OpenLattice {
    space: FiniteSpace,
    opens: Vec<FixedBitSet>,
    carrier: FinPreorder,
    index: HashMap<FixedBitSet, usize>,
}

impl OpenLattice {
    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    /// Opens in lexicographic order of membership vectors.
    pub fn opens(&self) -> &[FixedBitSet] {
        &self.opens
    }

    pub fn open(&self, i: usize) -> &FixedBitSet {
        &self.opens[i]
    }

    pub fn carrier(&self) -> &FinPreorder {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn index_of(&self, set: &FixedBitSet) -> Option<usize> {
        self.index.get(set).copied()
    }
}

pub fn open_lattice(space: &FiniteSpace, limits: &Limits) -> Result<OpenLattice> {
    let x = space.points();
    let opens = all_upsets(x, limits)?;
    let carrier = FinPreorder::from_fn_trusted(opens.len(), |i, j| opens[i].is_subset(&opens[j]))
        .with_labels_trusted(opens.iter().map(|u| set_label(x, u)).collect());
    let index = opens.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    Ok(OpenLattice {
        space: space.clone(),
        opens,
        carrier,
        index,
    })
}

fn subsets(n: usize) -> impl Iterator<Item = FixedBitSet> {
    (0u64..(1u64 << n)).map(move |mask| {
        let mut s = empty_set(n);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                s.insert(i);
            }
        }
        s
    })
}

fn require_poset(l: &FinPreorder) -> Result<()> {
    if l.is_poset() {
        Ok(())
    } else {
        Err(OrderError::NotAPoset)
    }
}

/// Nonempty subsets in which every pair has an upper bound inside the subset.
pub fn directed_subsets(l: &FinPreorder, limits: &Limits) -> Result<Vec<FixedBitSet>> {
    limits.check_hom_space("subset enumeration", 2, l.len())?;
    Ok(subsets(l.len())
        .filter(|d| {
            !d.is_clear()
                && d.ones().all(|x| {
                    d.ones().all(|y| {
                        let mut common = l.up(x).clone();
                        common.intersect_with(l.up(y));
                        common.intersect_with(d);
                        !common.is_clear()
                    })
                })
        })
        .collect())
}

/// Subsets that are up-closed and inaccessible by directed suprema,
/// checked by quantifying over every subset and every directed subset.
pub fn scott_opens(l: &FinPreorder, limits: &Limits) -> Result<Vec<FixedBitSet>> {
    require_poset(l)?;
    let directed = directed_subsets(l, limits)?;
    let sups: Vec<Option<usize>> = directed.iter().map(|d| l.lub(d)).collect();
    let mut opens: Vec<FixedBitSet> = subsets(l.len())
        .filter(|u| {
            let up_closed = u.ones().all(|x| (0..l.len()).all(|y| !l.le(x, y) || u.contains(y)));
            let inaccessible = directed.iter().zip(&sups).all(|(d, s)| match s {
                Some(s) if u.contains(*s) => !d.is_disjoint(u),
                _ => true,
            });
            up_closed && inaccessible
        })
        .collect();
    opens.sort_by(lex_cmp);
    Ok(opens)
}

/// Row `x` of the result holds every `y` with `x ≪ y`.
pub fn way_below(l: &FinPreorder, limits: &Limits) -> Result<Vec<FixedBitSet>> {
    require_poset(l)?;
    let directed = directed_subsets(l, limits)?;
    let sups: Vec<usize> = directed
        .iter()
        .map(|d| l.lub(d).ok_or(OrderError::MissingDirectedSup))
        .collect::<Result<_>>()?;
    Ok((0..l.len())
        .map(|x| {
            let mut row = empty_set(l.len());
            for y in 0..l.len() {
                let below = directed
                    .iter()
                    .zip(&sups)
                    .all(|(d, &s)| !l.le(y, s) || d.ones().any(|e| l.le(x, e)));
                if below {
                    row.insert(y);
                }
            }
            row
        })
        .collect())
}

/// A complete lattice in which every element is the supremum of the
/// elements way below it.
pub fn is_continuous_lattice(l: &FinPreorder, limits: &Limits) -> bool {
    if !l.is_poset() || !l.is_complete_lattice_strict() {
        return false;
    }
    let Ok(wb) = way_below(l, limits) else {
        return false;
    };
    (0..l.len()).all(|x| {
        let mut approx = empty_set(l.len());
        for y in 0..l.len() {
            if wb[y].contains(x) {
                approx.insert(y);
            }
        }
        l.lub(&approx) == Some(x)
    })
}

/// `FX`: the filters of `O(X)` (including the improper one) ordered by inclusion.
#[derive(Debug, Clone)]
pub struct FilterSpace {
    opens: OpenLattice,
    filters: Vec<FixedBitSet>,
    carrier: FinPreorder,
    index: HashMap<FixedBitSet, usize>,
}

impl FilterSpace {
    pub fn base(&self) -> &FiniteSpace {
        self.opens.space()
    }

    pub fn opens(&self) -> &OpenLattice {
        &self.opens
    }

    /// Filters as membership vectors over `opens()`, in lexicographic order.
    pub fn filters(&self) -> &[FixedBitSet] {
        &self.filters
    }

    pub fn filter(&self, i: usize) -> &FixedBitSet {
        &self.filters[i]
    }

    pub fn carrier(&self) -> &FinPreorder {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn index_of(&self, set: &FixedBitSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    /// `FX` as a space in its own right.
    pub fn as_space(&self) -> FiniteSpace {
        FiniteSpace::new(self.carrier.clone())
    }

    /// `U# = {F : U ∈ F}` for open `u`.
    pub fn sharp(&self, u: usize) -> FixedBitSet {
        let mut s = empty_set(self.filters.len());
        for (i, f) in self.filters.iter().enumerate() {
            if f.contains(u) {
                s.insert(i);
            }
        }
        s
    }
}

/// Whether a set of opens is a filter: contains the whole space, up-closed
/// under inclusion, closed under binary intersection.
pub fn is_filter(o: &OpenLattice, fam: &FixedBitSet) -> bool {
    let n = o.space().points().len();
    let whole = o.index_of(&full_set(n)).expect("the whole space is open");
    if !fam.contains(whole) || !is_up_closed(o.carrier(), fam) {
        return false;
    }
    fam.ones().all(|u| {
        fam.ones().all(|v| {
            let mut meet = o.open(u).clone();
            meet.intersect_with(o.open(v));
            fam.contains(o.index_of(&meet).expect("opens are closed under intersection"))
        })
    })
}

/// In a finite open-set lattice every filter is `↑U` for `U` the
/// intersection of its members, so filters are generated from opens.
pub fn filter_space(space: &FiniteSpace, limits: &Limits) -> Result<FilterSpace> {
    let opens = open_lattice(space, limits)?;
    limits.check_carrier("filter space", opens.len())?;
    let mut filters: Vec<FixedBitSet> = (0..opens.len()).map(|u| opens.carrier().up(u).clone()).collect();
    filters.sort_by(lex_cmp);
    let carrier = FinPreorder::from_fn_trusted(filters.len(), |i, j| filters[i].is_subset(&filters[j]))
        .with_labels_trusted(
            filters
                .iter()
                .map(|f| {
                    let parts: Vec<String> = f.ones().map(|u| opens.carrier().label(u).into_owned()).collect();
                    format!("[{}]", parts.join(";"))
                })
                .collect(),
        );
    let index = filters.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(FilterSpace {
        opens,
        filters,
        carrier,
        index,
    })
}

/// Specialization order of the topology generated by the `U#`, compared with inclusion.
pub fn check_filter_specialization(fs: &FilterSpace) -> bool {
    let sharps: Vec<FixedBitSet> = (0..fs.opens.len()).map(|u| fs.sharp(u)).collect();
    (0..fs.len()).all(|a| {
        (0..fs.len()).all(|b| {
            let spec = sharps.iter().all(|s| !s.contains(a) || s.contains(b));
            spec == fs.carrier.le(a, b)
        })
    })
}

/// `x ↦ {U : x ∈ U}`.
pub fn filter_unit(fs: &FilterSpace) -> MonotoneMap {
    let x = fs.base().points();
    let assign = (0..x.len())
        .map(|p| {
            let mut nbhd = empty_set(fs.opens.len());
            for (u, open) in fs.opens.opens().iter().enumerate() {
                if open.contains(p) {
                    nbhd.insert(u);
                }
            }
            fs.index[&nbhd]
        })
        .collect();
    MonotoneMap::trusted(x.clone(), fs.carrier.clone(), assign)
}

/// `F(f)(F) = {V : f⁻¹(V) ∈ F}`.
pub fn filter_map(f: &MonotoneMap, fx: &FilterSpace, fy: &FilterSpace) -> Result<MonotoneMap> {
    if fx.base().points() != f.src() || fy.base().points() != f.tgt() {
        return Err(shape("F(f) needs the filter spaces of dom f and cod f"));
    }
    let pre: Vec<usize> = fy
        .opens
        .opens()
        .iter()
        .map(|v| fx.opens.index_of(&f.preimage(v)).expect("preimages of opens are open"))
        .collect();
    let assign = fx
        .filters
        .iter()
        .map(|filt| {
            let mut image = empty_set(fy.opens.len());
            for (v, &u) in pre.iter().enumerate() {
                if filt.contains(u) {
                    image.insert(v);
                }
            }
            fy.index[&image]
        })
        .collect();
    Ok(MonotoneMap::trusted(fx.carrier.clone(), fy.carrier.clone(), assign))
}

/// `m(𝔉) = {U : U# ∈ 𝔉}`; `ffx` must be the filter space of `fx.as_space()`.
pub fn filter_mult(fx: &FilterSpace, ffx: &FilterSpace) -> Result<MonotoneMap> {
    if ffx.base().points() != &fx.carrier {
        return Err(shape("multiplication needs FFX built over FX"));
    }
    let sharp_index: Vec<usize> = (0..fx.opens.len())
        .map(|u| ffx.opens.index_of(&fx.sharp(u)).expect("U# is open in FX"))
        .collect();
    let assign = ffx
        .filters
        .iter()
        .map(|big| {
            let mut out = empty_set(fx.opens.len());
            for (u, &s) in sharp_index.iter().enumerate() {
                if big.contains(s) {
                    out.insert(u);
                }
            }
            fx.index[&out]
        })
        .collect();
    Ok(MonotoneMap::trusted(ffx.carrier.clone(), fx.carrier.clone(), assign))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterMonadLaws {
    pub left_unit: bool,
    pub right_unit: bool,
    /// `None` when `FFFX` exceeds the carrier bound.
    pub associativity: Option<bool>,
}

impl FilterMonadLaws {
    pub fn hold(&self) -> bool {
        self.left_unit && self.right_unit && self.associativity != Some(false)
    }
}

pub fn check_filter_monad_laws(space: &FiniteSpace, limits: &Limits) -> Result<FilterMonadLaws> {
    let fx = filter_space(space, limits)?;
    let ffx = filter_space(&fx.as_space(), limits)?;
    let m = filter_mult(&fx, &ffx)?;
    let id = MonotoneMap::identity(fx.carrier());
    let left_unit = filter_unit(&ffx).then(&m)? == id;
    let right_unit = filter_map(&filter_unit(&fx), &fx, &ffx)?.then(&m)? == id;
    let associativity = match filter_space(&ffx.as_space(), limits) {
        Ok(fffx) => {
            let outer = filter_mult(&ffx, &fffx)?.then(&m)?;
            let inner = filter_map(&m, &fffx, &ffx)?.then(&m)?;
            Some(outer == inner)
        }
        Err(OrderError::SizeLimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FilterMonadLaws {
        left_unit,
        right_unit,
        associativity,
    })
}

/// Exhaustive search for an algebra `a: FX -> X` of the filter monad:
/// monotone, `a ∘ η = 1` and `a ∘ m = a ∘ F(a)`.
pub fn filter_algebra(space: &FiniteSpace, limits: &Limits) -> Result<Option<MonotoneMap>> {
    let fx = filter_space(space, limits)?;
    let ffx = filter_space(&fx.as_space(), limits)?;
    let m = filter_mult(&fx, &ffx)?;
    let x = space.points();
    let eta = filter_unit(&fx);
    let mut domains: Vec<Vec<usize>> = (0..fx.len()).map(|_| (0..x.len()).collect()).collect();
    for p in 0..x.len() {
        domains[eta.apply(p)].retain(|&v| v == p);
    }
    let search = monotone_search(fx.carrier(), x, domains);
    let mut found = None;
    let mut error = None;
    search.for_each(|assign| {
        let a = MonotoneMap::trusted(fx.carrier.clone(), x.clone(), assign.to_vec());
        match is_filter_algebra(&a, &fx, &ffx, &m) {
            Ok(true) => {
                found = Some(a);
                ControlFlow::Break(())
            }
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => {
                error = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    match error {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

fn is_filter_algebra(a: &MonotoneMap, fx: &FilterSpace, ffx: &FilterSpace, m: &MonotoneMap) -> Result<bool> {
    let unit = filter_unit(fx).then(a)? == MonotoneMap::identity(fx.base().points());
    let fa = filter_map(a, ffx, fx)?;
    Ok(unit && m.then(a)? == fa.then(a)?)
}

/// `a(F) = ⋁_{U ∈ F} ⋀ U`, defined when the points form a complete lattice.
pub fn continuous_lattice_algebra(fx: &FilterSpace) -> Option<MonotoneMap> {
    let x = fx.base().points();
    if !x.is_complete_lattice_strict() {
        return None;
    }
    let assign = fx
        .filters
        .iter()
        .map(|filt| {
            let mut meets = empty_set(x.len());
            for u in filt.ones() {
                meets.insert(x.glb(fx.opens.open(u)).expect("complete"));
            }
            x.lub(&meets).expect("complete")
        })
        .collect();
    Some(MonotoneMap::trusted(fx.carrier.clone(), x.clone(), assign))
}

/// `f_*(U) = ⋃{V open in Y : f⁻¹(V) ⊆ U}`, as a map `O(X) -> O(Y)`.
pub fn f_lower_star(f: &MonotoneMap, ox: &OpenLattice, oy: &OpenLattice) -> Result<MonotoneMap> {
    if ox.space().points() != f.src() || oy.space().points() != f.tgt() {
        return Err(shape("f_* needs the open lattices of dom f and cod f"));
    }
    let pre: Vec<FixedBitSet> = oy.opens().iter().map(|v| f.preimage(v)).collect();
    let assign = ox
        .opens()
        .iter()
        .map(|u| {
            let mut union = empty_set(f.tgt().len());
            for (v, p) in oy.opens().iter().zip(&pre) {
                if p.is_subset(u) {
                    union.union_with(v);
                }
            }
            oy.index_of(&union).expect("unions of opens are open")
        })
        .collect();
    Ok(MonotoneMap::trusted(ox.carrier().clone(), oy.carrier().clone(), assign))
}

/// Whether `f_*` is full.
pub fn is_top_coalgebra(f: &MonotoneMap, limits: &Limits) -> Result<bool> {
    let ox = open_lattice(&FiniteSpace::new(f.src().clone()), limits)?;
    let oy = open_lattice(&FiniteSpace::new(f.tgt().clone()), limits)?;
    Ok(f_lower_star(f, &ox, &oy)?.is_full())
}

/// Injective, and every open of the domain is the preimage of an open.
pub fn is_subspace_embedding(f: &MonotoneMap, limits: &Limits) -> Result<bool> {
    if !f.is_injective() {
        return Ok(false);
    }
    let opens_x = all_upsets(f.src(), limits)?;
    let opens_y = all_upsets(f.tgt(), limits)?;
    let preimages: Vec<FixedBitSet> = opens_y.iter().map(|v| f.preimage(v)).collect();
    Ok(opens_x.iter().all(|u| preimages.contains(u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn sets(v: &[FixedBitSet]) -> Vec<Vec<usize>> {
        v.iter().map(|s| s.ones().collect()).collect()
    }

    #[test]
    fn scott_examples() {
        let c2 = FinPreorder::chain(2);
        let mut got = sets(&scott_opens(&c2, &lim()).unwrap());
        got.sort();
        assert_eq!(got, vec![vec![], vec![0, 1], vec![1]]);
        assert_eq!(scott_opens(&FinPreorder::antichain(2), &lim()).unwrap().len(), 4);
        assert!(matches!(
            scott_opens(&FinPreorder::indiscrete(2), &lim()),
            Err(OrderError::NotAPoset)
        ));
    }

    #[test]
    fn way_below_examples() {
        let c3 = FinPreorder::chain(3);
        let wb = way_below(&c3, &lim()).unwrap();
        assert!(wb[0].contains(2));
        let d = FinPreorder::diamond();
        let wb = way_below(&d, &lim()).unwrap();
        assert!(wb[1].contains(3) && wb[3].contains(3));
        assert!(!wb[1].contains(2));
        assert!(is_continuous_lattice(&d, &lim()));
        assert!(!is_continuous_lattice(&FinPreorder::vee(), &lim()));
        assert!(is_continuous_lattice(&FinPreorder::one(), &lim()));
    }

    #[test]
    fn filter_examples() {
        let one = FiniteSpace::new(FinPreorder::one());
        let fx = filter_space(&one, &lim()).unwrap();
        assert_eq!(fx.carrier(), &FinPreorder::chain(2));
        let c2 = FiniteSpace::new(FinPreorder::chain(2));
        let fx = filter_space(&c2, &lim()).unwrap();
        assert_eq!(fx.carrier(), &FinPreorder::chain(3));
        let eta = filter_unit(&fx);
        let mut nbhd: Vec<Vec<usize>> = fx
            .filter(eta.apply(1))
            .ones()
            .map(|u| fx.opens().open(u).ones().collect())
            .collect();
        nbhd.sort();
        assert_eq!(nbhd, vec![vec![0, 1], vec![1]]);
        assert!(check_filter_specialization(&fx));
        assert!(check_filter_monad_laws(&c2, &lim()).unwrap().hold());
    }

    #[test]
    fn filters_are_exactly_the_generated_ones() {
        for x in [FinPreorder::diamond(), FinPreorder::antichain(3), FinPreorder::vee()] {
            let fx = filter_space(&FiniteSpace::new(x), &lim()).unwrap();
            let o = fx.opens();
            let brute: Vec<FixedBitSet> = subsets(o.len()).filter(|s| is_filter(o, s)).collect();
            assert_eq!(brute.len(), fx.len());
            assert!(brute.iter().all(|s| fx.index_of(s).is_some()));
        }
    }

    #[test]
    fn algebra_examples() {
        let d = FiniteSpace::new(FinPreorder::diamond());
        let a = filter_algebra(&d, &lim()).unwrap().unwrap();
        let fx = filter_space(&d, &lim()).unwrap();
        assert_eq!(Some(a), continuous_lattice_algebra(&fx));
        assert!(filter_algebra(&FiniteSpace::new(FinPreorder::antichain(2)), &lim())
            .unwrap()
            .is_none());
        let one = filter_algebra(&FiniteSpace::new(FinPreorder::one()), &lim()).unwrap().unwrap();
        assert_eq!(one.assign(), &[0, 0]);
    }

    #[test]
    fn lower_star_examples() {
        let a2 = FinPreorder::antichain(2);
        let d = FinPreorder::diamond();
        let f = MonotoneMap::new(a2.clone(), d.clone(), vec![1, 2]).unwrap();
        let ox = open_lattice(&FiniteSpace::new(a2.clone()), &lim()).unwrap();
        let od = open_lattice(&FiniteSpace::new(d.clone()), &lim()).unwrap();
        let fs = f_lower_star(&f, &ox, &od).unwrap();
        let mut just_a = empty_set(2);
        just_a.insert(0);
        let img = od.open(fs.apply(ox.index_of(&just_a).unwrap()));
        assert_eq!(img.ones().collect::<Vec<_>>(), vec![1, 3]);
        assert!(is_top_coalgebra(&f, &lim()).unwrap());
        assert!(is_subspace_embedding(&f, &lim()).unwrap());
        let id = MonotoneMap::identity(&d);
        assert_eq!(f_lower_star(&id, &od, &od).unwrap(), MonotoneMap::identity(od.carrier()));
        let collapse = MonotoneMap::new(d.clone(), FinPreorder::chain(2), vec![0, 0, 1, 1]).unwrap();
        assert!(!is_top_coalgebra(&collapse, &lim()).unwrap());
        let to_top = MonotoneMap::constant(&d, &d, 3).unwrap();
        let fs = f_lower_star(&to_top, &od, &od).unwrap();
        assert!(od.open(fs.apply(0)).is_clear());
    }
}
