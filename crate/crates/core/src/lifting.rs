//! Diagonal fillers, lifting structures over generator families and
//! KZ-lifting operations (RALI structures on the comparison map).

use std::ops::ControlFlow;

use crate::adjunction::{find_rali, RaliWitness};
use crate::error::{shape, OrderError, Result};
use crate::limits::Limits;
use crate::order::{compose, hom_poset, monotone_search, sq_hom_poset, HomPoset, MonotoneMap, Search, Square, SquarePoset};

/// A morphism `(top, bottom): members[from] -> members[to]` of the arrow category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub top: MonotoneMap,
    pub bottom: MonotoneMap,
}

/// A finite diagram of arrows; links are commuting squares between members.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorFamily {
    members: Vec<MonotoneMap>,
    links: Vec<Link>,
}

impl GeneratorFamily {
    pub fn new(members: Vec<MonotoneMap>, links: Vec<Link>) -> Result<Self> {
        for l in &links {
            let (Some(j), Some(j2)) = (members.get(l.from), members.get(l.to)) else {
                return Err(OrderError::IndexOutOfRange {
                    index: l.from.max(l.to),
                    len: members.len(),
                });
            };
            Square::new(j.clone(), j2.clone(), l.top.clone(), l.bottom.clone())?;
        }
        Ok(GeneratorFamily { members, links })
    }

    pub fn from_members(members: Vec<MonotoneMap>) -> Self {
        GeneratorFamily {
            members,
            links: Vec::new(),
        }
    }

    pub fn members(&self) -> &[MonotoneMap] {
        &self.members
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The disjoint union: members of `self` first, then those of `other`.
    pub fn coproduct(&self, other: &GeneratorFamily) -> GeneratorFamily {
        let shift = self.members.len();
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        let mut links = self.links.clone();
        links.extend(other.links.iter().map(|l| Link {
            from: l.from + shift,
            to: l.to + shift,
            ..l.clone()
        }));
        GeneratorFamily { members, links }
    }
}

/// `d ↦ (d ∘ j, g ∘ d)` from `hom(cod j, dom g)` to the squares `j -> g`.
#[derive(Debug, Clone)]
pub struct CanonicalMap {
    pub hom: HomPoset,
    pub squares: SquarePoset,
    pub map: MonotoneMap,
}

pub fn canonical_map(j: &MonotoneMap, g: &MonotoneMap, limits: &Limits) -> Result<CanonicalMap> {
    let hom = hom_poset(j.tgt(), g.src(), limits)?;
    let squares = sq_hom_poset(j, g, limits)?;
    let assign = hom
        .maps()
        .iter()
        .map(|d| {
            let h = compose(j, d).expect("shapes match");
            let k = compose(d, g).expect("shapes match");
            squares.index_of(h.assign(), k.assign()).expect("d ∘ j, g ∘ d is a square")
        })
        .collect();
    let map = MonotoneMap::trusted(hom.poset().clone(), squares.poset().clone(), assign);
    Ok(CanonicalMap { hom, squares, map })
}

/// Every diagonal filler of `sq`, in lexicographic order, capped by `limits.max_solutions`.
pub fn fillers(sq: &Square, limits: &Limits) -> Result<Vec<MonotoneMap>> {
    let (j, g) = (sq.j(), sq.g());
    let mut domains: Vec<Vec<usize>> = (0..j.tgt().len())
        .map(|y| (0..g.src().len()).filter(|&a| g.apply(a) == sq.k().apply(y)).collect())
        .collect();
    for x in 0..j.src().len() {
        domains[j.apply(x)].retain(|&a| a == sq.h().apply(x));
    }
    let (found, truncated) = monotone_search(j.tgt(), g.src(), domains).collect(limits.max_solutions);
    if truncated {
        return Err(OrderError::SizeLimitExceeded {
            what: "filler enumeration",
            size: limits.max_solutions as u128 + 1,
            limit: limits.max_solutions as u128,
        });
    }
    Ok(found
        .into_iter()
        .map(|d| MonotoneMap::trusted(j.tgt().clone(), g.src().clone(), d))
        .collect())
}

/// The least filler, if the filler set has one.
pub fn least_filler(fillers: &[MonotoneMap]) -> Option<usize> {
    (0..fillers.len()).find(|&i| fillers.iter().all(|w| fillers[i].le(w)))
}

/// Whether every square from `j` to `g` has a filler.
pub fn has_lifting(j: &MonotoneMap, g: &MonotoneMap, limits: &Limits) -> Result<bool> {
    let squares = sq_hom_poset(j, g, limits)?;
    for sq in squares.squares() {
        if fillers(sq, limits)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A chosen filler for every square from every member into `g`.
#[derive(Debug, Clone)]
pub struct LiftingStructure {
    g: MonotoneMap,
    family: GeneratorFamily,
    squares: Vec<SquarePoset>,
    fillers: Vec<Vec<MonotoneMap>>,
    non_canonical: bool,
}

impl LiftingStructure {
    pub fn g(&self) -> &MonotoneMap {
        &self.g
    }

    pub fn family(&self) -> &GeneratorFamily {
        &self.family
    }

    /// Squares from member `m` to `g`.
    pub fn squares(&self, m: usize) -> &SquarePoset {
        &self.squares[m]
    }

    /// The filler chosen for square `i` of member `m`.
    pub fn filler(&self, m: usize, i: usize) -> &MonotoneMap {
        &self.fillers[m][i]
    }

    pub fn filler_for(&self, m: usize, h: &[usize], k: &[usize]) -> Option<&MonotoneMap> {
        self.squares[m].index_of(h, k).map(|i| &self.fillers[m][i])
    }

    /// Set when some chosen filler is not the least one for its square.
    pub fn non_canonical(&self) -> bool {
        self.non_canonical
    }

    /// Filler, monotonicity and link-naturality conditions.
    pub fn is_valid(&self) -> bool {
        for (m, sp) in self.squares.iter().enumerate() {
            let fs = &self.fillers[m];
            if sp.squares().iter().zip(fs).any(|(sq, d)| !sq.is_filler(d)) {
                return false;
            }
            for (a, b) in sp.poset().relation_pairs() {
                if !fs[a].le(&fs[b]) {
                    return false;
                }
            }
        }
        link_constraints(&self.family, &self.squares).iter().all(|c| {
            let lhs = &self.fillers[c.member][c.square];
            let rhs = &self.fillers[c.other_member][c.other_square];
            compose(&c.bottom, rhs).map(|r| &r == lhs).unwrap_or(false)
        })
    }
}

/// `d(from, h∘u, k∘v) = d(to, h, k) ∘ v` for one link and one square into `g`.
struct LinkConstraint {
    member: usize,
    square: usize,
    other_member: usize,
    other_square: usize,
    bottom: MonotoneMap,
}

fn link_constraints(family: &GeneratorFamily, squares: &[SquarePoset]) -> Vec<LinkConstraint> {
    let mut out = Vec::new();
    for l in family.links() {
        for (i, sq) in squares[l.to].squares().iter().enumerate() {
            let h = compose(&l.top, sq.h()).expect("link shapes");
            let k = compose(&l.bottom, sq.k()).expect("link shapes");
            let square = squares[l.from].index_of(h.assign(), k.assign()).expect("pasted square exists");
            out.push(LinkConstraint {
                member: l.from,
                square,
                other_member: l.to,
                other_square: i,
                bottom: l.bottom.clone(),
            });
        }
    }
    out
}

/// Squares, candidate fillers (least first, then lexicographic) and the
/// constraint search over one slot per (member, square).
struct StructureProblem {
    squares: Vec<SquarePoset>,
    slots: Vec<(usize, usize)>,
    candidates: Vec<Vec<MonotoneMap>>,
    has_least: Vec<bool>,
}

impl StructureProblem {
    fn build(family: &GeneratorFamily, g: &MonotoneMap, limits: &Limits) -> Result<Self> {
        let mut squares = Vec::new();
        let mut slots = Vec::new();
        let mut candidates = Vec::new();
        let mut has_least = Vec::new();
        for (m, j) in family.members().iter().enumerate() {
            let sp = sq_hom_poset(j, g, limits)?;
            for (i, sq) in sp.squares().iter().enumerate() {
                let mut fs = fillers(sq, limits)?;
                let least = least_filler(&fs);
                if let Some(l) = least {
                    let first = fs.remove(l);
                    fs.insert(0, first);
                }
                has_least.push(least.is_some());
                candidates.push(fs);
                slots.push((m, i));
            }
            squares.push(sp);
        }
        Ok(StructureProblem {
            squares,
            slots,
            candidates,
            has_least,
        })
    }

    fn slot_of(&self, m: usize, i: usize) -> usize {
        let offset: usize = self.squares[..m].iter().map(|s| s.len()).sum();
        offset + i
    }

    fn search<'a>(&'a self, family: &GeneratorFamily) -> Search<'a> {
        let domains = self.candidates.iter().map(|c| (0..c.len()).collect()).collect();
        let mut search = Search::new(domains);
        for (m, sp) in self.squares.iter().enumerate() {
            for (a, b) in sp.poset().relation_pairs() {
                let (sa, sb) = (self.slot_of(m, a), self.slot_of(m, b));
                let (ca, cb) = (&self.candidates[sa], &self.candidates[sb]);
                search.require(&[sa, sb], move |v| ca[v[sa]].le(&cb[v[sb]]));
            }
        }
        for c in link_constraints(family, &self.squares) {
            let s1 = self.slot_of(c.member, c.square);
            let s2 = self.slot_of(c.other_member, c.other_square);
            let (c1, c2) = (&self.candidates[s1], &self.candidates[s2]);
            let bottom = c.bottom;
            search.require(&[s1, s2], move |v| {
                let rhs = &c2[v[s2]];
                let lhs = &c1[v[s1]];
                (0..bottom.src().len()).all(|y| lhs.apply(y) == rhs.apply(bottom.apply(y)))
            });
        }
        search
    }

    fn assemble(&self, family: &GeneratorFamily, g: &MonotoneMap, choice: &[usize]) -> LiftingStructure {
        let mut fillers: Vec<Vec<MonotoneMap>> = self.squares.iter().map(|_| Vec::new()).collect();
        let mut non_canonical = false;
        for (slot, &(m, _)) in self.slots.iter().enumerate() {
            fillers[m].push(self.candidates[slot][choice[slot]].clone());
            non_canonical |= !(self.has_least[slot] && choice[slot] == 0);
        }
        LiftingStructure {
            g: g.clone(),
            family: family.clone(),
            squares: self.squares.clone(),
            fillers,
            non_canonical,
        }
    }
}

/// The first coherent lifting structure in canonical order (least fillers
/// preferred), or `None` if there is none.
pub fn lifting_structure(family: &GeneratorFamily, g: &MonotoneMap, limits: &Limits) -> Result<Option<LiftingStructure>> {
    let problem = StructureProblem::build(family, g, limits)?;
    let found = problem.search(family).first();
    Ok(found.map(|choice| problem.assemble(family, g, &choice)))
}

/// Number of coherent lifting structures, and whether the count hit `limits.max_solutions`.
pub fn count_lifting_structures(family: &GeneratorFamily, g: &MonotoneMap, limits: &Limits) -> Result<(usize, bool)> {
    let problem = StructureProblem::build(family, g, limits)?;
    let mut count = 0usize;
    let mut truncated = false;
    problem.search(family).for_each(|_| {
        if count == limits.max_solutions {
            truncated = true;
            return ControlFlow::Break(());
        }
        count += 1;
        ControlFlow::Continue(())
    });
    Ok((count, truncated))
}

/// A RALI structure on the comparison map: a KZ-lifting operation from `j` to `g`.
#[derive(Debug, Clone)]
pub struct KzLifting {
    pub canonical: CanonicalMap,
    pub rali: RaliWitness,
}

impl KzLifting {
    /// The filler the section assigns to square `i`.
    pub fn filler(&self, i: usize) -> &MonotoneMap {
        self.canonical.hom.map(self.rali.left_adjoint().apply(i))
    }

    pub fn filler_for(&self, h: &[usize], k: &[usize]) -> Option<&MonotoneMap> {
        self.canonical.squares.index_of(h, k).map(|i| self.filler(i))
    }
}

pub fn kz_orthogonal(j: &MonotoneMap, g: &MonotoneMap, limits: &Limits) -> Result<Option<KzLifting>> {
    let canonical = canonical_map(j, g, limits)?;
    Ok(find_rali(&canonical.map).map(|rali| KzLifting { canonical, rali }))
}

/// The structure on `g ∘ f` obtained by filling against `g` first and then
/// against `f`: `d(j, h, k) = d_f(j, h, d_g(j, f ∘ h, k))`.
pub fn compose_structures(sf: &LiftingStructure, sg: &LiftingStructure, limits: &Limits) -> Result<LiftingStructure> {
    if sf.family != sg.family {
        return Err(shape("structures are over different generator families"));
    }
    let (f, g) = (&sf.g, &sg.g);
    let gf = compose(f, g)?;
    let mut squares = Vec::new();
    let mut fillers = Vec::new();
    for (m, j) in sf.family.members().iter().enumerate() {
        let sp = sq_hom_poset(j, &gf, limits)?;
        let mut fs = Vec::with_capacity(sp.len());
        for sq in sp.squares() {
            let fh = compose(sq.h(), f)?;
            let e = sg
                .filler_for(m, fh.assign(), sq.k().assign())
                .ok_or_else(|| shape("missing square in the outer structure"))?;
            let d = sf
                .filler_for(m, sq.h().assign(), e.assign())
                .ok_or_else(|| shape("missing square in the inner structure"))?;
            fs.push(d.clone());
        }
        squares.push(sp);
        fillers.push(fs);
    }
    Ok(LiftingStructure {
        g: gf,
        family: sf.family.clone(),
        squares,
        fillers,
        non_canonical: sf.non_canonical || sg.non_canonical,
    })
}

/// For members `i: X -> Y`, `j: Y -> Z` and `ji = j ∘ i`, checks
/// `d(ji, h, k) = d(j, d(i, h, k ∘ j), k)` on every square from `ji`.
pub fn check_composite_coherence(s: &LiftingStructure, i: usize, j: usize, ji: usize) -> Result<bool> {
    let members = s.family.members();
    let (mi, mj) = (&members[i], &members[j]);
    if compose(mi, mj)? != members[ji] {
        return Err(shape("third member is not the composite of the first two"));
    }
    for (idx, sq) in s.squares[ji].squares().iter().enumerate() {
        let kj = compose(mj, sq.k())?;
        let Some(e) = s.filler_for(i, sq.h().assign(), kj.assign()) else {
            return Ok(false);
        };
        let Some(d) = s.filler_for(j, e.assign(), sq.k().assign()) else {
            return Ok(false);
        };
        if d != s.filler(ji, idx) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts for the coproduct comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductReport {
    pub left: usize,
    pub right: usize,
    pub sum: usize,
    pub truncated: bool,
    pub holds: bool,
}

/// Structures on the coproduct family biject with pairs of structures on
/// the two summands; compares existence and counts.
pub fn coproduct_family_check(
    j1: &GeneratorFamily,
    j2: &GeneratorFamily,
    g: &MonotoneMap,
    limits: &Limits,
) -> Result<CoproductReport> {
    let (left, t1) = count_lifting_structures(j1, g, limits)?;
    let (right, t2) = count_lifting_structures(j2, g, limits)?;
    let (sum, t3) = count_lifting_structures(&j1.coproduct(j2), g, limits)?;
    let truncated = t1 || t2 || t3;
    let exists_sum = lifting_structure(&j1.coproduct(j2), g, limits)?.is_some();
    let exists_parts = lifting_structure(j1, g, limits)?.is_some() && lifting_structure(j2, g, limits)?.is_some();
    let counts_match = truncated || left.checked_mul(right) == Some(sum);
    Ok(CoproductReport {
        left,
        right,
        sum,
        truncated,
        holds: exists_sum == exists_parts && counts_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FinPreorder;

    fn lim() -> Limits {
        Limits::default()
    }

    fn map(src: &FinPreorder, tgt: &FinPreorder, assign: &[usize]) -> MonotoneMap {
        MonotoneMap::new(src.clone(), tgt.clone(), assign.to_vec()).unwrap()
    }

    fn a2_in_diamond() -> MonotoneMap {
        map(&FinPreorder::antichain(2), &FinPreorder::diamond(), &[1, 2])
    }

    #[test]
    fn canonical_map_examples() {
        let c2 = FinPreorder::chain(2);
        let g = MonotoneMap::terminal(&c2);
        let cm = canonical_map(&MonotoneMap::identity(&c2), &g, &lim()).unwrap();
        assert!(cm.map.is_order_embedding() && cm.map.is_surjective());
        let cm = canonical_map(&a2_in_diamond(), &MonotoneMap::identity(&c2), &lim()).unwrap();
        assert!(cm.map.is_order_embedding() && cm.map.is_surjective());
        let cm = canonical_map(&a2_in_diamond(), &g, &lim()).unwrap();
        // monotone maps diamond -> c2
        assert_eq!(cm.hom.len(), 6);
        for (i, d) in cm.hom.maps().iter().enumerate() {
            assert!(cm.squares.square(cm.map.apply(i)).is_filler(d));
        }
    }

    #[test]
    fn identity_family_lifts_against_everything() {
        let x = FinPreorder::vee();
        let fam = GeneratorFamily::from_members(vec![MonotoneMap::identity(&x)]);
        let g = MonotoneMap::terminal(&FinPreorder::antichain(2));
        let s = lifting_structure(&fam, &g, &lim()).unwrap().unwrap();
        assert!(s.is_valid());
        assert!(!s.non_canonical());
        assert_eq!(count_lifting_structures(&fam, &g, &lim()).unwrap(), (1, false));
    }

    #[test]
    fn vee_blocks_lifting() {
        let j = a2_in_diamond();
        let vee = FinPreorder::vee();
        let g = MonotoneMap::terminal(&vee);
        assert!(!has_lifting(&j, &g, &lim()).unwrap());
        let fam = GeneratorFamily::from_members(vec![j.clone()]);
        assert!(lifting_structure(&fam, &g, &lim()).unwrap().is_none());
        assert!(kz_orthogonal(&j, &g, &lim()).unwrap().is_none());
    }

    #[test]
    fn diamond_lifts_with_kz() {
        let j = a2_in_diamond();
        let diamond = FinPreorder::diamond();
        let g = MonotoneMap::terminal(&diamond);
        assert!(has_lifting(&j, &g, &lim()).unwrap());
        let fam = GeneratorFamily::from_members(vec![j.clone()]);
        let s = lifting_structure(&fam, &g, &lim()).unwrap().unwrap();
        assert!(s.is_valid() && !s.non_canonical());
        let kz = kz_orthogonal(&j, &g, &lim()).unwrap().unwrap();
        let d = kz.filler_for(&[1, 2], &[0, 0, 0, 0]).unwrap();
        assert_eq!(d.assign(), &[0, 1, 2, 3]);
        for i in 0..kz.canonical.squares.len() {
            assert_eq!(kz.filler(i), s.filler(0, i));
        }
    }

    #[test]
    fn links_constrain_structures() {
        // j: one -> c2 at the top, linked to itself by the identity
        let one = FinPreorder::one();
        let c2 = FinPreorder::chain(2);
        let j = map(&one, &c2, &[1]);
        let link = Link {
            from: 0,
            to: 0,
            top: MonotoneMap::identity(&one),
            bottom: MonotoneMap::identity(&c2),
        };
        let fam = GeneratorFamily::new(vec![j.clone()], vec![link]).unwrap();
        let g = MonotoneMap::terminal(&c2);
        let s = lifting_structure(&fam, &g, &lim()).unwrap().unwrap();
        assert!(s.is_valid());
        let bad = Link {
            from: 0,
            to: 0,
            top: MonotoneMap::identity(&one),
            bottom: map(&c2, &c2, &[0, 0]),
        };
        assert!(GeneratorFamily::new(vec![j], vec![bad]).is_err());
    }

    #[test]
    fn composing_structures() {
        let diamond = FinPreorder::diamond();
        let c2 = FinPreorder::chain(2);
        let fam = GeneratorFamily::from_members(vec![a2_in_diamond()]);
        // bot, a -> 0; b, top -> 1 preserves sups
        let f = map(&diamond, &c2, &[0, 0, 1, 1]);
        let g = MonotoneMap::terminal(&c2);
        let sf = lifting_structure(&fam, &f, &lim()).unwrap().unwrap();
        let sg = lifting_structure(&fam, &g, &lim()).unwrap().unwrap();
        let comp = compose_structures(&sf, &sg, &lim()).unwrap();
        assert!(comp.is_valid());
        let direct = lifting_structure(&fam, &compose(&f, &g).unwrap(), &lim()).unwrap().unwrap();
        for i in 0..direct.squares(0).len() {
            assert_eq!(comp.filler(0, i), direct.filler(0, i));
        }
        let id = MonotoneMap::identity(&c2);
        let sid = lifting_structure(&fam, &id, &lim()).unwrap().unwrap();
        let same = compose_structures(&sf, &sid, &lim()).unwrap();
        for i in 0..sf.squares(0).len() {
            assert_eq!(same.filler(0, i), sf.filler(0, i));
        }
    }

    #[test]
    fn coproduct_examples() {
        let c2 = FinPreorder::chain(2);
        let g = MonotoneMap::terminal(&c2);
        let j1 = GeneratorFamily::from_members(vec![map(&FinPreorder::empty(), &c2, &[])]);
        let r = coproduct_family_check(&j1, &GeneratorFamily::default(), &g, &lim()).unwrap();
        assert!(r.holds);
        assert_eq!(r.left, r.sum);
        let ids = GeneratorFamily::from_members(vec![MonotoneMap::identity(&c2)]);
        assert!(coproduct_family_check(&ids, &ids, &g, &lim()).unwrap().holds);
    }
}
