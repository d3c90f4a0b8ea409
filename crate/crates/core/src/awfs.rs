//! The down-set factorisation `f = ρ_f ∘ λ_f` through
//! `Kf = {(φ, b) : φ a down-set of A, f(a) <= b for all a in φ}`,
//! its comonad/monad structure, coalgebras (full maps), algebras and
//! canonical diagonal fillers.

use std::collections::HashMap;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::adjunction::{is_adjunction, left_adjoint_candidates, right_adjoint_candidates};
use crate::downset_monad::{downsets, set_label, DownSetLattice};
use crate::error::{shape, OrderError, Result};
use crate::limits::Limits;
use crate::order::preorder::empty_set;
use crate::order::{all_downsets, compose, down_closure, monotone_search, FinPreorder, MonotoneMap, Square};

/// `Kf` together with `λ_f: A -> Kf` and `ρ_f: Kf -> B`.
///
/// Elements are the admissible pairs sorted by (down-set index, `b`).
#[derive(Debug, Clone)]
pub struct Factorisation {
    f: MonotoneMap,
    downsets: DownSetLattice,
    elements: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    k: FinPreorder,
    lambda: MonotoneMap,
    rho: MonotoneMap,
}

impl Factorisation {
    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    pub fn k(&self) -> &FinPreorder {
        &self.k
    }

    pub fn lambda(&self) -> &MonotoneMap {
        &self.lambda
    }

    pub fn rho(&self) -> &MonotoneMap {
        &self.rho
    }

    /// `P(dom f)`, which indexes the first components.
    pub fn downsets(&self) -> &DownSetLattice {
        &self.downsets
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `(φ, b)` for element `i`, with `φ` as a membership vector over `dom f`.
    pub fn element(&self, i: usize) -> (&FixedBitSet, usize) {
        let (phi, b) = self.elements[i];
        (self.downsets.set(phi), b)
    }

    pub fn index_of(&self, phi: &FixedBitSet, b: usize) -> Option<usize> {
        let p = self.downsets.index_of(phi)?;
        self.index.get(&(p, b)).copied()
    }
}

pub fn factorise(f: &MonotoneMap, limits: &Limits) -> Result<Factorisation> {
    let (a_side, b_side) = (f.src(), f.tgt());
    let pa = downsets(a_side, limits)?;
    let mut elements = Vec::new();
    for (i, phi) in pa.sets().iter().enumerate() {
        let bounds = b_side.upper_bounds(&f.image_of(phi));
        elements.extend(bounds.ones().map(|b| (i, b)));
        limits.check_carrier("factorisation object", elements.len())?;
    }
    let k = FinPreorder::from_fn_trusted(elements.len(), |x, y| {
        let ((p, b), (q, c)) = (elements[x], elements[y]);
        pa.set(p).is_subset(pa.set(q)) && b_side.le(b, c)
    })
    .with_labels_trusted(
        elements
            .iter()
            .map(|&(p, b)| format!("({},{})", set_label(a_side, pa.set(p)), b_side.label(b)))
            .collect(),
    );
    let index: HashMap<(usize, usize), usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let lambda_assign = (0..a_side.len())
        .map(|a| index[&(pa.principal(a), f.apply(a))])
        .collect();
    let lambda = MonotoneMap::trusted(a_side.clone(), k.clone(), lambda_assign);
    let rho = MonotoneMap::trusted(k.clone(), b_side.clone(), elements.iter().map(|e| e.1).collect());
    Ok(Factorisation {
        f: f.clone(),
        downsets: pa,
        elements,
        index,
        k,
        lambda,
        rho,
    })
}

/// `K(h, k): Kf -> Kg` for a square `(h, k): f -> g`, sending `(φ, b)` to
/// `(↓h[φ], k(b))`.
pub fn k_on_square(sq: &Square, ff: &Factorisation, fg: &Factorisation) -> Result<MonotoneMap> {
    if sq.j() != ff.f() || sq.g() != fg.f() {
        return Err(shape("K(h,k) needs the factorisations of the square's source and target"));
    }
    let (h, k) = (sq.h(), sq.k());
    let dom_g = fg.f.src();
    let assign = (0..ff.len())
        .map(|x| {
            let (phi, b) = ff.element(x);
            let image = down_closure(dom_g, &h.image_of(phi));
            fg.index_of(&image, k.apply(b)).expect("K(h,k) lands in Kg")
        })
        .collect();
    Ok(MonotoneMap::trusted(ff.k.clone(), fg.k.clone(), assign))
}

fn check_over(outer: &Factorisation, map: &MonotoneMap, what: &str) -> Result<()> {
    if outer.f() != map {
        return Err(shape(format!("expected the factorisation of {what}")));
    }
    Ok(())
}

/// Pointwise pick from adjoint candidates, keeping `pin(x)` fixed so the
/// result is a map of arrows and not merely an adjoint up to equivalence.
fn pinned(
    candidates: Option<Vec<FixedBitSet>>,
    src: &FinPreorder,
    tgt: &FinPreorder,
    fits: impl Fn(usize, usize) -> bool,
    what: &str,
) -> Result<MonotoneMap> {
    let missing = || OrderError::AdjointMissing(what.to_string());
    let assign = candidates
        .ok_or_else(missing)?
        .iter()
        .enumerate()
        .map(|(x, c)| c.ones().find(|&y| fits(x, y)).ok_or_else(missing))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotoneMap::trusted(src.clone(), tgt.clone(), assign))
}

/// `σ_f: Kf -> K(λ_f)`, the right adjoint of `ρ_{λ_f}`, chosen as a section
/// of it. `fl` must factorise `λ_f`.
pub fn comult(ff: &Factorisation, fl: &Factorisation) -> Result<MonotoneMap> {
    check_over(fl, ff.lambda(), "λ_f")?;
    let rho = fl.rho();
    pinned(right_adjoint_candidates(rho), &ff.k, &fl.k, |x, y| rho.apply(y) == x, "σ_f: ρ_{λ_f} has no right adjoint section")
}

/// `(φ, b) ↦ (φ, (φ, b))`.
pub fn comult_closed_form(ff: &Factorisation, fl: &Factorisation) -> Result<MonotoneMap> {
    check_over(fl, ff.lambda(), "λ_f")?;
    let assign = (0..ff.len())
        .map(|x| {
            let (phi, _) = ff.element(x);
            fl.index_of(phi, x).expect("(φ, (φ, b)) is admissible")
        })
        .collect();
    Ok(MonotoneMap::trusted(ff.k.clone(), fl.k.clone(), assign))
}

/// `π_f: K(ρ_f) -> Kf`, the left adjoint of `λ_{ρ_f}`, chosen over `B`
/// (`ρ_f ∘ π_f = ρ_{ρ_f}`). `fr` must factorise `ρ_f`.
pub fn mult(ff: &Factorisation, fr: &Factorisation) -> Result<MonotoneMap> {
    check_over(fr, ff.rho(), "ρ_f")?;
    let (rho, rr) = (ff.rho(), fr.rho());
    pinned(left_adjoint_candidates(fr.lambda()), &fr.k, &ff.k, |x, y| rho.apply(y) == rr.apply(x), "π_f: λ_{ρ_f} has no left adjoint over B")
}

/// `(Ψ, b) ↦ (⋃ first components of Ψ, b)`.
pub fn mult_closed_form(ff: &Factorisation, fr: &Factorisation) -> Result<MonotoneMap> {
    check_over(fr, ff.rho(), "ρ_f")?;
    let n = ff.f.src().len();
    let assign = (0..fr.len())
        .map(|x| {
            let (psi, b) = fr.element(x);
            let mut union = empty_set(n);
            for y in psi.ones() {
                union.union_with(ff.element(y).0);
            }
            ff.index_of(&union, b).expect("unions of admissible pairs are admissible")
        })
        .collect();
    Ok(MonotoneMap::trusted(fr.k.clone(), ff.k.clone(), assign))
}

/// The square `(λ_f, 1): f -> ρ_f`, i.e. the unit of the monad at `f`.
pub fn unit_square(ff: &Factorisation, fr: &Factorisation) -> Result<Square> {
    check_over(fr, ff.rho(), "ρ_f")?;
    Square::new(ff.f.clone(), ff.rho.clone(), ff.lambda.clone(), MonotoneMap::identity(ff.f.tgt()))
}

/// The square `(1, ρ_f): λ_f -> f`, i.e. the counit of the comonad at `f`.
pub fn counit_square(ff: &Factorisation) -> Result<Square> {
    Square::new(ff.lambda.clone(), ff.f.clone(), MonotoneMap::identity(ff.f.src()), ff.rho.clone())
}

/// Unit comparison for `R` on arrows: `K(λ_f, 1) <= λ_{ρ_f}` pointwise.
pub fn check_lax_idempotent_r(ff: &Factorisation, fr: &Factorisation) -> Result<bool> {
    let r_unit = k_on_square(&unit_square(ff, fr)?, ff, fr)?;
    Ok(r_unit.le(fr.lambda()))
}

/// `ρ_{λ_f} ∘ σ_f = π_f ∘ λ_{ρ_f}`, up to equivalence.
pub fn check_mixed_square(ff: &Factorisation, fl: &Factorisation, fr: &Factorisation) -> Result<bool> {
    let sigma = comult(ff, fl)?;
    let pi = mult(ff, fr)?;
    let left = compose(&sigma, fl.rho())?;
    let right = compose(fr.lambda(), &pi)?;
    Ok(left.equiv(&right))
}

/// A coalgebra structure `s: B -> Kf` with `ρ_f ∘ s = 1` and `s ∘ f = λ_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraWitness {
    f: MonotoneMap,
    s: MonotoneMap,
}

impl CoalgebraWitness {
    pub fn f(&self) -> &MonotoneMap {
        &self.f
    }

    pub fn s(&self) -> &MonotoneMap {
        &self.s
    }
}

pub fn is_coalgebra(ff: &Factorisation, s: &MonotoneMap) -> bool {
    s.src() == ff.f.tgt()
        && s.tgt() == &ff.k
        && (0..s.src().len()).all(|b| ff.rho.apply(s.apply(b)) == b)
        && (0..ff.f.src().len()).all(|a| s.apply(ff.f.apply(a)) == ff.lambda.apply(a))
}

/// Exhaustive search for a coalgebra structure on `f`.
pub fn coalgebra_structure(ff: &Factorisation) -> Option<CoalgebraWitness> {
    let f = &ff.f;
    let b_side = f.tgt();
    let mut domains: Vec<Vec<usize>> = (0..b_side.len())
        .map(|b| (0..ff.len()).filter(|&x| ff.rho.apply(x) == b).collect())
        .collect();
    for a in 0..f.src().len() {
        let want = ff.lambda.apply(a);
        domains[f.apply(a)].retain(|&x| x == want);
    }
    let search = monotone_search(b_side, &ff.k, domains);
    let s = search.first()?;
    Some(CoalgebraWitness {
        f: f.clone(),
        s: MonotoneMap::trusted(b_side.clone(), ff.k.clone(), s),
    })
}

/// `b ↦ ({a : f(a) <= b}, b)`, a coalgebra exactly when `f` is full.
pub fn coalgebra_closed_form(ff: &Factorisation) -> Option<CoalgebraWitness> {
    let f = &ff.f;
    let assign: Vec<usize> = (0..f.tgt().len())
        .map(|b| {
            let mut below = empty_set(f.src().len());
            for a in 0..f.src().len() {
                if f.tgt().le(f.apply(a), b) {
                    below.insert(a);
                }
            }
            ff.index_of(&below, b).expect("(f^{-1}(↓b), b) is admissible")
        })
        .collect();
    let s = MonotoneMap::trusted(f.tgt().clone(), ff.k.clone(), assign);
    is_coalgebra(ff, &s).then(|| CoalgebraWitness { f: f.clone(), s })
}

/// An algebra structure `p: Kg -> A` with `p ∘ λ_g = 1`, `g ∘ p = ρ_g` and
/// `p ∘ π_g = p ∘ K(p, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraWitness {
    g: MonotoneMap,
    p: MonotoneMap,
}

impl AlgebraWitness {
    pub fn g(&self) -> &MonotoneMap {
        &self.g
    }

    pub fn p(&self) -> &MonotoneMap {
        &self.p
    }
}

/// Whether algebra equations hold exactly or up to equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    Exact,
    UpToEquivalence,
}

impl Strictness {
    fn same(self, x: &FinPreorder, i: usize, j: usize) -> bool {
        match self {
            Strictness::Exact => i == j,
            Strictness::UpToEquivalence => x.equiv(i, j),
        }
    }
}

/// Unit and boundary equations for a candidate `p`.
fn algebra_boundary(fg: &Factorisation, p: &MonotoneMap, mode: Strictness) -> bool {
    let g = &fg.f;
    let (a_side, b_side) = (g.src(), g.tgt());
    (0..a_side.len()).all(|a| mode.same(a_side, p.apply(fg.lambda.apply(a)), a))
        && (0..fg.len()).all(|x| mode.same(b_side, g.apply(p.apply(x)), fg.rho.apply(x)))
}

/// The multiplication law `p ∘ π_g = p ∘ K(p, 1)`, evaluated on every element
/// `(Ψ, b)` of `K(ρ_g)` without building that preorder. Down-sets of `Kg`
/// are streamed, capped by `limits.max_solutions`.
pub fn check_algebra_law(fg: &Factorisation, p: &MonotoneMap, mode: Strictness, limits: &Limits) -> Result<bool> {
    let g = &fg.f;
    let (a_side, b_side) = (g.src(), g.tgt());
    let stream_limits = limits.with_max_carrier(limits.max_solutions);
    for psi in all_downsets(&fg.k, &stream_limits)? {
        let mut union = empty_set(a_side.len());
        let mut p_image = empty_set(a_side.len());
        let mut seconds = empty_set(b_side.len());
        for x in psi.ones() {
            let (phi, b) = fg.element(x);
            union.union_with(phi);
            p_image.insert(p.apply(x));
            seconds.insert(b);
        }
        let p_down = down_closure(a_side, &p_image);
        for b in b_side.upper_bounds(&seconds).ones() {
            let lhs = fg.index_of(&union, b).expect("π_g lands in Kg");
            let Some(rhs) = fg.index_of(&p_down, b) else {
                return Ok(false);
            };
            if !mode.same(a_side, p.apply(lhs), p.apply(rhs)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_algebra(fg: &Factorisation, p: &MonotoneMap, mode: Strictness, limits: &Limits) -> Result<bool> {
    if p.src() != &fg.k || p.tgt() != fg.f.src() {
        return Ok(false);
    }
    Ok(algebra_boundary(fg, p, mode) && check_algebra_law(fg, p, mode, limits)?)
}

/// Algebra structure on `g` as a left adjoint of `λ_g`: `p(φ, b)` is the
/// least `a` with `φ ⊆ ↓a` and `b <= g(a)`, chosen so that `p ∘ λ_g = 1`
/// and `g ∘ p = ρ_g`. Every algebra for this lax idempotent monad has this
/// form; the candidate is then checked against all the laws.
pub fn algebra_structure(fg: &Factorisation, mode: Strictness, limits: &Limits) -> Result<Option<AlgebraWitness>> {
    let g = &fg.f;
    let (a_side, b_side) = (g.src(), g.tgt());
    let mut lambda_pre: Vec<Option<usize>> = vec![None; fg.len()];
    for a in 0..a_side.len() {
        let x = fg.lambda.apply(a);
        if lambda_pre[x].is_some() && mode == Strictness::Exact {
            // λ_g identifies equivalent elements, so p ∘ λ_g = 1 is impossible
            return Ok(None);
        }
        lambda_pre[x].get_or_insert(a);
    }
    let mut assign = Vec::with_capacity(fg.len());
    for x in 0..fg.len() {
        let (phi, b) = fg.element(x);
        let mut above = empty_set(a_side.len());
        for a in 0..a_side.len() {
            if phi.is_subset(a_side.down(a)) && b_side.le(b, g.apply(a)) {
                above.insert(a);
            }
        }
        let Some(least) = a_side.least_in(&above) else {
            return Ok(None);
        };
        let mut leasts = above.clone();
        leasts.intersect_with(a_side.up(least));
        leasts.intersect_with(a_side.down(least));
        let pick = match lambda_pre[x] {
            Some(a) if leasts.contains(a) => Some(a),
            Some(_) => None,
            None => leasts
                .ones()
                .find(|&a| g.apply(a) == b)
                .or_else(|| leasts.ones().find(|&a| mode.same(b_side, g.apply(a), b))),
        };
        let Some(a) = pick else {
            return Ok(None);
        };
        assign.push(a);
    }
    let p = MonotoneMap::trusted(fg.k.clone(), a_side.clone(), assign);
    if is_algebra(fg, &p, mode, limits)? {
        Ok(Some(AlgebraWitness { g: g.clone(), p }))
    } else {
        Ok(None)
    }
}

/// Exact algebra structure found by exhaustive search over `hom(Kg, A)`;
/// the reference the adjoint construction is tested against.
pub fn algebra_structure_exhaustive(fg: &Factorisation, limits: &Limits) -> Result<Option<AlgebraWitness>> {
    let g = &fg.f;
    let a_side = g.src();
    let mut domains: Vec<Vec<usize>> = (0..fg.len())
        .map(|x| (0..a_side.len()).filter(|&a| g.apply(a) == fg.rho.apply(x)).collect())
        .collect();
    for a in 0..a_side.len() {
        domains[fg.lambda.apply(a)].retain(|&v| v == a);
    }
    let search = monotone_search(&fg.k, a_side, domains);
    let mut found = None;
    let mut failure = None;
    search.for_each(|assign| {
        let p = MonotoneMap::trusted(fg.k.clone(), a_side.clone(), assign.to_vec());
        match check_algebra_law(fg, &p, Strictness::Exact, limits) {
            Ok(true) => {
                found = Some(p);
                ControlFlow::Break(())
            }
            Ok(false) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(found.map(|p| AlgebraWitness { g: g.clone(), p }))
}

/// `p ∘ K(h, k) ∘ s`, the diagonal filler of a square from a coalgebra to an algebra.
pub fn canonical_diag(
    sq: &Square,
    ff: &Factorisation,
    s: &CoalgebraWitness,
    fg: &Factorisation,
    p: &AlgebraWitness,
) -> Result<MonotoneMap> {
    if s.f() != sq.j() || p.g() != sq.g() {
        return Err(shape("witnesses do not match the square"));
    }
    let kk = k_on_square(sq, ff, fg)?;
    compose(&compose(s.s(), &kk)?, p.p())
}

/// `K(A -> 1)` with `λ`, and the isomorphism onto `P(A)`.
#[derive(Debug, Clone)]
pub struct FibrantReplacement {
    pub factorisation: Factorisation,
    /// `K(A -> 1) -> P(A)`, `(φ, *) ↦ φ`.
    pub to_downsets: MonotoneMap,
}

pub fn fibrant_replacement(a: &FinPreorder, limits: &Limits) -> Result<FibrantReplacement> {
    let fac = factorise(&MonotoneMap::terminal(a), limits)?;
    let pa = fac.downsets();
    let assign = (0..fac.len()).map(|x| fac.elements[x].0).collect();
    let to_downsets = MonotoneMap::trusted(fac.k.clone(), pa.carrier().clone(), assign);
    Ok(FibrantReplacement {
        factorisation: fac,
        to_downsets,
    })
}

/// Elementwise comonad, monad and mixed laws at one arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwfsLaws {
    /// `ρ_{λ_f} ∘ σ_f = 1`.
    pub comonad_counit_outer: bool,
    /// `K(1, ρ_f) ∘ σ_f = 1`.
    pub comonad_counit_inner: bool,
    /// `σ_{λ_f} ∘ σ_f = K(1, σ_f) ∘ σ_f`; `None` past the carrier bound.
    pub coassociativity: Option<bool>,
    /// `π_f ∘ λ_{ρ_f} = 1`.
    pub monad_unit_outer: bool,
    /// `π_f ∘ K(λ_f, 1) = 1`.
    pub monad_unit_inner: bool,
    /// `π_f ∘ π_{ρ_f} = π_f ∘ K(π_f, 1)`; `None` past the carrier bound.
    pub associativity: Option<bool>,
    /// `π_f` agrees with the union formula and `σ_f` with `(φ, b) ↦ (φ, (φ, b))`.
    pub closed_forms: bool,
    /// `σ_f ⊣ K(1, ρ_f)`.
    pub sigma_left_of_counit: bool,
    pub mixed_square: bool,
    pub lax_idempotent_r: bool,
}

impl AwfsLaws {
    pub fn hold(&self) -> bool {
        self.comonad_counit_outer
            && self.comonad_counit_inner
            && self.coassociativity != Some(false)
            && self.monad_unit_outer
            && self.monad_unit_inner
            && self.associativity != Some(false)
            && self.closed_forms
            && self.sigma_left_of_counit
            && self.mixed_square
            && self.lax_idempotent_r
    }
}

fn within<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(OrderError::SizeLimitExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn check_awfs_laws(f: &MonotoneMap, limits: &Limits) -> Result<AwfsLaws> {
    let ff = factorise(f, limits)?;
    let fl = factorise(ff.lambda(), limits)?;
    let fr = factorise(ff.rho(), limits)?;
    let id_k = MonotoneMap::identity(ff.k());
    let sigma = comult(&ff, &fl)?;
    let pi = mult(&ff, &fr)?;

    let counit = counit_square(&ff)?;
    let k_counit = k_on_square(&counit, &fl, &ff)?;
    let comonad_counit_outer = compose(&sigma, fl.rho())?.equiv(&id_k);
    let comonad_counit_inner = compose(&sigma, &k_counit)?.equiv(&id_k);
    let sigma_left_of_counit = is_adjunction(&sigma, &k_counit);

    let k_unit = k_on_square(&unit_square(&ff, &fr)?, &ff, &fr)?;
    let monad_unit_outer = compose(fr.lambda(), &pi)?.equiv(&id_k);
    let monad_unit_inner = compose(&k_unit, &pi)?.equiv(&id_k);

    let closed_forms = comult_closed_form(&ff, &fl)?.equiv(&sigma) && mult_closed_form(&ff, &fr)?.equiv(&pi);

    let coassociativity = match within(factorise(fl.lambda(), limits))? {
        Some(fll) => {
            let sigma_l = comult(&fl, &fll)?;
            let sq = Square::new(ff.lambda.clone(), fl.lambda.clone(), MonotoneMap::identity(f.src()), sigma.clone())?;
            let k_sigma = k_on_square(&sq, &fl, &fll)?;
            Some(compose(&sigma, &sigma_l)?.equiv(&compose(&sigma, &k_sigma)?))
        }
        None => None,
    };
    let associativity = match within(factorise(fr.rho(), limits))? {
        Some(frr) => {
            let pi_r = mult(&fr, &frr)?;
            let sq = Square::new(fr.rho.clone(), ff.rho.clone(), pi.clone(), MonotoneMap::identity(f.tgt()))?;
            let k_pi = k_on_square(&sq, &frr, &fr)?;
            Some(compose(&pi_r, &pi)?.equiv(&compose(&k_pi, &pi)?))
        }
        None => None,
    };
    Ok(AwfsLaws {
        comonad_counit_outer,
        comonad_counit_inner,
        coassociativity,
        monad_unit_outer,
        monad_unit_inner,
        associativity,
        closed_forms,
        sigma_left_of_counit,
        mixed_square: check_mixed_square(&ff, &fl, &fr)?,
        lax_idempotent_r: check_lax_idempotent_r(&ff, &fr)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{hom_poset, is_isomorphic, sq_hom_poset};

    fn lim() -> Limits {
        Limits::default()
    }

    fn map(src: &FinPreorder, tgt: &FinPreorder, assign: &[usize]) -> MonotoneMap {
        MonotoneMap::new(src.clone(), tgt.clone(), assign.to_vec()).unwrap()
    }

    #[test]
    fn factorise_examples() {
        let a2 = FinPreorder::antichain(2);
        let fac = factorise(&MonotoneMap::terminal(&a2), &lim()).unwrap();
        assert!(is_isomorphic(fac.k(), &FinPreorder::diamond()));

        let one = FinPreorder::one();
        let fac = factorise(&MonotoneMap::identity(&one), &lim()).unwrap();
        assert_eq!(fac.k(), &FinPreorder::chain(2));

        let c2 = FinPreorder::chain(2);
        let f = map(&one, &c2, &[1]);
        let fac = factorise(&f, &lim()).unwrap();
        let pairs: Vec<(Vec<usize>, usize)> = (0..fac.len())
            .map(|i| {
                let (phi, b) = fac.element(i);
                (phi.ones().collect(), b)
            })
            .collect();
        assert_eq!(pairs, vec![(vec![], 0), (vec![], 1), (vec![0], 1)]);
        assert_eq!(fac.lambda().assign(), &[2]);
        assert_eq!(compose(fac.lambda(), fac.rho()).unwrap(), f);
    }

    #[test]
    fn k_on_square_is_functorial_and_natural() {
        let c2 = FinPreorder::chain(2);
        let a2 = FinPreorder::antichain(2);
        let f = map(&a2, &c2, &[0, 1]);
        let g = MonotoneMap::terminal(&c2);
        let ff = factorise(&f, &lim()).unwrap();
        let fg = factorise(&g, &lim()).unwrap();
        let id = k_on_square(&Square::identity(&f), &ff, &ff).unwrap();
        assert_eq!(id, MonotoneMap::identity(ff.k()));
        let squares = sq_hom_poset(&f, &g, &lim()).unwrap();
        for sq in squares.squares() {
            let kk = k_on_square(sq, &ff, &fg).unwrap();
            assert_eq!(compose(&kk, fg.rho()).unwrap(), compose(ff.rho(), sq.k()).unwrap());
            assert_eq!(compose(ff.lambda(), &kk).unwrap(), compose(sq.h(), fg.lambda()).unwrap());
            let t = MonotoneMap::terminal(&FinPreorder::one());
            let fo = factorise(&t, &lim()).unwrap();
            let next = Square::new(g.clone(), t.clone(), g.clone(), MonotoneMap::identity(&FinPreorder::one())).unwrap();
            let both = sq.then(&next).unwrap();
            let lhs = k_on_square(&both, &ff, &fo).unwrap();
            let rhs = compose(&kk, &k_on_square(&next, &fg, &fo).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn comult_and_mult_examples() {
        let one = FinPreorder::one();
        let c2 = FinPreorder::chain(2);
        for f in [
            MonotoneMap::identity(&one),
            map(&one, &c2, &[1]),
            MonotoneMap::terminal(&c2),
        ] {
            let laws = check_awfs_laws(&f, &lim()).unwrap();
            assert!(laws.hold(), "{f:?}: {laws:?}");
        }
        let laws = check_awfs_laws(&MonotoneMap::identity(&one), &lim()).unwrap();
        assert_eq!(laws.associativity, Some(true));
        assert_eq!(laws.coassociativity, Some(true));
    }

    #[test]
    fn coalgebra_examples() {
        let c2 = FinPreorder::chain(2);
        let c3 = FinPreorder::chain(3);
        let a2 = FinPreorder::antichain(2);
        let full = map(&c2, &c3, &[0, 2]);
        let ff = factorise(&full, &lim()).unwrap();
        let w = coalgebra_structure(&ff).unwrap();
        assert!(is_coalgebra(&ff, w.s()));
        assert!(coalgebra_closed_form(&ff).is_some());
        let not_full = map(&a2, &c2, &[0, 1]);
        let fn_ = factorise(&not_full, &lim()).unwrap();
        assert!(coalgebra_structure(&fn_).is_none());
        assert!(coalgebra_closed_form(&fn_).is_none());
        let id = MonotoneMap::identity(&c2);
        let fi = factorise(&id, &lim()).unwrap();
        assert_eq!(coalgebra_structure(&fi).unwrap().s(), fi.lambda());
    }

    #[test]
    fn algebra_examples() {
        let diamond = FinPreorder::diamond();
        let fd = factorise(&MonotoneMap::terminal(&diamond), &lim()).unwrap();
        let p = algebra_structure(&fd, Strictness::Exact, &lim()).unwrap().unwrap();
        let q = algebra_structure_exhaustive(&fd, &lim()).unwrap().unwrap();
        assert_eq!(p, q);
        // p is the supremum
        for x in 0..fd.len() {
            let (phi, _) = fd.element(x);
            assert_eq!(Some(p.p().apply(x)), diamond.lub(phi));
        }
        let a2 = FinPreorder::antichain(2);
        let fa = factorise(&MonotoneMap::terminal(&a2), &lim()).unwrap();
        assert!(algebra_structure(&fa, Strictness::Exact, &lim()).unwrap().is_none());
        assert!(algebra_structure_exhaustive(&fa, &lim()).unwrap().is_none());
        let c2 = FinPreorder::chain(2);
        let fi = factorise(&MonotoneMap::identity(&c2), &lim()).unwrap();
        let p = algebra_structure(&fi, Strictness::Exact, &lim()).unwrap().unwrap();
        assert_eq!(p.p(), fi.rho());
    }

    #[test]
    fn equivalent_elements_block_exact_algebras_only() {
        let ind = FinPreorder::indiscrete(2);
        let fac = factorise(&MonotoneMap::terminal(&ind), &lim()).unwrap();
        assert!(algebra_structure(&fac, Strictness::Exact, &lim()).unwrap().is_none());
        assert!(algebra_structure_exhaustive(&fac, &lim()).unwrap().is_none());
        assert!(algebra_structure(&fac, Strictness::UpToEquivalence, &lim()).unwrap().is_some());
    }

    #[test]
    fn canonical_diag_is_least_filler() {
        let a2 = FinPreorder::antichain(2);
        let c2 = FinPreorder::chain(2);
        let diamond = FinPreorder::diamond();
        let j = map(&a2, &diamond, &[1, 2]);
        let g = MonotoneMap::terminal(&c2);
        let fj = factorise(&j, &lim()).unwrap();
        let fg = factorise(&g, &lim()).unwrap();
        let s = coalgebra_structure(&fj).unwrap();
        let p = algebra_structure(&fg, Strictness::Exact, &lim()).unwrap().unwrap();
        let h = map(&a2, &c2, &[0, 0]);
        let sq = Square::new(j.clone(), g.clone(), h, MonotoneMap::terminal(&diamond)).unwrap();
        let d = canonical_diag(&sq, &fj, &s, &fg, &p).unwrap();
        assert!(sq.is_filler(&d));
        let hom = hom_poset(&diamond, &c2, &lim()).unwrap();
        let fillers: Vec<_> = hom.maps().iter().filter(|w| sq.is_filler(w)).collect();
        assert_eq!(fillers.len(), 2);
        assert!(fillers.iter().all(|w| d.le(w)));
        assert_eq!(d.assign(), &[0, 0, 0, 0]);
    }

    #[test]
    fn fibrant_replacement_examples() {
        for (a, expected) in [
            (FinPreorder::antichain(2), FinPreorder::diamond()),
            (FinPreorder::one(), FinPreorder::chain(2)),
            (FinPreorder::chain(2), FinPreorder::chain(3)),
        ] {
            let fr = fibrant_replacement(&a, &lim()).unwrap();
            assert!(is_isomorphic(fr.factorisation.k(), &expected));
            assert!(fr.to_downsets.is_order_embedding() && fr.to_downsets.is_surjective());
        }
    }
}
