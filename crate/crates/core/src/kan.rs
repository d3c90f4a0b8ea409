//! Left Kan extensions along monotone maps, Kan injectivity, and the
//! classification of Kan injectives against order embeddings.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::error::{shape, Result};
use crate::lifting::GeneratorFamily;
use crate::limits::Limits;
use crate::order::preorder::empty_set;
use crate::order::{enumerate_preorders, free_domains, monotone_search, FinPreorder, MonotoneMap};

/// `ext` is a least monotone map with `f <= ext ∘ j`, and `ext ∘ j ≃ f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub j: MonotoneMap,
    pub f: MonotoneMap,
    pub ext: MonotoneMap,
}

fn restricts_to(j: &MonotoneMap, f: &MonotoneMap, ext: &MonotoneMap) -> bool {
    let a = f.tgt();
    (0..j.src().len()).all(|x| a.equiv(ext.apply(j.apply(x)), f.apply(x)))
}

/// `{f(x) : j(x) <= y}` for each `y`.
fn lower_images(j: &MonotoneMap, f: &MonotoneMap) -> Vec<fixedbitset::FixedBitSet> {
    let y_side = j.tgt();
    (0..y_side.len())
        .map(|y| {
            let mut s = empty_set(f.tgt().len());
            for x in 0..j.src().len() {
                if y_side.le(j.apply(x), y) {
                    s.insert(f.apply(x));
                }
            }
            s
        })
        .collect()
}

/// The left Kan extension of `f` along `j`. When every `{f(x) : j(x) <= y}`
/// has a least upper bound the extension is that pointwise supremum (taking
/// `f(x)` itself at `y = j(x)` when it qualifies); otherwise the minimum is
/// searched for among all monotone upper extensions.
pub fn lan_extension(j: &MonotoneMap, f: &MonotoneMap, limits: &Limits) -> Result<Option<ExtensionWitness>> {
    if j.src() != f.src() {
        return Err(shape("j and f must share a domain"));
    }
    let a = f.tgt();
    let sets = lower_images(j, f);
    let sups: Option<Vec<usize>> = sets.iter().map(|s| a.lub(s)).collect();
    let Some(mut assign) = sups else {
        return lan_extension_exhaustive(j, f, limits);
    };
    for x in 0..j.src().len() {
        let y = j.apply(x);
        if a.equiv(assign[y], f.apply(x)) {
            assign[y] = f.apply(x);
        }
    }
    let ext = MonotoneMap::trusted(j.tgt().clone(), a.clone(), assign);
    Ok(restricts_to(j, f, &ext).then(|| ExtensionWitness {
        j: j.clone(),
        f: f.clone(),
        ext,
    }))
}

/// Reference computation: enumerate every monotone `g` with `f <= g ∘ j`,
/// take a minimum, and require it to restrict back to `f` up to equivalence.
pub fn lan_extension_exhaustive(j: &MonotoneMap, f: &MonotoneMap, limits: &Limits) -> Result<Option<ExtensionWitness>> {
    if j.src() != f.src() {
        return Err(shape("j and f must share a domain"));
    }
    let a = f.tgt();
    limits.check_hom_space("extension search space", a.len(), j.tgt().len())?;
    let sets = lower_images(j, f);
    let domains = sets.iter().map(|s| a.upper_bounds(s).ones().collect()).collect();
    let (all, _) = monotone_search(j.tgt(), a, domains).collect(usize::MAX);
    let candidates: Vec<MonotoneMap> = all
        .into_iter()
        .map(|g| MonotoneMap::trusted(j.tgt().clone(), a.clone(), g))
        .collect();
    let least = candidates
        .iter()
        .filter(|g| candidates.iter().all(|w| g.le(w)))
        .find(|g| restricts_to(j, f, g));
    Ok(least.map(|g| ExtensionWitness {
        j: j.clone(),
        f: f.clone(),
        ext: g.clone(),
    }))
}

/// A generator `j` and a map `f: dom j -> A` with no Kan extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityFailure {
    pub member: usize,
    pub f: MonotoneMap,
}

/// The first `(member, f)` without a Kan extension, in member order and
/// lexicographic order of `f`.
pub fn kan_injectivity_failure(
    a: &FinPreorder,
    family: &GeneratorFamily,
    limits: &Limits,
) -> Result<Option<InjectivityFailure>> {
    for (m, j) in family.members().iter().enumerate() {
        let x = j.src();
        let search = monotone_search(x, a, free_domains(x, a));
        let mut failure = None;
        let mut error = None;
        search.for_each(|assign| {
            let f = MonotoneMap::trusted(x.clone(), a.clone(), assign.to_vec());
            match lan_extension(j, &f, limits) {
                Ok(Some(_)) => ControlFlow::Continue(()),
                Ok(None) => {
                    failure = Some(InjectivityFailure { member: m, f });
                    ControlFlow::Break(())
                }
                Err(e) => {
                    error = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(e) = error {
            return Err(e);
        }
        if failure.is_some() {
            return Ok(failure);
        }
    }
    Ok(None)
}

pub fn kan_injective(a: &FinPreorder, family: &GeneratorFamily, limits: &Limits) -> Result<bool> {
    Ok(kan_injectivity_failure(a, family, limits)?.is_none())
}

/// Order embeddings `X -> Y` (full and injective on equivalence classes)
/// between representatives of preorders with `|X| <= |Y| <= max_size`,
/// smallest codomains first. With `posets_only` both ends are posets.
pub fn embedding_family(max_size: usize, posets_only: bool, limits: &Limits) -> Result<GeneratorFamily> {
    let mut objects = Vec::new();
    for n in 0..=max_size {
        for x in enumerate_preorders(n, true, limits)? {
            if !posets_only || x.is_poset() {
                objects.push(x);
            }
        }
    }
    let mut members = Vec::new();
    for y in &objects {
        for x in objects.iter().filter(|x| x.len() <= y.len()) {
            let (all, _) = monotone_search(x, y, free_domains(x, y)).collect(usize::MAX);
            members.extend(
                all.into_iter()
                    .map(|assign| MonotoneMap::trusted(x.clone(), y.clone(), assign))
                    .filter(MonotoneMap::is_order_embedding),
            );
        }
    }
    Ok(GeneratorFamily::from_members(members))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRow {
    pub object: FinPreorder,
    pub kan_injective: bool,
    pub complete_lattice: bool,
}

impl ClassificationRow {
    pub fn agrees(&self) -> bool {
        self.kan_injective == self.complete_lattice
    }
}

/// For each preorder (up to isomorphism) of size at most `max_object`,
/// Kan injectivity against `family` next to the complete-lattice predicate.
/// Rows come out smallest first in enumeration order.
pub fn classify_injectives(max_object: usize, family: &GeneratorFamily, limits: &Limits) -> Result<Vec<ClassificationRow>> {
    let mut objects = Vec::new();
    for n in 0..=max_object {
        objects.extend(enumerate_preorders(n, true, limits)?);
    }
    objects
        .into_par_iter()
        .map(|a| {
            let kan_injective = kan_injective(&a, family, limits)?;
            let complete_lattice = a.is_complete_lattice();
            Ok(ClassificationRow {
                object: a,
                kan_injective,
                complete_lattice,
            })
        })
        .collect()
}
