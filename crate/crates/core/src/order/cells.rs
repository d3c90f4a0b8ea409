//! 2-cells, hom-posets and posets of commuting squares.

use std::collections::HashMap;

use super::map::{check_parallel, compose, MonotoneMap};
use super::preorder::FinPreorder;
use super::search::{free_domains, monotone_search};
use crate::error::{shape, OrderError, Result};
use crate::limits::Limits;

/// Whether the 2-cell `f => g` exists, i.e. `f <= g` pointwise.
pub fn two_cell(f: &MonotoneMap, g: &MonotoneMap) -> Result<bool> {
    check_parallel(f, g)?;
    Ok(f.le(g))
}

/// A witnessed 2-cell `lower => upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCell {
    lower: MonotoneMap,
    upper: MonotoneMap,
}

impl TwoCell {
    pub fn new(lower: MonotoneMap, upper: MonotoneMap) -> Result<Self> {
        if !two_cell(&lower, &upper)? {
            return Err(OrderError::Invalid("no 2-cell between the given maps".into()));
        }
        Ok(TwoCell { lower, upper })
    }

    pub fn lower(&self) -> &MonotoneMap {
        &self.lower
    }

    pub fn upper(&self) -> &MonotoneMap {
        &self.upper
    }
}

/// A commuting square `g ∘ h = k ∘ j`, i.e. a morphism `(h, k): j -> g`
/// of the arrow category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    j: MonotoneMap,
    g: MonotoneMap,
    h: MonotoneMap,
    k: MonotoneMap,
}

impl Square {
    pub fn new(j: MonotoneMap, g: MonotoneMap, h: MonotoneMap, k: MonotoneMap) -> Result<Self> {
        if h.src() != j.src() || h.tgt() != g.src() {
            return Err(shape("square: h must run from dom j to dom g"));
        }
        if k.src() != j.tgt() || k.tgt() != g.tgt() {
            return Err(shape("square: k must run from cod j to cod g"));
        }
        let top = compose(&h, &g)?;
        let bottom = compose(&j, &k)?;
        if top.assign() != bottom.assign() {
            return Err(OrderError::Invalid("square does not commute".into()));
        }
        Ok(Square { j, g, h, k })
    }

    pub(crate) fn trusted(j: MonotoneMap, g: MonotoneMap, h: MonotoneMap, k: MonotoneMap) -> Self {
        debug_assert!(Square::new(j.clone(), g.clone(), h.clone(), k.clone()).is_ok());
        Square { j, g, h, k }
    }

    /// The identity square on `f`.
    pub fn identity(f: &MonotoneMap) -> Self {
        Square {
            j: f.clone(),
            g: f.clone(),
            h: MonotoneMap::identity(f.src()),
            k: MonotoneMap::identity(f.tgt()),
        }
    }

    pub fn j(&self) -> &MonotoneMap {
        &self.j
    }

    pub fn g(&self) -> &MonotoneMap {
        &self.g
    }

    pub fn h(&self) -> &MonotoneMap {
        &self.h
    }

    pub fn k(&self) -> &MonotoneMap {
        &self.k
    }

    /// Horizontal pasting: `self: j -> g` followed by `next: g -> g'`.
    pub fn then(&self, next: &Square) -> Result<Square> {
        if next.j != self.g {
            return Err(shape("squares are not composable"));
        }
        Ok(Square {
            j: self.j.clone(),
            g: next.g.clone(),
            h: compose(&self.h, &next.h)?,
            k: compose(&self.k, &next.k)?,
        })
    }

    /// Whether `d` is a diagonal filler: `d ∘ j = h` and `g ∘ d = k`.
    pub fn is_filler(&self, d: &MonotoneMap) -> bool {
        d.src() == self.j.tgt()
            && d.tgt() == self.g.src()
            && (0..self.j.src().len()).all(|x| d.apply(self.j.apply(x)) == self.h.apply(x))
            && (0..self.j.tgt().len()).all(|y| self.g.apply(d.apply(y)) == self.k.apply(y))
    }
}

/// All monotone maps `X -> Y` ordered pointwise.
#[derive(Debug, Clone)]
pub struct HomPoset {
    src: FinPreorder,
    tgt: FinPreorder,
    maps: Vec<MonotoneMap>,
    poset: FinPreorder,
    index: HashMap<Vec<usize>, usize>,
}

impl HomPoset {
    pub fn src(&self) -> &FinPreorder {
        &self.src
    }

    pub fn tgt(&self) -> &FinPreorder {
        &self.tgt
    }

    /// The maps, in lexicographic order of their assignment vectors.
    pub fn maps(&self) -> &[MonotoneMap] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &MonotoneMap {
        &self.maps[i]
    }

    pub fn poset(&self) -> &FinPreorder {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn index_of(&self, f: &MonotoneMap) -> Option<usize> {
        self.index.get(f.assign()).copied()
    }

    pub fn index_of_assign(&self, assign: &[usize]) -> Option<usize> {
        self.index.get(assign).copied()
    }
}

fn assign_label(tgt: &FinPreorder, assign: &[usize]) -> String {
    let parts: Vec<String> = assign.iter().map(|&a| tgt.label(a).into_owned()).collect();
    format!("[{}]", parts.join(","))
}

/// Enumerates `hom(X, Y)` in lexicographic order with the pointwise order.
pub fn hom_poset(x: &FinPreorder, y: &FinPreorder, limits: &Limits) -> Result<HomPoset> {
    limits.check_hom_space("hom-poset search space", y.len(), x.len())?;
    let search = monotone_search(x, y, free_domains(x, y));
    let (rows, truncated) = search.collect(limits.max_carrier);
    if truncated {
        return Err(OrderError::SizeLimitExceeded {
            what: "hom-poset",
            size: rows.len() as u128 + 1,
            limit: limits.max_carrier as u128,
        });
    }
    let maps: Vec<MonotoneMap> = rows
        .iter()
        .map(|a| MonotoneMap::trusted(x.clone(), y.clone(), a.clone()))
        .collect();
    let poset = FinPreorder::from_fn_trusted(maps.len(), |a, b| maps[a].le(&maps[b]))
        .with_labels_trusted(rows.iter().map(|a| assign_label(y, a)).collect());
    let index = rows.into_iter().enumerate().map(|(i, a)| (a, i)).collect();
    Ok(HomPoset {
        src: x.clone(),
        tgt: y.clone(),
        maps,
        poset,
        index,
    })
}

/// All commuting squares from `j` to `g`, ordered componentwise.
#[derive(Debug, Clone)]
pub struct SquarePoset {
    j: MonotoneMap,
    g: MonotoneMap,
    squares: Vec<Square>,
    poset: FinPreorder,
    index: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

impl SquarePoset {
    pub fn j(&self) -> &MonotoneMap {
        &self.j
    }

    pub fn g(&self) -> &MonotoneMap {
        &self.g
    }

    /// The squares, in lexicographic order of `(h, k)`.
    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn square(&self, i: usize) -> &Square {
        &self.squares[i]
    }

    pub fn poset(&self) -> &FinPreorder {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn index_of(&self, h: &[usize], k: &[usize]) -> Option<usize> {
        self.index.get(&(h.to_vec(), k.to_vec())).copied()
    }
}

/// Enumerates the commuting squares from `j` to `g`.
pub fn sq_hom_poset(j: &MonotoneMap, g: &MonotoneMap, limits: &Limits) -> Result<SquarePoset> {
    let hs = hom_poset(j.src(), g.src(), limits)?;
    limits.check_hom_space("square search space", g.tgt().len(), j.tgt().len())?;
    let mut squares = Vec::new();
    let mut keys = Vec::new();
    for h in hs.maps() {
        // k is pinned on the image of j
        let mut domains: Vec<Option<usize>> = vec![None; j.tgt().len()];
        let mut consistent = true;
        for x in 0..j.src().len() {
            let want = g.apply(h.apply(x));
            let slot = &mut domains[j.apply(x)];
            match slot {
                Some(v) if *v != want => consistent = false,
                _ => *slot = Some(want),
            }
        }
        if !consistent {
            continue;
        }
        let domains = domains
            .into_iter()
            .map(|d| match d {
                Some(v) => vec![v],
                None => (0..g.tgt().len()).collect(),
            })
            .collect();
        let search = monotone_search(j.tgt(), g.tgt(), domains);
        let (ks, truncated) = search.collect(limits.max_carrier - squares.len());
        if truncated {
            return Err(OrderError::SizeLimitExceeded {
                what: "square poset",
                size: (squares.len() + ks.len() + 1) as u128,
                limit: limits.max_carrier as u128,
            });
        }
        for k in ks {
            let km = MonotoneMap::trusted(j.tgt().clone(), g.tgt().clone(), k.clone());
            keys.push((h.assign().to_vec(), k));
            squares.push(Square::trusted(j.clone(), g.clone(), h.clone(), km));
        }
    }
    let poset = FinPreorder::from_fn_trusted(squares.len(), |a, b| {
        squares[a].h.le(&squares[b].h) && squares[a].k.le(&squares[b].k)
    })
    .with_labels_trusted(
        keys.iter()
            .map(|(h, k)| format!("({}|{})", assign_label(g.src(), h), assign_label(g.tgt(), k)))
            .collect(),
    );
    let index = keys.into_iter().enumerate().map(|(i, key)| (key, i)).collect();
    Ok(SquarePoset {
        j: j.clone(),
        g: g.clone(),
        squares,
        poset,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::enumerate::is_isomorphic;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn two_cell_examples() {
        let one = FinPreorder::one();
        let c2 = FinPreorder::chain(2);
        let a2 = FinPreorder::antichain(2);
        let c0 = MonotoneMap::constant(&one, &c2, 0).unwrap();
        let c1 = MonotoneMap::constant(&one, &c2, 1).unwrap();
        assert!(two_cell(&c0, &c0).unwrap());
        assert!(two_cell(&c0, &c1).unwrap());
        assert!(!two_cell(&c1, &c0).unwrap());
        let ca = MonotoneMap::constant(&one, &a2, 0).unwrap();
        let cb = MonotoneMap::constant(&one, &a2, 1).unwrap();
        assert!(!two_cell(&ca, &cb).unwrap());
        assert!(two_cell(&ca, &c0).is_err());
        assert!(TwoCell::new(c1, c0).is_err());
    }

    #[test]
    fn hom_poset_examples() {
        let one = FinPreorder::one();
        let c2 = FinPreorder::chain(2);
        let h = hom_poset(&one, &c2, &lim()).unwrap();
        assert_eq!(h.poset(), &c2);
        // 3 of the 4 functions c2 -> c2 are monotone, forming a chain
        let h = hom_poset(&c2, &c2, &lim()).unwrap();
        let assigns: Vec<&[usize]> = h.maps().iter().map(|m| m.assign()).collect();
        assert_eq!(assigns, vec![&[0, 0][..], &[0, 1], &[1, 1]]);
        assert_eq!(h.poset(), &FinPreorder::chain(3));
        let h = hom_poset(&FinPreorder::antichain(2), &one, &lim()).unwrap();
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn hom_poset_size_guard() {
        let tight = Limits::default().with_max_carrier(2);
        let c2 = FinPreorder::chain(2);
        assert!(matches!(
            hom_poset(&c2, &c2, &tight),
            Err(OrderError::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn squares_from_identity_match_hom() {
        let x = FinPreorder::chain(2);
        let g = MonotoneMap::terminal(&FinPreorder::vee());
        let sq = sq_hom_poset(&MonotoneMap::identity(&x), &g, &lim()).unwrap();
        let hom = hom_poset(&x, g.src(), &lim()).unwrap();
        assert!(is_isomorphic(sq.poset(), hom.poset()));
    }

    #[test]
    fn square_membership() {
        let a2 = FinPreorder::antichain(2);
        let diamond = FinPreorder::diamond();
        let j = MonotoneMap::new(a2.clone(), diamond.clone(), vec![1, 2]).unwrap();
        let vee = FinPreorder::vee();
        let g = MonotoneMap::terminal(&vee);
        let sq = sq_hom_poset(&j, &g, &lim()).unwrap();
        assert!(sq.index_of(&[0, 1], &[0, 0, 0, 0]).is_some());
        let id_one = MonotoneMap::identity(&FinPreorder::one());
        let sq = sq_hom_poset(&j, &id_one, &lim()).unwrap();
        assert_eq!(sq.len(), 1);
    }
}
