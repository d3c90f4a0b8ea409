use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{invalid, OrderError, Result};

/// A finite set with a reflexive, transitive relation.
///
/// Elements are the indices `0..len()`. Labels are for presentation only and
/// never take part in comparisons. Cloning is cheap: the relation is shared.
#[derive(Clone)]
pub struct FinPreorder(Arc<Inner>);

struct Inner {
    // up[i] = { j : i <= j }
    up: Vec<FixedBitSet>,
    // down[i] = { j : j <= i }
    down: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

/// Outcome of the complete-lattice test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Completeness {
    /// Every subset has a least upper bound, up to equivalence.
    pub complete: bool,
    /// Least upper bounds are unique, i.e. the carrier is a poset.
    pub poset: bool,
}

impl Completeness {
    pub fn strict(&self) -> bool {
        self.complete && self.poset
    }
}

pub(crate) fn empty_set(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

pub(crate) fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub(crate) fn singleton(n: usize, i: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert(i);
    s
}

/// Lexicographic comparison of two membership vectors, element 0 first,
/// absent before present.
pub(crate) fn lex_cmp(a: &FixedBitSet, b: &FixedBitSet) -> std::cmp::Ordering {
    debug_assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        match (a.contains(i), b.contains(i)) {
            (false, true) => return std::cmp::Ordering::Less,
            (true, false) => return std::cmp::Ordering::Greater,
            _ => {}
        }
    }
    std::cmp::Ordering::Equal
}

fn default_letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if n <= 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

impl FinPreorder {
    /// Smallest preorder on `n` elements containing `pairs`.
    pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut up: Vec<FixedBitSet> = (0..n).map(|i| singleton(n, i)).collect();
        for &(a, b) in pairs {
            for index in [a, b] {
                if index >= n {
                    return Err(OrderError::IndexOutOfRange { index, len: n });
                }
            }
            up[a].insert(b);
        }
        close_rows(&mut up);
        Ok(Self::from_rows_trusted(up, None))
    }

    /// Builds a preorder from `le`, which must already be reflexive and transitive.
    pub fn from_fn(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let up = rows_from_fn(n, le);
        validate_rows(&up)?;
        Ok(Self::from_rows_trusted(up, None))
    }

    /// Same as [`from_fn`](Self::from_fn) for constructions whose relation is
    /// a preorder by construction. Validated only in debug builds on small inputs.
    pub(crate) fn from_fn_trusted(n: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let up = rows_from_fn(n, le);
        if cfg!(debug_assertions) && n <= 64 {
            validate_rows(&up).expect("construction produced a non-preorder");
        }
        Self::from_rows_trusted(up, None)
    }

    pub(crate) fn from_rows_trusted(up: Vec<FixedBitSet>, labels: Option<Vec<String>>) -> Self {
        let n = up.len();
        let mut down: Vec<FixedBitSet> = (0..n).map(|_| empty_set(n)).collect();
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].insert(i);
            }
        }
        FinPreorder(Arc::new(Inner { up, down, labels }))
    }

    /// Attaches presentation labels; they must be distinct.
    pub fn with_labels<S: Into<String>>(self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.len() {
            return Err(invalid(format!(
                "{} labels for {} elements",
                labels.len(),
                self.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(invalid(format!("duplicate element label {l:?}")));
            }
        }
        Ok(Self::from_rows_trusted(self.0.up.clone(), Some(labels)))
    }

    pub(crate) fn with_labels_trusted(self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.len());
        match Arc::try_unwrap(self.0) {
            Ok(mut inner) => {
                inner.labels = Some(labels);
                FinPreorder(Arc::new(inner))
            }
            Err(shared) => Self::from_rows_trusted(shared.up.clone(), Some(labels)),
        }
    }

    pub fn empty() -> Self {
        Self::from_rows_trusted(Vec::new(), None)
    }

    /// The terminal preorder, one element labelled `*`.
    pub fn one() -> Self {
        Self::from_rows_trusted(vec![singleton(1, 0)], Some(vec!["*".into()]))
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_fn_trusted(n, |i, j| i <= j)
    }

    /// `n` pairwise incomparable elements labelled `a, b, ...`.
    pub fn antichain(n: usize) -> Self {
        Self::from_fn_trusted(n, |i, j| i == j).with_labels_trusted(default_letters(n))
    }

    /// `n` pairwise equivalent elements.
    pub fn indiscrete(n: usize) -> Self {
        Self::from_fn_trusted(n, |_, _| true)
    }

    /// `bot < a, b < top`.
    pub fn diamond() -> Self {
        Self::closure(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
            .expect("static")
            .with_labels_trusted(vec!["bot".into(), "a".into(), "b".into(), "top".into()])
    }

    /// `a, b < top`, with no bottom.
    pub fn vee() -> Self {
        Self::closure(3, &[(0, 2), (1, 2)])
            .expect("static")
            .with_labels_trusted(vec!["a".into(), "b".into(), "top".into()])
    }

    pub fn len(&self) -> usize {
        self.0.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.0.up[i].contains(j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && !self.le(j, i)
    }

    #[inline]
    pub fn equiv(&self, i: usize, j: usize) -> bool {
        self.le(i, j) && self.le(j, i)
    }

    /// `{ j : i <= j }`
    pub fn up(&self, i: usize) -> &FixedBitSet {
        &self.0.up[i]
    }

    /// `{ j : j <= i }`
    pub fn down(&self, i: usize) -> &FixedBitSet {
        &self.0.down[i]
    }

    pub fn label(&self, i: usize) -> Cow<'_, str> {
        match &self.0.labels {
            Some(labels) => Cow::Borrowed(labels[i].as_str()),
            None => Cow::Owned(i.to_string()),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i).into_owned()).collect()
    }

    pub fn has_labels(&self) -> bool {
        self.0.labels.is_some()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.len()).find(|&i| self.label(i) == label)
    }

    /// True when both handles share the same relation storage.
    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_poset(&self) -> bool {
        (0..self.len()).all(|i| {
            let mut both = self.up(i).clone();
            both.intersect_with(self.down(i));
            both.count_ones(..) == 1
        })
    }

    /// Non-reflexive pairs `(i, j)` with `i <= j`, in index order.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            out.extend(self.up(i).ones().filter(|&j| j != i).map(|j| (i, j)));
        }
        out
    }

    pub fn upper_bounds(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut ub = full_set(self.len());
        for i in set.ones() {
            ub.intersect_with(self.up(i));
        }
        ub
    }

    pub fn lower_bounds(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut lb = full_set(self.len());
        for i in set.ones() {
            lb.intersect_with(self.down(i));
        }
        lb
    }

    /// All least elements of `set` (an equivalence class, or empty).
    pub fn minima(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = empty_set(self.len());
        for m in set.ones() {
            if set.is_subset(self.up(m)) {
                out.insert(m);
            }
        }
        out
    }

    /// All greatest elements of `set`.
    pub fn maxima(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = empty_set(self.len());
        for m in set.ones() {
            if set.is_subset(self.down(m)) {
                out.insert(m);
            }
        }
        out
    }

    /// Lowest-index least element of `set`.
    pub fn least_in(&self, set: &FixedBitSet) -> Option<usize> {
        set.ones().find(|&m| set.is_subset(self.up(m)))
    }

    /// Lowest-index greatest element of `set`.
    pub fn greatest_in(&self, set: &FixedBitSet) -> Option<usize> {
        set.ones().find(|&m| set.is_subset(self.down(m)))
    }

    /// A least upper bound of `set`, up to equivalence.
    pub fn lub(&self, set: &FixedBitSet) -> Option<usize> {
        self.least_in(&self.upper_bounds(set))
    }

    /// A greatest lower bound of `set`, up to equivalence.
    pub fn glb(&self, set: &FixedBitSet) -> Option<usize> {
        self.greatest_in(&self.lower_bounds(set))
    }

    /// Complete-lattice test. Finite, so bottom plus binary joins suffice.
    pub fn completeness(&self) -> Completeness {
        let n = self.len();
        let poset = self.is_poset();
        let complete = n > 0 && self.least_in(&full_set(n)).is_some() && {
            let mut ok = true;
            'pairs: for i in 0..n {
                for j in (i + 1)..n {
                    let mut pair = singleton(n, i);
                    pair.insert(j);
                    if self.lub(&pair).is_none() {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            ok
        };
        Completeness { complete, poset }
    }

    /// Every subset has a least upper bound up to equivalence.
    pub fn is_complete_lattice(&self) -> bool {
        self.completeness().complete
    }

    /// Complete lattice in the skeletal sense: a poset with all suprema.
    pub fn is_complete_lattice_strict(&self) -> bool {
        self.completeness().strict()
    }

    /// Equivalence classes, each sorted, ordered by their least index.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = empty_set(n);
        let mut out = Vec::new();
        for i in 0..n {
            if seen.contains(i) {
                continue;
            }
            let mut class = self.up(i).clone();
            class.intersect_with(self.down(i));
            seen.union_with(&class);
            out.push(class.ones().collect());
        }
        out
    }

    /// Cover relation of the poset reflection, as pairs of class indices
    /// into [`classes`](Self::classes).
    pub fn class_covers(&self) -> Vec<(usize, usize)> {
        let classes = self.classes();
        let rep: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let mut out = Vec::new();
        for (ci, &a) in rep.iter().enumerate() {
            for (cj, &b) in rep.iter().enumerate() {
                if ci == cj || !self.lt(a, b) {
                    continue;
                }
                let between = rep
                    .iter()
                    .any(|&c| self.lt(a, c) && self.lt(c, b));
                if !between {
                    out.push((ci, cj));
                }
            }
        }
        out
    }

    /// A linear extension: every element appears after all elements strictly below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.down(i).count_ones(..), i));
        order
    }

    /// The opposite preorder.
    pub fn op(&self) -> Self {
        let out = Self::from_rows_trusted(self.0.down.clone(), None);
        match &self.0.labels {
            Some(l) => out.with_labels_trusted(l.clone()),
            None => out,
        }
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        if perm.len() != n {
            return Err(invalid("permutation length differs from element count"));
        }
        let mut inv = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inv[p] != usize::MAX {
                return Err(invalid("not a permutation"));
            }
            inv[p] = i;
        }
        let out = Self::from_fn_trusted(n, |a, b| self.le(inv[a], inv[b]));
        Ok(match &self.0.labels {
            Some(l) => out.with_labels_trusted((0..n).map(|p| l[inv[p]].clone()).collect()),
            None => out,
        })
    }

    /// The induced sub-preorder on `elements`, in the given order.
    pub fn restrict(&self, elements: &[usize]) -> Self {
        let out = Self::from_fn_trusted(elements.len(), |a, b| self.le(elements[a], elements[b]));
        out.with_labels_trusted(elements.iter().map(|&e| self.label(e).into_owned()).collect())
    }

    /// Product preorder with pairs `(i, j)` at index `i * other.len() + j`.
    pub fn product(&self, other: &Self) -> Self {
        let m = other.len();
        let out = Self::from_fn_trusted(self.len() * m, |a, b| {
            self.le(a / m, b / m) && other.le(a % m, b % m)
        });
        let labels = (0..self.len() * m)
            .map(|x| format!("({},{})", self.label(x / m), other.label(x % m)))
            .collect();
        out.with_labels_trusted(labels)
    }
}

fn rows_from_fn(n: usize, le: impl Fn(usize, usize) -> bool) -> Vec<FixedBitSet> {
    (0..n)
        .map(|i| {
            let mut row = empty_set(n);
            for j in 0..n {
                if le(i, j) {
                    row.insert(j);
                }
            }
            row
        })
        .collect()
}

/// Warshall's algorithm on bitset rows.
pub(crate) fn close_rows(up: &mut [FixedBitSet]) {
    let n = up.len();
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
}

fn validate_rows(up: &[FixedBitSet]) -> Result<()> {
    let n = up.len();
    for (i, row) in up.iter().enumerate() {
        if row.len() != n {
            return Err(invalid("relation rows have the wrong width"));
        }
        if !row.contains(i) {
            return Err(invalid(format!("relation is not reflexive at {i}")));
        }
        for j in row.ones() {
            if !up[j].is_subset(row) {
                return Err(invalid(format!("relation is not transitive through {j}")));
            }
        }
    }
    Ok(())
}

impl PartialEq for FinPreorder {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.0.up == other.0.up
    }
}

impl Eq for FinPreorder {}

impl fmt::Debug for FinPreorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .relation_pairs()
            .into_iter()
            .map(|(a, b)| format!("{}<={}", self.label(a), self.label(b)))
            .collect();
        write!(f, "FinPreorder[{}; {}]", self.labels().join(","), pairs.join(" "))
    }
}
