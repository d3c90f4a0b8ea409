//! Smallest counterexamples for the `check` predicates, by label.

use fixedbitset::FixedBitSet;
use serde_json::{json, Value};

use lofs_core::{FinPreorder, MonotoneMap};

fn labels(x: &FinPreorder, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|i| x.label(i).into_owned()).collect()
}

/// Two distinct elements below each other.
pub fn equivalent_pair(x: &FinPreorder) -> Option<Value> {
    let n = x.len();
    let (a, b) = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| x.equiv(a, b))?;
    Some(json!({"equivalent": labels(x, [a, b])}))
}

/// A subset with no least upper bound, fewest elements first.
pub fn subset_without_lub(x: &FinPreorder) -> Option<Value> {
    let n = x.len();
    if n > 20 {
        return None;
    }
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().find_map(|m| {
        let mut s = FixedBitSet::with_capacity(n);
        s.extend((0..n).filter(|i| m >> i & 1 == 1));
        x.lub(&s).is_none().then(|| json!({"no_supremum": labels(x, s.ones())}))
    })
}

/// `f(a) <= f(b)` without `a <= b`.
pub fn not_full(f: &MonotoneMap) -> Option<Value> {
    let (x, y) = (f.src(), f.tgt());
    let n = x.len();
    let (a, b) = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| y.le(f.apply(a), f.apply(b)) && !x.le(a, b))?;
    Some(json!({"a": x.label(a), "b": x.label(b)}))
}

pub fn collision(f: &MonotoneMap) -> Option<Value> {
    let n = f.src().len();
    let (a, b) = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| f.apply(a) == f.apply(b))?;
    Some(json!({"same_image": labels(f.src(), [a, b])}))
}

pub fn missed(f: &MonotoneMap) -> Option<Value> {
    let image = f.image();
    let b = (0..f.tgt().len()).find(|&b| !image.contains(b))?;
    Some(json!({"not_hit": f.tgt().label(b)}))
}

/// `(b, a)` where `left(b) <= a` and `b <= right(a)` disagree.
pub fn adjunction_violation(left: &MonotoneMap, right: &MonotoneMap) -> Option<Value> {
    let (b_side, a_side) = (left.src(), left.tgt());
    let (b, a) = (0..b_side.len())
        .flat_map(|b| (0..a_side.len()).map(move |a| (b, a)))
        .find(|&(b, a)| a_side.le(left.apply(b), a) != b_side.le(b, right.apply(a)))?;
    Some(json!({"b": b_side.label(b), "a": a_side.label(a)}))
}

/// An open (up-set) of the domain that is no preimage of an open of the codomain.
pub fn open_not_preimage(f: &MonotoneMap, opens_x: &[FixedBitSet], opens_y: &[FixedBitSet]) -> Option<Value> {
    let preimages: Vec<FixedBitSet> = opens_y.iter().map(|v| f.preimage(v)).collect();
    let u = opens_x
        .iter()
        .filter(|u| !preimages.contains(u))
        .min_by_key(|u| u.count_ones(..))?;
    Some(json!({"open_not_a_preimage": labels(f.src(), u.ones())}))
}
