use fixedbitset::FixedBitSet;

use super::preorder::{empty_set, lex_cmp, FinPreorder};
use crate::error::{invalid, OrderError, Result};
use crate::limits::Limits;

/// A down-closed subset of a preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownSet {
    carrier: FinPreorder,
    members: FixedBitSet,
}

impl DownSet {
    pub fn new(carrier: &FinPreorder, members: FixedBitSet) -> Result<Self> {
        if members.len() != carrier.len() {
            return Err(invalid("membership vector has the wrong length"));
        }
        if !is_down_closed(carrier, &members) {
            return Err(invalid("subset is not down-closed"));
        }
        Ok(DownSet {
            carrier: carrier.clone(),
            members,
        })
    }

    /// The principal down-set `{x' : x' <= x}`.
    pub fn principal(carrier: &FinPreorder, x: usize) -> Self {
        DownSet {
            carrier: carrier.clone(),
            members: carrier.down(x).clone(),
        }
    }

    pub fn carrier(&self) -> &FinPreorder {
        &self.carrier
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_subset(&self, other: &DownSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

pub fn is_down_closed(x: &FinPreorder, set: &FixedBitSet) -> bool {
    set.ones().all(|i| x.down(i).is_subset(set))
}

pub fn is_up_closed(x: &FinPreorder, set: &FixedBitSet) -> bool {
    set.ones().all(|i| x.up(i).is_subset(set))
}

pub fn down_closure(x: &FinPreorder, set: &FixedBitSet) -> FixedBitSet {
    let mut out = empty_set(x.len());
    for i in set.ones() {
        out.union_with(x.down(i));
    }
    out
}

pub fn up_closure(x: &FinPreorder, set: &FixedBitSet) -> FixedBitSet {
    let mut out = empty_set(x.len());
    for i in set.ones() {
        out.union_with(x.up(i));
    }
    out
}

/// Every down-set of `x`, sorted lexicographically by membership vector.
///
/// Equivalence classes are decided along a linear extension; a class may
/// join only once everything strictly below it has, so every branch of the
/// recursion yields a down-set and the cost is linear in the output.
pub fn all_downsets(x: &FinPreorder, limits: &Limits) -> Result<Vec<FixedBitSet>> {
    let mut classes = x.classes();
    classes.sort_by_key(|c| (x.down(c[0]).count_ones(..), c[0]));
    let classes: Vec<FixedBitSet> = classes
        .into_iter()
        .map(|c| {
            let mut s = empty_set(x.len());
            s.extend(c);
            s
        })
        .collect();
    let mut out = Vec::new();
    let mut current = empty_set(x.len());
    walk(x, &classes, 0, &mut current, &mut out, limits.max_carrier)?;
    out.sort_by(lex_cmp);
    Ok(out)
}

/// Every up-set of `x`, in the same order convention.
pub fn all_upsets(x: &FinPreorder, limits: &Limits) -> Result<Vec<FixedBitSet>> {
    all_downsets(&x.op(), limits)
}

fn walk(
    x: &FinPreorder,
    classes: &[FixedBitSet],
    pos: usize,
    current: &mut FixedBitSet,
    out: &mut Vec<FixedBitSet>,
    cap: usize,
) -> Result<()> {
    if pos == classes.len() {
        if out.len() == cap {
            return Err(OrderError::SizeLimitExceeded {
                what: "down-set lattice",
                size: cap as u128 + 1,
                limit: cap as u128,
            });
        }
        out.push(current.clone());
        return Ok(());
    }
    walk(x, classes, pos + 1, current, out, cap)?;
    let class = &classes[pos];
    let rep = class.ones().next().expect("classes are nonempty");
    let mut strictly_below = x.down(rep).clone();
    strictly_below.difference_with(class);
    if strictly_below.is_subset(current) {
        current.union_with(class);
        walk(x, classes, pos + 1, current, out, cap)?;
        current.difference_with(class);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: &FinPreorder) -> Vec<FixedBitSet> {
        let n = x.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let mut s = empty_set(n);
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    s.insert(i);
                }
            }
            if is_down_closed(x, &s) {
                out.push(s);
            }
        }
        out.sort_by(lex_cmp);
        out
    }

    #[test]
    fn examples() {
        let lim = Limits::default();
        assert_eq!(all_downsets(&FinPreorder::chain(2), &lim).unwrap().len(), 3);
        assert_eq!(all_downsets(&FinPreorder::antichain(2), &lim).unwrap().len(), 4);
        assert_eq!(all_downsets(&FinPreorder::empty(), &lim).unwrap().len(), 1);
    }

    #[test]
    fn matches_brute_force_on_all_small_preorders() {
        let lim = Limits::default();
        for n in 0..=4 {
            for x in crate::order::enumerate::enumerate_preorders(n, false, &lim).unwrap() {
                assert_eq!(all_downsets(&x, &lim).unwrap(), brute(&x), "{x:?}");
            }
        }
    }

    #[test]
    fn down_set_type_checks_closure() {
        let c2 = FinPreorder::chain(2);
        let mut top_only = empty_set(2);
        top_only.insert(1);
        assert!(DownSet::new(&c2, top_only).is_err());
        let p = DownSet::principal(&c2, 1);
        assert!(p.contains(0) && p.contains(1));
    }
}
