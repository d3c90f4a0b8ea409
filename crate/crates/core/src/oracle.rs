//! Brute-force reference computations. These deliberately avoid the
//! library's own search and closure code, so they can check it.

use fixedbitset::FixedBitSet;

use crate::order::{FinPreorder, MonotoneMap};

fn bits(n: usize, mask: u64) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        if mask >> i & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

/// Down-closed subsets of `x`, found by testing all `2^n` subsets.
pub fn downsets_brute(x: &FinPreorder) -> Vec<FixedBitSet> {
    let n = x.len();
    assert!(n < 24, "brute-force down-sets need a small carrier");
    (0..1u64 << n)
        .filter(|&m| {
            (0..n).all(|a| m >> a & 1 == 0 || (0..n).all(|b| !x.le(b, a) || m >> b & 1 == 1))
        })
        .map(|m| bits(n, m))
        .collect()
}

/// Elements `(φ, b)` of `Kf`: `φ` a down-set of `dom f`, `b` in `cod f`, and
/// `f(a) <= b` for every `a ∈ φ`. Order is `φ ⊆ φ'` and `b <= b'`.
pub fn kf_elements(f: &MonotoneMap) -> Vec<(FixedBitSet, usize)> {
    let (x, y) = (f.src(), f.tgt());
    let mut out = Vec::new();
    for phi in downsets_brute(x) {
        for b in 0..y.len() {
            if phi.ones().all(|a| y.le(f.apply(a), b)) {
                out.push((phi.clone(), b));
            }
        }
    }
    out
}

pub fn kf_le(f: &MonotoneMap, p: &(FixedBitSet, usize), q: &(FixedBitSet, usize)) -> bool {
    p.0.is_subset(&q.0) && f.tgt().le(p.1, q.1)
}

/// Reflexive and transitive relations on `n` points, as `n x n` bit matrices.
fn relations(n: usize) -> impl Iterator<Item = u64> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let diag: u64 = (0..n).map(|i| 1u64 << (i * n + i)).sum();
    (0..1u64 << off.len()).filter_map(move |m| {
        let mut r = diag;
        for (k, &(i, j)) in off.iter().enumerate() {
            if m >> k & 1 == 1 {
                r |= 1 << (i * n + j);
            }
        }
        let at = |i: usize, j: usize| r >> (i * n + j) & 1 == 1;
        let transitive = (0..n).all(|i| (0..n).all(|j| !at(i, j) || (0..n).all(|k| !at(j, k) || at(i, k))));
        transitive.then_some(r)
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Numbers of preorders and of partial orders on `n` unlabelled points,
/// counted by generating every relation and keeping the least relabelling.
pub fn count_up_to_iso(n: usize) -> (usize, usize) {
    assert!(n <= 5, "brute-force counting is only feasible for tiny n");
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut posets = 0;
    for r in relations(n) {
        let canon = perms
            .iter()
            .map(|p| {
                let mut s = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        if r >> (i * n + j) & 1 == 1 {
                            s |= 1 << (p[i] * n + p[j]);
                        }
                    }
                }
                s
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let antisym = (0..n).all(|i| (0..n).all(|j| i == j || canon >> (i * n + j) & 1 == 0 || canon >> (j * n + i) & 1 == 0));
            posets += usize::from(antisym);
        }
    }
    (seen.len(), posets)
}
