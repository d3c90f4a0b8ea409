//! Enumeration of finite preorders, canonical forms and isomorphism tests.

use std::collections::BTreeSet;

use super::preorder::FinPreorder;
use crate::error::{OrderError, Result};
use crate::limits::Limits;

/// Largest element count canonical codes support.
const MAX_CODE_SIZE: usize = 11;

/// All preorders on `n` labelled elements, or one representative per
/// isomorphism class when `up_to_iso` is set. Representatives are in canonical
/// form and sorted by canonical code, so the output is deterministic.
pub fn enumerate_preorders(n: usize, up_to_iso: bool, limits: &Limits) -> Result<Vec<FinPreorder>> {
    limits.check_size("preorder enumeration", n)?;
    let labelled = labelled_rows(n);
    if !up_to_iso {
        return Ok(labelled.into_iter().map(|rows| from_u32_rows(&rows)).collect());
    }
    let mut seen = BTreeSet::new();
    for rows in labelled {
        seen.insert(canonical_form(&from_u32_rows(&rows))?.0);
    }
    Ok(seen.into_iter().map(|code| from_code(n, code)).collect())
}

/// Isomorphism classes of posets on `n` elements.
pub fn enumerate_posets(n: usize, limits: &Limits) -> Result<Vec<FinPreorder>> {
    Ok(enumerate_preorders(n, true, limits)?
        .into_iter()
        .filter(FinPreorder::is_poset)
        .collect())
}

/// Labelled preorders grown one element at a time: the new element gets a
/// down-set D and an up-set U of the old elements with D <= U pointwise.
fn labelled_rows(n: usize) -> Vec<Vec<u32>> {
    // rows[i] bit j set iff i <= j
    let mut level: Vec<Vec<u32>> = vec![Vec::new()];
    for m in 0..n {
        let mut next = Vec::new();
        for rows in &level {
            let full = (1u32 << m) - 1;
            let downs: Vec<u32> = (0..=full).filter(|&d| is_down_mask(rows, d)).collect();
            let ups: Vec<u32> = (0..=full).filter(|&u| is_up_mask(rows, u)).collect();
            for &d in &downs {
                // everything above some member of D
                let mut above_all = full;
                for i in 0..m {
                    if d & (1 << i) != 0 {
                        above_all &= rows[i];
                    }
                }
                for &u in &ups {
                    if u & !above_all != 0 {
                        continue;
                    }
                    let mut grown = rows.clone();
                    for i in 0..m {
                        if d & (1 << i) != 0 {
                            grown[i] |= 1 << m;
                        }
                    }
                    grown.push(u | (1 << m));
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}

fn is_down_mask(rows: &[u32], d: u32) -> bool {
    // i in D and j <= i imply j in D
    (0..rows.len()).all(|j| {
        (0..rows.len()).all(|i| d & (1 << i) == 0 || rows[j] & (1 << i) == 0 || d & (1 << j) != 0)
    })
}

fn is_up_mask(rows: &[u32], u: u32) -> bool {
    (0..rows.len()).all(|i| u & (1 << i) == 0 || rows[i] & !u == 0)
}

fn from_u32_rows(rows: &[u32]) -> FinPreorder {
    let n = rows.len();
    FinPreorder::from_fn_trusted(n, |i, j| rows[i] & (1 << j) != 0)
}

fn code_of(x: &FinPreorder, order: &[usize]) -> u128 {
    // order[p] = old element placed at position p
    let n = order.len();
    let mut code = 0u128;
    let mut bit = 0;
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            if x.le(order[p], order[q]) {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

fn from_code(n: usize, code: u128) -> FinPreorder {
    let mut bit = 0;
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            if code & (1 << bit) != 0 {
                pairs.push((p, q));
            }
            bit += 1;
        }
    }
    FinPreorder::closure(n, &pairs).expect("indices in range")
}

fn signature(x: &FinPreorder, i: usize) -> (usize, usize) {
    (x.down(i).count_ones(..), x.up(i).count_ones(..))
}

/// Canonical code (minimum over signature-respecting relabellings) and the
/// ordering achieving it: `order[p]` is the element placed at position `p`.
pub fn canonical_form(x: &FinPreorder) -> Result<(u128, Vec<usize>)> {
    let n = x.len();
    if n > MAX_CODE_SIZE {
        return Err(OrderError::SizeLimitExceeded {
            what: "canonical form",
            size: n as u128,
            limit: MAX_CODE_SIZE as u128,
        });
    }
    let mut base: Vec<usize> = (0..n).collect();
    base.sort_by_key(|&i| (signature(x, i), i));
    let blocks: Vec<(usize, usize)> = {
        let mut out = Vec::new();
        let mut start = 0;
        for p in 1..=n {
            if p == n || signature(x, base[p]) != signature(x, base[start]) {
                out.push((start, p));
                start = p;
            }
        }
        out
    };
    let mut best: Option<(u128, Vec<usize>)> = None;
    let mut order = base.clone();
    permute_blocks(&blocks, 0, &mut order, &mut |o| {
        let c = code_of(x, o);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, o.to_vec()));
        }
    });
    Ok(best.unwrap_or((0, Vec::new())))
}

fn permute_blocks(blocks: &[(usize, usize)], b: usize, order: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if b == blocks.len() {
        visit(order);
        return;
    }
    let (start, end) = blocks[b];
    heap_permute(order, start, end - start, &mut |o| {
        permute_blocks(blocks, b + 1, &mut o.to_vec(), visit)
    });
}

fn heap_permute(v: &mut Vec<usize>, start: usize, k: usize, visit: &mut dyn FnMut(&mut Vec<usize>)) {
    if k <= 1 {
        visit(v);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(v, start, k - 1, visit);
        if k.is_multiple_of(2) {
            v.swap(start + i, start + k - 1);
        } else {
            v.swap(start, start + k - 1);
        }
    }
    heap_permute(v, start, k - 1, visit);
}

/// The canonical representative of `x`'s isomorphism class.
pub fn canonical(x: &FinPreorder) -> Result<FinPreorder> {
    let (code, _) = canonical_form(x)?;
    Ok(from_code(x.len(), code))
}

/// An order isomorphism `x -> y` as an assignment vector, found by
/// backtracking over signature-compatible bijections.
pub fn find_isomorphism(x: &FinPreorder, y: &FinPreorder) -> Option<Vec<usize>> {
    let n = x.len();
    if n != y.len() {
        return None;
    }
    let mut sx: Vec<_> = (0..n).map(|i| signature(x, i)).collect();
    let mut sy: Vec<_> = (0..n).map(|i| signature(y, i)).collect();
    let (ax, ay) = (sx.clone(), sy.clone());
    sx.sort();
    sy.sort();
    if sx != sy {
        return None;
    }
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(x, y, &ax, &ay, 0, &mut assign, &mut used) {
        Some(assign)
    } else {
        None
    }
}

fn extend(
    x: &FinPreorder,
    y: &FinPreorder,
    ax: &[(usize, usize)],
    ay: &[(usize, usize)],
    i: usize,
    assign: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == x.len() {
        return true;
    }
    for c in 0..y.len() {
        if used[c] || ax[i] != ay[c] {
            continue;
        }
        let ok = (0..i).all(|p| {
            x.le(p, i) == y.le(assign[p], c) && x.le(i, p) == y.le(c, assign[p])
        });
        if !ok {
            continue;
        }
        assign[i] = c;
        used[c] = true;
        if extend(x, y, ax, ay, i + 1, assign, used) {
            return true;
        }
        used[c] = false;
    }
    assign[i] = usize::MAX;
    false
}

pub fn is_isomorphic(x: &FinPreorder, y: &FinPreorder) -> bool {
    find_isomorphism(x, y).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::downset::all_downsets;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn labelled_counts() {
        // labelled preorders: 1, 1, 4, 29, 355, 6942
        let counts: Vec<usize> = (0..=5)
            .map(|n| enumerate_preorders(n, false, &lim()).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355, 6942]);
    }

    #[test]
    fn labelled_generation_is_exact() {
        // brute force over all relations on 3 elements
        let mut brute = 0;
        for mask in 0u32..(1 << 6) {
            let mut pairs = Vec::new();
            let mut bit = 0;
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        if mask & (1 << bit) != 0 {
                            pairs.push((i, j));
                        }
                        bit += 1;
                    }
                }
            }
            let closed = FinPreorder::closure(3, &pairs).unwrap();
            if closed.relation_pairs().len() == pairs.len() {
                brute += 1;
            }
        }
        assert_eq!(brute, enumerate_preorders(3, false, &lim()).unwrap().len());
    }

    #[test]
    fn unlabelled_counts() {
        let pre: Vec<usize> = (0..=4)
            .map(|n| enumerate_preorders(n, true, &lim()).unwrap().len())
            .collect();
        assert_eq!(pre, vec![1, 1, 3, 9, 33]);
        let pos: Vec<usize> = (0..=4)
            .map(|n| enumerate_posets(n, &lim()).unwrap().len())
            .collect();
        assert_eq!(pos, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            enumerate_preorders(6, false, &lim()),
            Err(OrderError::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn iso_examples() {
        let c2 = FinPreorder::chain(2);
        let a2 = FinPreorder::antichain(2);
        assert!(is_isomorphic(&c2, &c2));
        assert!(!is_isomorphic(&c2, &a2));
        let downs = all_downsets(&a2, &lim()).unwrap();
        let p = FinPreorder::from_fn(downs.len(), |i, j| downs[i].is_subset(&downs[j])).unwrap();
        assert!(is_isomorphic(&p, &FinPreorder::diamond()));
    }

    #[test]
    fn canonical_is_an_invariant() {
        let x = FinPreorder::closure(4, &[(0, 1), (2, 1), (3, 0)]).unwrap();
        let y = x.permute(&[2, 0, 3, 1]).unwrap();
        assert_eq!(canonical_form(&x).unwrap().0, canonical_form(&y).unwrap().0);
        assert!(is_isomorphic(&canonical(&x).unwrap(), &x));
    }
}
