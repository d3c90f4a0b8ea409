//! Backtracking search over finite assignments.
//!
//! Slots are filled in index order. Every constraint is attached to the
//! highest slot in its scope and evaluated as soon as that slot is filled,
//! so solutions come out in lexicographic order of their value indices
//! (domains are tried in the order given).

use std::ops::ControlFlow;

use super::preorder::FinPreorder;

type Check<'a> = Box<dyn Fn(&[usize]) -> bool + 'a>;

pub struct Search<'a> {
    domains: Vec<Vec<usize>>,
    checks: Vec<Vec<Check<'a>>>,
    infeasible: bool,
}

impl<'a> Search<'a> {
    pub fn new(domains: Vec<Vec<usize>>) -> Self {
        let checks = domains.iter().map(|_| Vec::new()).collect();
        Search {
            domains,
            checks,
            infeasible: false,
        }
    }

    pub fn slots(&self) -> usize {
        self.domains.len()
    }

    /// Adds a constraint reading only the slots in `scope`. The closure
    /// receives the partial assignment, indexed by slot.
    pub fn require(&mut self, scope: &[usize], check: impl Fn(&[usize]) -> bool + 'a) {
        match scope.iter().max() {
            Some(&last) => self.checks[last].push(Box::new(check)),
            None => {
                if !check(&[]) {
                    self.infeasible = true;
                }
            }
        }
    }

    /// Restricts one slot's domain.
    pub fn restrict(&mut self, slot: usize, keep: impl Fn(usize) -> bool) {
        self.domains[slot].retain(|&v| keep(v));
    }

    /// Visits solutions in lexicographic order until `visit` breaks.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) {
        let n = self.domains.len();
        if self.infeasible {
            return;
        }
        if n == 0 {
            let _ = visit(&[]);
            return;
        }
        if self.domains.iter().any(|d| d.is_empty()) {
            return;
        }
        let mut cursor = vec![0usize; n];
        let mut values = vec![0usize; n];
        let mut slot = 0usize;
        loop {
            // try the next candidate at `slot`
            let mut placed = false;
            while cursor[slot] < self.domains[slot].len() {
                values[slot] = self.domains[slot][cursor[slot]];
                cursor[slot] += 1;
                let partial = &values[..=slot];
                if self.checks[slot].iter().all(|c| c(partial)) {
                    placed = true;
                    break;
                }
            }
            if placed {
                if slot + 1 == n {
                    if visit(&values).is_break() {
                        return;
                    }
                } else {
                    slot += 1;
                    cursor[slot] = 0;
                }
            } else {
                if slot == 0 {
                    return;
                }
                slot -= 1;
            }
        }
    }

    pub fn first(&self) -> Option<Vec<usize>> {
        let mut out = None;
        self.for_each(|s| {
            out = Some(s.to_vec());
            ControlFlow::Break(())
        });
        out
    }

    /// Collects up to `cap` solutions; the flag reports whether more exist.
    pub fn collect(&self, cap: usize) -> (Vec<Vec<usize>>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        self.for_each(|s| {
            if out.len() == cap {
                truncated = true;
                return ControlFlow::Break(());
            }
            out.push(s.to_vec());
            ControlFlow::Continue(())
        });
        (out, truncated)
    }
}

/// Search for monotone maps `src -> tgt`, one slot per source element,
/// with the given candidate values per slot.
pub fn monotone_search<'a>(
    src: &'a FinPreorder,
    tgt: &'a FinPreorder,
    domains: Vec<Vec<usize>>,
) -> Search<'a> {
    assert_eq!(domains.len(), src.len());
    let mut search = Search::new(domains);
    for (i, j) in src.relation_pairs() {
        search.require(&[i, j], move |v| tgt.le(v[i], v[j]));
    }
    search
}

/// Every value of `tgt`, for each element of `src`.
pub fn free_domains(src: &FinPreorder, tgt: &FinPreorder) -> Vec<Vec<usize>> {
    (0..src.len()).map(|_| (0..tgt.len()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_monotone_maps() {
        let c2 = FinPreorder::chain(2);
        let s = monotone_search(&c2, &c2, free_domains(&c2, &c2));
        let (all, more) = s.collect(10);
        assert!(!more);
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn empty_scope_constraint() {
        let mut s = Search::new(vec![vec![0, 1]]);
        s.require(&[], |_| false);
        assert!(s.first().is_none());
    }

    #[test]
    fn zero_slots_have_one_solution() {
        let s = Search::new(Vec::new());
        assert_eq!(s.collect(5).0, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn cap_reports_truncation() {
        let s = Search::new(vec![vec![0, 1, 2]; 2]);
        let (all, more) = s.collect(4);
        assert_eq!(all.len(), 4);
        assert!(more);
    }
}
