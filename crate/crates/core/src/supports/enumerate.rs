//! Ascending enumeration of grid-set elements.
//!
//! Each term is walked with a min-heap over index tuples, seeded at the
//! all-start tuple; popping a tuple pushes its index successors. Terms and
//! added points are merged, removed points filtered, duplicates collapsed.

use super::{GridSet, GridTerm};
use crate::rational::Rat;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

// Min-heap over (value, term index, index tuple); Rat orders naturally.
type HeapEntry = Reverse<(Rat, usize, Vec<u64>)>;

fn term_value(t: &GridTerm, tuple: &[u64]) -> Rat {
    let mut v = t.limit.clone();
    for (j, n) in tuple.iter().enumerate() {
        v -= t.tails[j].deficit(*n);
    }
    v
}

/// The first `k` elements of the denoted set, in increasing order.
pub fn first_elements(s: &GridSet, k: usize) -> Vec<Rat> {
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut seen: std::collections::BTreeSet<(usize, Vec<u64>)> = Default::default();
    for (ti, t) in s.terms.iter().enumerate() {
        let tuple: Vec<u64> = t.tails.iter().map(|sch| sch.start()).collect();
        seen.insert((ti, tuple.clone()));
        heap.push(Reverse((term_value(t, &tuple), ti, tuple)));
    }
    let mut added = s.added.iter().cloned().peekable();
    let mut out: Vec<Rat> = Vec::with_capacity(k);
    while out.len() < k {
        // Next candidate from the heap vs the next added point.
        let heap_next = heap.peek().map(|Reverse((v, _, _))| v.clone());
        let take_added = match (&heap_next, added.peek()) {
            (None, None) => break,
            (None, Some(_)) => true,
            (Some(_), None) => false,
            (Some(h), Some(a)) => a <= &h,
        };
        let v = if take_added {
            added.next().unwrap()
        } else {
            let Reverse((v, ti, tuple)) = heap.pop().unwrap();
            let t = &s.terms[ti];
            for j in 0..tuple.len() {
                let mut succ = tuple.clone();
                succ[j] += 1;
                if seen.insert((ti, succ.clone())) {
                    heap.push(Reverse((term_value(t, &succ), ti, succ)));
                }
            }
            v
        };
        if s.removed.contains(&v) {
            continue;
        }
        if out.last() == Some(&v) {
            continue;
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::supports::TailSchedule;

    #[test]
    fn enumerates_tail_ascending() {
        let s = GridSet::from_term(GridTerm::tail(
            rat(0, 1),
            TailSchedule::harmonic(rat(1, 1), 1, 0, 1),
        ));
        assert_eq!(
            s.first_elements(4),
            vec![rat(-1, 1), rat(-1, 2), rat(-1, 3), rat(-1, 4)]
        );
    }

    #[test]
    fn enumerates_rank2_with_duplicates_collapsed() {
        let t = TailSchedule::harmonic(rat(1, 1), 1, 0, 1);
        let s = GridSet::from_term(GridTerm {
            limit: rat(0, 1),
            tails: vec![t.clone(), t],
        });
        let first = s.first_elements(6);
        // -2, -3/2, -4/3, -5/4, -6/5, -7/6 (the m=1 slice dominates early).
        assert_eq!(first[0], rat(-2, 1));
        assert_eq!(first[1], rat(-3, 2));
        assert!(first.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn respects_added_and_removed() {
        let mut s = GridSet::from_term(GridTerm::tail(
            rat(0, 1),
            TailSchedule::harmonic(rat(1, 1), 1, 0, 1),
        ));
        s.added.insert(rat(-3, 2));
        s.removed.insert(rat(-1, 2));
        let first = s.first_elements(4);
        assert_eq!(first, vec![rat(-3, 2), rat(-1, 1), rat(-1, 3), rat(-1, 4)]);
    }

    #[test]
    fn member_agrees_with_enumeration() {
        let t = TailSchedule::geometric(rat(1, 1), rat(1, 2), 1);
        let h = TailSchedule::harmonic(rat(1, 1), 1, 0, 1);
        let s = GridSet {
            terms: vec![
                GridTerm::tail(rat(0, 1), t),
                GridTerm::tail(rat(-1, 1), h),
            ],
            ..Default::default()
        };
        for e in s.first_elements(64) {
            assert!(s.member(&e), "enumerated {e} not a member");
        }
    }
}
