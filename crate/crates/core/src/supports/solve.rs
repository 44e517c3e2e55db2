//! Complete enumeration of deficit decompositions.
//!
//! Given tails `d_1, ..., d_k` (each a positive, strictly decreasing to zero
//! deficit sequence) and a target `R > 0`, [`solve`] lists every index tuple
//! with `d_1(n_1) + ... + d_k(n_k) = R`, exactly once.
//!
//! The enumeration peels the (tie-broken) maximal deficit: any solution has
//! some coordinate with deficit `>= R/k`, a finite index range. Choosing the
//! first maximal coordinate makes the case split a partition, so no solution
//! is produced twice. Recursion carries the "not larger than the peeled
//! deficit" constraint as a per-tail cap.

use super::{GridSet, GridTerm, SupportError, TailSchedule, RANK_CAP};
use crate::rational::Rat;
use num::{Signed, Zero};
use std::collections::BTreeSet;

/// Upper bound on a deficit, inclusive or strict.
#[derive(Debug, Clone)]
pub struct DeficitCap {
    pub bound: Rat,
    pub inclusive: bool,
}

impl DeficitCap {
    fn allows(&self, d: &Rat) -> bool {
        if self.inclusive {
            d <= &self.bound
        } else {
            d < &self.bound
        }
    }
}

/// All index tuples with `sum of deficits == target`, each listed once,
/// subject to optional per-tail caps.
pub fn solve(tails: &[TailSchedule], target: &Rat, caps: &[Option<DeficitCap>]) -> Vec<Vec<u64>> {
    debug_assert_eq!(tails.len(), caps.len());
    if tails.is_empty() {
        return if target.is_zero() {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    if !target.is_positive() {
        return Vec::new();
    }
    if tails.len() == 1 {
        if let Some(cap) = &caps[0] {
            if !cap.allows(target) {
                return Vec::new();
            }
        }
        return match tails[0].invert_deficit(target) {
            Some(n) => vec![vec![n]],
            None => Vec::new(),
        };
    }

    let k = tails.len();
    let threshold = target / Rat::from_integer(k.into());
    let mut out = Vec::new();
    for peel in 0..k {
        // Coordinate `peel` is the first coordinate attaining the maximum
        // deficit: strictly larger than the earlier ones, at least the later.
        for n in tails[peel].indices_with_deficit_at_least(&threshold) {
            let d = tails[peel].deficit(n);
            if &d >= target {
                // The remaining k-1 tails must contribute a positive amount.
                continue;
            }
            if let Some(cap) = &caps[peel] {
                if !cap.allows(&d) {
                    continue;
                }
            }
            let rest_target = target - &d;
            let mut rest_tails = Vec::with_capacity(k - 1);
            let mut rest_caps = Vec::with_capacity(k - 1);
            for j in 0..k {
                if j == peel {
                    continue;
                }
                rest_tails.push(tails[j].clone());
                let tie = DeficitCap {
                    bound: d.clone(),
                    inclusive: j > peel,
                };
                let combined = match &caps[j] {
                    None => tie,
                    Some(c) => {
                        if c.bound < tie.bound || (c.bound == tie.bound && !c.inclusive) {
                            c.clone()
                        } else {
                            tie
                        }
                    }
                };
                rest_caps.push(Some(combined));
            }
            for sub in solve(&rest_tails, &rest_target, &rest_caps) {
                let mut tuple = Vec::with_capacity(k);
                let mut it = sub.into_iter();
                for j in 0..k {
                    if j == peel {
                        tuple.push(n);
                    } else {
                        tuple.push(it.next().unwrap());
                    }
                }
                out.push(tuple);
            }
        }
    }
    out
}

/// The finite points of a set's presentation: added points plus rank-0 term
/// limits (present unless removed).
fn finite_points(s: &GridSet) -> BTreeSet<Rat> {
    let mut out: BTreeSet<Rat> = s.added.clone();
    for t in &s.terms {
        if t.tails.is_empty() {
            out.insert(t.limit.clone());
        }
    }
    out.retain(|p| !s.removed.contains(p));
    out
}

/// Complete list of decompositions `e = d + f`, `d` in `s1`, `f` in `s2`.
pub fn fiber(s1: &GridSet, s2: &GridSet, e: &Rat) -> Vec<(Rat, Rat)> {
    let mut out: BTreeSet<(Rat, Rat)> = BTreeSet::new();

    // Term x term: solve over the concatenated tails.
    for t1 in &s1.terms {
        for t2 in &s2.terms {
            let target = &t1.limit + &t2.limit - e;
            let k1 = t1.tails.len();
            if t1.tails.is_empty() && t2.tails.is_empty() {
                if target.is_zero() {
                    out.insert((t1.limit.clone(), t2.limit.clone()));
                }
                continue;
            }
            let tails: Vec<TailSchedule> =
                t1.tails.iter().chain(&t2.tails).cloned().collect();
            let caps = vec![None; tails.len()];
            for tuple in solve(&tails, &target, &caps) {
                let mut d = t1.limit.clone();
                for (j, n) in tuple[..k1].iter().enumerate() {
                    d -= t1.tails[j].deficit(*n);
                }
                let f = e - &d;
                out.insert((d, f));
            }
        }
    }

    // Finite points against the other side.
    for p in finite_points(s1) {
        let f = e - &p;
        if s2.member(&f) {
            out.insert((p, f));
        }
    }
    for q in finite_points(s2) {
        let d = e - &q;
        if s1.member(&d) {
            out.insert((d, q));
        }
    }

    // Respect removals exactly.
    out.retain(|(d, f)| s1.member(d) && s2.member(f));
    out.into_iter().collect()
}

/// Exact elementwise sum set.
pub fn sumset(s1: &GridSet, s2: &GridSet) -> Result<GridSet, SupportError> {
    let a = s1.clone().normalized();
    let b = s2.clone().normalized();

    // Punctures distribute only against finite sets.
    let infinite = |s: &GridSet| !s.terms.is_empty();
    if (!a.removed.is_empty() && infinite(&b)) || (!b.removed.is_empty() && infinite(&a)) {
        return Err(SupportError::PuncturedSumset);
    }

    let mut out = GridSet::default();
    for t1 in &a.terms {
        for t2 in &b.terms {
            let rank = t1.tails.len() + t2.tails.len();
            if rank > RANK_CAP {
                return Err(SupportError::RankExceeded { rank });
            }
            out.terms.push(GridTerm {
                limit: &t1.limit + &t2.limit,
                tails: t1.tails.iter().chain(&t2.tails).cloned().collect(),
            });
        }
    }
    for p in &a.added {
        for t2 in &b.terms {
            out.terms.push(t2.shifted(p));
        }
        for q in &b.added {
            out.added.insert(p + q);
        }
    }
    for q in &b.added {
        for t1 in &a.terms {
            out.terms.push(t1.shifted(q));
        }
    }

    // Candidate punctures: sums that may have lost all decompositions.
    let mut candidates: BTreeSet<Rat> = BTreeSet::new();
    for r in &a.removed {
        for q in finite_points(&b) {
            candidates.insert(r + &q);
        }
        for rq in &b.removed {
            candidates.insert(r + rq);
        }
    }
    for r in &b.removed {
        for p in finite_points(&a) {
            candidates.insert(&p + r);
        }
    }
    for c in candidates {
        if fiber(&a, &b, &c).is_empty() {
            out.removed.insert(c);
        }
    }
    Ok(out.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit_tail_set() -> GridSet {
        // { -1/n : n >= 1 }
        GridSet::from_term(GridTerm::tail(
            rat(0, 1),
            TailSchedule::harmonic(rat(1, 1), 1, 0, 1),
        ))
    }

    #[test]
    fn fiber_examples() {
        let s = unit_tail_set();
        // 1/m + 1/n = 1 forces m = n = 2.
        assert_eq!(
            s.fiber(&s, &rat(-1, 1)),
            vec![(rat(-1, 2), rat(-1, 2))]
        );
        // 1/m + 1/n = 3/4: (2,4) and (4,2).
        assert_eq!(
            s.fiber(&s, &rat(-3, 4)),
            vec![(rat(-1, 2), rat(-1, 4)), (rat(-1, 4), rat(-1, 2))]
        );
        // Singletons.
        let p = GridSet::point(rat(-1, 1));
        assert_eq!(p.fiber(&p, &rat(-2, 1)), vec![(rat(-1, 1), rat(-1, 1))]);
        assert!(p.fiber(&p, &rat(-3, 2)).is_empty());
    }

    #[test]
    fn fiber_respects_removed_points() {
        let mut s = unit_tail_set();
        s.removed.insert(rat(-1, 2));
        let plain = unit_tail_set();
        // -1 = -1/2 + -1/2 is gone once -1/2 is removed on one side.
        assert!(s.fiber(&plain, &rat(-1, 1)).is_empty());
        assert_eq!(
            plain.fiber(&plain, &rat(-1, 1)),
            vec![(rat(-1, 2), rat(-1, 2))]
        );
    }

    #[test]
    fn member_via_solver() {
        let s = unit_tail_set();
        let sq = s.sumset(&s).unwrap();
        // 3/4 = 1/2 + 1/4.
        assert!(sq.member(&rat(-3, 4)));
        assert!(!sq.member(&(rat(-1, 5) - rat(1, 1000000))));
        // Deep fiber: 1/m + 1/n = 1/3 + 1/7 has the obvious witness.
        assert!(sq.member(&(rat(-1, 3) + rat(-1, 7))));
    }

    #[test]
    fn solve_triple_rank() {
        // 1/a + 1/b + 1/c = 1: classical: (2,3,6), (2,4,4), (3,3,3) and permutations.
        let t = TailSchedule::harmonic(rat(1, 1), 1, 0, 1);
        let tails = vec![t.clone(), t.clone(), t];
        let sols = solve(&tails, &rat(1, 1), &vec![None; 3]);
        let mut sorted: Vec<Vec<u64>> = sols.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), sols.len(), "no duplicate solutions");
        let mut canon: Vec<Vec<u64>> = sols
            .iter()
            .map(|v| {
                let mut v = v.clone();
                v.sort_unstable();
                v
            })
            .collect();
        canon.sort();
        canon.dedup();
        assert_eq!(canon, vec![vec![2, 3, 6], vec![2, 4, 4], vec![3, 3, 3]]);
        // Count with multiplicity: 3!/1 + 3 + 1 = 10.
        assert_eq!(sols.len(), 10);
    }

    #[test]
    fn sumset_examples() {
        let s = unit_tail_set();
        let sq = s.sumset(&s).unwrap();
        assert_eq!(sq.terms.len(), 1);
        assert_eq!(sq.terms[0].rank(), 2);
        let shifted = GridSet::point(rat(-1, 1)).sumset(&s).unwrap();
        assert_eq!(shifted.terms.len(), 1);
        assert_eq!(shifted.terms[0].limit, rat(-1, 1));
        let rank4 = sq.sumset(&sq);
        assert_eq!(rank4, Err(SupportError::RankExceeded { rank: 4 }));
    }

    #[test]
    fn sumset_puncture_against_finite_set_is_exact() {
        let mut s = unit_tail_set();
        s.removed.insert(rat(-1, 1));
        let s = s.normalized();
        let shift = GridSet::point(rat(-2, 1));
        let sum = s.sumset(&shift).unwrap();
        assert!(!sum.member(&rat(-3, 1))); // -1 was removed, so -3 is absent
        assert!(sum.member(&(rat(-2, 1) + rat(-1, 2))));
        // Against an infinite co-factor the puncture does not distribute.
        assert_eq!(
            s.sumset(&unit_tail_set()),
            Err(SupportError::PuncturedSumset)
        );
    }
}
