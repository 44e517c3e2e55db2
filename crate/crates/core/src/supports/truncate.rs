//! Truncation of grid sets: the subset of elements `<= gamma`, re-presented
//! exactly as strictly lower-rank terms plus finite points.
//!
//! For a term with limit above `gamma`, an element lies in the truncation iff
//! its total deficit reaches `limit - gamma`. The decomposition peels the
//! (tie-broken) maximal deficit exactly as the solver does: every index tuple
//! of the truncated region lands in exactly one piece, so the pieces cover the
//! region exactly. (Distinct pieces may still share a value when that value
//! has several index representations; all consumers use union semantics.)

use super::{DeficitCap, GridSet, GridTerm, TailSchedule};
use crate::rational::Rat;
use num::Signed;

/// Disjoint decomposition of `{ x in term : x <= gamma }`.
pub fn truncate_term(term: &GridTerm, gamma: &Rat) -> Vec<GridTerm> {
    truncate_capped(&term.limit, &term.tails, &vec![None; term.tails.len()], gamma)
}

fn truncate_capped(
    limit: &Rat,
    tails: &[TailSchedule],
    caps: &[Option<DeficitCap>],
    gamma: &Rat,
) -> Vec<GridTerm> {
    let needed = limit - gamma;
    if !needed.is_positive() {
        // The whole (cap-restricted) term already sits at or below gamma.
        return vec![apply_caps(limit, tails, caps)];
    }
    if tails.is_empty() {
        return Vec::new();
    }
    let k = tails.len();
    let threshold = &needed / Rat::from_integer(k.into());
    let mut out = Vec::new();
    for peel in 0..k {
        for n in tails[peel].indices_with_deficit_at_least(&threshold) {
            let d = tails[peel].deficit(n);
            if let Some(cap) = &caps[peel] {
                let ok = if cap.inclusive {
                    d <= cap.bound
                } else {
                    d < cap.bound
                };
                if !ok {
                    continue;
                }
            }
            let sub_limit = limit - &d;
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
            out.extend(truncate_capped(&sub_limit, &rest_tails, &rest_caps, gamma));
        }
    }
    out
}

/// Realise per-tail deficit caps as start adjustments, producing a plain term.
fn apply_caps(limit: &Rat, tails: &[TailSchedule], caps: &[Option<DeficitCap>]) -> GridTerm {
    let tails = tails
        .iter()
        .zip(caps)
        .map(|(t, cap)| match cap {
            None => t.clone(),
            Some(c) => {
                let start = t.first_index_with_deficit_below(&c.bound, !c.inclusive);
                t.with_start(start.max(t.start()))
            }
        })
        .collect();
    GridTerm {
        limit: limit.clone(),
        tails,
    }
}

/// `{ e in s : e <= gamma }`, exactly.
pub fn truncate_set(s: &GridSet, gamma: &Rat) -> GridSet {
    let mut out = GridSet {
        terms: Vec::new(),
        added: s.added.iter().filter(|p| *p <= gamma).cloned().collect(),
        removed: s.removed.iter().filter(|p| *p <= gamma).cloned().collect(),
    };
    for t in &s.terms {
        out.terms.extend(truncate_term(t, gamma));
    }
    out.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn unit_tail() -> GridTerm {
        GridTerm::tail(rat(0, 1), TailSchedule::harmonic(rat(1, 1), 1, 0, 1))
    }

    fn rank2() -> GridTerm {
        let t = TailSchedule::harmonic(rat(1, 1), 1, 0, 1);
        GridTerm {
            limit: rat(0, 1),
            tails: vec![t.clone(), t],
        }
    }

    #[test]
    fn truncate_tail_to_finite_prefix() {
        let s = GridSet::from_term(unit_tail());
        let t = s.truncate_set(&rat(-1, 3));
        assert!(t.terms.is_empty());
        let pts: Vec<Rat> = t.added.iter().cloned().collect();
        assert_eq!(pts, vec![rat(-1, 1), rat(-1, 2), rat(-1, 3)]);
    }

    #[test]
    fn truncate_whole_set_kept() {
        // sup of { -1 - 1/n } is -1 <= -1/2, so nothing is cut.
        let term = GridTerm::tail(rat(-1, 1), TailSchedule::harmonic(rat(1, 1), 1, 0, 1));
        let s = GridSet::from_term(term.clone());
        let t = s.truncate_set(&rat(-1, 2));
        assert_eq!(t.terms, vec![term]);
    }

    #[test]
    fn truncate_everything_away() {
        let s = GridSet::from_term(unit_tail());
        let t = s.truncate_set(&rat(-2, 1));
        assert!(t.is_empty_set());
    }

    #[test]
    fn truncate_rank2_decomposition() {
        // { -1/m - 1/n } cut at -1: pieces pin m=1 or n=1 plus the point -1.
        let s = GridSet::from_term(rank2());
        let t = s.truncate_set(&rat(-1, 1));
        // The decomposition is disjoint and exact; spot-check membership.
        for e in [
            rat(-1, 1),               // (2,2)
            rat(-1, 1) + rat(-1, 1),  // (1,1)
            rat(-1, 1) + rat(-1, 5),  // (1,5)
            rat(-1, 1) + rat(-1, 50), // (1,50)
        ] {
            assert!(t.member(&e), "missing {e}");
            assert!(s.member(&e));
        }
        for e in [rat(-3, 4), rat(-1, 2), rat(-999, 1000)] {
            assert!(!t.member(&e), "should be cut: {e}");
        }
        // Two rank-1 pieces (m or n pinned to 1) survive.
        let rank1 = t.terms.iter().filter(|p| p.rank() == 1).count();
        assert_eq!(rank1, 2);
        assert!(t.terms.iter().all(|p| p.rank() <= 1));
    }

    #[test]
    fn truncation_covers_exactly() {
        // Every truncated value must be covered; nothing above gamma leaks.
        let term = rank2();
        let gamma = rat(-2, 3);
        let pieces = truncate_term(&term, &gamma);
        for m in 1..=12i64 {
            for n in 1..=12i64 {
                let e = rat(-1, m) + rat(-1, n);
                let inside = e <= gamma;
                let covered = pieces.iter().any(|p| p.member(&e));
                assert_eq!(covered, inside, "at {e}");
            }
        }
    }

    #[test]
    fn truncation_agrees_with_member_pointwise() {
        let s = GridSet::from_term(rank2());
        let gamma = rat(-9, 20);
        let t = s.truncate_set(&gamma);
        for num in 1..=60i64 {
            let e = rat(-num, 24);
            let want = s.member(&e) && e <= gamma;
            assert_eq!(t.member(&e), want, "at {e}");
        }
    }
}
