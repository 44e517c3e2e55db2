//! Exact order types of grid sets.
//!
//! The computation peels accumulation structure from the top. Let `v` be the
//! greatest limit among the rank >= 1 terms. Above the greatest *other* term
//! limit (the cut), the set is a union of full-rank pieces accumulating at
//! `v` plus absorbed junk; such a union always has order type `w^(max rank)`,
//! whatever the overlaps, because its blocks between consecutive merged
//! accumulation points have strictly smaller type and repeat omega-often, and
//! `w^k` is additively closed. Isolated points, removals and the live terms'
//! own lower reaches inside the zone are absorbed (each has infinitely many
//! set elements above it). At or below the cut, live terms are truncated
//! (rank strictly drops) and the sweep recurses; isolated points at or above
//! `v` contribute a trailing finite count. Ordinal addition of the zones
//! reproduces absorption exactly.

use super::{truncate, GridSet, GridTerm};
use crate::ordinal::Ordinal;
use crate::rational::Rat;
use num::One;
use std::collections::BTreeSet;

pub fn order_type(s: &GridSet) -> Ordinal {
    let s = s.clone().normalized();
    ot_union(
        s.terms,
        s.added.into_iter().collect(),
        s.removed.into_iter().collect(),
    )
}

fn ot_union(terms: Vec<GridTerm>, points: BTreeSet<Rat>, removed: BTreeSet<Rat>) -> Ordinal {
    // Truncation pieces include rank-0 terms; fold them into the point set,
    // which also collapses duplicate values across overlapping pieces.
    let mut points = points;
    let terms: Vec<GridTerm> = terms
        .into_iter()
        .filter_map(|t| {
            if t.tails.is_empty() {
                points.insert(t.limit);
                None
            } else {
                Some(t)
            }
        })
        .collect();
    let points: BTreeSet<Rat> = points.difference(&removed).cloned().collect();
    let live_removed: BTreeSet<Rat> = removed
        .into_iter()
        .filter(|r| terms.iter().any(|t| t.member(r)))
        .collect();

    if terms.is_empty() {
        return Ordinal::from_nat(points.len() as u64);
    }

    let v_star = terms
        .iter()
        .map(|t| t.limit.clone())
        .max()
        .expect("non-empty terms");
    let (live, rest): (Vec<GridTerm>, Vec<GridTerm>) =
        terms.into_iter().partition(|t| t.limit == v_star);
    let k_max = live.iter().map(|t| t.rank()).max().unwrap_or(0);
    debug_assert!(k_max >= 1);

    // Everything in (cut, v_star) that is not live-term structure — isolated
    // points, removals, the live terms' own lower reaches — has infinitely
    // many live elements above it and is absorbed by the `w^k_max` block, so
    // only the rest terms' limits constrain the cut.
    let cut = rest.iter().map(|t| t.limit.clone()).max();

    // Isolated points at or above v_star come after every term element.
    let at_top = points.contains(&v_star) && !live_removed.contains(&v_star);
    let above: usize = points.iter().filter(|p| **p > v_star).count();
    let trailing = at_top as u64 + above as u64;

    let below = match cut {
        None => Ordinal::zero(),
        Some(cut) => {
            let mut below_terms = rest;
            for t in &live {
                below_terms.extend(truncate::truncate_term(t, &cut));
            }
            let below_points: BTreeSet<Rat> =
                points.iter().filter(|p| **p <= cut).cloned().collect();
            let below_removed: BTreeSet<Rat> = live_removed
                .iter()
                .filter(|r| **r <= cut)
                .cloned()
                .collect();
            ot_union(below_terms, below_points, below_removed)
        }
    };
    below
        .add(&Ordinal::omega_pow(Ordinal::from_nat(k_max as u64)))
        .add(&Ordinal::from_nat(trailing))
}
