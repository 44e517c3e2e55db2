//! Finitely presented well-ordered subsets of the non-positive rationals.
//!
//! A [`GridSet`] denotes `(union of terms ∪ added) \ removed`, where each
//! [`GridTerm`] is a limit point shifted by up to three strictly increasing
//! "tail schedules" converging to zero:
//!
//! ```text
//! { limit + e_1(n_1) + ... + e_k(n_k)  :  n_j >= start_j }
//! ```
//!
//! Every denoted element is a non-positive rational, every presented set is
//! well-ordered, and all queries (membership, pairwise sum decompositions,
//! truncation, order type, accumulation points) are exact.

mod enumerate;
mod order_type;
mod overlap;
mod schedule;
mod solve;
mod truncate;

pub use overlap::{ApSub, Overlap};
pub use schedule::{ScheduleGermKey, ScheduleKind, TailSchedule};
pub use solve::DeficitCap;

use crate::ordinal::Ordinal;
use crate::rational::{rat_string, Rat};
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportError {
    /// A sumset would produce a grid term of rank above 3.
    RankExceeded { rank: usize },
    /// A presentation overlap whose cancellation cannot be resolved in the
    /// schedule grammar.
    UncertifiedOverlap { detail: String },
    /// A sumset against a punctured infinite set; the removed points do not
    /// distribute.
    PuncturedSumset,
    /// Invalid schedule parameters.
    BadSchedule { detail: String },
}

impl std::fmt::Display for SupportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SupportError::RankExceeded { rank } => {
                write!(f, "grid term rank {rank} exceeds the cap of 3")
            }
            SupportError::UncertifiedOverlap { detail } => {
                write!(f, "unresolvable presentation overlap: {detail}")
            }
            SupportError::PuncturedSumset => {
                write!(f, "removed points do not distribute over this sumset")
            }
            SupportError::BadSchedule { detail } => write!(f, "bad schedule: {detail}"),
        }
    }
}

impl std::error::Error for SupportError {}

/// One grid term: `{ limit - d_1(n_1) - ... - d_k(n_k) }` over all admissible
/// indices, where `d_j` is the (positive, strictly decreasing to zero) deficit
/// of the `j`-th tail. Rank 0 denotes the singleton `{limit}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridTerm {
    #[serde(with = "rat_string")]
    pub limit: Rat,
    pub tails: Vec<TailSchedule>,
}

pub const RANK_CAP: usize = 3;

impl GridTerm {
    pub fn point(limit: Rat) -> Self {
        GridTerm {
            limit,
            tails: Vec::new(),
        }
    }

    pub fn tail(limit: Rat, schedule: TailSchedule) -> Self {
        GridTerm {
            limit,
            tails: vec![schedule],
        }
    }

    pub fn rank(&self) -> usize {
        self.tails.len()
    }

    pub fn validate(&self) -> Result<(), SupportError> {
        if self.limit.is_positive() {
            return Err(SupportError::BadSchedule {
                detail: "grid term limit must be non-positive".into(),
            });
        }
        if self.rank() > RANK_CAP {
            return Err(SupportError::RankExceeded { rank: self.rank() });
        }
        for t in &self.tails {
            t.validate()?;
        }
        Ok(())
    }

    /// Exact membership: does `e` belong to this term's point set?
    pub fn member(&self, e: &Rat) -> bool {
        let deficit_needed = &self.limit - e;
        if self.tails.is_empty() {
            return deficit_needed.is_zero();
        }
        if !deficit_needed.is_positive() {
            return false;
        }
        !solve::solve(&self.tails, &deficit_needed, &vec![None; self.tails.len()]).is_empty()
    }

    /// The least element of the term.
    pub fn min_element(&self) -> Rat {
        let mut m = self.limit.clone();
        for t in &self.tails {
            m -= t.deficit(t.start());
        }
        m
    }

    /// Shift every element by `delta`.
    pub fn shifted(&self, delta: &Rat) -> GridTerm {
        GridTerm {
            limit: &self.limit + delta,
            tails: self.tails.clone(),
        }
    }
}

/// A finitely presented well-ordered subset of the non-positive rationals:
/// `(union of terms ∪ added) \ removed`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GridSet {
    pub terms: Vec<GridTerm>,
    #[serde(
        with = "crate::rational::rat_set",
        default,
        skip_serializing_if = "BTreeSet::is_empty"
    )]
    pub added: BTreeSet<Rat>,
    #[serde(
        with = "crate::rational::rat_set",
        default,
        skip_serializing_if = "BTreeSet::is_empty"
    )]
    pub removed: BTreeSet<Rat>,
}

impl GridSet {
    pub fn empty() -> Self {
        GridSet::default()
    }

    pub fn point(r: Rat) -> Self {
        let mut s = GridSet::default();
        s.added.insert(r);
        s
    }

    pub fn from_term(t: GridTerm) -> Self {
        GridSet {
            terms: vec![t],
            ..Default::default()
        }
        .normalized()
    }

    pub fn from_points(points: impl IntoIterator<Item = Rat>) -> Self {
        GridSet {
            added: points.into_iter().collect(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), SupportError> {
        for t in &self.terms {
            t.validate()?;
        }
        for p in self.added.iter().chain(self.removed.iter()) {
            if p.is_positive() {
                return Err(SupportError::BadSchedule {
                    detail: "grid points must be non-positive".into(),
                });
            }
        }
        Ok(())
    }

    /// Membership in the raw presentation, ignoring `removed`.
    fn member_presented(&self, e: &Rat) -> bool {
        self.added.contains(e) || self.terms.iter().any(|t| t.member(e))
    }

    /// Exact membership.
    pub fn member(&self, e: &Rat) -> bool {
        if self.removed.contains(e) {
            return false;
        }
        self.member_presented(e)
    }

    /// Canonical cleanup: rank-0 terms become added points, vacuous removals
    /// are dropped, and `added`/`removed` never overlap.
    pub fn normalized(mut self) -> GridSet {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in std::mem::take(&mut self.terms) {
            if t.tails.is_empty() {
                self.added.insert(t.limit);
            } else {
                terms.push(t);
            }
        }
        self.terms = terms;
        for r in std::mem::take(&mut self.removed) {
            if self.added.remove(&r) {
                // Removed beats added; the point may still live in a term.
                if self.terms.iter().any(|t| t.member(&r)) {
                    self.removed.insert(r);
                }
            } else if self.terms.iter().any(|t| t.member(&r)) {
                self.removed.insert(r);
            }
        }
        self
    }

    /// Exact set union.
    pub fn union(&self, other: &GridSet) -> GridSet {
        let mut out = GridSet {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
            added: self.added.union(&other.added).cloned().collect(),
            removed: BTreeSet::new(),
        };
        for r in self.removed.union(&other.removed) {
            if !self.member(r) && !other.member(r) {
                out.removed.insert(r.clone());
            }
        }
        out.added.retain(|p| !out.removed.contains(p));
        out.normalized()
    }

    /// Shift every element by `delta` (must keep the set non-positive).
    pub fn shifted(&self, delta: &Rat) -> GridSet {
        GridSet {
            terms: self.terms.iter().map(|t| t.shifted(delta)).collect(),
            added: self.added.iter().map(|p| p + delta).collect(),
            removed: self.removed.iter().map(|p| p + delta).collect(),
        }
    }

    /// True when there are no elements at all.
    pub fn is_empty_set(&self) -> bool {
        // Terms of rank >= 1 are always infinite; removed is finite.
        let s = self.clone().normalized();
        s.terms.is_empty() && s.added.is_empty()
    }

    /// A rational `g` with `S <= g`; `None` for the empty set.
    pub fn upper_bound(&self) -> Option<Rat> {
        let mut best: Option<Rat> = None;
        let mut push = |r: Rat| {
            if best.as_ref().is_none_or(|b| r > *b) {
                best = Some(r);
            }
        };
        for t in &self.terms {
            push(t.limit.clone());
        }
        for p in &self.added {
            push(p.clone());
        }
        best
    }

    /// Is the set bounded away from zero (`S <= g` for some `g < 0`)?
    /// Assumes a normalized presentation.
    pub fn bounded_away_from_zero(&self) -> bool {
        match self.clone().normalized().upper_bound() {
            None => true,
            Some(b) => b.is_negative(),
        }
    }

    /// The least element, if the set is non-empty.
    pub fn min_element(&self) -> Option<Rat> {
        self.first_elements(1).into_iter().next()
    }

    /// The first `k` elements in increasing order.
    pub fn first_elements(&self, k: usize) -> Vec<Rat> {
        enumerate::first_elements(self, k)
    }

    /// All decompositions `e = d + f` with `d` in `self`, `f` in `other`,
    /// sorted by `d`. Complete and finite.
    pub fn fiber(&self, other: &GridSet, e: &Rat) -> Vec<(Rat, Rat)> {
        solve::fiber(self, other, e)
    }

    /// The elementwise sum set.
    pub fn sumset(&self, other: &GridSet) -> Result<GridSet, SupportError> {
        solve::sumset(self, other)
    }

    /// The subset of elements `<= gamma`, re-presented exactly.
    pub fn truncate_set(&self, gamma: &Rat) -> GridSet {
        truncate::truncate_set(self, gamma)
    }

    /// The exact order type of the denoted set.
    pub fn order_type(&self) -> Ordinal {
        order_type::order_type(self)
    }

    /// The set of accumulation points of the denoted set within `(-inf, 0]`.
    pub fn accumulation_points(&self) -> GridSet {
        let mut out = GridSet::default();
        for t in &self.terms {
            if t.tails.is_empty() {
                continue;
            }
            // Pin every proper subset of the tails; the un-pinned ones run to
            // their limits. The pinned subsets contribute lower-rank terms.
            let k = t.tails.len();
            for mask in 0..(1u32 << k) - 1 {
                let tails: Vec<TailSchedule> = t
                    .tails
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask & (1 << *j) != 0)
                    .map(|(_, s)| s.clone())
                    .collect();
                out.terms.push(GridTerm {
                    limit: t.limit.clone(),
                    tails,
                });
            }
        }
        out.normalized()
    }
}
