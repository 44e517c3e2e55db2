//! Exact symbolic computation for ordinal arithmetic in Cantor normal form and
//! for a computable fragment of the ring of generalised power series with
//! non-positive rational exponents.
//!
//! The crate is organised around a small tower of engines:
//!
//! * [`ordinal`] — ordinals below epsilon-zero in Cantor normal form, with the
//!   classical and the Hessenberg (natural) operations;
//! * [`supports`] — finitely presented well-ordered subsets of the
//!   non-positive rationals (tail schedules, grid terms, exact sumsets,
//!   truncations and order types);
//! * [`series`] — lazy expression trees for series whose supports live in the
//!   fragment, with exact coefficient extraction, truncation and congruence
//!   tests modulo the ideal of series bounded away from zero;
//! * [`valuation`] — the order-value calculus: `v_J`, critical points, head
//!   values, big points and the germ-like predicate;
//! * [`constructions`] — generators for the worked example series and the
//!   interleaved towers of order-value `w^2` and `w^3`;
//! * [`irreducibility`] — V-space dimension certificates, germ division and
//!   factorisation verification;
//! * [`suite`] — the seeded property battery behind the `suite` CLI verb.

pub mod constructions;
pub mod irreducibility;
pub mod ordinal;
pub mod rational;
pub mod series;
pub mod suite;
pub mod supports;
pub mod valuation;

pub use ordinal::Ordinal;
pub use rational::Rat;


