//! Tail schedules: exactly invertible index maps onto strictly increasing
//! sequences of negative rationals converging to zero.
//!
//! Two families are supported. Harmonic schedules carry an arithmetic
//! progression filter on the index so they stay closed under the coincidence
//! refinements needed to resolve overlapping presentations; geometric
//! schedules are closed under the analogous exponent refinements.

use super::SupportError;
use crate::rational::{rat_string, Rat};
use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `e(n) = -beta / (modulus * n + residue)`.
    Harmonic {
        #[serde(with = "rat_string")]
        beta: Rat,
        #[serde(rename = "mod")]
        modulus: u64,
        #[serde(rename = "res")]
        residue: u64,
    },
    /// `e(n) = -beta * ratio^n`.
    Geometric {
        #[serde(with = "rat_string")]
        beta: Rat,
        #[serde(with = "rat_string")]
        ratio: Rat,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TailSchedule {
    #[serde(flatten)]
    pub kind: ScheduleKind,
    pub start: u64,
}

impl TailSchedule {
    pub fn harmonic(beta: Rat, modulus: u64, residue: u64, start: u64) -> Self {
        TailSchedule {
            kind: ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            },
            start,
        }
    }

    pub fn geometric(beta: Rat, ratio: Rat, start: u64) -> Self {
        TailSchedule {
            kind: ScheduleKind::Geometric { beta, ratio },
            start,
        }
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn validate(&self) -> Result<(), SupportError> {
        let bad = |detail: &str| {
            Err(SupportError::BadSchedule {
                detail: detail.into(),
            })
        };
        if self.start == 0 {
            return bad("start must be positive");
        }
        match &self.kind {
            ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            } => {
                if !beta.is_positive() {
                    return bad("harmonic beta must be positive");
                }
                if *modulus == 0 {
                    return bad("harmonic modulus must be positive");
                }
                if residue >= modulus {
                    return bad("harmonic residue must lie in [0, modulus)");
                }
            }
            ScheduleKind::Geometric { beta, ratio } => {
                if !beta.is_positive() {
                    return bad("geometric beta must be positive");
                }
                if !ratio.is_positive() || *ratio >= Rat::one() {
                    return bad("geometric ratio must lie in (0, 1)");
                }
            }
        }
        Ok(())
    }

    /// `e(n)`, a negative rational, strictly increasing in `n`.
    pub fn value(&self, n: u64) -> Rat {
        -self.deficit(n)
    }

    /// `-e(n)`, a positive rational, strictly decreasing to zero.
    pub fn deficit(&self, n: u64) -> Rat {
        match &self.kind {
            ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            } => {
                let den = BigInt::from(*modulus) * BigInt::from(n) + BigInt::from(*residue);
                beta / Rat::from_integer(den)
            }
            ScheduleKind::Geometric { beta, ratio } => {
                beta * pow_rat(ratio, n)
            }
        }
    }

    /// The unique `n >= start` with `deficit(n) == d`, if any.
    pub fn invert_deficit(&self, d: &Rat) -> Option<u64> {
        if !d.is_positive() {
            return None;
        }
        match &self.kind {
            ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            } => {
                // modulus * n + residue = beta / d
                let q = beta / d;
                if !q.denom().is_one() {
                    return None;
                }
                let num = q.numer() - BigInt::from(*residue);
                let m = BigInt::from(*modulus);
                let (n, r) = num.div_rem(&m);
                if !r.is_zero() || n.is_negative() {
                    return None;
                }
                let n: u64 = n.try_into().ok()?;
                (n >= self.start).then_some(n)
            }
            ScheduleKind::Geometric { beta, ratio } => {
                // ratio^n = d / beta, solved by exact repeated division.
                let mut x = d / beta;
                if x > Rat::one() || !x.is_positive() {
                    return None;
                }
                let mut n: u64 = 0;
                while x < Rat::one() {
                    x /= ratio;
                    n += 1;
                }
                (x.is_one() && n >= self.start).then_some(n)
            }
        }
    }

    /// All indices `n >= start` with `deficit(n) >= tau`, ascending. `tau > 0`.
    pub fn indices_with_deficit_at_least(&self, tau: &Rat) -> Vec<u64> {
        debug_assert!(tau.is_positive());
        match &self.kind {
            ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            } => {
                // modulus * n + residue <= beta / tau
                let q = beta / tau;
                let bound = (q - Rat::from_integer(BigInt::from(*residue)))
                    / Rat::from_integer(BigInt::from(*modulus));
                let n_max = bound.floor().to_integer();
                if n_max < BigInt::from(self.start) {
                    return Vec::new();
                }
                let n_max: u64 = n_max.try_into().unwrap_or(u64::MAX);
                (self.start..=n_max).collect()
            }
            ScheduleKind::Geometric { .. } => {
                let mut out = Vec::new();
                let mut n = self.start;
                while &self.deficit(n) >= tau {
                    out.push(n);
                    n += 1;
                }
                out
            }
        }
    }

    /// The first index `n >= start` whose deficit is `< cap` (strict) or
    /// `<= cap` (non-strict).
    pub fn first_index_with_deficit_below(&self, cap: &Rat, strict: bool) -> u64 {
        let mut n = self.start;
        // Harmonic: jump close with exact arithmetic, then step.
        if let ScheduleKind::Harmonic {
            beta,
            modulus,
            residue,
        } = &self.kind
        {
            if cap.is_positive() {
                let q = beta / cap;
                let lo = (q - Rat::from_integer(BigInt::from(*residue)))
                    / Rat::from_integer(BigInt::from(*modulus));
                let jump = lo.floor().to_integer();
                if jump > BigInt::from(n) {
                    n = jump.try_into().unwrap_or(u64::MAX - 4);
                }
            }
        }
        loop {
            let d = self.deficit(n);
            let ok = if strict { &d < cap } else { &d <= cap };
            if ok {
                return n;
            }
            n += 1;
        }
    }

    pub fn with_start(&self, start: u64) -> TailSchedule {
        TailSchedule {
            kind: self.kind.clone(),
            start,
        }
    }

    /// Restrict the index set to the arithmetic progression
    /// `{ offset + step * t : t >= 0 }` (with `offset >= start`), re-presented
    /// as a schedule over a fresh index, plus finitely many original indices
    /// whose values could not be folded into the new schedule.
    pub fn restrict_to_ap(&self, offset: u64, step: u64) -> (TailSchedule, Vec<u64>) {
        debug_assert!(step >= 1);
        debug_assert!(offset >= self.start);
        match &self.kind {
            ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            } => {
                // n = offset + step*t:
                //   modulus*n + residue = (modulus*step)*t + (modulus*offset + residue)
                // then fold the constant into the index so the residue is reduced.
                let new_mod = modulus * step;
                let base = modulus * offset + residue;
                let res = base % new_mod;
                let q = base / new_mod; // t = k - q
                if q >= 1 {
                    (
                        TailSchedule::harmonic(beta.clone(), new_mod, res, q),
                        Vec::new(),
                    )
                } else {
                    // k = 0 would carry the first element; hand it back as a point.
                    (
                        TailSchedule::harmonic(beta.clone(), new_mod, res, 1),
                        vec![offset],
                    )
                }
            }
            ScheduleKind::Geometric { beta, ratio } => {
                // n = offset + step*t = offset - step + step*(t+1).
                let new_ratio = pow_rat(ratio, step);
                let new_beta = beta * pow_rat(ratio, offset) / &new_ratio;
                (TailSchedule::geometric(new_beta, new_ratio, 1), Vec::new())
            }
        }
    }

    /// The indices `>= start` *not* in the progression `{ offset + step*t }`,
    /// as complement schedules plus finitely many leftover indices.
    pub fn complement_of_ap(&self, offset: u64, step: u64) -> (Vec<TailSchedule>, Vec<u64>) {
        let mut schedules = Vec::new();
        let mut leftovers: Vec<u64> = (self.start..offset).collect();
        if step == 1 {
            return (schedules, leftovers);
        }
        for r in 1..step {
            let (sched, extra) = self.restrict_to_ap(offset + r, step);
            schedules.push(sched);
            leftovers.extend(extra);
        }
        (schedules, leftovers)
    }

    /// Identity of the value set near zero, ignoring `start`.
    pub fn germ_key(&self) -> ScheduleGermKey {
        match &self.kind {
            ScheduleKind::Harmonic {
                beta,
                modulus,
                residue,
            } => {
                // beta/(modulus*n + residue) = U / (M*n + R) over integers.
                let u = beta.numer().to_biguint().expect("beta positive");
                let v = beta.denom().to_biguint().expect("beta positive");
                let m = &v * BigUint::from(*modulus);
                let r = &v * BigUint::from(*residue);
                let g = u.gcd(&m).gcd(&r);
                ScheduleGermKey::Harmonic {
                    u: &u / &g,
                    m: &m / &g,
                    r: &r / &g,
                }
            }
            ScheduleKind::Geometric { beta, ratio } => {
                // Normalise beta into [1, 1/ratio) along its ratio orbit.
                let mut b = beta.clone();
                let one = Rat::one();
                let upper = &one / ratio;
                while b < one {
                    b /= ratio;
                }
                while b >= upper {
                    b *= ratio;
                }
                ScheduleGermKey::Geometric {
                    ratio: ratio.clone(),
                    anchor: b,
                }
            }
        }
    }
}

/// Canonical near-zero identity of a schedule's value set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScheduleGermKey {
    Harmonic { u: BigUint, m: BigUint, r: BigUint },
    Geometric { ratio: Rat, anchor: Rat },
}

pub fn pow_rat(r: &Rat, n: u64) -> Rat {
    let mut result = Rat::one();
    let mut base = r.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            result *= &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn harmonic_unit() -> TailSchedule {
        TailSchedule::harmonic(rat(1, 1), 1, 0, 1)
    }

    #[test]
    fn harmonic_values() {
        let s = harmonic_unit();
        assert_eq!(s.value(1), rat(-1, 1));
        assert_eq!(s.value(3), rat(-1, 3));
        assert_eq!(s.invert_deficit(&rat(1, 3)), Some(3));
        assert_eq!(s.invert_deficit(&rat(2, 7)), None);
        assert_eq!(s.invert_deficit(&rat(3, 1)), None);
    }

    #[test]
    fn geometric_values() {
        let s = TailSchedule::geometric(rat(1, 1), rat(1, 2), 1);
        assert_eq!(s.value(3), rat(-1, 8));
        assert_eq!(s.invert_deficit(&rat(1, 16)), Some(4));
        assert_eq!(s.invert_deficit(&rat(1, 3)), None);
    }

    #[test]
    fn deficit_ranges() {
        let s = harmonic_unit();
        assert_eq!(s.indices_with_deficit_at_least(&rat(1, 3)), vec![1, 2, 3]);
        assert_eq!(s.indices_with_deficit_at_least(&rat(2, 1)), Vec::<u64>::new());
        let g = TailSchedule::geometric(rat(1, 1), rat(1, 2), 1);
        assert_eq!(g.indices_with_deficit_at_least(&rat(1, 8)), vec![1, 2, 3]);
    }

    #[test]
    fn ap_restriction_matches_pointwise() {
        let s = harmonic_unit();
        let (odd, extra) = s.restrict_to_ap(1, 2); // n = 1, 3, 5, ...
        let mut values: Vec<Rat> = extra.iter().map(|n| s.deficit(*n)).collect();
        for k in 0..4u64 {
            values.push(odd.deficit(odd.start() + k));
        }
        let expected: Vec<Rat> = [1u64, 3, 5, 7, 9].iter().map(|n| s.deficit(*n)).collect();
        assert_eq!(values, expected);

        let g = TailSchedule::geometric(rat(1, 1), rat(1, 2), 1);
        let (even, extra) = g.restrict_to_ap(2, 2);
        assert!(extra.is_empty());
        for (k, n) in (0..4u64).zip([2u64, 4, 6, 8]) {
            assert_eq!(even.deficit(even.start() + k), g.deficit(n));
        }
    }

    #[test]
    fn ap_complement_covers() {
        let s = harmonic_unit();
        let (comps, leftover) = s.complement_of_ap(3, 2); // exclude 3, 5, 7, ...
        // Complement: {1, 2} as leftovers plus the even indices from 4 on.
        let mut covered: Vec<u64> = leftover.clone();
        // The single complement class should produce 4, 6, 8, ...
        assert_eq!(comps.len(), 1);
        for k in 0..3u64 {
            let d = comps[0].deficit(comps[0].start() + k);
            covered.push(s.invert_deficit(&d).unwrap());
        }
        covered.sort_unstable();
        assert_eq!(covered, vec![1, 2, 4, 6, 8]);
    }

    #[test]
    fn germ_keys_ignore_start() {
        let a = TailSchedule::harmonic(rat(1, 1), 1, 0, 1);
        let b = TailSchedule::harmonic(rat(1, 1), 1, 0, 7);
        assert_eq!(a.germ_key(), b.germ_key());
        let c = TailSchedule::harmonic(rat(2, 1), 2, 0, 1); // 2/(2n) = 1/n
        assert_eq!(a.germ_key(), c.germ_key());
        let d = TailSchedule::harmonic(rat(1, 1), 2, 1, 1);
        assert_ne!(a.germ_key(), d.germ_key());
        let g1 = TailSchedule::geometric(rat(1, 1), rat(1, 2), 1);
        let g2 = TailSchedule::geometric(rat(2, 1), rat(1, 2), 3);
        assert_eq!(g1.germ_key(), g2.germ_key());
        let g3 = TailSchedule::geometric(rat(3, 1), rat(1, 2), 1);
        assert_ne!(g1.germ_key(), g3.germ_key());
    }
}
