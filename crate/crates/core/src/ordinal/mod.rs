//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An ordinal is stored as its Cantor normal form: a finite list of
//! `(exponent, coefficient)` pairs with strictly descending exponents (which
//! are themselves ordinals) and positive integer coefficients. The empty list
//! is zero. All operations are exact; coefficients are arbitrary precision.
//!
//! Nesting depth is bounded by a configurable cap (default 8, overridable via
//! the `HAHNLAB_DEPTH_CAP` environment variable). The cap is enforced when
//! ordinals enter the system (parsing, `from_terms`) and on the results of
//! exponentiation, the only operation that can deepen its inputs.

mod text;

pub use text::OrdinalParseError;

use num::bigint::BigUint;
use num::{One, Zero};
use std::cmp::Ordering;
use std::sync::OnceLock;

pub const DEFAULT_DEPTH_CAP: usize = 8;

/// Nesting-depth cap for Cantor normal forms.
pub fn depth_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("HAHNLAB_DEPTH_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_DEPTH_CAP)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    /// A normal form exceeded the nesting-depth cap.
    DepthExceeded { depth: usize, cap: usize },
    /// `subtract_left(a, b)` with `a > b`.
    Underflow,
    /// Division by the ordinal zero.
    DivisionByZero,
    /// An operation that requires a non-zero ordinal was given zero.
    ZeroInput,
    /// Malformed term list (non-descending exponents or a zero coefficient).
    MalformedNormalForm,
}

impl std::fmt::Display for OrdinalError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrdinalError::DepthExceeded { depth, cap } => {
                write!(f, "ordinal nesting depth {depth} exceeds cap {cap}")
            }
            OrdinalError::Underflow => write!(f, "left subtraction underflow"),
            OrdinalError::DivisionByZero => write!(f, "ordinal division by zero"),
            OrdinalError::ZeroInput => write!(f, "operation requires a non-zero ordinal"),
            OrdinalError::MalformedNormalForm => write!(f, "malformed Cantor normal form"),
        }
    }
}

impl std::error::Error for OrdinalError {}

/// An ordinal below epsilon-zero, kept in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    /// `(exponent, coefficient)` pairs, exponents strictly descending, coefficients >= 1.
    terms: Vec<(Ordinal, BigUint)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1u32)
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(Ordinal::one(), BigUint::one())],
        }
    }

    pub fn from_nat(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// `w^exp` (single term, coefficient 1). Depth is not re-checked here;
    /// exponents are expected to come from already-validated ordinals.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal {
            terms: vec![(exp, BigUint::one())],
        }
    }

    /// `w^exp * coeff`, `coeff >= 1`.
    pub fn single(exp: Ordinal, coeff: BigUint) -> Self {
        debug_assert!(!coeff.is_zero());
        Ordinal {
            terms: vec![(exp, coeff)],
        }
    }

    /// Validating constructor: exponents strictly descending, coefficients
    /// positive, depth within the cap.
    pub fn from_terms(terms: Vec<(Ordinal, BigUint)>) -> Result<Self, OrdinalError> {
        for window in terms.windows(2) {
            if window[0].0 <= window[1].0 {
                return Err(OrdinalError::MalformedNormalForm);
            }
        }
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(OrdinalError::MalformedNormalForm);
        }
        let o = Ordinal { terms };
        let depth = o.depth();
        if depth > depth_cap() {
            return Err(OrdinalError::DepthExceeded {
                depth,
                cap: depth_cap(),
            });
        }
        Ok(o)
    }

    pub fn terms(&self) -> &[(Ordinal, BigUint)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for ordinals below `w` (including zero).
    pub fn is_finite(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(e, _)| e.is_zero())
    }

    pub fn as_nat(&self) -> Option<&BigUint> {
        if self.is_zero() {
            None
        } else if self.is_finite() {
            Some(&self.terms[0].1)
        } else {
            None
        }
    }

    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| 1 + e.depth())
            .max()
            .unwrap_or(0)
    }

    /// Ordinal sum. Left terms below the leading exponent of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        if rhs.is_zero() {
            return self.clone();
        }
        let lead = &rhs.terms[0].0;
        let mut terms: Vec<(Ordinal, BigUint)> = self
            .terms
            .iter()
            .take_while(|(e, _)| e > lead)
            .cloned()
            .collect();
        let mut rest = rhs.terms.clone();
        if let Some((e, c)) = self.terms.get(terms.len()) {
            if e == lead {
                rest[0].1 = &rest[0].1 + c;
            }
        }
        terms.extend(rest);
        Ordinal { terms }
    }

    /// Ordinal product, distributing over the second argument.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let lead_exp = &self.terms[0].0;
        let mut acc = Ordinal::zero();
        for (e, c) in &rhs.terms {
            let part = if e.is_zero() {
                // self * finite c: scale the leading coefficient, keep the tail.
                let mut t = self.terms.clone();
                t[0].1 = &t[0].1 * c;
                Ordinal { terms: t }
            } else {
                Ordinal::single(lead_exp.add(e), c.clone())
            };
            acc = acc.add(&part);
        }
        acc
    }

    /// Splits into the limit part (infinite-exponent terms) and the finite tail.
    fn split_limit_finite(&self) -> (Ordinal, BigUint) {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => (
                Ordinal {
                    terms: self.terms[..self.terms.len() - 1].to_vec(),
                },
                c.clone(),
            ),
            _ => (self.clone(), BigUint::zero()),
        }
    }

    fn pow_nat(&self, n: &BigUint) -> Ordinal {
        let mut result = Ordinal::one();
        let mut base = self.clone();
        let mut n = n.clone();
        let two = BigUint::from(2u32);
        while !n.is_zero() {
            if (&n % &two).is_one() {
                result = result.mul(&base);
            }
            n >>= 1;
            if !n.is_zero() {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Ordinal exponentiation by Cantor-normal-form recursion on the exponent.
    pub fn pow(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if rhs.is_zero() {
            return Ok(Ordinal::one());
        }
        if self.is_zero() {
            return Ok(Ordinal::zero());
        }
        if *self == Ordinal::one() {
            return Ok(Ordinal::one());
        }
        let (limit, fin) = rhs.split_limit_finite();
        let lim_pow = if limit.is_zero() {
            Ordinal::one()
        } else if self.is_finite() {
            // n^(w^b * c + ...) = w^(w^b' * c + ...) with 1 + b' = b.
            let mut exp_terms = Vec::with_capacity(limit.terms.len());
            for (b, c) in &limit.terms {
                let b2 = Ordinal::subtract_left(&Ordinal::one(), b)
                    .expect("limit-part exponents are >= 1");
                exp_terms.push((b2, c.clone()));
            }
            Ordinal::omega_pow(Ordinal { terms: exp_terms })
        } else {
            // a infinite: a^limit = w^(b1 * limit) for leading exponent b1.
            Ordinal::omega_pow(self.terms[0].0.mul(&limit))
        };
        let result = lim_pow.mul(&self.pow_nat(&fin));
        let depth = result.depth();
        if depth > depth_cap() {
            return Err(OrdinalError::DepthExceeded {
                depth,
                cap: depth_cap(),
            });
        }
        Ok(result)
    }

    /// The unique `g` with `a + g = b`, defined when `a <= b`.
    pub fn subtract_left(a: &Ordinal, b: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut i = 0;
        loop {
            match (a.terms.get(i), b.terms.get(i)) {
                (None, _) => {
                    return Ok(Ordinal {
                        terms: b.terms[i..].to_vec(),
                    })
                }
                (Some(_), None) => return Err(OrdinalError::Underflow),
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    Ordering::Greater => return Err(OrdinalError::Underflow),
                    Ordering::Less => {
                        return Ok(Ordinal {
                            terms: b.terms[i..].to_vec(),
                        })
                    }
                    Ordering::Equal => match ca.cmp(cb) {
                        Ordering::Greater => return Err(OrdinalError::Underflow),
                        Ordering::Less => {
                            let mut terms = vec![(eb.clone(), cb - ca)];
                            terms.extend_from_slice(&b.terms[i + 1..]);
                            return Ok(Ordinal { terms });
                        }
                        Ordering::Equal => i += 1,
                    },
                },
            }
        }
    }

    /// Division with remainder: the unique `(q, r)` with `a * q + r = b` and
    /// `r < a`. Here `a` is the divisor, `b` the dividend.
    pub fn divmod(a: &Ordinal, b: &Ordinal) -> Result<(Ordinal, Ordinal), OrdinalError> {
        if a.is_zero() {
            return Err(OrdinalError::DivisionByZero);
        }
        if b.is_zero() {
            return Ok((Ordinal::zero(), Ordinal::zero()));
        }
        let alpha1 = &a.terms[0].0;
        let c1 = &a.terms[0].1;
        let a_rest = Ordinal {
            terms: a.terms[1..].to_vec(),
        };

        // b = P + w^alpha1 * d + R with P above, R below the leading exponent of a.
        let mut q_terms: Vec<(Ordinal, BigUint)> = Vec::new();
        let mut idx = 0;
        while idx < b.terms.len() && b.terms[idx].0 > *alpha1 {
            let (e, c) = &b.terms[idx];
            let shift = Ordinal::subtract_left(alpha1, e).expect("e > alpha1");
            q_terms.push((shift, c.clone()));
            idx += 1;
        }
        let d = if idx < b.terms.len() && b.terms[idx].0 == *alpha1 {
            let c = b.terms[idx].1.clone();
            idx += 1;
            c
        } else {
            BigUint::zero()
        };
        let rest = Ordinal {
            terms: b.terms[idx..].to_vec(),
        };

        let (q_fin, remainder) = if d.is_zero() {
            (BigUint::zero(), rest)
        } else {
            let q0 = &d / c1;
            let r0 = &d % c1;
            if !r0.is_zero() {
                (q0, Ordinal::single(alpha1.clone(), r0).add(&rest))
            } else if a_rest <= rest {
                let tail = Ordinal::subtract_left(&a_rest, &rest).expect("a_rest <= rest");
                (q0, tail)
            } else {
                // Step the quotient down by one; the divisor's own tail spills
                // into the remainder.
                let q = q0 - BigUint::one();
                (q, Ordinal::single(alpha1.clone(), c1.clone()).add(&rest))
            }
        };

        if !q_fin.is_zero() {
            q_terms.push((Ordinal::zero(), q_fin));
        }
        Ok((Ordinal { terms: q_terms }, remainder))
    }

    /// Hessenberg natural sum: merge the CNF exponent multisets.
    pub fn natural_sum(&self, rhs: &Ordinal) -> Ordinal {
        let mut merged: Vec<(Ordinal, BigUint)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let pick = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some((ea, _)), Some((eb, _))) => ea.cmp(eb),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match pick {
                Ordering::Greater => {
                    merged.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    merged.push(rhs.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    merged.push((self.terms[i].0.clone(), &self.terms[i].1 + &rhs.terms[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ordinal { terms: merged }
    }

    /// Hessenberg natural product: natural sums of exponents over all term pairs.
    pub fn natural_prod(&self, rhs: &Ordinal) -> Ordinal {
        let mut acc = Ordinal::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                acc = acc.natural_sum(&Ordinal::single(ea.natural_sum(eb), ca * cb));
            }
        }
        acc
    }

    /// The last CNF term `w^e` with `e > 0`, coefficient stripped to 1.
    /// `None` for finite ordinals.
    pub fn last_infinite_term(&self) -> Option<Ordinal> {
        self.terms
            .iter()
            .rev()
            .find(|(e, _)| !e.is_zero())
            .map(|(e, _)| Ordinal::omega_pow(e.clone()))
    }

    /// The first CNF term `w^e`, coefficient stripped to 1. Errors on zero.
    pub fn first_term(&self) -> Result<Ordinal, OrdinalError> {
        match self.terms.first() {
            Some((e, _)) => Ok(Ordinal::omega_pow(e.clone())),
            None => Err(OrdinalError::ZeroInput),
        }
    }

    /// Base-omega decomposition: the unique `(g, d, e)` with
    /// `w^g * d + e = self`, `e < w^g` and `0 < d < w`. Errors on zero.
    pub fn log_omega(&self) -> Result<(Ordinal, BigUint, Ordinal), OrdinalError> {
        match self.terms.first() {
            Some((e, c)) => Ok((
                e.clone(),
                c.clone(),
                Ordinal {
                    terms: self.terms[1..].to_vec(),
                },
            )),
            None => Err(OrdinalError::ZeroInput),
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut i = 0;
        loop {
            match (self.terms.get(i), other.terms.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ea, ca)), Some((eb, cb))) => {
                    match ea.cmp(eb).then_with(|| ca.cmp(cb)) {
                        Ordering::Equal => i += 1,
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl std::fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

impl std::fmt::Display for Ordinal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&text::print(self))
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse(s)
    }
}

mod json {
    //! JSON form: an ordered list of `{"exp": <ordinal>, "coeff": <integer>}`.

    use super::*;
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    #[derive(Serialize)]
    struct TermOut<'a> {
        exp: &'a Ordinal,
        coeff: serde_json::Number,
    }

    #[derive(Deserialize)]
    struct TermIn {
        exp: Ordinal,
        coeff: serde_json::Number,
    }

    impl Serialize for Ordinal {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
            for (e, c) in &self.terms {
                let coeff = serde_json::Number::from_str(&c.to_string())
                    .map_err(serde::ser::Error::custom)?;
                seq.serialize_element(&TermOut { exp: e, coeff })?;
            }
            seq.end()
        }
    }

    impl<'de> Deserialize<'de> for Ordinal {
        fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
            let raw = Vec::<TermIn>::deserialize(de)?;
            let mut terms = Vec::with_capacity(raw.len());
            for t in raw {
                let c = BigUint::from_str(&t.coeff.to_string())
                    .map_err(|_| D::Error::custom("coefficient must be a positive integer"))?;
                terms.push((t.exp, c));
            }
            Ordinal::from_terms(terms).map_err(D::Error::custom)
        }
    }
}

pub mod sample {
    //! Seeded random ordinals for the property battery.

    use super::*;
    use rand::Rng;

    /// A random ordinal of nesting depth at most `depth`, with at most
    /// `max_terms` terms and coefficients in `1..=max_coeff`.
    pub fn ordinal<R: Rng>(rng: &mut R, depth: usize, max_terms: usize, max_coeff: u64) -> Ordinal {
        if depth == 0 {
            return Ordinal::zero();
        }
        let n_terms = rng.gen_range(0..=max_terms);
        if n_terms == 0 {
            return Ordinal::zero();
        }
        let mut exps: Vec<Ordinal> = (0..n_terms)
            .map(|_| ordinal(rng, depth - 1, max_terms, max_coeff))
            .collect();
        exps.sort();
        exps.dedup();
        exps.reverse();
        let terms = exps
            .into_iter()
            .map(|e| (e, BigUint::from(rng.gen_range(1..=max_coeff))))
            .collect();
        Ordinal { terms }
    }
}
