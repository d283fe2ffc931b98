//! Capped-relative p-adic numbers.
//!
//! A nonzero [`Padic`] is `p^v · u` where `u` is a unit known modulo
//! `p^N` (`N` = relative precision). Values built from integers or
//! rationals additionally remember their exact unit part, so that
//! arithmetic between exact values stays exact (until the rational grows
//! past [`EXACT_BITS_CAP`]) and cancellation between them produces a true
//! zero instead of a precision error.
//!
//! Sums of inexact values whose known digits cancel completely return
//! [`PadicError::PrecisionExhausted`]; there is no inexact zero.

mod ball;
mod text;

pub use ball::Ball;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Default relative precision in base-p digits.
pub const DEFAULT_PRECISION: u32 = 64;

/// Exact rationals whose numerator plus denominator exceed this many bits
/// are demoted to ordinary capped values.
pub const EXACT_BITS_CAP: u64 = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("precision exhausted: all digits cancel below p^{abs_prec}")]
    PrecisionExhausted { abs_prec: i64 },
    #[error("insufficient precision: need digits up to p^{needed}, known up to p^{available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// `−log_p |x|_p`, with `Infinite` for exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NormExp {
    Finite(i64),
    Infinite,
}

impl NormExp {
    pub fn finite(self) -> Option<i64> {
        match self {
            NormExp::Finite(v) => Some(v),
            NormExp::Infinite => None,
        }
    }
}

impl fmt::Display for NormExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExp::Finite(v) => write!(f, "{v}"),
            NormExp::Infinite => f.write_str("inf"),
        }
    }
}

/// Outcome of measuring `|x − y|_p` at the available precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separation {
    /// `norm_exp(x − y)` is known exactly.
    Known(NormExp),
    /// `x` and `y` agree on every known digit; `norm_exp(x − y) ≥` this bound.
    Beyond(i64),
}

impl Separation {
    /// A valuation the difference is guaranteed to reach.
    pub fn lower_bound(self) -> i64 {
        match self {
            Separation::Known(NormExp::Finite(v)) => v,
            Separation::Known(NormExp::Infinite) => i64::MAX,
            Separation::Beyond(b) => b,
        }
    }

    /// Whether the difference has valuation at least `digits`, erroring when
    /// the available precision cannot tell.
    pub fn at_least(self, digits: i64) -> Result<bool, PadicError> {
        match self {
            Separation::Known(NormExp::Infinite) => Ok(true),
            Separation::Known(NormExp::Finite(v)) => Ok(v >= digits),
            Separation::Beyond(b) if b >= digits => Ok(true),
            Separation::Beyond(b) => Err(PadicError::InsufficientPrecision {
                needed: digits,
                available: b,
            }),
        }
    }
}

#[derive(Clone)]
pub struct Padic {
    prime: u64,
    valuation: i64,
    /// Unit residue in `[1, p^prec)`; zero only for exact zero.
    unit: BigUint,
    prec: u32,
    /// Exact unit part `m/d` with `p ∤ m·d`, when known.
    exact: Option<Arc<BigRational>>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn p_pow(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

/// Splits `n ≠ 0` into `(v_p(n), n / p^v)`.
fn split_int(mut n: BigInt, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

fn split_uint(mut n: BigUint, p: u64) -> (i64, BigUint) {
    let pb = BigUint::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

fn rational_residue(r: &BigRational, p: u64, digits: u32) -> BigUint {
    if digits == 0 {
        return BigUint::zero();
    }
    let m = BigInt::from(p_pow(p, digits));
    let num = r.numer().mod_floor(&m);
    let den = r.denom().mod_floor(&m);
    let inv = den
        .modinv(&m)
        .expect("exact unit part has denominator coprime to p");
    (num * inv).mod_floor(&m).to_biguint().expect("residue is nonnegative")
}

fn rational_bits(r: &BigRational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

impl Padic {
    pub fn zero(prime: u64, prec: u32) -> Self {
        Padic {
            prime,
            valuation: 0,
            unit: BigUint::zero(),
            prec,
            exact: Some(Arc::new(BigRational::zero())),
        }
    }

    pub fn one(prime: u64, prec: u32) -> Self {
        Self::from_int(1, prime, prec)
    }

    pub fn from_int(n: i64, prime: u64, prec: u32) -> Self {
        Self::from_exact(BigRational::from_integer(BigInt::from(n)), prime, prec)
    }

    pub fn from_bigint(n: &BigInt, prime: u64, prec: u32) -> Self {
        Self::from_exact(BigRational::from_integer(n.clone()), prime, prec)
    }

    /// Embeds `num/den` into `Q_p` with relative precision `prec`.
    pub fn from_rational(num: &BigInt, den: &BigInt, prime: u64, prec: u32) -> Result<Self, PadicError> {
        if den.is_zero() {
            return Err(PadicError::ZeroDenominator);
        }
        if !is_prime(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        Ok(Self::from_exact(
            BigRational::new(num.clone(), den.clone()),
            prime,
            prec,
        ))
    }

    /// Builds from an exact rational value.
    pub fn from_exact(r: BigRational, prime: u64, prec: u32) -> Self {
        assert!(prec >= 1, "relative precision must be at least 1");
        if r.is_zero() {
            return Self::zero(prime, prec);
        }
        let (vn, n) = split_int(r.numer().clone(), prime);
        let (vd, d) = split_int(r.denom().clone(), prime);
        let unit_part = BigRational::new(n, d);
        let unit = rational_residue(&unit_part, prime, prec);
        let exact = (rational_bits(&unit_part) <= EXACT_BITS_CAP).then(|| Arc::new(unit_part));
        Padic {
            prime,
            valuation: vn - vd,
            unit,
            prec,
            exact,
        }
    }

    /// Builds an inexact value `p^valuation · unit + O(p^(valuation+prec))`.
    /// Factors of `p` in `unit` are moved into the valuation.
    pub fn from_parts(prime: u64, valuation: i64, unit: BigUint, prec: u32) -> Result<Self, PadicError> {
        if prec == 0 {
            return Err(PadicError::PrecisionExhausted {
                abs_prec: valuation,
            });
        }
        let unit = unit % p_pow(prime, prec);
        if unit.is_zero() {
            return Err(PadicError::PrecisionExhausted {
                abs_prec: valuation + prec as i64,
            });
        }
        let (t, u) = split_uint(unit, prime);
        let prec = prec - t as u32;
        Ok(Padic {
            prime,
            valuation: valuation + t,
            unit: u,
            prec,
            exact: None,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Relative precision in digits (for exact values: the digits materialised).
    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `v_p(x)`, `None` for exact zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }

    pub fn norm_exp(&self) -> NormExp {
        match self.valuation() {
            Some(v) => NormExp::Finite(v),
            None => NormExp::Infinite,
        }
    }

    /// Exponent of the first unknown digit; `None` when exact.
    pub fn abs_prec(&self) -> Option<i64> {
        match self.exact {
            Some(_) => None,
            None => Some(self.valuation + self.prec as i64),
        }
    }

    /// Like [`abs_prec`](Self::abs_prec) with exact values reported at
    /// their materialised digits.
    pub fn known_digits(&self) -> i64 {
        if self.is_zero() {
            return i64::MAX;
        }
        self.valuation + self.prec as i64
    }

    /// The exact rational value, when known.
    pub fn to_rational(&self) -> Option<BigRational> {
        let u = self.exact.as_deref()?;
        if u.is_zero() {
            return Some(BigRational::zero());
        }
        let pv = BigRational::from_integer(BigInt::from(p_pow(self.prime, self.valuation.unsigned_abs() as u32)));
        Some(if self.valuation >= 0 { u * pv } else { u / pv })
    }

    /// Base-p digits of the unit, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let pb = BigUint::from(self.prime);
        let mut n = self.unit.clone();
        (0..self.prec)
            .map(|_| {
                let (q, r) = n.div_rem(&pb);
                n = q;
                r.to_u64().unwrap_or(0)
            })
            .collect()
    }

    /// Forgets the exact value, keeping only the known digits.
    pub fn to_inexact(&self) -> Self {
        let mut out = self.clone();
        if !out.is_zero() {
            out.exact = None;
        }
        out
    }

    /// Re-expresses with relative precision `prec`. Exact values can be
    /// materialised to any precision; inexact values only truncate.
    pub fn with_prec(&self, prec: u32) -> Self {
        assert!(prec >= 1, "relative precision must be at least 1");
        if self.is_zero() {
            return Padic::zero(self.prime, prec);
        }
        match &self.exact {
            Some(u) => Padic {
                unit: rational_residue(u, self.prime, prec),
                prec,
                ..self.clone()
            },
            None => {
                let prec = prec.min(self.prec);
                Padic {
                    unit: &self.unit % p_pow(self.prime, prec),
                    prec,
                    exact: None,
                    ..self.clone()
                }
            }
        }
    }

    fn unit_residue(&self, digits: u32) -> BigUint {
        match &self.exact {
            Some(u) => rational_residue(u, self.prime, digits),
            None => {
                debug_assert!(digits <= self.prec);
                &self.unit % p_pow(self.prime, digits)
            }
        }
    }

    fn check_prime(&self, other: &Padic) {
        assert_eq!(
            self.prime, other.prime,
            "p-adic operands over different primes"
        );
    }

    fn exact_result(r: BigRational, prime: u64, prec: u32) -> Self {
        Self::from_exact(r, prime, prec)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = p_pow(self.prime, self.prec);
        Padic {
            unit: &m - &self.unit,
            exact: self.exact.as_ref().map(|u| Arc::new(-(**u).clone())),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other);
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let cap = self.prec.max(other.prec);
        if let (Some(a), Some(b)) = (self.to_rational(), other.to_rational()) {
            return Ok(Self::exact_result(a + b, self.prime, cap));
        }
        let abs = match (self.abs_prec(), other.abs_prec()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("both exact handled above"),
        };
        let vmin = self.valuation.min(other.valuation);
        let width = (abs - vmin) as u32;
        let modulus = p_pow(self.prime, width);
        let shifted = |x: &Padic| -> BigUint {
            let shift = (x.valuation - vmin) as u32;
            if shift >= width {
                return BigUint::zero();
            }
            x.unit_residue(width - shift) * p_pow(x.prime, shift)
        };
        let sum = (shifted(self) + shifted(other)) % &modulus;
        if sum.is_zero() {
            return Err(PadicError::PrecisionExhausted { abs_prec: abs });
        }
        let (t, unit) = split_uint(sum, self.prime);
        let valuation = vmin + t;
        let prec = ((abs - valuation) as u32).min(cap);
        Ok(Padic {
            prime: self.prime,
            valuation,
            unit: unit % p_pow(self.prime, prec),
            prec,
            exact: None,
        })
    }

    pub fn sub(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Padic) -> Padic {
        self.check_prime(other);
        let cap = self.prec.max(other.prec);
        if self.is_zero() || other.is_zero() {
            return Padic::zero(self.prime, cap);
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            if rational_bits(a) + rational_bits(b) <= EXACT_BITS_CAP {
                let product = self.to_rational().unwrap() * other.to_rational().unwrap();
                return Self::exact_result(product, self.prime, cap);
            }
        }
        let prec = match (&self.exact, &other.exact) {
            (None, None) => self.prec.min(other.prec),
            (Some(_), None) => other.prec,
            (None, Some(_)) => self.prec,
            (Some(_), Some(_)) => cap,
        };
        let modulus = p_pow(self.prime, prec);
        Padic {
            prime: self.prime,
            valuation: self.valuation + other.valuation,
            unit: (self.unit_residue(prec) * other.unit_residue(prec)) % modulus,
            prec,
            exact: None,
        }
    }

    pub fn inv(&self) -> Result<Padic, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if let Some(u) = &self.exact {
            let inv_unit = u.recip();
            let exact = Some(Arc::new(inv_unit.clone()));
            return Ok(Padic {
                prime: self.prime,
                valuation: -self.valuation,
                unit: rational_residue(&inv_unit, self.prime, self.prec),
                prec: self.prec,
                exact,
            });
        }
        let modulus = p_pow(self.prime, self.prec);
        let unit = self
            .unit
            .modinv(&modulus)
            .expect("unit is coprime to p");
        Ok(Padic {
            prime: self.prime,
            valuation: -self.valuation,
            unit,
            prec: self.prec,
            exact: None,
        })
    }

    pub fn div(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other);
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Result<Padic, PadicError> {
        if n < 0 {
            return self.inv()?.pow(-n);
        }
        if n == 0 {
            return Ok(Padic::one(self.prime, self.prec));
        }
        if let Some(u) = &self.exact {
            if rational_bits(u).saturating_mul(n as u64) <= EXACT_BITS_CAP {
                let value = num_traits::pow(self.to_rational().unwrap(), n as usize);
                return Ok(Self::exact_result(value, self.prime, self.prec));
            }
        }
        let mut base = self.clone();
        let mut acc = Padic::one(self.prime, self.prec);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Scales by `p^n`.
    pub fn shift(&self, n: i64) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        Padic {
            valuation: self.valuation + n,
            ..self.clone()
        }
    }

    /// Measures `|self − other|_p`.
    pub fn separation(&self, other: &Padic) -> Separation {
        match self.sub(other) {
            Ok(d) => Separation::Known(d.norm_exp()),
            Err(PadicError::PrecisionExhausted { abs_prec }) => Separation::Beyond(abs_prec),
            Err(e) => unreachable!("subtraction can only exhaust precision: {e}"),
        }
    }

    /// Whether `self` and `other` agree modulo `p^digits`.
    pub fn agrees_with(&self, other: &Padic, digits: i64) -> Result<bool, PadicError> {
        self.separation(other).at_least(digits)
    }

    /// Norm comparison: `Less` iff `|self|_p < |other|_p`, i.e. `self = o[other]`.
    pub fn cmp_norm(&self, other: &Padic) -> Ordering {
        other.norm_exp().cmp(&self.norm_exp())
    }

    /// Membership in `E_p = {x : |x − 1|_p ≤ p^{-1}}` (valid for `p ≥ 3`).
    pub fn in_ep(&self) -> Result<bool, PadicError> {
        debug_assert!(self.prime >= 3, "E_p membership is only defined here for p ≥ 3");
        self.separation(&Padic::one(self.prime, self.prec)).at_least(1)
    }

    pub fn is_integral(&self) -> bool {
        self.norm_exp() >= NormExp::Finite(0)
    }

    pub fn is_unit(&self) -> bool {
        self.norm_exp() == NormExp::Finite(0)
    }

    /// `p^v · u` as an integer/rational with the known digits (ignores
    /// the error term).
    pub fn truncated_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let u = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.unit.clone()));
        let pv = BigRational::from_integer(BigInt::from(p_pow(self.prime, self.valuation.unsigned_abs() as u32)));
        if self.valuation >= 0 {
            u * pv
        } else {
            u / pv
        }
    }

    /// Small signed representative of the known digits, used for compact
    /// display of exact integers.
    fn exact_integer(&self) -> Option<BigInt> {
        let r = self.to_rational()?;
        r.is_integer().then(|| r.to_integer())
    }
}

/// Equality of representations: same prime, valuation, precision and digits.
impl PartialEq for Padic {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime
            && self.is_zero() == other.is_zero()
            && (self.is_zero()
                || (self.valuation == other.valuation
                    && self.prec == other.prec
                    && self.unit == other.unit))
    }
}

impl Eq for Padic {}

impl fmt::Debug for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_integer() {
            Some(n) if n.abs().bits() <= 64 => write!(f, "Padic({n} in Q_{})", self.prime),
            _ => write!(f, "Padic({})", self.to_compact()),
        }
    }
}
