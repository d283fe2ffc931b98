//! The Potts–Bethe map `f(x) = g(x)^k`, `g(x) = (θx + q − 1)/(x + θ + q − 2)`.

mod partition;
mod theta;

pub use partition::{Partition, PartitionBall, PartitionJson};
pub use theta::parse_theta;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::hensel::{principal_kth_root, v_p, HenselError};
use crate::padic::{is_prime, NormExp, Padic, PadicError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("p≥3 required, got p = {0}")]
    PrimeTooSmall(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("invalid q: {0}")]
    InvalidQ(String),
    #[error("invalid theta: {0}")]
    InvalidTheta(String),
    #[error("x hits the pole 2 − q − θ")]
    PoleHit,
    #[error("point is not fixed: norm_exp(f(x) − x) = {0}")]
    NotFixed(i64),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("operation needs regime B, parameters are in regime {0}")]
    NotRegimeB(RegimeTag),
    #[error("partition invariant failed: {0}")]
    Partition(String),
    #[error("no symbol {0} in the partition")]
    BadSymbol(usize),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Hensel(Box<HenselError>),
}

impl From<HenselError> for MapError {
    fn from(e: HenselError) -> Self {
        match e {
            HenselError::Map(m) => *m,
            HenselError::Padic(p) => MapError::Padic(p),
            other => MapError::Hensel(Box::new(other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeTag {
    /// `|k|_p ≤ |q + θ − 1|_p`: 1 is globally attracting.
    A,
    /// Regime B with a single k-th root of unity: one repelling fixed point.
    B1,
    /// Regime B with `κ_p ≥ 2`: conjugate to the full shift on `κ_p` symbols.
    B2,
    /// `|k|_p > |q + θ − 1|_p` but `|θ − 1|_p ≥ |q²|_p`; not covered.
    Unclassified,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::A => "A",
            RegimeTag::B1 => "B1",
            RegimeTag::B2 => "B2",
            RegimeTag::Unclassified => "Unclassified",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Regime {
    pub tag: RegimeTag,
    pub kappa: u64,
}

impl Regime {
    pub fn is_b(&self) -> bool {
        matches!(self.tag, RegimeTag::B1 | RegimeTag::B2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FixedPointKind {
    Attractive,
    Indifferent,
    Repelling,
    /// `λ = 0`: the definition of attractive excludes it.
    Degenerate,
}

/// Classifies a fixed point from `norm_exp(λ)`.
pub fn classify_fixed(lambda_norm: NormExp) -> FixedPointKind {
    match lambda_norm {
        NormExp::Infinite => FixedPointKind::Degenerate,
        NormExp::Finite(v) if v > 0 => FixedPointKind::Attractive,
        NormExp::Finite(0) => FixedPointKind::Indifferent,
        NormExp::Finite(_) => FixedPointKind::Repelling,
    }
}

/// Parameters `(p, k, q, θ)` of the map together with derived quantities.
#[derive(Debug, Clone)]
pub struct MapParams {
    p: u64,
    k: u64,
    q: BigInt,
    theta: Padic,
    precision: u32,
    q_padic: Padic,
    k_padic: Padic,
    theta_minus_one: Padic,
    /// `q + θ − 1`
    shifted: Padic,
    pole: Padic,
    kappa: u64,
}

impl MapParams {
    pub fn new(p: u64, k: u64, q: BigInt, theta: Padic, precision: u32) -> Result<Self, MapError> {
        if p < 3 {
            return Err(MapError::PrimeTooSmall(p));
        }
        if !is_prime(p) {
            return Err(MapError::NotPrime(p));
        }
        if k == 0 {
            return Err(MapError::InvalidK);
        }
        if q.is_zero() || !(&q % BigInt::from(p)).is_zero() {
            return Err(MapError::InvalidQ(format!("q = {q} must be a nonzero multiple of p = {p}")));
        }
        if theta.prime() != p {
            return Err(MapError::InvalidTheta(format!("theta is {}-adic, expected {p}-adic", theta.prime())));
        }
        let theta = theta.with_prec(precision);
        let one = Padic::one(p, precision);
        let theta_minus_one = theta.sub(&one).map_err(|_| {
            MapError::InvalidTheta("theta cannot be told apart from 1 at this precision".into())
        })?;
        if theta_minus_one.norm_exp() < NormExp::Finite(1) {
            return Err(MapError::InvalidTheta(format!("theta = {theta} is not in E_p (|θ − 1|_p must be < 1)")));
        }
        let q_padic = Padic::from_bigint(&q, p, precision);
        let shifted = q_padic.add(&theta_minus_one).map_err(|_| {
            MapError::Degenerate("q + θ − 1 vanishes to working precision".into())
        })?;
        if shifted.is_zero() {
            return Err(MapError::Degenerate("q + θ − 1 = 0 puts the pole at the fixed point 1".into()));
        }
        let pole = one.sub(&shifted)?;
        Ok(MapParams {
            p,
            k,
            kappa: k.gcd(&(p - 1)),
            k_padic: Padic::from_int(k as i64, p, precision),
            q,
            theta,
            precision,
            q_padic,
            theta_minus_one,
            shifted,
            pole,
        })
    }

    /// Builds from textual `q` and `θ` (see [`parse_theta`]).
    pub fn parse(p: u64, k: u64, q: &str, theta: &str, precision: u32) -> Result<Self, MapError> {
        if p < 3 {
            return Err(MapError::PrimeTooSmall(p));
        }
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| MapError::InvalidQ(format!("{q:?} is not an integer")))?;
        let theta = parse_theta(theta, p, precision)?;
        Self::new(p, k, q, theta, precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn theta(&self) -> &Padic {
        &self.theta
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn q_padic(&self) -> &Padic {
        &self.q_padic
    }
    pub fn theta_minus_one(&self) -> &Padic {
        &self.theta_minus_one
    }
    /// `x^(∞) = 2 − q − θ`.
    pub fn pole(&self) -> &Padic {
        &self.pole
    }
    /// Number of k-th roots of unity in `Q_p`, `gcd(k, p − 1)`.
    pub fn kappa(&self) -> u64 {
        self.kappa
    }
    pub fn one(&self) -> Padic {
        Padic::one(self.p, self.precision)
    }

    pub fn v_k(&self) -> i64 {
        v_p(self.k, self.p)
    }
    pub fn v_q(&self) -> i64 {
        self.q_padic.valuation().unwrap()
    }
    pub fn norm_theta_minus_one(&self) -> NormExp {
        self.theta_minus_one.norm_exp()
    }
    pub fn norm_shifted(&self) -> NormExp {
        self.shifted.norm_exp()
    }

    /// Decides regime A/B1/B2 by exact norm comparisons.
    pub fn classify_regime(&self) -> Result<Regime, MapError> {
        let kappa = self.kappa;
        let vk = NormExp::Finite(self.v_k());
        if vk >= self.norm_shifted() {
            return Ok(Regime { tag: RegimeTag::A, kappa });
        }
        if self.theta_minus_one.is_zero() {
            return Err(MapError::Degenerate("θ = 1 makes f constant".into()));
        }
        let tag = if self.norm_theta_minus_one() > NormExp::Finite(2 * self.v_q()) {
            if kappa == 1 {
                RegimeTag::B1
            } else {
                RegimeTag::B2
            }
        } else {
            RegimeTag::Unclassified
        };
        Ok(Regime { tag, kappa })
    }

    /// Human-readable statement of which hypothesis fails in the gap.
    pub fn gap_violation(&self) -> Option<String> {
        let regime = self.classify_regime().ok()?;
        (regime.tag == RegimeTag::Unclassified).then(|| {
            format!(
                "|θ−1|_p = {p}^-{} is not below |q²|_p = {p}^-{}",
                self.norm_theta_minus_one(),
                2 * self.v_q(),
                p = self.p
            )
        })
    }

    fn pole_distance(&self, x: &Padic) -> Result<Padic, MapError> {
        match x.sub(&self.pole) {
            Ok(d) if !d.is_zero() => Ok(d),
            _ => Err(MapError::PoleHit),
        }
    }

    /// Whether `x` equals the pole to working precision.
    pub fn is_pole(&self, x: &Padic) -> bool {
        self.pole_distance(x).is_err()
    }

    /// `g(x) = 1 + (θ−1)(x−1)/(x − x^(∞))`.
    pub fn eval_g(&self, x: &Padic) -> Result<Padic, MapError> {
        let den = self.pole_distance(x)?;
        let one = self.one();
        match x.sub(&one) {
            Ok(xm1) => {
                let t = self.theta_minus_one.mul(&xm1).div(&den)?;
                Ok(one.add(&t)?)
            }
            // x ≡ 1 (mod p^b): g ≡ 1 to the propagated precision
            Err(PadicError::PrecisionExhausted { abs_prec }) => {
                if self.theta_minus_one.is_zero() {
                    return Ok(one);
                }
                let digits = abs_prec + self.theta_minus_one.valuation().unwrap() - den.valuation().unwrap();
                if digits < 1 {
                    return Err(PadicError::InsufficientPrecision { needed: 1, available: digits }.into());
                }
                Ok(Padic::one(self.p, digits.min(self.precision as i64) as u32).to_inexact())
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn eval_f(&self, x: &Padic) -> Result<Padic, MapError> {
        Ok(self.eval_g(x)?.pow(self.k as i64)?)
    }

    /// `f'(x) = k·g(x)^{k−1}·(θ−1)(q+θ−1)/(x − x^(∞))²`.
    pub fn derivative(&self, x: &Padic) -> Result<Padic, MapError> {
        let den = self.pole_distance(x)?;
        let g = self.eval_g(x)?;
        let num = self
            .k_padic
            .mul(&g.pow(self.k as i64 - 1)?)
            .mul(&self.theta_minus_one)
            .mul(&self.shifted);
        Ok(num.div(&den.mul(&den))?)
    }

    /// The multiplier `λ = f'(x_fix)` of a fixed point, after checking
    /// `f(x_fix) = x_fix` to half the working precision.
    pub fn multiplier(&self, x_fix: &Padic) -> Result<Padic, MapError> {
        let image = self.eval_f(x_fix)?;
        let sep = image.separation(x_fix);
        let tol = (self.precision / 2) as i64;
        if sep.lower_bound() < tol {
            return Err(MapError::NotFixed(sep.lower_bound()));
        }
        self.derivative(x_fix)
    }

    /// Builds the Markov partition of regime B.
    pub fn build_partition(&self) -> Result<Partition, MapError> {
        let regime = self.classify_regime()?;
        if !regime.is_b() {
            return Err(MapError::NotRegimeB(regime.tag));
        }
        Partition::build(self)
    }

    /// Inverse branch `h_i(y) = 1 − (q+θ−1)·w / (w − (θ−1))` with
    /// `w = ξ_i·y^{1/k} − 1`, algebraically equal to
    /// `((q+θ−2)ξ_i·y^{1/k} − q + 1)/(θ − ξ_i·y^{1/k})` but free of the
    /// cancellation the quotient form suffers near `ξ_i = 1`.
    pub fn inverse_branch(&self, partition: &Partition, symbol: usize, y: &Padic) -> Result<Padic, MapError> {
        let xi = &partition.ball(symbol).ok_or(MapError::BadSymbol(symbol))?.xi;
        let root = principal_kth_root(y, self.k)?;
        let w = xi.mul(&root).sub(&self.one())?;
        let den = w.sub(&self.theta_minus_one)?;
        if den.is_zero() {
            return Err(MapError::PoleHit);
        }
        let step = self.shifted.mul(&w).div(&den)?;
        Ok(self.one().sub(&step)?)
    }

    fn q_over(&self, num: i64, den: i64) -> Padic {
        Padic::from_exact(
            num_rational::BigRational::new(BigInt::from(num), BigInt::from(den)),
            self.p,
            self.precision,
        )
    }

    /// Center of the ball attached to `ξ`.
    pub(crate) fn center_for(&self, xi: &Padic) -> Result<Padic, MapError> {
        let one = self.one();
        if xi.agrees_with(&one, 1)? {
            // 1 − q + (k−1)(1 − q/2 + (k−2)q²/(6k))(θ−1)
            let k = self.k as i64;
            let q = &self.q_padic;
            let inner = one
                .sub(&q.mul(&self.q_over(1, 2)))?
                .add(&q.mul(q).mul(&self.q_over(k - 2, 6 * k)))?;
            let corr = Padic::from_int(k - 1, self.p, self.precision)
                .mul(&inner)
                .mul(&self.theta_minus_one);
            Ok(one.sub(q)?.add(&corr)?)
        } else {
            // 2 − q − θ + q(θ−1)/(1−ξ)
            let off = self.q_padic.mul(&self.theta_minus_one).div(&one.sub(xi)?)?;
            Ok(self.pole.add(&off)?)
        }
    }

    /// The parameters with `q` reported as an integer and `θ` in both encodings.
    pub fn describe(&self) -> ParamsJson {
        ParamsJson {
            p: self.p,
            k: self.k,
            q: self.q.to_string(),
            theta: self.theta.to_string(),
            theta_rational: self.theta.to_rational().map(|r| r.to_string()),
            precision: self.precision,
        }
    }

    /// Stable byte string identifying the parameters (for seeding).
    pub fn digest_key(&self) -> String {
        format!("{}|{}|{}|{}|{}", self.p, self.k, self.q, self.theta.to_compact(), self.precision)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsJson {
    pub p: u64,
    pub k: u64,
    pub q: String,
    pub theta: String,
    pub theta_rational: Option<String>,
    pub precision: u32,
}
