//! Root finding over `Z_p`.
//!
//! Newton–Hensel lifting, principal k-th roots on `E_p`, Teichmüller roots
//! of unity, and the non-trivial fixed point of the single-symbol regime.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::padic::{p_pow, NormExp, Padic, PadicError, Separation};
use crate::potts::{MapError, MapParams, RegimeTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HenselError {
    #[error("Hensel precondition violated: {0}")]
    Precondition(String),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Map(#[from] Box<MapError>),
}

impl From<MapError> for HenselError {
    fn from(e: MapError) -> Self {
        HenselError::Map(Box::new(e))
    }
}

/// Polynomial with p-adic integer coefficients, constant term first.
#[derive(Debug, Clone)]
pub struct PolyZp {
    coeffs: Vec<Padic>,
}

impl PolyZp {
    pub fn new(coeffs: Vec<Padic>) -> Result<Self, HenselError> {
        if coeffs.len() < 2 {
            return Err(HenselError::Precondition("degree must be at least 1".into()));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(HenselError::Precondition("leading coefficient is zero".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_integral()) {
            return Err(HenselError::Precondition(format!(
                "coefficient {c} is not a p-adic integer"
            )));
        }
        Ok(PolyZp { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    /// Horner evaluation. When the known digits cancel, returns the
    /// separation bound instead of a value.
    pub fn eval(&self, x: &Padic) -> Result<Padic, PadicError> {
        horner(&self.coeffs, x)
    }

    pub fn derivative_at(&self, x: &Padic) -> Result<Padic, PadicError> {
        let p = x.prime();
        let d: Vec<Padic> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.mul(&Padic::from_int(j as i64, p, c.rel_prec())))
            .collect();
        horner(&d, x)
    }

    /// `|F(x)|` as a separation from zero.
    fn residual(&self, x: &Padic) -> Separation {
        match self.eval(x) {
            Ok(v) => Separation::Known(v.norm_exp()),
            Err(PadicError::PrecisionExhausted { abs_prec }) => Separation::Beyond(abs_prec),
            Err(e) => unreachable!("polynomial evaluation cannot fail otherwise: {e}"),
        }
    }
}

fn horner(coeffs: &[Padic], x: &Padic) -> Result<Padic, PadicError> {
    let mut acc = coeffs.last().unwrap().clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(x).add(c)?;
    }
    Ok(acc)
}

/// Record of one Newton run: `norm_exp F(x_i)` lower bounds after each step.
#[derive(Debug, Clone)]
pub struct HenselTrace {
    pub root: Padic,
    pub residuals: Vec<i64>,
}

const MAX_NEWTON_STEPS: usize = 64;

/// Newton–Hensel lifting of an approximate root `x0` of `f` in `Z_p`.
///
/// Requires `|F(x0)|_p < |F'(x0)|_p^2`; returns a root with
/// `norm_exp F(root) ≥ target_prec`. The returned precision is cut to the
/// digits certified by `|F(x)/F'(x)|`.
pub fn hensel_lift(f: &PolyZp, x0: &Padic, target_prec: i64) -> Result<Padic, HenselError> {
    hensel_lift_traced(f, x0, target_prec).map(|t| t.root)
}

pub fn hensel_lift_traced(f: &PolyZp, x0: &Padic, target_prec: i64) -> Result<HenselTrace, HenselError> {
    if !x0.is_integral() {
        return Err(HenselError::Precondition(format!("{x0} is not in Z_p")));
    }
    let dv = |x: &Padic| -> Result<i64, HenselError> {
        match f.derivative_at(x) {
            Ok(d) if !d.is_zero() => Ok(d.valuation().unwrap()),
            _ => Err(HenselError::Precondition("F'(x) vanishes".into())),
        }
    };
    let d0 = dv(x0)?;
    let r0 = f.residual(x0);
    if r0.lower_bound() <= 2 * d0 {
        return Err(HenselError::Precondition(format!(
            "|F(x0)| = p^-{} is not below |F'(x0)|^2 = p^-{}",
            r0.lower_bound(),
            2 * d0
        )));
    }
    let prec = working_prec(f, x0);
    let mut x = x0.clone();
    let mut residual = r0;
    let mut residuals = vec![residual.lower_bound()];
    let mut steps = 0;
    loop {
        match residual {
            Separation::Known(NormExp::Infinite) => break,
            Separation::Known(NormExp::Finite(v)) if v >= target_prec => break,
            Separation::Beyond(b) if b >= target_prec => break,
            Separation::Beyond(b) => {
                return Err(PadicError::InsufficientPrecision {
                    needed: target_prec,
                    available: b,
                }
                .into())
            }
            Separation::Known(_) => {}
        }
        if steps == MAX_NEWTON_STEPS {
            return Err(HenselError::NoConvergence(steps));
        }
        let fx = f.eval(&x)?;
        let dfx = f.derivative_at(&x)?;
        x = candidate(&x.sub(&fx.div(&dfx)?)?, prec);
        residual = f.residual(&x);
        residuals.push(residual.lower_bound().min(i64::MAX / 4));
        steps += 1;
    }
    // |x − x_*| = |F(x)| / |F'(x)|
    let certified = residual.lower_bound().saturating_sub(dv(&x)?);
    let root = match (residual, x.valuation()) {
        (Separation::Known(NormExp::Infinite), _) | (_, None) => x,
        (_, Some(v)) => {
            let digits = (certified - v).clamp(1, prec as i64) as u32;
            x.to_inexact().with_prec(digits)
        }
    };
    Ok(HenselTrace { root, residuals })
}

fn working_prec(f: &PolyZp, x0: &Padic) -> u32 {
    f.coeffs().iter().map(Padic::rel_prec).max().unwrap().max(x0.rel_prec())
}

/// Newton is self-correcting, so iterates are held as exact integers
/// (their known digits) and only the final residual bounds the error.
fn candidate(x: &Padic, prec: u32) -> Padic {
    Padic::from_exact(x.truncated_rational(), x.prime(), prec)
}

/// Runs the linear seeding iteration `x ← x − F(x)/k` from `x = 1` until
/// `F` is below the Hensel threshold `|k|^2`, then lifts.
fn seeded_root(f: &PolyZp, k: u64, target_prec: i64) -> Result<Padic, HenselError> {
    let p = f.coeffs()[0].prime();
    let prec = f.coeffs().iter().map(Padic::rel_prec).max().unwrap();
    let vk = v_p(k, p);
    let kp = Padic::from_int(k as i64, p, prec);
    let mut x = Padic::one(p, prec);
    let budget = 8 * prec as usize + 16;
    for _ in 0..budget {
        if f.residual(&x).lower_bound() > 2 * vk {
            return hensel_lift(f, &x, target_prec);
        }
        x = candidate(&x.sub(&f.eval(&x)?.div(&kp)?)?, prec);
    }
    Err(HenselError::NoConvergence(budget))
}

pub(crate) fn v_p(n: u64, p: u64) -> i64 {
    debug_assert!(n > 0);
    let mut n = n;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The principal k-th root: the unique solution of `x^k = a` in `E_p`,
/// defined for `a ∈ E_p` with `|a − 1|_p < |k|_p`.
///
/// The asymptotic expansion of the root in powers of `q/k` is only claimed
/// for `a ∈ B_{|q²|}(1 − q)`, not for the full domain accepted here.
pub fn principal_kth_root(a: &Padic, k: u64) -> Result<Padic, HenselError> {
    if k == 0 {
        return Err(HenselError::Precondition("k must be positive".into()));
    }
    let p = a.prime();
    let one = Padic::one(p, a.rel_prec());
    let vk = v_p(k, p);
    let dist = a.separation(&one);
    match dist {
        Separation::Known(NormExp::Infinite) => return Ok(one),
        Separation::Beyond(b) if b > vk => {
            return Ok(Padic::one(p, (b - vk) as u32).to_inexact());
        }
        _ => {}
    }
    match dist {
        Separation::Known(NormExp::Finite(d)) if d >= 1 && d > vk => {}
        _ => {
            return Err(HenselError::Precondition(format!(
                "principal {k}-th root needs |a − 1| < |k|, got norm_exp(a − 1) = {} and v(k) = {vk}",
                dist.lower_bound()
            )))
        }
    }
    if k == 1 {
        return Ok(a.clone());
    }
    let prec = a.rel_prec();
    let mut coeffs = vec![Padic::zero(p, prec); k as usize + 1];
    coeffs[0] = a.neg();
    coeffs[k as usize] = Padic::one(p, prec);
    let f = PolyZp::new(coeffs)?;
    let target = a.known_digits();
    seeded_root(&f, k, target)
}

/// The `gcd(k, p − 1)` roots of `x^k = 1` in `Z_p`, sorted by residue mod
/// `p`, each the Teichmüller lift of its residue.
pub fn roots_of_unity(k: u64, p: u64, prec: u32) -> Vec<Padic> {
    assert!(p >= 3, "roots of unity here assume p ≥ 3");
    let kappa = k.gcd(&(p - 1));
    let modulus = p_pow(p, prec);
    let pb = BigUint::from(p);
    let minus_one = &modulus - 1u32;
    (1..p)
        .filter(|c| BigUint::from(*c).modpow(&BigUint::from(kappa), &pb).is_one())
        .map(|c| {
            let mut x = BigUint::from(c);
            loop {
                let next = x.modpow(&pb, &modulus);
                if next == x {
                    break;
                }
                x = next;
            }
            if x.is_one() {
                Padic::one(p, prec)
            } else if x == minus_one {
                Padic::from_int(-1, p, prec)
            } else {
                Padic::from_parts(p, 0, x, prec).expect("Teichmüller lift is a unit")
            }
        })
        .collect()
}

/// `F(y) = y^k − 1 + q − (θ−1)·Σ_{j=1}^{k−1} y^{k−j}`, whose root `y` in
/// `E_p` gives the fixed point `y^k` of the map.
pub fn fixed_point_polynomial(params: &MapParams) -> Result<PolyZp, HenselError> {
    let p = params.p();
    let prec = params.precision();
    let k = params.k() as usize;
    let tm1 = params.theta_minus_one();
    let mut coeffs = vec![tm1.neg(); k + 1];
    coeffs[0] = Padic::from_bigint(&(params.q() - BigInt::one()), p, prec);
    coeffs[k] = Padic::one(p, prec);
    PolyZp::new(coeffs)
}

/// The repelling fixed point `x_* ≠ 1` of the single-symbol regime (B1).
pub fn fixed_point_b1(params: &MapParams) -> Result<Padic, HenselError> {
    let regime = params.classify_regime()?;
    if regime.tag != RegimeTag::B1 {
        return Err(HenselError::Precondition(format!(
            "fixed_point_b1 needs regime B1, parameters are in {:?}",
            regime.tag
        )));
    }
    let f = fixed_point_polynomial(params)?;
    let y = seeded_root(&f, params.k(), params.precision() as i64)?;
    let x_star = y.pow(params.k() as i64)?;
    let image = params.eval_f(&x_star)?;
    let tol = (params.precision() / 2) as i64;
    let fixed = image.agrees_with(&x_star, tol).unwrap_or(false);
    let is_one = x_star
        .agrees_with(&Padic::one(params.p(), params.precision()), tol)
        .unwrap_or(true);
    if !fixed || is_one {
        return Err(HenselError::Precondition(format!(
            "recovered root {x_star} is not a nontrivial fixed point"
        )));
    }
    Ok(x_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_ep, random_nonintegral, random_unit, rng_from};

    fn int(n: i64, p: u64, prec: u32) -> Padic {
        Padic::from_int(n, p, prec)
    }

    fn poly(cs: &[i64], p: u64, prec: u32) -> PolyZp {
        PolyZp::new(cs.iter().map(|&c| int(c, p, prec)).collect()).unwrap()
    }

    /// Brute-force square roots of −2 modulo 3^m.
    fn brute_roots(m: u32) -> Vec<u64> {
        let modulus = 3u64.pow(m);
        (0..modulus)
            .filter(|x| (x * x + 2) % modulus == 0)
            .collect()
    }

    #[test]
    fn lift_trivial_root() {
        let f = poly(&[-1, 0, 1], 5, 20);
        let r = hensel_lift(&f, &int(1, 5, 20), 20).unwrap();
        assert!(r.agrees_with(&int(1, 5, 20), 20).unwrap());
    }

    #[test]
    fn lift_sqrt_minus_two() {
        let f = poly(&[2, 0, 1], 3, 30);
        let r = hensel_lift(&f, &int(1, 3, 30).to_inexact(), 30).unwrap();
        // brute force: 4 is the root class mod 9 lifting 1 mod 3
        let mod9 = brute_roots(2);
        assert_eq!(mod9, vec![4, 5]);
        let residue = r.unit() % BigUint::from(9u32);
        assert_eq!(residue, BigUint::from(4u32));
        for m in 3..8 {
            let residue = r.unit() % BigUint::from(3u64.pow(m));
            assert!(brute_roots(m).contains(&residue.try_into().unwrap()));
        }
        assert!(r.mul(&r).add(&int(2, 3, 30)).is_err(), "r^2 + 2 vanishes to full precision");
    }

    #[test]
    fn lift_rejects_bad_seed() {
        // x^2 − 2 over 5: seed 1 gives F = −1, F' = 2 — no root nearby
        let f = poly(&[-2, 0, 1], 5, 20);
        assert!(matches!(
            hensel_lift(&f, &int(1, 5, 20), 20),
            Err(HenselError::Precondition(_))
        ));
        let g = poly(&[-1, 0, 1], 5, 20);
        assert!(matches!(
            hensel_lift(&g, &Padic::from_rational(&1.into(), &5.into(), 5, 20).unwrap(), 20),
            Err(HenselError::Precondition(_))
        ));
    }

    #[test]
    fn newton_digits_double() {
        let f = poly(&[2, 0, 1], 3, 64);
        let t = hensel_lift_traced(&f, &int(1, 3, 64).to_inexact(), 64).unwrap();
        for w in t.residuals.windows(2) {
            let (a, b) = (w[0], w[1]);
            assert!(b >= (2 * a).min(64), "residual digits {a} -> {b} did not double");
        }
        assert!(t.residuals.len() <= 8);
    }

    #[test]
    fn principal_root_of_one() {
        for k in [1, 2, 3, 9] {
            let r = principal_kth_root(&int(1, 3, 20), k).unwrap();
            assert!(r.agrees_with(&int(1, 3, 20), 20).unwrap());
        }
    }

    #[test]
    fn principal_sqrt_minus_two_in_e3() {
        let a = int(-2, 3, 40);
        let r = principal_kth_root(&a, 2).unwrap();
        assert!(r.in_ep().unwrap());
        assert_eq!(r.unit() % BigUint::from(9u32), BigUint::from(4u32));
        assert!(r.pow(2).unwrap().agrees_with(&a, 39).unwrap());
    }

    #[test]
    fn principal_root_precondition() {
        // |a − 1| = |3| = |k| for k = 3 over Q_3
        assert!(principal_kth_root(&int(4, 3, 20), 3).is_err());
        assert!(principal_kth_root(&int(2, 5, 20), 2).is_err());
        assert!(principal_kth_root(&int(10, 3, 20), 3).is_ok());
    }

    #[test]
    fn principal_root_is_unique_mod_p_power() {
        let p = 3u64;
        let mut rng = rng_from(&[b"unique-root"]);
        for k in [2u64, 3, 6] {
            let vk = v_p(k, p);
            let m = (vk + 2) as u32;
            for _ in 0..10 {
                let a = int(1, p, 30).add(&random_unit(&mut rng, p, 30).shift(vk + 1)).unwrap();
                let r = principal_kth_root(&a, k).unwrap();
                let lift_mod = BigUint::from(p).pow(m + vk as u32);
                let target = a.unit() % &lift_mod;
                let hits: Vec<u64> = (0..p.pow(m - 1))
                    .map(|c| 1 + p * c)
                    .filter(|y| BigUint::from(*y).modpow(&BigUint::from(k), &lift_mod) == target)
                    .collect();
                assert_eq!(hits.len(), 1, "k={k}");
                assert_eq!(BigUint::from(hits[0]), r.unit() % BigUint::from(p).pow(m));
            }
        }
    }

    #[test]
    fn roots_of_unity_counts() {
        let r = roots_of_unity(1, 7, 20);
        assert_eq!(r.len(), 1);
        assert!(r[0].agrees_with(&int(1, 7, 20), 20).unwrap());

        let r = roots_of_unity(4, 5, 30);
        assert_eq!(r.len(), 4);
        for (i, xi) in r.iter().enumerate() {
            assert_eq!(xi.unit() % BigUint::from(5u32), BigUint::from(i as u32 + 1));
            // brute-force power oracle on the digits
            let m = BigUint::from(5u32).pow(30);
            assert_eq!(xi.unit().modpow(&BigUint::from(4u32), &m), BigUint::from(1u32));
        }

        assert_eq!(roots_of_unity(5, 3, 20).len(), 1);
        assert_eq!(roots_of_unity(6, 7, 20).len(), 6);
        assert_eq!(roots_of_unity(2, 5, 20)[1], int(-1, 5, 20));
    }

    #[test]
    fn fixed_point_polynomial_matches_rational_oracle() {
        // g(y^k) = y clears to (1 − y)·F(y) = −y^{k+1} + θy^k − (θ+q−2)y + q − 1
        use num_rational::BigRational;
        for &(p, k, q, theta) in &[(5u64, 3u64, 5i64, (126i64, 1i64)), (3, 2, 3, (10, 1)), (7, 4, 49, (8, 1)), (5, 2, 25, (131, 6))] {
            let th = BigRational::new(theta.0.into(), theta.1.into());
            let params = MapParams::parse(p, k, &q.to_string(), &format!("{}/{}", theta.0, theta.1), 64).unwrap();
            let f = fixed_point_polynomial(&params).unwrap();
            let qr = BigRational::from_integer(q.into());
            let one = BigRational::from_integer(1.into());
            for y in [2i64, -3, 7, 11] {
                let yr = BigRational::from_integer(y.into());
                let yk = num_traits::pow(yr.clone(), k as usize);
                let rhs = -(&yk * &yr) + &th * &yk - (&th + &qr - BigRational::from_integer(2.into())) * &yr + &qr - &one;
                let expect = rhs / (&one - &yr);
                let got = f.eval(&Padic::from_int(y, p, 64)).unwrap();
                assert!(got.agrees_with(&Padic::from_exact(expect, p, 64), 60).unwrap(), "p={p} k={k} y={y}");
            }
        }
    }

    #[test]
    fn powers_stay_far_from_distant_targets() {
        // a ∈ E_p, |a − 1| ≥ |k|  ⟹  |x^k − a| ≥ |a − 1| for all x
        let mut rng = rng_from(&[b"lower-bound"]);
        for &(p, k) in &[(3u64, 3u64), (3, 9), (5, 10), (7, 7)] {
            let vk = v_p(k, p);
            for i in 0..30 {
                let d = 1 + (i as i64 % vk);
                let a = int(1, p, 30).add(&random_unit(&mut rng, p, 30).shift(d)).unwrap();
                let x = match i % 3 {
                    0 => random_unit(&mut rng, p, 30),
                    1 => random_ep(&mut rng, p, 30),
                    _ => random_nonintegral(&mut rng, p, 30),
                };
                let lhs = x.pow(k as i64).unwrap().sub(&a).unwrap();
                assert!(lhs.norm_exp() <= NormExp::Finite(d));
            }
        }
    }
}
