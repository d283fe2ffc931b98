//! Textual encodings.
//!
//! Long form: `5^1 * (3 + 2*5 + 4*5^3) O(5^21)`, listing the nonzero digits
//! of the unit and the first unknown power. Exact zero prints as `0`.
//!
//! Compact form: `v:u:N` with `u` the unit residue in decimal and `N` the
//! relative precision; exact zero is `inf:0:N`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{p_pow, Padic, PadicError};

impl Padic {
    pub fn to_compact(&self) -> String {
        if self.is_zero() {
            return format!("inf:0:{}", self.prec);
        }
        format!("{}:{}:{}", self.valuation, self.unit, self.prec)
    }

    pub fn parse_compact(s: &str, prime: u64) -> Result<Padic, PadicError> {
        let bad = || PadicError::Parse(format!("expected v:u:N, got {s:?}"));
        let mut parts = s.trim().split(':');
        let (v, u, n) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(v), Some(u), Some(n), None) => (v, u, n),
            _ => return Err(bad()),
        };
        let prec: u32 = n.parse().map_err(|_| bad())?;
        if prec == 0 {
            return Err(bad());
        }
        if v == "inf" {
            return if u == "0" { Ok(Padic::zero(prime, prec)) } else { Err(bad()) };
        }
        let valuation: i64 = v.parse().map_err(|_| bad())?;
        let unit: BigUint = u.parse().map_err(|_| bad())?;
        if unit.is_zero() || &unit % prime == BigUint::zero() || unit >= p_pow(prime, prec) {
            return Err(PadicError::Parse(format!(
                "unit {unit} must be a residue mod {prime}^{prec} coprime to {prime}"
            )));
        }
        Padic::from_parts(prime, valuation, unit, prec)
    }

    /// Parses either encoding; the prime is read from the long form.
    pub fn parse(s: &str, prime: u64) -> Result<Padic, PadicError> {
        let t = s.trim();
        if t == "0" {
            Ok(Padic::zero(prime, super::DEFAULT_PRECISION))
        } else if t.contains(':') {
            Padic::parse_compact(t, prime)
        } else {
            let x = parse_long(t)?;
            if x.prime() != prime {
                return Err(PadicError::Parse(format!(
                    "expected a {prime}-adic number, got base {}",
                    x.prime()
                )));
            }
            Ok(x)
        }
    }
}

fn parse_power(s: &str) -> Result<(u64, i64), PadicError> {
    let bad = || PadicError::Parse(format!("expected p^e, got {s:?}"));
    let (base, exp) = match s.split_once('^') {
        Some((b, e)) => (b.trim(), e.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim(), 1),
    };
    Ok((base.parse().map_err(|_| bad())?, exp))
}

/// Parses `p^v * (terms) O(p^M)`; the precision is `M − v`.
pub fn parse_long(s: &str) -> Result<Padic, PadicError> {
    let bad = |why: &str| PadicError::Parse(format!("{why} in {s:?}"));
    let s = s.trim();
    let (head, rest) = s.split_once('*').ok_or_else(|| bad("missing '*'"))?;
    let (prime, valuation) = parse_power(head)?;
    if prime < 2 {
        return Err(bad("bad prime"));
    }
    let rest = rest.trim();
    let open = rest.strip_prefix('(').ok_or_else(|| bad("missing '('"))?;
    let (terms, tail) = open.split_once(')').ok_or_else(|| bad("missing ')'"))?;
    let tail = tail.trim();
    let big_o = tail
        .strip_prefix("O(")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| bad("missing O(p^M)"))?;
    let (o_prime, abs) = parse_power(big_o)?;
    if o_prime != prime {
        return Err(bad("mismatched primes"));
    }
    let prec = abs - valuation;
    if prec < 1 {
        return Err(bad("no known digits"));
    }
    let prec = prec as u32;
    let mut unit = BigUint::zero();
    for term in terms.split('+') {
        let term = term.trim();
        let (digit, exp) = match term.split_once('*') {
            Some((d, pw)) => {
                let (b, e) = parse_power(pw)?;
                if b != prime {
                    return Err(bad("digit power over a different prime"));
                }
                (d.trim(), e)
            }
            None => (term, 0),
        };
        let d: u64 = digit.parse().map_err(|_| bad("bad digit"))?;
        if d >= prime || exp < 0 || exp >= prec as i64 {
            return Err(bad("digit out of range"));
        }
        unit += BigUint::from(d) * p_pow(prime, exp as u32);
    }
    if &unit % prime == BigUint::zero() {
        return Err(bad("leading digit must be nonzero"));
    }
    Padic::from_parts(prime, valuation, unit, prec)
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let p = self.prime;
        write!(f, "{p}^{} * (", self.valuation)?;
        let mut first = true;
        for (j, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{d}")?,
                1 => write!(f, "{d}*{p}")?,
                _ => write!(f, "{d}*{p}^{j}")?,
            }
        }
        write!(f, ") O({p}^{})", self.valuation + self.prec as i64)
    }
}
