//! Parsing of θ.
//!
//! ```text
//! theta    := rational | shifted | padic
//! rational := int [ "/" int ]
//! shifted  := "1" ("+" | "-") ( int | [ int "*" ] base [ "^" int ] )
//! base     := "p" | <the prime in decimal>
//! padic    := <long or compact Padic encoding>
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::MapError;
use crate::padic::Padic;

pub fn parse_theta(s: &str, p: u64, prec: u32) -> Result<Padic, MapError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || MapError::InvalidTheta(format!("cannot parse {s:?}; expected a/b, 1+c*p^m or a p-adic encoding"));
    if t.is_empty() {
        return Err(bad());
    }
    if t.contains(':') || t.contains("O(") {
        return Padic::parse(&t, p).map(|x| x.with_prec(prec)).map_err(|_| bad());
    }
    if let Some(r) = parse_rational(&t) {
        if r.denom().is_zero() {
            return Err(MapError::InvalidTheta("zero denominator".into()));
        }
        return Ok(Padic::from_exact(r, p, prec));
    }
    let rest = t.strip_prefix('1').ok_or_else(bad)?;
    let (sign, term) = match rest.chars().next() {
        Some('+') => (1, &rest[1..]),
        Some('-') => (-1, &rest[1..]),
        _ => return Err(bad()),
    };
    if let Ok(n) = term.parse::<BigInt>() {
        return Ok(Padic::from_exact(BigRational::from_integer(1 + sign * n), p, prec));
    }
    let (coeff, power) = match term.split_once('*') {
        Some((c, pw)) => (c.parse::<BigInt>().map_err(|_| bad())?, pw),
        None => (BigInt::from(1), term),
    };
    let (base, exp) = match power.split_once('^') {
        Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
        None => (power, 1),
    };
    if base != "p" && base.parse::<u64>().ok() != Some(p) {
        return Err(bad());
    }
    let value = BigInt::from(1) + sign * coeff * BigInt::from(p).pow(exp);
    Ok(Padic::from_exact(BigRational::from_integer(value), p, prec))
}

fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().ok()?;
            let b: BigInt = b.parse().ok()?;
            if b.is_zero() {
                // surfaced as an error by the caller
                return Some(BigRational::new_raw(a, b));
            }
            Some(BigRational::new(a, b))
        }
        None => t.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: i64) -> Padic {
        Padic::from_int(n, 5, 32)
    }

    #[test]
    fn shorthand_forms() {
        assert_eq!(parse_theta("1+5^3", 5, 32).unwrap(), exact(126));
        assert_eq!(parse_theta("1 + p^3", 5, 32).unwrap(), exact(126));
        assert_eq!(parse_theta("1-2*p^2", 5, 32).unwrap(), exact(-49));
        assert_eq!(parse_theta("1+p", 5, 32).unwrap(), exact(6));
        assert_eq!(parse_theta("126", 5, 32).unwrap(), exact(126));
        assert_eq!(parse_theta("1+125", 5, 32).unwrap(), exact(126));
    }

    #[test]
    fn rational_form() {
        let x = parse_theta("131/6", 5, 32).unwrap();
        assert_eq!(x.to_rational().unwrap(), BigRational::new(131.into(), 6.into()));
        assert!(matches!(parse_theta("1/0", 5, 32), Err(MapError::InvalidTheta(_))));
    }

    #[test]
    fn malformed() {
        for s in ["", "1+3^2", "theta", "1*5^2", "1+5^x"] {
            assert!(parse_theta(s, 5, 32).is_err(), "{s}");
        }
    }
}
