//! Deterministic sampling of p-adic test points.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::padic::{Ball, Padic};

/// A reproducible generator keyed by an arbitrary list of byte strings.
pub fn rng_from(parts: &[&[u8]]) -> ChaCha8Rng {
    let mut h = Sha256::new();
    for part in parts {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    let digest = h.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest[..32]);
    ChaCha8Rng::from_seed(seed)
}

fn random_digits<R: Rng>(rng: &mut R, p: u64, digits: u32) -> BigUint {
    let mut acc = BigUint::from(0u32);
    for _ in 0..digits {
        acc = acc * p + rng.gen_range(0..p);
    }
    acc
}

/// A uniformly random unit of `Z_p` known to `prec` digits.
pub fn random_unit<R: Rng>(rng: &mut R, p: u64, prec: u32) -> Padic {
    let lead = rng.gen_range(1..p);
    let rest = random_digits(rng, p, prec - 1);
    Padic::from_parts(p, 0, rest * p + lead, prec).expect("leading digit is nonzero")
}

/// A random element of `Z_p`. The valuation is geometric, like Haar measure,
/// truncated at `prec / 2`.
pub fn random_zp<R: Rng>(rng: &mut R, p: u64, prec: u32) -> Padic {
    let mut v = 0;
    while v < (prec / 2) as i64 && rng.gen_range(0..p) == 0 {
        v += 1;
    }
    random_unit(rng, p, prec).shift(v)
}

/// A random element of `E_p = 1 + pZ_p`.
pub fn random_ep<R: Rng>(rng: &mut R, p: u64, prec: u32) -> Padic {
    let one = Padic::one(p, prec);
    one.add(&random_zp(rng, p, prec).shift(1))
        .expect("1 + pZ_p never cancels")
}

/// A random element of `Q_p \ Z_p` with norm between `p` and `p^3`.
pub fn random_nonintegral<R: Rng>(rng: &mut R, p: u64, prec: u32) -> Padic {
    let v = -rng.gen_range(1..=3i64);
    random_unit(rng, p, prec).shift(v)
}

/// A random point of an open ball.
pub fn random_in_ball<R: Rng>(rng: &mut R, ball: &Ball, prec: u32) -> Padic {
    let p = ball.center.prime();
    let offset = random_zp(rng, p, prec).shift(ball.radius_exp + 1);
    ball.center
        .add(&offset)
        .expect("offset is strictly smaller than the ball radius")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_stream() {
        let mut a = rng_from(&[b"x", b"1"]);
        let mut b = rng_from(&[b"x", b"1"]);
        let mut c = rng_from(&[b"x1"]);
        let xa = random_unit(&mut a, 5, 20);
        assert_eq!(xa, random_unit(&mut b, 5, 20));
        assert_ne!(xa, random_unit(&mut c, 5, 20));
    }

    #[test]
    fn families_have_expected_norms() {
        let mut rng = rng_from(&[b"families"]);
        for _ in 0..50 {
            assert!(random_unit(&mut rng, 7, 16).is_unit());
            assert!(random_zp(&mut rng, 7, 16).is_integral());
            assert!(random_ep(&mut rng, 7, 16).in_ep().unwrap());
            assert!(!random_nonintegral(&mut rng, 7, 16).is_integral());
        }
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = rng_from(&[b"ball"]);
        let ball = Ball::new(Padic::from_int(3, 5, 30), 4);
        for _ in 0..50 {
            let x = random_in_ball(&mut rng, &ball, 30);
            assert!(ball.contains(&x).unwrap());
        }
    }
}
