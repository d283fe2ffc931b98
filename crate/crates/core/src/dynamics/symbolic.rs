use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::{Serialize, Serializer};

use super::{DynError, PottsSystem};
use crate::padic::{Ball, Padic};
use crate::sampling::{random_in_ball, rng_from};

/// A finite word over the symbols `1..=κ_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Itinerary(Vec<usize>);

impl Itinerary {
    pub fn new(symbols: Vec<usize>) -> Self {
        Itinerary(symbols)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `kappa^n` words of length `n`, lexicographically.
    pub fn all_words(kappa: usize, n: usize) -> Vec<Itinerary> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (1..=kappa).map(move |s| {
                        let mut v = w.clone();
                        v.push(s);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(Itinerary).collect()
    }

    /// Whether every consecutive pair is allowed by `a`.
    pub fn is_admissible(&self, a: &IncidenceMatrix) -> bool {
        self.0.windows(2).all(|w| a.entry(w[0], w[1]) == 1)
    }

    pub fn parse(s: &str) -> Option<Itinerary> {
        let s = s.trim();
        let syms: Option<Vec<usize>> = if s.contains(['.', ',']) {
            s.split(['.', ',']).map(|t| t.trim().parse().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        syms.map(Itinerary)
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().any(|&s| s > 9) { "." } else { "" };
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(sep))
    }
}

impl Serialize for Itinerary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `κ_p × κ_p` 0/1 matrix, indexed by 1-based symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub rows: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.rows[i - 1][j - 1]
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn is_all_ones(&self) -> bool {
        self.rows.iter().flatten().all(|&e| e == 1)
    }

    /// Irreducible iff every state reaches every other.
    pub fn is_irreducible(&self) -> bool {
        let n = self.size();
        (0..n).all(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for (j, &e) in self.rows[i].iter().enumerate() {
                    if e == 1 && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.iter().all(|&b| b)
        })
    }
}

const INCIDENCE_SAMPLES: usize = 16;

impl PottsSystem {
    fn check_word(&self, w: &Itinerary) -> Result<(), DynError> {
        let kappa = self.require_partition()?.len();
        if w.is_empty() {
            return Err(DynError::EmptyWord);
        }
        match w.symbols().iter().find(|&&s| s == 0 || s > kappa) {
            Some(&s) => Err(DynError::BadSymbol(s, kappa)),
            None => Ok(()),
        }
    }

    /// `x = h_{w_0} ∘ … ∘ h_{w_{n−1}}(c)` for the first partition center `c`,
    /// with the ball of radius `|q(θ−1)|·p^{−Στ}` around it that contains the
    /// whole cylinder of `w`.
    pub fn cylinder_point(&self, w: &Itinerary) -> Result<(Padic, Ball), DynError> {
        self.check_word(w)?;
        let part = self.require_partition()?;
        let mut x = part.balls[0].center.clone();
        for &s in w.symbols().iter().rev() {
            x = self.params.inverse_branch(part, s, &x)?;
        }
        let radius_exp = part.radius_exp + w.symbols().iter().map(|&s| part.tau(s)).sum::<i64>();
        if radius_exp + 1 > x.known_digits() {
            return Err(DynError::TooDeep { depth: w.len(), needed: radius_exp + 1, available: x.known_digits() });
        }
        Ok((x.clone(), Ball::new(x, radius_exp)))
    }

    /// The periodic point with itinerary `w w w …`, as the fixed point of
    /// the contracting branch cycle `h_{w_0} ∘ … ∘ h_{w_{m−1}}`.
    pub fn periodic_point(&self, w: &Itinerary) -> Result<Padic, DynError> {
        self.check_word(w)?;
        let part = self.require_partition()?;
        let contraction: i64 = w.symbols().iter().map(|&s| part.tau(s)).sum();
        let rounds = self.params.precision() as i64 / contraction + 4;
        let mut x = part.balls[0].center.clone();
        for _ in 0..rounds {
            let mut y = x.clone();
            for &s in w.symbols().iter().rev() {
                y = self.params.inverse_branch(part, s, &y)?;
            }
            let settled = y.separation(&x).lower_bound() >= y.known_digits();
            x = y;
            if settled {
                break;
            }
        }
        Ok(x)
    }

    /// `∏_{t<m} f'(f^t(x))`.
    pub fn cycle_multiplier(&self, x: &Padic, m: usize) -> Result<Padic, DynError> {
        let mut y = x.clone();
        let mut lambda = Padic::one(x.prime(), self.params.precision());
        for _ in 0..m {
            lambda = lambda.mul(&self.params.derivative(&y)?);
            y = self.params.eval_f(&y)?;
        }
        Ok(lambda)
    }

    /// Verifies each `A_{ij}` by sampling `z ∈ B_j`, pulling back with `h_i`
    /// and checking that the preimage lies in `B_i` and maps onto `z`.
    pub fn incidence_matrix(&self) -> Result<IncidenceMatrix, DynError> {
        let part = self.require_partition()?;
        let n = part.len();
        let tol = self.verify_digits();
        let key = self.params.digest_key();
        let mut rows = vec![vec![0u8; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                let mut rng = rng_from(&[b"incidence", key.as_bytes(), &(i as u64).to_le_bytes(), &(j as u64).to_le_bytes()]);
                let target = &part.ball(j).unwrap().ball;
                let mut hits = 0;
                for _ in 0..INCIDENCE_SAMPLES {
                    let z = random_in_ball(&mut rng, target, self.params.precision());
                    let x = self.params.inverse_branch(part, i, &z)?;
                    let lands = part.ball(i).unwrap().ball.contains(&x)?;
                    let maps_back = self.params.eval_f(&x)?.agrees_with(&z, tol)?;
                    if lands && maps_back {
                        hits += 1;
                    }
                }
                rows[i - 1][j - 1] = match hits {
                    0 => 0,
                    h if h == INCIDENCE_SAMPLES => 1,
                    h => {
                        return Err(DynError::VerificationFailure(format!(
                            "entry ({i},{j}): {h} of {INCIDENCE_SAMPLES} samples pull back into B_{i}"
                        )))
                    }
                };
            }
        }
        Ok(IncidenceMatrix { rows })
    }

    /// Exponent `e` of `d_f(wx, wy) = p^{−e}`: `Σ_{j<n} τ_{wx_j} + κ(wx_n, wy_n)`
    /// with `n` the first disagreement.
    pub fn df_exponent(&self, wx: &Itinerary, wy: &Itinerary) -> Result<i64, DynError> {
        self.check_word(wx)?;
        self.check_word(wy)?;
        let part = self.require_partition()?;
        let n = wx
            .symbols()
            .iter()
            .zip(wy.symbols())
            .position(|(a, b)| a != b)
            .ok_or(DynError::IdenticalPrefix)?;
        let prefix: i64 = wx.symbols()[..n].iter().map(|&s| part.tau(s)).sum();
        Ok(prefix + part.center_separation(wx.symbols()[n], wy.symbols()[n]).unwrap())
    }

    /// `d_f(wx, wy)` as an exact rational.
    pub fn df_metric(&self, wx: &Itinerary, wy: &Itinerary) -> Result<BigRational, DynError> {
        let e = self.df_exponent(wx, wy)?;
        let pe = BigInt::from(self.params.p()).pow(e.unsigned_abs());
        Ok(if e >= 0 {
            BigRational::new(1.into(), pe)
        } else {
            BigRational::from_integer(pe)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::NormExp;
    use crate::potts::MapParams;

    fn system(k: u64) -> PottsSystem {
        PottsSystem::new(MapParams::parse(5, k, "5", "1+5^3", 64).unwrap()).unwrap()
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(Itinerary::all_words(2, 3).len(), 8);
        assert_eq!(Itinerary::all_words(3, 0), vec![Itinerary::default()]);
        assert_eq!(Itinerary::parse("1212").unwrap().to_string(), "1212");
        assert_eq!(Itinerary::parse("1.12").unwrap().to_string(), "1.12");
    }

    #[test]
    fn single_symbol_cylinder() {
        let s = system(2);
        for i in 1..=2 {
            let (x, ball) = s.cylinder_point(&Itinerary::new(vec![i])).unwrap();
            assert!(s.partition().unwrap().ball(i).unwrap().ball.contains(&x).unwrap());
            assert_eq!(ball.radius_exp, 4 + s.partition().unwrap().tau(i));
        }
    }

    #[test]
    fn cylinder_round_trip() {
        let s = system(2);
        for w in Itinerary::all_words(2, 5) {
            let (x, _) = s.cylinder_point(&w).unwrap();
            assert_eq!(s.itinerary_of(&x, w.len()).unwrap(), w);
        }
    }

    #[test]
    fn isometry_on_short_words() {
        let s = system(2);
        let words = Itinerary::all_words(2, 4);
        let pts: Vec<Padic> = words.iter().map(|w| s.cylinder_point(w).unwrap().0).collect();
        for a in 0..words.len() {
            for b in a + 1..words.len() {
                let d = pts[a].sub(&pts[b]).unwrap().norm_exp();
                assert_eq!(d, NormExp::Finite(s.df_exponent(&words[a], &words[b]).unwrap()));
            }
        }
    }

    #[test]
    fn df_definition() {
        let s = system(2);
        let part = s.partition().unwrap();
        let k12 = part.center_separation(1, 2).unwrap();
        let w = |v: Vec<usize>| Itinerary::new(v);
        assert_eq!(s.df_exponent(&w(vec![1]), &w(vec![2])).unwrap(), k12);
        assert_eq!(s.df_exponent(&w(vec![2, 2, 1]), &w(vec![2, 2, 2])).unwrap(), 8 + k12);
        assert_eq!(s.df_exponent(&w(vec![1, 2]), &w(vec![1, 2, 1])), Err(DynError::IdenticalPrefix));
        let d = s.df_metric(&w(vec![1]), &w(vec![2])).unwrap();
        assert_eq!(d, BigRational::new(1.into(), BigInt::from(5).pow(k12 as u32)));
    }

    #[test]
    fn periodic_points_repel() {
        let s = system(2);
        let part = s.partition().unwrap();
        for w in [vec![1], vec![2], vec![1, 2], vec![2, 2, 1]] {
            let w = Itinerary::new(w);
            let x = s.periodic_point(&w).unwrap();
            let back = s.iterate(&x, w.len()).unwrap();
            assert!(back.agrees_with(&x, 30).unwrap());
            let lam = s.cycle_multiplier(&x, w.len()).unwrap();
            let sum: i64 = w.symbols().iter().map(|&i| part.tau(i)).sum();
            assert_eq!(lam.norm_exp(), NormExp::Finite(-sum));
        }
    }

    #[test]
    fn incidence_all_ones() {
        for k in [2, 4] {
            let a = system(k).incidence_matrix().unwrap();
            assert_eq!(a.size(), k as usize);
            assert!(a.is_all_ones());
            assert!(a.is_irreducible());
        }
        let b1 = PottsSystem::new(MapParams::parse(5, 3, "5", "1+5^3", 64).unwrap()).unwrap();
        assert_eq!(b1.incidence_matrix().unwrap().rows, vec![vec![1]]);
    }

    #[test]
    fn b1_constant_word() {
        let s = PottsSystem::new(MapParams::parse(5, 3, "5", "1+5^3", 64).unwrap()).unwrap();
        let x = s.periodic_point(&Itinerary::new(vec![1])).unwrap();
        assert_eq!(s.itinerary_of(&x, 6).unwrap(), Itinerary::new(vec![1; 6]));
    }

    #[test]
    fn bad_words() {
        let s = system(2);
        assert_eq!(s.cylinder_point(&Itinerary::default()).unwrap_err(), DynError::EmptyWord);
        assert_eq!(s.cylinder_point(&Itinerary::new(vec![3])).unwrap_err(), DynError::BadSymbol(3, 2));
    }

    #[test]
    fn too_deep_is_reported() {
        let s = PottsSystem::new(MapParams::parse(5, 2, "5", "1+5^3", 24).unwrap()).unwrap();
        let err = s.cylinder_point(&Itinerary::new(vec![2; 8])).unwrap_err();
        assert!(matches!(err, DynError::TooDeep { .. }), "{err:?}");
    }
}
