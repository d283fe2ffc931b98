//! Orbits, basins, itineraries and the symbolic model of the Julia set.

mod poles;
mod symbolic;

pub use symbolic::{IncidenceMatrix, Itinerary};

use serde::Serialize;
use thiserror::Error;

use crate::padic::{NormExp, Padic, PadicError, Separation};
use crate::potts::{MapError, MapParams, Partition, Regime, RegimeTag};

pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_TOL: i64 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("operation needs regime B, parameters are in regime {0}")]
    NotRegimeB(RegimeTag),
    #[error("parameters are unclassified: {0}")]
    Unclassified(String),
    #[error("orbit leaves X at step {0}")]
    LeftX(usize),
    #[error("word is empty")]
    EmptyWord,
    #[error("symbol {0} is not in 1..={1}")]
    BadSymbol(usize, usize),
    #[error("words agree on their common prefix; d_f is undefined at this length")]
    IdenticalPrefix,
    #[error("depth {depth} needs {needed} digits, only {available} available")]
    TooDeep { depth: usize, needed: i64, available: i64 },
    #[error("pole tree would have {0} points (cap is 100000)")]
    TreeTooLarge(u128),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
}

impl DynError {
    /// True for failures that more working precision could cure.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            DynError::Padic(_) | DynError::Map(MapError::Padic(_)) | DynError::TooDeep { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UndecidedReason {
    Precision,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OrbitStatus {
    ConvergedTo1 { iterations: usize },
    StayedInX { itinerary: Itinerary },
    PoleHit { step: usize },
    Undecided { reason: UndecidedReason },
}

#[derive(Debug, Clone)]
pub struct OrbitResult {
    pub trajectory: Vec<Padic>,
    pub status: OrbitStatus,
}

impl OrbitResult {
    /// `norm_exp(x_last − 1)`, or its lower bound when undecidable.
    pub fn final_distance_to_one(&self) -> Option<Separation> {
        let x = self.trajectory.last()?;
        Some(x.separation(&Padic::one(x.prime(), x.rel_prec())))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// Converges to 1; `step` is when the orbit left `X` (regime B) or was
    /// certified contracting near 1 (regime A).
    Basin { step: usize },
    /// Stayed in `X` for `depth` steps. Membership in the Julia set is only
    /// certified to that depth.
    JuliaCandidate { itinerary: Itinerary, depth: usize },
    PolePreimage { n: usize },
    Undecided { reason: UndecidedReason, step: usize },
}

/// Parameters together with their regime and, in regime B, the partition.
#[derive(Debug, Clone)]
pub struct PottsSystem {
    params: MapParams,
    regime: Regime,
    partition: Option<Partition>,
}

impl PottsSystem {
    pub fn new(params: MapParams) -> Result<Self, DynError> {
        let regime = params.classify_regime()?;
        let partition = if regime.is_b() { Some(params.build_partition()?) } else { None };
        Ok(PottsSystem { params, regime, partition })
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn partition(&self) -> Option<&Partition> {
        self.partition.as_ref()
    }

    pub(crate) fn require_partition(&self) -> Result<&Partition, DynError> {
        self.partition.as_ref().ok_or(DynError::NotRegimeB(self.regime.tag))
    }

    /// Digits required for a "to precision" equality check.
    pub fn verify_digits(&self) -> i64 {
        (self.params.precision() / 2) as i64
    }

    pub fn orbit(&self, x0: &Padic, max_iter: usize, tol: i64) -> OrbitResult {
        let one = self.params.one();
        let mut x = x0.clone();
        let mut trajectory = vec![x.clone()];
        let mut itinerary = Vec::new();
        let mut always_in_x = self.partition.is_some();
        let done = |trajectory, status| OrbitResult { trajectory, status };
        for t in 0..=max_iter {
            let near = x.separation(&one);
            let next = self.params.eval_f(&x);
            match near {
                Separation::Known(NormExp::Infinite) => {
                    return done(trajectory, OrbitStatus::ConvergedTo1 { iterations: t })
                }
                Separation::Beyond(b) if b >= tol => {
                    return done(trajectory, OrbitStatus::ConvergedTo1 { iterations: t })
                }
                Separation::Known(NormExp::Finite(d)) if d >= tol => {
                    if let Ok(y) = &next {
                        if y.separation(&one).lower_bound() > d {
                            return done(trajectory, OrbitStatus::ConvergedTo1 { iterations: t });
                        }
                    }
                }
                _ => {}
            }
            if let Some(part) = &self.partition {
                match part.locate(&x) {
                    Ok(Some(s)) if always_in_x => itinerary.push(s),
                    Ok(_) => always_in_x = false,
                    Err(_) => break,
                }
            }
            if t == max_iter {
                break;
            }
            x = match next {
                Ok(y) => y,
                Err(MapError::PoleHit) => return done(trajectory, OrbitStatus::PoleHit { step: t + 1 }),
                Err(_) => break,
            };
            trajectory.push(x.clone());
        }
        let status = if always_in_x && !itinerary.is_empty() {
            OrbitStatus::StayedInX { itinerary: Itinerary::new(itinerary) }
        } else if trajectory.len() > max_iter {
            OrbitStatus::Undecided { reason: UndecidedReason::Budget }
        } else {
            OrbitStatus::Undecided { reason: UndecidedReason::Precision }
        };
        done(trajectory, status)
    }

    /// Basin / Julia candidate / pole preimage trichotomy up to `depth` steps.
    pub fn basin_classify(&self, x0: &Padic, depth: usize) -> Result<Classification, DynError> {
        match self.regime.tag {
            RegimeTag::Unclassified => {
                return Err(DynError::Unclassified(self.params.gap_violation().unwrap_or_default()))
            }
            RegimeTag::A => {
                let r = self.orbit(x0, DEFAULT_MAX_ITER.max(depth), DEFAULT_TOL);
                return Ok(match r.status {
                    OrbitStatus::ConvergedTo1 { iterations } => Classification::Basin { step: iterations },
                    OrbitStatus::PoleHit { step } => Classification::PolePreimage { n: step },
                    OrbitStatus::Undecided { reason } => {
                        Classification::Undecided { reason, step: r.trajectory.len() - 1 }
                    }
                    OrbitStatus::StayedInX { .. } => unreachable!("regime A has no partition"),
                });
            }
            RegimeTag::B1 | RegimeTag::B2 => {}
        }
        let part = self.require_partition()?;
        let precision = |step| Ok(Classification::Undecided { reason: UndecidedReason::Precision, step });
        let mut x = x0.clone();
        let mut word = Vec::with_capacity(depth);
        for t in 0..depth {
            if self.params.is_pole(&x) {
                return Ok(Classification::PolePreimage { n: t });
            }
            match part.locate(&x) {
                Ok(Some(s)) => word.push(s),
                Ok(None) => return Ok(Classification::Basin { step: t }),
                Err(_) => return precision(t),
            }
            x = match self.params.eval_f(&x) {
                Ok(y) => y,
                Err(MapError::PoleHit) => return Ok(Classification::PolePreimage { n: t + 1 }),
                Err(_) => return precision(t + 1),
            };
        }
        if self.params.is_pole(&x) {
            return Ok(Classification::PolePreimage { n: depth });
        }
        Ok(Classification::JuliaCandidate { itinerary: Itinerary::new(word), depth })
    }

    /// Symbols of `x0, f(x0), …, f^{n−1}(x0)`.
    pub fn itinerary_of(&self, x0: &Padic, n: usize) -> Result<Itinerary, DynError> {
        let part = self.require_partition()?;
        let mut x = x0.clone();
        let mut word = Vec::with_capacity(n);
        for t in 0..n {
            match part.locate(&x)? {
                Some(s) => word.push(s),
                None => return Err(DynError::LeftX(t)),
            }
            if t + 1 < n {
                x = self.params.eval_f(&x)?;
            }
        }
        Ok(Itinerary::new(word))
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: &Padic, n: usize) -> Result<Padic, MapError> {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.params.eval_f(&y)?;
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_in_ball, random_zp, rng_from};

    fn system(p: u64, k: u64, q: &str, theta: &str) -> PottsSystem {
        PottsSystem::new(MapParams::parse(p, k, q, theta, 64).unwrap()).unwrap()
    }

    #[test]
    fn one_converges_immediately() {
        let s = system(3, 3, "3", "1+9");
        let r = s.orbit(&s.params().one(), 200, 20);
        assert_eq!(r.status, OrbitStatus::ConvergedTo1 { iterations: 0 });
    }

    #[test]
    fn regime_a_orbit_of_five() {
        let s = system(3, 3, "3", "1+9");
        let x0 = Padic::from_int(5, 3, 64);
        let r = s.orbit(&x0, 200, 20);
        let OrbitStatus::ConvergedTo1 { iterations } = r.status else { panic!("{:?}", r.status) };
        // once in K₁ = B_{|q+θ−1|}(1) each step gains a digit
        let one = s.params().one();
        let radius = s.params().norm_shifted().finite().unwrap();
        let d: Vec<i64> = r.trajectory.iter().map(|x| x.separation(&one).lower_bound()).collect();
        let entry = d.iter().position(|&v| v > radius).unwrap();
        for w in d[entry..].windows(2) {
            assert!(w[1] > w[0], "{d:?}");
        }
        assert!(iterations <= 200);
    }

    #[test]
    fn periodic_point_stays_in_x() {
        let s = system(5, 2, "5", "1+5^3");
        let x = s.periodic_point(&Itinerary::new(vec![2, 1])).unwrap();
        let r = s.orbit(&x, 200, 20);
        let OrbitStatus::StayedInX { itinerary } = r.status else { panic!("{:?}", r.status) };
        assert!(itinerary.len() > 8);
        assert!(itinerary.symbols().chunks(2).all(|c| c[0] == 2 && c.get(1).is_none_or(|&b| b == 1)));
    }

    #[test]
    fn centers_start_in_x_then_escape() {
        // the centers are approximate: they leave X after finitely many steps
        let s = system(5, 2, "5", "1+5^3");
        let part = s.partition().unwrap();
        for b in &part.balls {
            assert_eq!(part.locate(&b.center).unwrap(), Some(b.symbol));
            let r = s.orbit(&b.center, 200, 20);
            assert!(matches!(r.status, OrbitStatus::ConvergedTo1 { .. }), "{:?}", r.status);
        }
    }

    #[test]
    fn far_points_are_basin() {
        // |x − 1 + q| ≥ |q|
        let s = system(5, 2, "5", "1+5^3");
        for n in [0, 2, 3, 7, -3] {
            let x = Padic::from_int(n, 5, 64);
            assert_eq!(s.basin_classify(&x, 10).unwrap(), Classification::Basin { step: 0 });
        }
    }

    #[test]
    fn pole_preimage_by_one_step() {
        let s = system(5, 2, "5", "1+5^3");
        let part = s.partition().unwrap();
        for b in &part.balls {
            let z = s.params().inverse_branch(part, b.symbol, s.params().pole()).unwrap();
            assert_eq!(s.basin_classify(&z, 10).unwrap(), Classification::PolePreimage { n: 1 });
        }
        assert_eq!(s.basin_classify(s.params().pole(), 10).unwrap(), Classification::PolePreimage { n: 0 });
    }

    #[test]
    fn shift_equivariance() {
        let s = system(5, 2, "5", "1+5^3");
        let w = Itinerary::new(vec![1, 2, 2, 1, 2, 1]);
        let (x, _) = s.cylinder_point(&w).unwrap();
        let full = s.itinerary_of(&x, 6).unwrap();
        let tail = s.itinerary_of(&s.params().eval_f(&x).unwrap(), 5).unwrap();
        assert_eq!(full, w);
        assert_eq!(tail.symbols(), &full.symbols()[1..]);
    }

    #[test]
    fn basin_points_never_reenter() {
        let s = system(5, 2, "5", "1+5^3");
        let part = s.partition().unwrap();
        let mut rng = rng_from(&[b"reenter"]);
        for _ in 0..100 {
            let x = random_zp(&mut rng, 5, 64);
            if let Classification::Basin { step } = s.basin_classify(&x, 30).unwrap() {
                let mut y = s.iterate(&x, step).unwrap();
                for _ in 0..10 {
                    assert_eq!(part.locate(&y).unwrap(), None);
                    y = s.params().eval_f(&y).unwrap();
                }
            }
        }
    }

    #[test]
    fn in_ball_samples_leave_quickly() {
        let s = system(5, 2, "5", "1+5^3");
        let part = s.partition().unwrap();
        let mut rng = rng_from(&[b"ball"]);
        let x = random_in_ball(&mut rng, &part.balls[0].ball, 64);
        let c = s.basin_classify(&x, 40).unwrap();
        assert!(matches!(c, Classification::Basin { step } if step >= 1), "{c:?}");
    }

    #[test]
    fn unclassified_is_refused() {
        let s = system(5, 2, "5", "1+5^2");
        assert!(matches!(
            s.basin_classify(&Padic::from_int(3, 5, 64), 5),
            Err(DynError::Unclassified(_))
        ));
    }
}
