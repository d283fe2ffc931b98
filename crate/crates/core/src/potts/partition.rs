use serde::Serialize;

use super::{MapError, MapParams, RegimeTag};
use crate::hensel::roots_of_unity;
use crate::padic::{Ball, Padic, PadicError, Separation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionBall {
    /// 1-based symbol.
    pub symbol: usize,
    pub xi: Padic,
    pub center: Padic,
    pub ball: Ball,
    pub tau: i64,
}

/// The cover `X` of regime B: `κ_p` disjoint balls of radius `|q(θ−1)|_p`.
#[derive(Debug, Clone)]
pub struct Partition {
    pub radius_exp: i64,
    pub balls: Vec<PartitionBall>,
    regime: RegimeTag,
    /// `κ(i, j) = norm_exp(center_i − center_j)` for `i ≠ j`.
    center_sep: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionJson {
    pub p: u64,
    pub k: u64,
    pub q: String,
    pub theta: String,
    pub regime: RegimeTag,
    pub kappa: u64,
    pub radius_exp: i64,
    pub balls: Vec<BallJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallJson {
    pub symbol: usize,
    pub xi: String,
    pub center: String,
    pub tau: i64,
}

impl Partition {
    pub(super) fn build(params: &MapParams) -> Result<Partition, MapError> {
        let regime = params.classify_regime()?.tag;
        let vq = params.v_q();
        let vk = params.v_k();
        let vt = params.norm_theta_minus_one().finite().expect("regime B has θ ≠ 1");
        let radius_exp = vq + vt;
        let mut balls = Vec::new();
        for (idx, xi) in roots_of_unity(params.k(), params.p(), params.precision()).into_iter().enumerate() {
            let center = params.center_for(&xi)?;
            let tau = if xi.agrees_with(&params.one(), 1)? {
                vk + vt - vq
            } else {
                vq + vt - vk
            };
            if tau < 1 {
                return Err(MapError::Partition(format!("τ_{} = {tau} is not positive", idx + 1)));
            }
            balls.push(PartitionBall {
                symbol: idx + 1,
                xi,
                ball: Ball::new(center.clone(), radius_exp),
                center,
                tau,
            });
        }
        let n = balls.len();
        let mut center_sep = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                match balls[i].center.separation(&balls[j].center) {
                    Separation::Known(e) => center_sep[i][j] = e.finite().unwrap(),
                    Separation::Beyond(_) => {
                        return Err(MapError::Partition(format!("centers {} and {} coincide", i + 1, j + 1)))
                    }
                }
                if !balls[i].ball.is_disjoint(&balls[j].ball)? {
                    return Err(MapError::Partition(format!("balls {} and {} overlap", i + 1, j + 1)));
                }
            }
        }
        let part = Partition { radius_exp, balls, regime, center_sep };
        if part.locate(params.pole())?.is_some() {
            return Err(MapError::Partition("the pole lies in X".into()));
        }
        Ok(part)
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn ball(&self, symbol: usize) -> Option<&PartitionBall> {
        symbol.checked_sub(1).and_then(|i| self.balls.get(i))
    }

    pub fn tau(&self, symbol: usize) -> i64 {
        self.balls[symbol - 1].tau
    }

    /// `κ(i, j)`; `None` for `i = j`.
    pub fn center_separation(&self, i: usize, j: usize) -> Option<i64> {
        (i != j).then(|| self.center_sep[i - 1][j - 1])
    }

    /// Symbol of the ball containing `x`, `None` if `x ∉ X`.
    pub fn locate(&self, x: &Padic) -> Result<Option<usize>, PadicError> {
        let mut undecided = None;
        for b in &self.balls {
            match b.ball.contains(x) {
                Ok(true) => return Ok(Some(b.symbol)),
                Ok(false) => {}
                Err(e) => undecided = Some(e),
            }
        }
        match undecided {
            Some(e) => Err(e),
            None => Ok(None),
        }
    }

    pub fn to_json(&self, params: &MapParams) -> PartitionJson {
        PartitionJson {
            p: params.p(),
            k: params.k(),
            q: params.q().to_string(),
            theta: params.theta().to_string(),
            regime: self.regime,
            kappa: params.kappa(),
            radius_exp: self.radius_exp,
            balls: self
                .balls
                .iter()
                .map(|b| BallJson {
                    symbol: b.symbol,
                    xi: b.xi.to_string(),
                    center: b.center.to_string(),
                    tau: b.tau,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_in_ball, rng_from};

    fn params(k: u64) -> MapParams {
        MapParams::parse(5, k, "5", "1+5^3", 64).unwrap()
    }

    #[test]
    fn b2_two_balls() {
        let m = params(2);
        let part = m.build_partition().unwrap();
        assert_eq!(part.len(), 2);
        assert_eq!(part.radius_exp, 4);
        assert_eq!(part.tau(1), 2);
        assert_eq!(part.tau(2), 4);
        // k = 2: center 1 − q + (1 − q/2)(θ−1)
        let one = m.one();
        let q = m.q_padic();
        let half = Padic::from_exact(num_rational::BigRational::new(1.into(), 2.into()), 5, 64);
        let expect = one
            .sub(q)
            .unwrap()
            .add(&one.sub(&q.mul(&half)).unwrap().mul(m.theta_minus_one()))
            .unwrap();
        assert_eq!(part.balls[0].center, expect);
    }

    #[test]
    fn far_centers_sit_at_radius_distance() {
        let m = params(4);
        let part = m.build_partition().unwrap();
        assert_eq!(part.len(), 4);
        for i in 2..=4 {
            for j in 2..=4 {
                if i != j {
                    assert_eq!(part.center_separation(i, j), Some(part.radius_exp));
                }
            }
        }
        assert!(part.center_separation(1, 2).unwrap() < part.radius_exp);
    }

    #[test]
    fn pole_at_radius_from_far_centers() {
        let m = params(2);
        let part = m.build_partition().unwrap();
        let d = m.pole().separation(&part.balls[1].center);
        assert_eq!(d.lower_bound(), part.radius_exp);
    }

    #[test]
    fn regime_a_has_no_partition() {
        let m = MapParams::parse(3, 3, "3", "1+9", 64).unwrap();
        assert!(matches!(m.build_partition(), Err(MapError::NotRegimeB(RegimeTag::A))));
    }

    #[test]
    fn tau_matches_difference_quotients() {
        let m = params(2);
        let part = m.build_partition().unwrap();
        let mut rng = rng_from(&[b"tau"]);
        for b in &part.balls {
            for _ in 0..20 {
                let x = random_in_ball(&mut rng, &b.ball, 64);
                let y = random_in_ball(&mut rng, &b.ball, 64);
                let (Ok(dx), Ok(dy)) = (x.sub(&y), m.eval_f(&x).unwrap().sub(&m.eval_f(&y).unwrap())) else {
                    continue;
                };
                let gap = dy.valuation().unwrap() - dx.valuation().unwrap();
                assert_eq!(gap, -b.tau);
            }
        }
    }

    #[test]
    fn json_shape() {
        let m = params(2);
        let j = serde_json::to_value(m.build_partition().unwrap().to_json(&m)).unwrap();
        assert_eq!(j["kappa"], 2);
        assert_eq!(j["regime"], "B2");
        assert_eq!(j["balls"][1]["tau"], 4);
    }
}
