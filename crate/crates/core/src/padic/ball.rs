use super::{Padic, PadicError};

/// Open ball `{x : |x − center|_p < p^{-radius_exp}}`, i.e. all `x` with
/// `norm_exp(x − center) ≥ radius_exp + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: Padic,
    pub radius_exp: i64,
}

impl Ball {
    pub fn new(center: Padic, radius_exp: i64) -> Self {
        Ball { center, radius_exp }
    }

    pub fn contains(&self, x: &Padic) -> Result<bool, PadicError> {
        assert_eq!(self.center.prime(), x.prime(), "ball and point over different primes");
        x.separation(&self.center).at_least(self.radius_exp + 1)
    }

    /// Balls in an ultrametric space are nested or disjoint; they meet iff
    /// the larger one contains the smaller one's center.
    pub fn is_disjoint(&self, other: &Ball) -> Result<bool, PadicError> {
        let (big, small) = if self.radius_exp <= other.radius_exp {
            (self, other)
        } else {
            (other, self)
        };
        Ok(!big.contains(&small.center)?)
    }

    pub fn contains_ball(&self, other: &Ball) -> Result<bool, PadicError> {
        Ok(other.radius_exp >= self.radius_exp && self.contains(&other.center)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Padic {
        Padic::from_int(n, 5, 20)
    }

    #[test]
    fn center_is_member() {
        let b = Ball::new(int(7), 3);
        assert!(b.contains(&int(7)).unwrap());
    }

    #[test]
    fn boundary_is_excluded() {
        // |x − c| = 5^{-3} is not < 5^{-3}
        let b = Ball::new(int(7), 3);
        assert!(!b.contains(&int(7 + 125)).unwrap());
        assert!(b.contains(&int(7 + 625)).unwrap());
    }

    #[test]
    fn equal_radius_at_radius_distance_are_disjoint() {
        let b1 = Ball::new(int(1), 2);
        let b2 = Ball::new(int(1 + 25), 2);
        assert!(b1.is_disjoint(&b2).unwrap());
        let b3 = Ball::new(int(1 + 125), 2);
        assert!(!b1.is_disjoint(&b3).unwrap());
        assert!(b1.contains(&int(1 + 125)).unwrap());
    }

    #[test]
    fn nested_balls() {
        let big = Ball::new(int(3), 1);
        let small = Ball::new(int(3), 4);
        assert!(big.contains_ball(&small).unwrap());
        assert!(!small.contains_ball(&big).unwrap());
        assert!(!big.is_disjoint(&small).unwrap());
    }

    #[test]
    fn undecidable_membership() {
        let c = int(0).add(&Padic::from_int(1, 5, 3).to_inexact()).unwrap();
        let b = Ball::new(int(1), 6);
        assert!(matches!(
            b.contains(&c),
            Err(PadicError::InsufficientPrecision { needed: 7, available: 3 })
        ));
    }
}
