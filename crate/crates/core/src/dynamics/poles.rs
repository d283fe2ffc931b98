use rayon::prelude::*;

use super::{DynError, PottsSystem};
use crate::padic::{NormExp, Padic, Separation};

const TREE_CAP: u128 = 100_000;

impl PottsSystem {
    /// Levels `1..=depth` of the backward orbit of the pole. Level `n` holds
    /// the `κ_p^n` points `h_{w_0} ∘ … ∘ h_{w_{n−1}}(x^(∞))`, each checked to
    /// reach the pole after exactly `n` forward steps. Empty in regime A,
    /// where no point maps onto the pole.
    pub fn pole_preimage_tree(&self, depth: usize) -> Result<Vec<Vec<Padic>>, DynError> {
        let Some(part) = self.partition() else {
            return Ok(Vec::new());
        };
        let kappa = part.len() as u128;
        let total: u128 = (1..=depth as u32).map(|n| kappa.saturating_pow(n)).sum();
        if total > TREE_CAP {
            return Err(DynError::TreeTooLarge(total));
        }
        let mut levels: Vec<Vec<Padic>> = Vec::with_capacity(depth);
        let mut frontier = vec![self.params.pole().clone()];
        for n in 1..=depth {
            let next: Vec<Padic> = frontier
                .par_iter()
                .flat_map_iter(|y| part.balls.iter().map(move |b| (b.symbol, y)))
                .map(|(s, y)| self.params.inverse_branch(part, s, y).map_err(DynError::from))
                .collect::<Result<_, _>>()?;
            next.par_iter().try_for_each(|x| self.check_pole_preimage(x, n))?;
            levels.push(next.clone());
            frontier = next;
        }
        Ok(levels)
    }

    fn check_pole_preimage(&self, x: &Padic, n: usize) -> Result<(), DynError> {
        let mut y = x.clone();
        for t in 0..n {
            if self.params.is_pole(&y) {
                return Err(DynError::VerificationFailure(format!("level-{n} point hits the pole early at step {t}")));
            }
            y = self.params.eval_f(&y)?;
        }
        match y.separation(self.params.pole()) {
            Separation::Known(NormExp::Finite(e)) if e < self.verify_digits() => {
                Err(DynError::VerificationFailure(format!("f^{n} of a level-{n} point is {e} digits from the pole")))
            }
            Separation::Beyond(b) if b < self.verify_digits() => Err(DynError::TooDeep {
                depth: n,
                needed: self.verify_digits(),
                available: b,
            }),
            _ => Ok(()),
        }
    }
}
