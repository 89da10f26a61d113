//! Randomized OR-to-XOR conversion.

use super::poly::F2Polynomial;
use crate::error::Result;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomCombiner {
    pub r1: Vec<bool>,
    pub r2: Vec<bool>,
}

impl RandomCombiner {
    pub fn sample(count: usize, rng: &mut impl Rng) -> Self {
        let r1 = (0..count).map(|_| rng.gen()).collect();
        let r2 = (0..count).map(|_| rng.gen()).collect();
        RandomCombiner { r1, r2 }
    }

    pub fn len(&self) -> usize {
        self.r1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r1.is_empty()
    }

    /// P + Q + PQ for P = Σ r1_i v_i, Q = Σ r2_i v_i.
    pub fn combine(&self, values: &[bool]) -> bool {
        assert_eq!(values.len(), self.len());
        let p = values.iter().zip(&self.r1).filter(|(v, r)| **v && **r).count() % 2 == 1;
        let q = values.iter().zip(&self.r2).filter(|(v, r)| **v && **r).count() % 2 == 1;
        p | q
    }

    /// The same expression over polynomials.
    pub fn combine_polys(&self, subs: &[F2Polynomial], cap: usize) -> Result<F2Polynomial> {
        assert_eq!(subs.len(), self.len());
        let nvars = subs.iter().map(|s| s.nvars()).max().unwrap_or(0);
        let mut p = F2Polynomial::zero(nvars);
        let mut q = F2Polynomial::zero(nvars);
        for ((s, &a), &b) in subs.iter().zip(&self.r1).zip(&self.r2) {
            if a {
                p.add_assign(s);
            }
            if b {
                q.add_assign(s);
            }
        }
        let pq = p.mul(&q, cap)?;
        let mut out = p;
        out.add_assign(&q);
        out.add_assign(&pq);
        Ok(out)
    }
}

/// Samples a combiner for the given subcircuit polynomials and returns the
/// combined polynomial C''.
pub fn or_to_xor_randomized(subs: &[F2Polynomial], rng: &mut impl Rng, cap: usize) -> Result<(RandomCombiner, F2Polynomial)> {
    let comb = RandomCombiner::sample(subs.len(), rng);
    let poly = comb.combine_polys(subs, cap)?;
    Ok((comb, poly))
}
