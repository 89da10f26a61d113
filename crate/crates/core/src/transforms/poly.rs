//! Multilinear polynomials over F2.

use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// Sorted variable indices.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Polynomial {
    nvars: usize,
    monomials: BTreeSet<Monomial>,
}

fn union(a: &[u32], b: &[u32]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl F2Polynomial {
    pub fn zero(nvars: usize) -> Self {
        F2Polynomial { nvars, monomials: BTreeSet::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, vec![])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, vec![i as u32])
    }

    /// Single monomial; the variable list is sorted and deduplicated.
    pub fn monomial(nvars: usize, mut vars: Monomial) -> Self {
        vars.sort_unstable();
        vars.dedup();
        F2Polynomial { nvars, monomials: BTreeSet::from([vars]) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monomials.iter()
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    fn toggle(&mut self, m: Monomial) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &F2Polynomial) {
        for m in &other.monomials {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &F2Polynomial) -> F2Polynomial {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    /// 1 + self.
    pub fn complement(&self) -> F2Polynomial {
        self.add(&F2Polynomial::one(self.nvars))
    }

    /// Product reduced with x^2 = x; fails once more than `cap` monomials are live.
    pub fn mul(&self, other: &F2Polynomial, cap: usize) -> Result<F2Polynomial> {
        let mut r = F2Polynomial::zero(self.nvars.max(other.nvars));
        for a in &self.monomials {
            for b in &other.monomials {
                r.toggle(union(a, b));
                if r.monomials.len() > cap {
                    return Err(Error::cap("polynomial monomials", cap));
                }
            }
        }
        Ok(r)
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.monomials.iter().filter(|m| m.iter().all(|&v| x[v as usize])).count() % 2 == 1
    }

    /// Value table over all 2^nvars points (index bit i = variable i).
    pub fn to_truth_table(&self) -> Vec<u64> {
        let size = 1usize << self.nvars;
        let mut coef = vec![0u64; size.div_ceil(64)];
        for m in &self.monomials {
            let idx: usize = m.iter().map(|&v| 1usize << v).sum();
            coef[idx >> 6] ^= 1 << (idx & 63);
        }
        mobius(self.nvars, &mut coef);
        coef
    }

    /// Inverse of [`to_truth_table`](Self::to_truth_table).
    pub fn from_truth_table(nvars: usize, table: &[u64]) -> F2Polynomial {
        let mut coef = table.to_vec();
        mobius(nvars, &mut coef);
        let mut monomials = BTreeSet::new();
        for (w, &word) in coef.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let idx = 64 * w + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if idx < 1 << nvars {
                    monomials.insert((0..nvars as u32).filter(|v| idx >> v & 1 == 1).collect());
                }
            }
        }
        F2Polynomial { nvars, monomials }
    }
}

/// In-place subset-sum transform over F2 (its own inverse).
pub(crate) fn mobius(nvars: usize, a: &mut [u64]) {
    const MASKS: [u64; 6] = [
        0x5555_5555_5555_5555,
        0x3333_3333_3333_3333,
        0x0f0f_0f0f_0f0f_0f0f,
        0x00ff_00ff_00ff_00ff,
        0x0000_ffff_0000_ffff,
        0x0000_0000_ffff_ffff,
    ];
    for i in 0..nvars.min(6) {
        let sh = 1 << i;
        for w in a.iter_mut() {
            *w ^= (*w & MASKS[i]) << sh;
        }
    }
    for i in 6..nvars {
        let step = 1 << (i - 6);
        for base in (0..a.len()).step_by(2 * step) {
            for k in base..base + step {
                a[k + step] ^= a[k];
            }
        }
    }
}
