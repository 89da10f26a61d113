//! Prime field arithmetic on `u64` residues.

use crate::error::{Error, Result};

/// 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    // k when p = 2^k - 1
    mersenne: Option<u32>,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }
}

impl PrimeField {
    /// Moduli up to 2^63 are accepted so that sums of two residues fit in a `u64`.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::Argument(format!("{p} is not a prime below 2^63")));
        }
        let mersenne = if (p + 1).is_power_of_two() { Some((p + 1).trailing_zeros()) } else { None };
        Ok(PrimeField { p, mersenne })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Reduces an arbitrary 128-bit value.
    #[inline]
    pub fn reduce(&self, x: u128) -> u64 {
        match self.mersenne {
            Some(k) => {
                let p = self.p as u128;
                let mut x = x;
                while x > p {
                    x = (x & p) + (x >> k);
                }
                if x == p {
                    0
                } else {
                    x as u64
                }
            }
            None => (x % self.p as u128) as u64,
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    pub fn pow(&self, b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        let mut b = b % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Residue of a signed integer.
    pub fn from_i128(&self, v: i128) -> u64 {
        let r = v.rem_euclid(self.p as i128);
        r as u64
    }

    /// Centered lift into (-p/2, p/2].
    pub fn to_signed(&self, a: u64) -> i128 {
        if a > self.p / 2 {
            a as i128 - self.p as i128
        } else {
            a as i128
        }
    }

    pub fn random(&self, rng: &mut impl rand::Rng) -> u64 {
        rng.gen_range(0..self.p)
    }
}

/// Lazily reduced dot-product accumulator.
///
/// Products of two residues are below 2^126, so up to two of them can be summed
/// in a `u128` before a reduction is forced; callers push terms and the
/// accumulator folds whenever the headroom is used up.
pub struct Acc<'a> {
    f: &'a PrimeField,
    sum: u128,
    pending: u32,
    cap: u32,
}

impl<'a> Acc<'a> {
    pub fn new(f: &'a PrimeField) -> Self {
        let bits = 64 - f.p.leading_zeros();
        // each product < 2^(2*bits); keep the sum below 2^127
        let cap = if 2 * bits >= 127 { 1 } else { 1u32 << (127 - 2 * bits).min(20) };
        Acc { f, sum: 0, pending: 0, cap }
    }

    #[inline]
    pub fn push(&mut self, a: u64, b: u64) {
        if self.pending == self.cap {
            self.sum = self.f.reduce(self.sum) as u128;
            self.pending = 0;
        }
        self.sum += a as u128 * b as u128;
        self.pending += 1;
    }

    #[inline]
    pub fn finish(self) -> u64 {
        self.f.reduce(self.sum)
    }
}
