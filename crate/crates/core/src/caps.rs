//! Resource caps shared by the engines.

use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Name of the environment variable holding cap overrides, e.g.
/// `ACCTHR_CAPS="oracle-n=20,rank=65536"`.
pub const CAPS_ENV: &str = "ACCTHR_CAPS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest input count for exhaustive evaluation.
    pub oracle_n: usize,
    /// Largest symmetric rank before falling back to direct evaluation.
    pub rank: usize,
    /// Largest number of distinct monomials in a sampled polynomial.
    pub monomials: usize,
    /// Largest total |weight| of a THR gate that may be lowered.
    pub weight: BigUint,
    /// Largest number of restricted copies in a bank or copy expansion.
    pub copies: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle_n: 26,
            rank: 1 << 20,
            monomials: 1 << 20,
            weight: BigUint::from(1u64 << 40),
            copies: 1 << 12,
        }
    }
}

impl Caps {
    /// Defaults with overrides from `ACCTHR_CAPS`; malformed entries are ignored.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(s) = std::env::var(CAPS_ENV) {
            let _ = caps.apply(&s);
        }
        caps
    }

    /// Applies `key=value` pairs separated by commas.
    pub fn apply(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| Error::Argument(format!("cap entry {item:?}")))?;
            let bad = || Error::Argument(format!("cap value {v:?}"));
            let v = v.trim();
            match k.trim() {
                "oracle-n" => self.oracle_n = v.parse().map_err(|_| bad())?,
                "rank" => self.rank = v.parse().map_err(|_| bad())?,
                "monomials" => self.monomials = v.parse().map_err(|_| bad())?,
                "weight" => self.weight = v.parse().map_err(|_| bad())?,
                "copies" => self.copies = v.parse().map_err(|_| bad())?,
                other => return Err(Error::Argument(format!("unknown cap {other:?}"))),
            }
        }
        Ok(())
    }
}
