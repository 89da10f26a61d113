//! Whole-table evaluation of generalized gates over the split grid
//! `idx = i + (j << h_l)`.

use crate::circuit::TruthTableBitmap;
use crate::symrank::{half_sums, split};
use crate::transforms::{Combine, GeneralizedSymGate, SumPredicate};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Memoized gate tables for one input count.
pub struct GridCache {
    n: usize,
    tables: HashMap<GeneralizedSymGate, TruthTableBitmap>,
}

fn words_for(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

fn fill(n: usize, mut bit: impl FnMut(usize, usize) -> bool) -> Vec<u64> {
    let (h_l, h_r) = split(n);
    let mut words = vec![0u64; words_for(n)];
    for j in 0..1usize << h_r {
        for i in 0..1usize << h_l {
            if bit(i, j) {
                let idx = i + (j << h_l);
                words[idx / 64] |= 1 << (idx % 64);
            }
        }
    }
    words
}

fn atomic_words(g: &GeneralizedSymGate, n: usize) -> Vec<u64> {
    let (h_l, h_r) = split(n);
    let left = half_sums(g, 0, h_l);
    let right = half_sums(g, h_l, h_r);
    let total = g.total_weight();
    if total.bits() < 127 {
        let l: Vec<u128> = left.iter().map(|v| v.to_u128().unwrap()).collect();
        let r: Vec<u128> = right.iter().map(|v| v.to_u128().unwrap()).collect();
        match &g.predicate {
            SumPredicate::Table(t) => fill(n, |i, j| t.get((l[i] + r[j]) as usize).copied().unwrap_or(false)),
            SumPredicate::AtLeast(t) => match t.to_u128() {
                Some(t) => fill(n, |i, j| l[i] + r[j] >= t),
                None => vec![0; words_for(n)],
            },
            p => fill(n, |i, j| p.accepts(&BigUint::from(l[i] + r[j]))),
        }
    } else {
        fill(n, |i, j| g.predicate.accepts(&(&left[i] + &right[j])))
    }
}

impl GridCache {
    pub fn new(n: usize) -> Self {
        GridCache { n, tables: HashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Output table of `g` (negation included), evaluated structurally.
    pub fn table(&mut self, g: &GeneralizedSymGate) -> TruthTableBitmap {
        if let Some(t) = self.tables.get(g) {
            return t.clone();
        }
        let n = self.n;
        let mut words = match &g.predicate {
            SumPredicate::Digits { parts, combine, .. } => {
                let tabs: Vec<TruthTableBitmap> = parts.iter().map(|p| self.table(p)).collect();
                combine_words(n, &tabs, combine)
            }
            _ => atomic_words(g, n),
        };
        if g.negated {
            words.iter_mut().for_each(|w| *w = !*w);
        }
        let t = TruthTableBitmap::from_words(n, words);
        self.tables.insert(g.clone(), t.clone());
        t
    }
}

fn combine_words(n: usize, tabs: &[TruthTableBitmap], combine: &Combine) -> Vec<u64> {
    let len = words_for(n);
    let fold = |init: u64, op: fn(u64, u64) -> u64| -> Vec<u64> {
        (0..len).map(|k| tabs.iter().fold(init, |acc, t| op(acc, t.words()[k]))).collect()
    };
    match combine {
        Combine::All => fold(!0, |a, b| a & b),
        Combine::Any => fold(0, |a, b| a | b),
        Combine::Parity => fold(0, |a, b| a ^ b),
        Combine::Count { mults, table } => {
            let mut counts = vec![0u64; 1 << n];
            for (t, &m) in tabs.iter().zip(mults) {
                add_bits(&mut counts, t, m);
            }
            pack(n, |idx| table.get(counts[idx] as usize).copied().unwrap_or(false))
        }
        Combine::Threshold { weights, threshold } => {
            let small: Option<Vec<i64>> = weights.iter().map(|w| w.to_i64().filter(|v| v.unsigned_abs() < 1 << 40)).collect();
            match (small, threshold.to_i128()) {
                (Some(ws), Some(t)) => {
                    let mut sums = vec![0i128; 1 << n];
                    for (tab, &w) in tabs.iter().zip(&ws) {
                        for (idx, s) in sums.iter_mut().enumerate() {
                            if tab.get(idx) {
                                *s += w as i128;
                            }
                        }
                    }
                    pack(n, |idx| sums[idx] >= t)
                }
                _ => pack(n, |idx| {
                    let s: BigInt = tabs.iter().zip(weights).filter(|(t, _)| t.get(idx)).map(|(_, w)| w).sum();
                    s >= *threshold
                }),
            }
        }
    }
}

/// `counts[idx] += m` for every set bit of `t`.
pub fn add_bits(counts: &mut [u64], t: &TruthTableBitmap, m: u64) {
    for (k, &w) in t.words().iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            let idx = k * 64 + b;
            if idx < counts.len() {
                counts[idx] += m;
            }
            w &= w - 1;
        }
    }
}

fn pack(n: usize, f: impl Fn(usize) -> bool) -> Vec<u64> {
    let mut words = vec![0u64; words_for(n)];
    for idx in 0..1usize << n {
        if f(idx) {
            words[idx / 64] |= 1 << (idx % 64);
        }
    }
    words
}
