//! Symmetric-rank decompositions of SYM∘SYM circuits.
//!
//! Inputs are split into a low half (`h_l` bits, the row index) and a high
//! half (`h_r` bits, the column index). Every component is a triple
//! `(gate, a, b)` where `a`/`b` are achievable left/right partial sums of the
//! gate and the gate accepts `a + b`.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::transforms::{GeneralizedSymGate, SymSymCircuit};
use num_bigint::BigUint;
use num_traits::Zero;
use std::io::{self, Write};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub gate: usize,
    pub left: BigUint,
    pub right: BigUint,
}

#[derive(Clone, Debug)]
pub struct SymRankDecomp {
    pub h_l: usize,
    pub h_r: usize,
    pub components: Vec<Component>,
    /// Filter on the inner product; `f.len() == bottom gates + 1`.
    pub f: Vec<bool>,
    words: usize,
    a_rows: Vec<u64>,
    b_cols: Vec<u64>,
}

/// Row/column split used throughout: `h_l = ⌈n/2⌉`.
pub fn split(n: usize) -> (usize, usize) {
    (n.div_ceil(2), n / 2)
}

/// Partial sums of `g` over inputs `lo..lo+bits`, one per half-assignment.
pub fn half_sums(g: &GeneralizedSymGate, lo: usize, bits: usize) -> Vec<BigUint> {
    let terms: Vec<(usize, bool, &BigUint)> = g
        .literals
        .iter()
        .zip(&g.weights)
        .filter(|(l, _)| l.input >= lo && l.input < lo + bits)
        .map(|(l, w)| (l.input - lo, l.negated, w))
        .collect();
    (0..1usize << bits)
        .map(|z| {
            let mut s = BigUint::zero();
            for &(i, neg, w) in &terms {
                if (z >> i & 1 == 1) ^ neg {
                    s += w;
                }
            }
            s
        })
        .collect()
}

/// Sorted distinct values and the index of each entry among them.
fn classes(v: &[BigUint]) -> (Vec<BigUint>, Vec<usize>) {
    let mut d = v.to_vec();
    d.sort();
    d.dedup();
    let idx = v.iter().map(|x| d.binary_search(x).unwrap()).collect();
    (d, idx)
}

pub fn decompose(c: &SymSymCircuit, caps: &Caps) -> Result<SymRankDecomp> {
    let (h_l, h_r) = split(c.n);
    let mut components = Vec::new();
    // per gate: row classes, column classes, component id by (a class, b class)
    let mut layout = Vec::with_capacity(c.bottom.len());
    for (gi, g) in c.bottom.iter().enumerate() {
        let (lv, li) = classes(&half_sums(g, 0, h_l));
        let (rv, ri) = classes(&half_sums(g, h_l, h_r));
        let mut ids = vec![None; lv.len() * rv.len()];
        for (ai, a) in lv.iter().enumerate() {
            for (bi, b) in rv.iter().enumerate() {
                if g.accepts(&(a + b)) {
                    if components.len() >= caps.rank {
                        return Err(Error::cap("symmetric rank", caps.rank));
                    }
                    ids[ai * rv.len() + bi] = Some(components.len());
                    components.push(Component { gate: gi, left: a.clone(), right: b.clone() });
                }
            }
        }
        layout.push((li, ri, lv.len(), rv.len(), ids));
    }
    let words = components.len().div_ceil(64).max(1);
    let mut a_rows = vec![0u64; words << h_l];
    let mut b_cols = vec![0u64; words << h_r];
    for (li, ri, na, nb, ids) in &layout {
        for (i, &a) in li.iter().enumerate() {
            for k in ids[a * nb..(a + 1) * nb].iter().flatten() {
                a_rows[i * words + k / 64] |= 1 << (k % 64);
            }
        }
        for (j, &b) in ri.iter().enumerate() {
            for k in (0..*na).filter_map(|a| ids[a * nb + b]) {
                b_cols[j * words + k / 64] |= 1 << (k % 64);
            }
        }
    }
    Ok(SymRankDecomp { h_l, h_r, components, f: c.top.clone(), words, a_rows, b_cols })
}

impl SymRankDecomp {
    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn rows(&self) -> usize {
        1 << self.h_l
    }

    pub fn cols(&self) -> usize {
        1 << self.h_r
    }

    pub fn a(&self, i: usize, k: usize) -> bool {
        self.a_rows[i * self.words + k / 64] >> (k % 64) & 1 == 1
    }

    pub fn b(&self, k: usize, j: usize) -> bool {
        self.b_cols[j * self.words + k / 64] >> (k % 64) & 1 == 1
    }

    /// (A·B)[i, j].
    pub fn product_entry(&self, i: usize, j: usize) -> u32 {
        let a = &self.a_rows[i * self.words..(i + 1) * self.words];
        let b = &self.b_cols[j * self.words..(j + 1) * self.words];
        a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
    }

    pub fn reconstruct_entry(&self, i: usize, j: usize) -> bool {
        self.f[self.product_entry(i, j) as usize]
    }

    /// The full product by row-column popcounts, indexed `i + (j << h_l)`.
    pub fn product_naive(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.rows() * self.cols()];
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                out[i + (j << self.h_l)] = self.product_entry(i, j);
            }
        }
        out
    }

    /// Whitespace-separated 0/1 text: `h_l h_r r`, the rows of A, the
    /// columns of B, then f.
    pub fn dump(&self, w: &mut impl Write) -> io::Result<()> {
        let bit = |b: bool| if b { "1" } else { "0" };
        writeln!(w, "{} {} {}", self.h_l, self.h_r, self.rank())?;
        for i in 0..self.rows() {
            let row: Vec<&str> = (0..self.rank()).map(|k| bit(self.a(i, k))).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        for j in 0..self.cols() {
            let col: Vec<&str> = (0..self.rank()).map(|k| bit(self.b(k, j))).collect();
            writeln!(w, "{}", col.join(" "))?;
        }
        let f: Vec<&str> = self.f.iter().map(|&b| bit(b)).collect();
        writeln!(w, "{}", f.join(" "))
    }
}

/// Σ over gates of #{(a, b) : a + b ≤ t, gate accepts a + b} with t the
/// total bottom weight; None when t is too large to enumerate.
pub fn rank_bound(c: &SymSymCircuit) -> Option<u128> {
    let t: BigUint = c.bottom.iter().map(|g| g.total_weight()).sum();
    let t = u64::try_from(&t).ok().filter(|&t| t <= 1 << 16)?;
    let mut total = 0u128;
    for g in &c.bottom {
        for v in 0..=t {
            if g.accepts(&BigUint::from(v)) {
                total += v as u128 + 1;
            }
        }
    }
    Some(total)
}
