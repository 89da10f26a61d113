//! Pattern-sparse 2^M×3^M by 3^M×2^M products through the recursive scheme.
//!
//! Coordinate t of a row index is bit t, of a column index base-3 digit t;
//! the recursion's top level is coordinate M-1.

use super::matrix::FieldMatrix;
use super::scheme::{forward, rotated, Engine, A_DIGITS, B_DIGITS};
use crate::error::{Error, Result};
use crate::field::PrimeField;

fn pow(b: usize, e: usize) -> usize {
    b.pow(e as u32)
}

fn bit(r: usize, t: usize) -> usize {
    r >> t & 1
}

fn trit(c: usize, t: usize) -> usize {
    c / pow(3, t) % 3
}

/// Nonzero positions of the M-fold tensor powers of [[1,1,1],[0,1,1]] (A)
/// and [[1,1],[1,0],[1,0]] (B).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SparsityPattern {
    pub m: usize,
}

impl SparsityPattern {
    pub fn new(m: usize) -> Self {
        SparsityPattern { m }
    }

    /// Compact index of A[r][c] in base 5, or None off the pattern.
    pub fn a_index(&self, r: usize, c: usize) -> Option<usize> {
        let mut idx = 0;
        for t in (0..self.m).rev() {
            let d = A_DIGITS.iter().position(|&p| p == (bit(r, t), trit(c, t)))?;
            idx = idx * 5 + d;
        }
        Some(idx)
    }

    pub fn b_index(&self, k: usize, j: usize) -> Option<usize> {
        let mut idx = 0;
        for t in (0..self.m).rev() {
            let d = B_DIGITS.iter().position(|&p| p == (trit(k, t), bit(j, t)))?;
            idx = idx * 4 + d;
        }
        Some(idx)
    }

    /// Compact index of a 2^M×2^M entry (digit 2·i_t + j_t).
    pub fn c_index(&self, i: usize, j: usize) -> usize {
        (0..self.m).rev().fold(0, |idx, t| idx * 4 + 2 * bit(i, t) + bit(j, t))
    }

    /// Inverse of `a_index`.
    pub fn a_position(&self, idx: usize) -> (usize, usize) {
        let (mut r, mut c) = (0, 0);
        for t in 0..self.m {
            let (i, k) = A_DIGITS[idx / pow(5, t) % 5];
            r |= i << t;
            c += k * pow(3, t);
        }
        (r, c)
    }

    pub fn b_position(&self, idx: usize) -> (usize, usize) {
        let (mut k, mut j) = (0, 0);
        for t in 0..self.m {
            let (kk, jj) = B_DIGITS[idx / pow(4, t) % 4];
            k += kk * pow(3, t);
            j |= jj << t;
        }
        (k, j)
    }

    pub fn c_position(&self, idx: usize) -> (usize, usize) {
        let (mut i, mut j) = (0, 0);
        for t in 0..self.m {
            let d = idx / pow(4, t) % 4;
            i |= (d / 2) << t;
            j |= (d % 2) << t;
        }
        (i, j)
    }

    pub fn a_nonzeros(&self) -> usize {
        pow(5, self.m)
    }

    pub fn b_nonzeros(&self) -> usize {
        pow(4, self.m)
    }

    /// Nonzero rows of A's column c: 2 per coordinate of type 1 or 2.
    pub fn column_nonzeros(&self, c: usize) -> usize {
        1 << (0..self.m).filter(|&t| trit(c, t) != 0).count()
    }

    pub fn compact_a(&self, a: &FieldMatrix) -> Result<Vec<u64>> {
        self.check(a, pow(2, self.m), pow(3, self.m))?;
        let mut v = vec![0; self.a_nonzeros()];
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                let x = a.get(r, c);
                match self.a_index(r, c) {
                    Some(k) => v[k] = x,
                    None if x != 0 => return Err(Error::Shape(format!("A[{r}][{c}] lies off the sparsity pattern"))),
                    None => {}
                }
            }
        }
        Ok(v)
    }

    pub fn compact_b(&self, b: &FieldMatrix) -> Result<Vec<u64>> {
        self.check(b, pow(3, self.m), pow(2, self.m))?;
        let mut v = vec![0; self.b_nonzeros()];
        for k in 0..b.rows() {
            for j in 0..b.cols() {
                let x = b.get(k, j);
                match self.b_index(k, j) {
                    Some(i) => v[i] = x,
                    None if x != 0 => return Err(Error::Shape(format!("B[{k}][{j}] lies off the sparsity pattern"))),
                    None => {}
                }
            }
        }
        Ok(v)
    }

    fn check(&self, m: &FieldMatrix, rows: usize, cols: usize) -> Result<()> {
        if (m.rows(), m.cols()) != (rows, cols) {
            return Err(Error::Dimension(format!("expected {rows}x{cols}, got {}x{}", m.rows(), m.cols())));
        }
        Ok(())
    }
}

/// Default truncation degree: the answer sits at x^(2M).
pub fn default_degree(m: usize) -> usize {
    2 * m
}

/// A·B for pattern-sparse A (2^M×3^M) and B (3^M×2^M), read off the
/// x^(2M) coefficient. Returns the product and the leaf multiplication count.
pub fn structured_sparse_mm_with(a: &FieldMatrix, b: &FieldMatrix, m: usize, d: usize, f: &PrimeField) -> Result<(FieldMatrix, u64)> {
    let pat = SparsityPattern::new(m);
    let ca = pat.compact_a(a)?;
    let cb = pat.compact_b(b)?;
    let s = forward();
    let mut engine = Engine::new(vec![&s; m], d, f);
    let w = d + 1 - 2 * m;
    let out = engine.run(&widen(&ca, w), &widen(&cb, w));
    let size = pow(2, m);
    let mut c = FieldMatrix::zeros(size, size, f.p());
    for i in 0..size {
        for j in 0..size {
            c.set(i, j, out[pat.c_index(i, j) * w]);
        }
    }
    Ok((c, engine.mults))
}

pub fn structured_sparse_mm(a: &FieldMatrix, b: &FieldMatrix, m: usize, f: &PrimeField) -> Result<FieldMatrix> {
    structured_sparse_mm_with(a, b, m, default_degree(m), f).map(|r| r.0)
}

/// Rotated product: for pattern-sparse B (3^M×2^M) and dense C (2^M×2^M),
/// returns D (3^M×2^M) with D[k][i] = (B·C)[k][i] where A[i][k] is on the
/// pattern, zero elsewhere.
pub fn rotated_structured_mm_with(b: &FieldMatrix, c: &FieldMatrix, m: usize, d: usize, f: &PrimeField) -> Result<(FieldMatrix, u64)> {
    let pat = SparsityPattern::new(m);
    let cb = pat.compact_b(b)?;
    let size = pow(2, m);
    if (c.rows(), c.cols()) != (size, size) {
        return Err(Error::Dimension(format!("expected {size}x{size}, got {}x{}", c.rows(), c.cols())));
    }
    // c'[i][j] = C[j][i]
    let mut cc = vec![0; pow(4, m)];
    for i in 0..size {
        for j in 0..size {
            cc[pat.c_index(i, j)] = c.get(j, i);
        }
    }
    let s = rotated();
    let mut engine = Engine::new(vec![&s; m], d, f);
    let w = d + 1 - 2 * m;
    let out = engine.run(&widen(&cb, w), &widen(&cc, w));
    let mut dm = FieldMatrix::zeros(pow(3, m), size, f.p());
    for idx in 0..pat.a_nonzeros() {
        let (i, k) = pat.a_position(idx);
        dm.set(k, i, out[idx * w]);
    }
    Ok((dm, engine.mults))
}

pub fn rotated_structured_mm(b: &FieldMatrix, c: &FieldMatrix, m: usize, f: &PrimeField) -> Result<FieldMatrix> {
    rotated_structured_mm_with(b, c, m, default_degree(m), f).map(|r| r.0)
}

/// Places scalars as constant polynomials of width `w`.
pub(crate) fn widen(v: &[u64], w: usize) -> Vec<u64> {
    let mut out = vec![0; v.len() * w];
    for (k, &x) in v.iter().enumerate() {
        out[k * w] = x;
    }
    out
}
