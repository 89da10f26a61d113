//! Dense matrices over a prime field, the naive product and `.mat` text IO.

use crate::error::{Error, Result};
use crate::field::{Acc, PrimeField};
use rand::Rng;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        FieldMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced mod p.
    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(FieldMatrix { rows: rows.len(), cols, p, data: rows.iter().flatten().map(|&v| v % p).collect() })
    }

    pub fn random(rows: usize, cols: usize, f: &PrimeField, rng: &mut impl Rng) -> Self {
        FieldMatrix { rows, cols, p: f.p(), data: (0..rows * cols).map(|_| f.random(rng)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len(), self.p);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    /// Copies `src` into the block at (`r0`, `c0`), clipping at the border.
    pub fn paste(&mut self, src: &FieldMatrix, r0: usize, c0: usize) {
        for i in 0..src.rows.min(self.rows.saturating_sub(r0)) {
            for j in 0..src.cols.min(self.cols.saturating_sub(c0)) {
                self.set(r0 + i, c0 + j, src.get(i, j));
            }
        }
    }

    /// The `rows × cols` block at (`r0`, `c0`), zero beyond the border.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols, self.p);
        for i in 0..rows.min(self.rows.saturating_sub(r0)) {
            for j in 0..cols.min(self.cols.saturating_sub(c0)) {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    pub fn add_assign(&mut self, other: &FieldMatrix, f: &PrimeField) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, b);
        }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self, f: &PrimeField) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("{}x{} matrix has no inverse", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n, self.p);
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col) != 0).ok_or_else(|| Error::Singular("singular minor".into()))?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let s = f.inv(a.get(col, col)).unwrap();
            for j in 0..n {
                a.set(col, j, f.mul(a.get(col, j), s));
                inv.set(col, j, f.mul(inv.get(col, j), s));
            }
            for r in 0..n {
                let k = a.get(r, col);
                if r == col || k == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(k, a.get(col, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(k, inv.get(col, j))));
                }
            }
        }
        Ok(inv)
    }

    /// `.mat` text: `rows cols p`, then row-major residues.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.p);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u64::to_string).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut it = text.split_whitespace();
        let mut next = |what: &str| -> Result<u64> {
            let tok = it.next().ok_or_else(|| Error::Invalid(format!("missing {what}")))?;
            tok.parse().map_err(|_| Error::Invalid(format!("bad {what} {tok:?}")))
        };
        let rows = next("row count")? as usize;
        let cols = next("column count")? as usize;
        let p = next("modulus")?;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let v = next("entry")?;
            if v >= p {
                return Err(Error::Invalid(format!("entry {v} not below p = {p}")));
            }
            data.push(v);
        }
        if it.next().is_some() {
            return Err(Error::Invalid("trailing entries".into()));
        }
        Ok(FieldMatrix { rows, cols, p, data })
    }
}

fn check_field(f: &PrimeField, ms: &[&FieldMatrix]) -> Result<()> {
    if let Some(m) = ms.iter().find(|m| m.p != f.p()) {
        return Err(Error::Argument(format!("matrix over p = {} used with p = {}", m.p, f.p())));
    }
    Ok(())
}

/// Triple-loop product.
pub fn naive_mm(a: &FieldMatrix, b: &FieldMatrix, f: &PrimeField) -> Result<FieldMatrix> {
    check_field(f, &[a, b])?;
    if a.cols != b.rows {
        return Err(Error::Dimension(format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let bt = b.transpose();
    let mut c = FieldMatrix::zeros(a.rows, b.cols, f.p());
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = Acc::new(f);
            for (&x, &y) in a.row(i).iter().zip(bt.row(j)) {
                acc.push(x, y);
            }
            c.set(i, j, acc.finish());
        }
    }
    Ok(c)
}

/// `V[i][j] = elements[j]^i` for `i < rows`.
pub fn vandermonde(elements: &[u64], rows: usize, f: &PrimeField) -> FieldMatrix {
    let mut v = FieldMatrix::zeros(rows, elements.len(), f.p());
    for (j, &e) in elements.iter().enumerate() {
        let mut x = 1;
        for i in 0..rows {
            v.set(i, j, x);
            x = f.mul(x, e);
        }
    }
    v
}

/// Solves `minor · w = rhs` where the minor of the Vandermonde matrix on
/// `elements` keeps power rows `rowset` and element columns `colset`.
pub fn vandermonde_minor_solve(elements: &[u64], rowset: &[usize], colset: &[usize], rhs: &[u64], f: &PrimeField) -> Result<Vec<u64>> {
    if rowset.len() != colset.len() || rhs.len() != rowset.len() {
        return Err(Error::Dimension(format!("{}x{} minor with {} right-hand sides", rowset.len(), colset.len(), rhs.len())));
    }
    let rows = rowset.iter().max().map_or(0, |&r| r + 1);
    let minor = vandermonde(elements, rows, f).select(rowset, colset);
    let inv = minor.inverse(f)?;
    Ok((0..rhs.len())
        .map(|i| {
            let mut acc = Acc::new(f);
            for (k, &r) in rhs.iter().enumerate() {
                acc.push(inv.get(i, k), r % f.p());
            }
            acc.finish()
        })
        .collect())
}
