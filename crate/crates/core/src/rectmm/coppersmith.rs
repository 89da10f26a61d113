//! Vandermonde embeddings of dense rectangular products into the
//! pattern-sparse recursion, and the tensorized block product.

use super::matrix::{naive_mm, vandermonde, FieldMatrix};
use super::scheme::{rotated, Engine};
use super::structured::{rotated_structured_mm_with, structured_sparse_mm_with, widen, SparsityPattern};
use crate::error::{Error, Result};
use crate::field::{Acc, PrimeField};

/// Largest exponent α with d ≤ N^α accepted by the rectangular engine.
pub const MAX_ALPHA: f64 = 0.172;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoppersmithParams {
    /// Recursion level, a positive multiple of 5.
    pub m: usize,
    pub alpha: f64,
    /// Truncation degree; None uses the extraction degree (2M, or 4M for
    /// the tensorized product).
    pub degree: Option<usize>,
}

impl Default for CoppersmithParams {
    fn default() -> Self {
        CoppersmithParams { m: 5, alpha: MAX_ALPHA, degree: None }
    }
}

/// Field multiplications, split by phase, next to the naive count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    /// Leaf products of the recursion.
    pub core: u64,
    /// Embedding and post-processing.
    pub linear: u64,
    /// Triple-loop count for the same product.
    pub naive: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.core + self.linear
    }

    pub fn add(&mut self, o: &OpCount) {
        self.core += o.core;
        self.linear += o.linear;
        self.naive += o.naive;
    }
}

fn count_mm(a: &FieldMatrix, b: &FieldMatrix, f: &PrimeField, ops: &mut OpCount) -> Result<FieldMatrix> {
    ops.linear += (a.rows() * a.cols() * b.cols()) as u64;
    naive_mm(a, b, f)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Precomputed embedding data for one level M.
#[derive(Clone, Debug)]
pub struct CoppersmithPlan {
    pub m: usize,
    f: PrimeField,
    degree: Option<usize>,
    pat: SparsityPattern,
    /// Pattern columns with exactly 4M/5 nonzero digits, increasing.
    pub columns: Vec<usize>,
    /// Rows of A's column q on the pattern.
    pub s: Vec<Vec<usize>>,
    /// Columns of B's row q on the pattern.
    pub s_prime: Vec<Vec<usize>>,
    /// A': 2^(4M/5) × 2^M, entry (i, j) = (j+1)^i.
    pub a_van: FieldMatrix,
    /// B': 2^M × 2^(M/5), entry (i, j) = (i+1)^j.
    pub b_van: FieldMatrix,
    inv_a: Vec<FieldMatrix>,
    inv_b: Vec<FieldMatrix>,
}

impl CoppersmithPlan {
    pub fn new(params: &CoppersmithParams, f: &PrimeField) -> Result<Self> {
        let m = params.m;
        if m == 0 || m % 5 != 0 {
            return Err(Error::Argument(format!("level M = {m} must be a positive multiple of 5")));
        }
        if (f.p() as u128) <= (1u128 << m) + 1 {
            return Err(Error::Argument(format!("prime {} too small for 2^{m} distinct elements", f.p())));
        }
        let pat = SparsityPattern::new(m);
        let size = 1usize << m;
        let three = 3usize.pow(m as u32);
        let digits = |q: usize| (0..m).map(move |t| q / 3usize.pow(t as u32) % 3);
        let columns: Vec<usize> = (0..three).filter(|&q| digits(q).filter(|&d| d != 0).count() == 4 * m / 5).collect();
        debug_assert_eq!(columns.len(), binomial(m, 4 * m / 5) << (4 * m / 5));
        let s: Vec<Vec<usize>> = columns.iter().map(|&q| (0..size).filter(|&r| pat.a_index(r, q).is_some()).collect()).collect();
        let s_prime: Vec<Vec<usize>> = columns.iter().map(|&q| (0..size).filter(|&j| pat.b_index(q, j).is_some()).collect()).collect();
        let elements: Vec<u64> = (1..=size as u64).collect();
        let a_van = vandermonde(&elements, 1 << (4 * m / 5), f);
        let b_van = vandermonde(&elements, 1 << (m / 5), f).transpose();
        let all_a: Vec<usize> = (0..a_van.rows()).collect();
        let all_b: Vec<usize> = (0..b_van.cols()).collect();
        let inv_a = s.iter().map(|sq| a_van.select(&all_a, sq).inverse(f)).collect::<Result<_>>()?;
        let inv_b = s_prime.iter().map(|sq| b_van.select(sq, &all_b).inverse(f)).collect::<Result<_>>()?;
        Ok(CoppersmithPlan { m, f: f.clone(), degree: params.degree, pat, columns, s, s_prime, a_van, b_van, inv_a, inv_b })
    }

    /// K = C(M, 4M/5)·2^(4M/5).
    pub fn k(&self) -> usize {
        self.columns.len()
    }

    /// 2^(4M/5).
    pub fn wide(&self) -> usize {
        1 << (4 * self.m / 5)
    }

    /// 2^(M/5).
    pub fn narrow(&self) -> usize {
        1 << (self.m / 5)
    }

    fn size(&self) -> usize {
        1 << self.m
    }

    fn three(&self) -> usize {
        3usize.pow(self.m as u32)
    }

    fn dims(&self, m: &FieldMatrix, rows: usize, cols: usize) -> Result<()> {
        if (m.rows(), m.cols()) != (rows, cols) || m.p() != self.f.p() {
            return Err(Error::Dimension(format!("expected {rows}x{cols} over p = {}, got {}x{} over p = {}", self.f.p(), m.rows(), m.cols(), m.p())));
        }
        Ok(())
    }

    /// A (2^M×3^M) with A'·A equal to `a2` on the K pattern columns.
    fn embed_a(&self, a2: &FieldMatrix, ops: &mut OpCount) -> FieldMatrix {
        let f = &self.f;
        let mut a = FieldMatrix::zeros(self.size(), self.three(), f.p());
        for (kq, &q) in self.columns.iter().enumerate() {
            for (r, &row) in self.s[kq].iter().enumerate() {
                let mut acc = Acc::new(f);
                for i in 0..self.wide() {
                    acc.push(self.inv_a[kq].get(r, i), a2.get(i, kq));
                }
                a.set(row, q, acc.finish());
            }
        }
        ops.linear += (self.k() * self.wide() * self.wide()) as u64;
        a
    }

    /// B (3^M×2^M) with B·B' equal to `b2` on the K pattern rows.
    fn embed_b(&self, b2: &FieldMatrix, ops: &mut OpCount) -> FieldMatrix {
        let f = &self.f;
        let mut b = FieldMatrix::zeros(self.three(), self.size(), f.p());
        for (kq, &q) in self.columns.iter().enumerate() {
            for (c, &col) in self.s_prime[kq].iter().enumerate() {
                let mut acc = Acc::new(f);
                for j in 0..self.narrow() {
                    acc.push(b2.get(kq, j), self.inv_b[kq].get(j, c));
                }
                b.set(q, col, acc.finish());
            }
        }
        ops.linear += (self.k() * self.narrow() * self.narrow()) as u64;
        b
    }

    fn degree(&self, levels: usize) -> usize {
        self.degree.unwrap_or(2 * levels).max(2 * levels)
    }

    /// A'' (2^(4M/5)×K) times B'' (K×2^(M/5)).
    pub fn algorithm1(&self, a2: &FieldMatrix, b2: &FieldMatrix) -> Result<(FieldMatrix, OpCount)> {
        self.dims(a2, self.wide(), self.k())?;
        self.dims(b2, self.k(), self.narrow())?;
        let mut ops = OpCount { naive: (self.wide() * self.k() * self.narrow()) as u64, ..Default::default() };
        let a = self.embed_a(a2, &mut ops);
        let b = self.embed_b(b2, &mut ops);
        let (z, core) = structured_sparse_mm_with(&a, &b, self.m, self.degree(self.m), &self.f)?;
        ops.core += core;
        let left = count_mm(&self.a_van, &z, &self.f, &mut ops)?;
        let out = count_mm(&left, &self.b_van, &self.f, &mut ops)?;
        Ok((out, ops))
    }

    /// B'' (K×2^(M/5)) times C'' (2^(M/5)×2^(4M/5)), through the trace
    /// rotation of the recursion.
    pub fn algorithm2(&self, b2: &FieldMatrix, c2: &FieldMatrix) -> Result<(FieldMatrix, OpCount)> {
        self.dims(b2, self.k(), self.narrow())?;
        self.dims(c2, self.narrow(), self.wide())?;
        let mut ops = OpCount { naive: (self.k() * self.narrow() * self.wide()) as u64, ..Default::default() };
        let b = self.embed_b(b2, &mut ops);
        let bc = count_mm(&self.b_van, c2, &self.f, &mut ops)?;
        let cmat = count_mm(&bc, &self.a_van, &self.f, &mut ops)?;
        let (d, core) = rotated_structured_mm_with(&b, &cmat, self.m, self.degree(self.m), &self.f)?;
        ops.core += core;
        let f = &self.f;
        let mut out = FieldMatrix::zeros(self.k(), self.wide(), f.p());
        for (kq, &q) in self.columns.iter().enumerate() {
            for i in 0..self.wide() {
                let mut acc = Acc::new(f);
                for (r, &row) in self.s[kq].iter().enumerate() {
                    acc.push(d.get(q, row), self.inv_a[kq].get(r, i));
                }
                out.set(kq, i, acc.finish());
            }
        }
        ops.linear += (self.k() * self.wide() * self.wide()) as u64;
        Ok((out, ops))
    }

    /// Ct (2^(4M/5)×2^(M/5)) times Bt (2^(M/5)×K) as the transpose of
    /// `algorithm2(Btᵀ, Ctᵀ)`.
    pub fn algorithm3(&self, ct: &FieldMatrix, bt: &FieldMatrix) -> Result<(FieldMatrix, OpCount)> {
        let (z, ops) = self.algorithm2(&bt.transpose(), &ct.transpose())?;
        Ok((z.transpose(), ops))
    }

    /// Rows of the tensorized block: K·2^(4M/5).
    pub fn block_rows(&self) -> usize {
        self.k() * self.wide()
    }

    /// Inner dimension of the tensorized block: 2^(2M/5).
    pub fn block_inner(&self) -> usize {
        self.narrow() * self.narrow()
    }

    /// Compact c' of B'·C''·A' for one inner C'' (2^(M/5)×2^(4M/5)).
    fn inner_cprime(&self, c2: &FieldMatrix, ops: &mut OpCount) -> Result<Vec<u64>> {
        let bc = count_mm(&self.b_van, c2, &self.f, ops)?;
        let cmat = count_mm(&bc, &self.a_van, &self.f, ops)?;
        let mut v = vec![0; 1 << (2 * self.m)];
        for i in 0..self.size() {
            for j in 0..self.size() {
                v[self.pat.c_index(i, j)] = cmat.get(j, i);
            }
        }
        Ok(v)
    }

    /// Compact embedded B for one inner B'' (K×2^(M/5)).
    fn inner_b(&self, b2: &FieldMatrix, ops: &mut OpCount) -> Vec<u64> {
        let b = self.embed_b(b2, ops);
        let mut v = vec![0; 1 << (2 * self.m)];
        for (kq, &q) in self.columns.iter().enumerate() {
            for &col in &self.s_prime[kq] {
                v[self.pat.b_index(q, col).unwrap()] = b.get(q, col);
            }
        }
        v
    }

    /// X (K·2^(4M/5) × 2^(2M/5)) times Y (2^(2M/5) × 2^(4M/5)·K): the outer
    /// algorithm 2 runs on blocks whose products are algorithm 3 instances,
    /// fused into one 2M-level recursion read off at x^(4M).
    ///
    /// Layout: X rows (q, i2) = q·2^(4M/5) + i2, X cols (j1, j2) = j1·2^(M/5) + j2,
    /// Y cols (i1, q2) = i1·K + q2.
    pub fn tensor_block(&self, x: &FieldMatrix, y: &FieldMatrix) -> Result<(FieldMatrix, OpCount)> {
        let (k, wide, narrow) = (self.k(), self.wide(), self.narrow());
        self.dims(x, k * wide, narrow * narrow)?;
        self.dims(y, narrow * narrow, wide * k)?;
        let f = &self.f;
        let p = f.p();
        let mut ops = OpCount { naive: (k * wide * narrow * narrow * wide * k) as u64, ..Default::default() };
        let compact = 1usize << (2 * self.m);
        let levels = 2 * self.m;
        let d = self.degree(levels);
        let w = d + 1 - 2 * levels;

        // a side: outer embedded B over inner c'
        let mut a_in = vec![0u64; compact * compact];
        for (kq, &q) in self.columns.iter().enumerate() {
            let parts: Vec<Vec<u64>> = (0..narrow)
                .map(|j1| {
                    // inner C'' = (X block (q, j1))ᵀ, 2^(M/5) × 2^(4M/5)
                    let mut c2 = FieldMatrix::zeros(narrow, wide, p);
                    for i2 in 0..wide {
                        for j2 in 0..narrow {
                            c2.set(j2, i2, x.get(kq * wide + i2, j1 * narrow + j2));
                        }
                    }
                    self.inner_cprime(&c2, &mut ops)
                })
                .collect::<Result<_>>()?;
            for (c, &col) in self.s_prime[kq].iter().enumerate() {
                let o = self.pat.b_index(q, col).unwrap();
                let dst = &mut a_in[o * compact..(o + 1) * compact];
                for (j1, part) in parts.iter().enumerate() {
                    let coef = self.inv_b[kq].get(j1, c);
                    for (t, &v) in dst.iter_mut().zip(part) {
                        *t = f.add(*t, f.mul(coef, v));
                    }
                }
                ops.linear += (narrow * compact) as u64;
            }
        }

        // b side: outer c' over inner embedded B
        let mut embedded = vec![vec![Vec::new(); wide]; narrow];
        for (j1, row) in embedded.iter_mut().enumerate() {
            for (i1, slot) in row.iter_mut().enumerate() {
                // inner B'' = (Y block (j1, i1))ᵀ, K × 2^(M/5)
                let mut b2 = FieldMatrix::zeros(k, narrow, p);
                for j2 in 0..narrow {
                    for q2 in 0..k {
                        b2.set(q2, j2, y.get(j1 * narrow + j2, i1 * k + q2));
                    }
                }
                *slot = self.inner_b(&b2, &mut ops);
            }
        }
        let mut b_in = vec![0u64; compact * compact];
        for i in 0..self.size() {
            for j in 0..self.size() {
                // c'[i][j] = Cmat[j][i] = Σ B'[j][j1]·Y_(j1,i1)·A'[i1][i]
                let o = self.pat.c_index(i, j);
                let dst = &mut b_in[o * compact..(o + 1) * compact];
                for (j1, row) in embedded.iter().enumerate() {
                    for (i1, e) in row.iter().enumerate() {
                        let coef = f.mul(self.b_van.get(j, j1), self.a_van.get(i1, i));
                        if coef == 0 {
                            continue;
                        }
                        for (t, &v) in dst.iter_mut().zip(e) {
                            *t = f.add(*t, f.mul(coef, v));
                        }
                    }
                }
                ops.linear += (narrow * wide * compact) as u64;
            }
        }

        let outer = rotated();
        let inner = outer.swapped();
        let mut stack = vec![&outer; self.m];
        stack.extend(std::iter::repeat_n(&inner, self.m));
        let mut engine = Engine::new(stack, d, f);
        let out = engine.run(&widen(&a_in, w), &widen(&b_in, w));
        ops.core += engine.mults;
        let a_cnt = self.pat.a_nonzeros();
        let at = |o: usize, i: usize| out[(o * a_cnt + i) * w];

        // post-processing: inner minor solves, then outer
        let mut z = FieldMatrix::zeros(k * wide, wide * k, p);
        for (kq, &q) in self.columns.iter().enumerate() {
            // inner results for each outer row of this column
            let inner_res: Vec<FieldMatrix> = self.s[kq]
                .iter()
                .map(|&row| {
                    let o = self.pat.a_index(row, q).unwrap();
                    let mut zin = FieldMatrix::zeros(wide, k, p);
                    for (kq2, &q2) in self.columns.iter().enumerate() {
                        let vals: Vec<u64> = self.s[kq2].iter().map(|&r2| at(o, self.pat.a_index(r2, q2).unwrap())).collect();
                        for i2 in 0..wide {
                            let mut acc = Acc::new(f);
                            for (r, &v) in vals.iter().enumerate() {
                                acc.push(v, self.inv_a[kq2].get(r, i2));
                            }
                            zin.set(i2, kq2, acc.finish());
                        }
                    }
                    zin
                })
                .collect();
            ops.linear += (wide * k * wide * wide) as u64;
            for i1 in 0..wide {
                for i2 in 0..wide {
                    for kq2 in 0..k {
                        let mut acc = Acc::new(f);
                        for (r, zin) in inner_res.iter().enumerate() {
                            acc.push(self.inv_a[kq].get(r, i1), zin.get(i2, kq2));
                        }
                        z.set(kq * wide + i2, i1 * k + kq2, acc.finish());
                    }
                }
            }
            ops.linear += (wide * wide * k * wide) as u64;
        }
        Ok((z, ops))
    }
}

/// N×d times d×N' through tensorized blocks, zero-padded; d must not
/// exceed max(N, N')^α.
pub fn coppersmith_rect_mm(a: &FieldMatrix, b: &FieldMatrix, f: &PrimeField, params: &CoppersmithParams) -> Result<(FieldMatrix, OpCount)> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension(format!("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    let n = a.rows().max(b.cols());
    let d = a.cols();
    let alpha = params.alpha.min(MAX_ALPHA);
    if d as f64 > (n as f64).powf(alpha) + 1e-9 {
        return Err(Error::Argument(format!("inner dimension {d} exceeds {n}^{alpha}")));
    }
    let plan = CoppersmithPlan::new(params, f)?;
    let (rb, db) = (plan.block_rows(), plan.block_inner());
    let mut c = FieldMatrix::zeros(a.rows(), b.cols(), f.p());
    let mut ops = OpCount::default();
    for r0 in (0..a.rows()).step_by(rb) {
        for c0 in (0..b.cols()).step_by(rb) {
            let mut acc = FieldMatrix::zeros(rb, rb, f.p());
            for k0 in (0..d).step_by(db) {
                let (z, o) = plan.tensor_block(&a.block(r0, k0, rb, db), &b.block(k0, c0, db, rb))?;
                acc.add_assign(&z, f);
                ops.add(&o);
            }
            c.paste(&acc, r0, c0);
        }
    }
    ops.naive = (a.rows() * d * b.cols()) as u64;
    Ok((c, ops))
}
