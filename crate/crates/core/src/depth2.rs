//! THR∘THR and SYM∘THR evaluation on rectangles `A × B` of half-assignments
//! through the w-weighted threshold product
//! `P[i,j] = Σ_k w_k · [M[i,k] ≤ N[k,j]]`.
//!
//! The product splits each list `S_k` (column k of M with row k of N, sorted)
//! into buckets of at most `s` entries. Pairs inside one bucket are compared
//! directly; pairs in different buckets come from `M'·N'`, where row `i` of
//! `M'` holds `w_k` at the bucket of `M[i,k]` and `N'[(k,l), j] = 1` iff
//! `N[k,j]` lies in a later bucket than `l`.

use crate::circuit::{Circuit, Gate, Source};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::rectmm::{coppersmith_rect_mm, CoppersmithParams, FieldMatrix, MAX_ALPHA};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::ops::AddAssign;

/// Integer types the product runs over.
pub trait Scalar: Clone + Ord + Zero + From<u32> + TryFrom<i128> + for<'a> AddAssign<&'a Self> + ToPrimitive + Debug + Display {}

impl<T> Scalar for T where T: Clone + Ord + Zero + From<u32> + TryFrom<i128> + for<'a> AddAssign<&'a T> + ToPrimitive + Debug + Display {}

/// `M` is `rows × d`, `N` is `d × cols`, both row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WtpInstance<T> {
    pub rows: usize,
    pub d: usize,
    pub cols: usize,
    pub m: Vec<T>,
    pub n: Vec<T>,
    pub w: Vec<T>,
}

pub type WtpI64 = WtpInstance<i64>;
pub type WtpI128 = WtpInstance<i128>;
pub type WtpBig = WtpInstance<BigInt>;

impl<T: Scalar> WtpInstance<T> {
    pub fn new(rows: usize, d: usize, cols: usize, m: Vec<T>, n: Vec<T>, w: Vec<T>) -> Result<Self> {
        if m.len() != rows * d || n.len() != d * cols || w.len() != d {
            return Err(Error::Dimension(format!(
                "M has {} entries, N {}, w {} for {rows}x{d}x{cols}",
                m.len(),
                n.len(),
                w.len()
            )));
        }
        Ok(WtpInstance { rows, d, cols, m, n, w })
    }

    pub fn m_at(&self, i: usize, k: usize) -> &T {
        &self.m[i * self.d + k]
    }

    pub fn n_at(&self, k: usize, j: usize) -> &T {
        &self.n[k * self.cols + j]
    }
}

/// The definition, entry by entry. Row-major `rows × cols`.
pub fn circledast_naive<T: Scalar>(inst: &WtpInstance<T>) -> Vec<T> {
    let mut p = vec![T::zero(); inst.rows * inst.cols];
    for i in 0..inst.rows {
        for j in 0..inst.cols {
            for k in 0..inst.d {
                if inst.m_at(i, k) <= inst.n_at(k, j) {
                    p[i * inst.cols + j] += &inst.w[k];
                }
            }
        }
    }
    p
}

/// Dense ranks (from 1) of column k of M and row k of N, per k.
fn ranks<T: Scalar>(inst: &WtpInstance<T>) -> (Vec<u32>, Vec<u32>) {
    let mut rm = vec![0u32; inst.rows * inst.d];
    let mut rn = vec![0u32; inst.d * inst.cols];
    for k in 0..inst.d {
        let mut vals: Vec<&T> = (0..inst.rows).map(|i| inst.m_at(i, k)).chain((0..inst.cols).map(|j| inst.n_at(k, j))).collect();
        vals.sort();
        vals.dedup();
        let rank = |v: &T| vals.binary_search(&v).unwrap() as u32 + 1;
        for i in 0..inst.rows {
            rm[i * inst.d + k] = rank(inst.m_at(i, k));
        }
        for j in 0..inst.cols {
            rn[k * inst.cols + j] = rank(inst.n_at(k, j));
        }
    }
    (rm, rn)
}

/// Replaces the entries of column k of M and row k of N by their dense rank
/// among those values; every comparison `M[i,k] ≤ N[k,j]` is unchanged.
pub fn rank_reduce<T: Scalar>(inst: &WtpInstance<T>) -> WtpInstance<T> {
    let (rm, rn) = ranks(inst);
    WtpInstance {
        rows: inst.rows,
        d: inst.d,
        cols: inst.cols,
        m: rm.into_iter().map(T::from).collect(),
        n: rn.into_iter().map(T::from).collect(),
        w: inst.w.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MmMode {
    Naive,
    Coppersmith,
}

impl std::str::FromStr for MmMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(MmMode::Naive),
            "coppersmith" => Ok(MmMode::Coppersmith),
            _ => Err(Error::Argument(format!("unknown mm mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Depth2Params {
    /// Bucket capacity; `None` picks ⌈√n⌉ (naive) or ⌈n^(1-delta)⌉ (coppersmith).
    pub s: Option<usize>,
    pub mm: MmMode,
    pub delta: f64,
    pub field: PrimeField,
}

impl Default for Depth2Params {
    fn default() -> Self {
        Depth2Params { s: None, mm: MmMode::Naive, delta: 0.086, field: PrimeField::default() }
    }
}

impl Depth2Params {
    pub fn with_capacity(s: usize) -> Self {
        Depth2Params { s: Some(s), ..Default::default() }
    }

    /// `(s, t)` for lists of `len` entries with `n` rows.
    pub fn buckets(&self, n: usize, len: usize) -> (usize, usize) {
        let n = n.max(1) as f64;
        let s = self.s.unwrap_or_else(|| match self.mm {
            MmMode::Naive => n.sqrt().ceil() as usize,
            MmMode::Coppersmith => n.powf(1.0 - self.delta).ceil() as usize,
        });
        let s = s.max(1);
        (s, len.div_ceil(s).max(1))
    }
}

#[derive(Clone, Debug)]
pub struct WtpReport<T> {
    pub p: Vec<T>,
    pub s: usize,
    pub t: usize,
    /// Triples with `M ≤ N` found inside one bucket.
    pub same_bucket: u64,
    /// Triples with `M` in an earlier bucket than `N`.
    pub cross_bucket: u64,
    pub mm: MmMode,
    pub base_mults: Option<u64>,
}

/// Sparse `M'` times 0-1 `N'`, skipping zero entries of `M'`.
fn sparse_mm<T: Scalar>(rows: usize, cols: usize, mp: &[Vec<(usize, &T)>], np: &[Vec<bool>], p: &mut [T]) {
    for i in 0..rows {
        let out = &mut p[i * cols..(i + 1) * cols];
        for &(c, w) in &mp[i] {
            for (o, &b) in out.iter_mut().zip(&np[c]) {
                if b {
                    *o += w;
                }
            }
        }
    }
}

fn field_mm<T: Scalar>(
    rows: usize,
    cols: usize,
    inner: usize,
    mp: &[Vec<(usize, &T)>],
    np: &[Vec<bool>],
    f: &PrimeField,
    p: &mut [T],
) -> Result<Option<u64>> {
    let mut bound: i128 = 0;
    for row in mp {
        let mut s: i128 = 0;
        for (_, w) in row {
            let Some(v) = w.to_i128() else { return Ok(None) };
            s = s.saturating_add(v.saturating_abs());
        }
        bound = bound.max(s);
    }
    if bound.saturating_mul(2) >= f.p() as i128 {
        return Ok(None);
    }
    let mut a = FieldMatrix::zeros(rows, inner.max(1), f.p());
    let mut b = FieldMatrix::zeros(inner.max(1), cols, f.p());
    for (i, row) in mp.iter().enumerate() {
        for &(c, w) in row {
            a.set(i, c, f.from_i128(w.to_i128().unwrap()));
        }
    }
    for (c, row) in np.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v {
                b.set(c, j, 1);
            }
        }
    }
    let (z, ops) = coppersmith_rect_mm(&a, &b, f, &CoppersmithParams::default())?;
    for i in 0..rows {
        for j in 0..cols {
            let v = T::try_from(f.to_signed(z.get(i, j))).map_err(|_| Error::Dimension("product entry overflows".into()))?;
            p[i * cols + j] += &v;
        }
    }
    Ok(Some(ops.total()))
}

pub fn weighted_threshold_product_report<T: Scalar>(inst: &WtpInstance<T>, params: &Depth2Params) -> Result<WtpReport<T>> {
    let (rows, d, cols) = (inst.rows, inst.d, inst.cols);
    let (rm, rn) = ranks(inst);
    let (s, t) = params.buckets(rows.max(cols), rows + cols);
    let mut bm = vec![0usize; rows * d];
    let mut bn = vec![0usize; d * cols];
    let mut p = vec![T::zero(); rows * cols];
    let mut same_bucket = 0u64;
    let mut cross_bucket = 0u64;
    for k in 0..d {
        // sorted S_k, M entries before equal N entries
        let mut order: Vec<(u32, bool, usize)> =
            (0..rows).map(|i| (rm[i * d + k], false, i)).chain((0..cols).map(|j| (rn[k * cols + j], true, j))).collect();
        order.sort_unstable();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); t];
        for (pos, &(_, is_n, idx)) in order.iter().enumerate() {
            let b = pos / s;
            if is_n {
                bn[k * cols + idx] = b;
                members[b].push(idx);
            } else {
                bm[idx * d + k] = b;
            }
        }
        let mut later = vec![0u64; t + 1];
        for b in (0..t).rev() {
            later[b] = later[b + 1] + members[b].len() as u64;
        }
        for i in 0..rows {
            let b = bm[i * d + k];
            let v = rm[i * d + k];
            for &j in &members[b] {
                if v <= rn[k * cols + j] {
                    p[i * cols + j] += &inst.w[k];
                    same_bucket += 1;
                }
            }
            cross_bucket += later[b + 1];
        }
    }
    let inner = d * t;
    let mp: Vec<Vec<(usize, &T)>> = (0..rows).map(|i| (0..d).map(|k| (k * t + bm[i * d + k], &inst.w[k])).collect()).collect();
    let np: Vec<Vec<bool>> = (0..inner).map(|c| (0..cols).map(|j| bn[(c / t) * cols + j] > c % t).collect()).collect();
    let mut mm = MmMode::Naive;
    let mut base_mults = None;
    if params.mm == MmMode::Coppersmith {
        let n = rows.max(cols) as f64;
        if inner as f64 > n.powf(MAX_ALPHA) + 1e-9 {
            return Err(Error::Dimension(format!("d*t = {inner} exceeds {}^{MAX_ALPHA}", rows.max(cols))));
        }
        if let Some(ops) = field_mm(rows, cols, inner, &mp, &np, &params.field, &mut p)? {
            mm = MmMode::Coppersmith;
            base_mults = Some(ops);
        }
    }
    if mm == MmMode::Naive {
        sparse_mm(rows, cols, &mp, &np, &mut p);
    }
    Ok(WtpReport { p, s, t, same_bucket, cross_bucket, mm, base_mults })
}

pub fn weighted_threshold_product<T: Scalar>(inst: &WtpInstance<T>, params: &Depth2Params) -> Result<Vec<T>> {
    weighted_threshold_product_report(inst, params).map(|r| r.p)
}

/// Two lists of `k`-bit half-assignments: rows come from `a` (inputs
/// `x1..xk`), columns from `b` (inputs `x(k+1)..x2k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectInput {
    pub k: usize,
    pub a: Vec<Vec<bool>>,
    pub b: Vec<Vec<bool>>,
}

impl RectInput {
    pub fn new(k: usize, a: Vec<Vec<bool>>, b: Vec<Vec<bool>>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Argument(format!("|A| = {} but |B| = {}", a.len(), b.len())));
        }
        if let Some(z) = a.iter().chain(&b).find(|z| z.len() != k) {
            return Err(Error::Argument(format!("assignment of length {} where {k} bits were expected", z.len())));
        }
        Ok(RectInput { k, a, b })
    }

    /// A = B = all `2^k` assignments, in index order.
    pub fn full(k: usize) -> Self {
        let all: Vec<Vec<bool>> = (0..1usize << k).map(|z| (0..k).map(|i| z >> i & 1 == 1).collect()).collect();
        RectInput { k, a: all.clone(), b: all }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// One bitstring per line, first character = first variable.
pub fn parse_bitstrings(text: &str) -> Result<Vec<Vec<bool>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(no, l)| {
            l.trim()
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::Syntax { line: no + 1, msg: format!("bad bitstring {:?}", l.trim()) }),
                })
                .collect()
        })
        .collect()
}

pub fn format_bitstrings(zs: &[Vec<bool>]) -> String {
    zs.iter().map(|z| z.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>() + "\n").collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let bits = (0..rows * cols).map(|x| f(x / cols.max(1), x % cols.max(1))).collect();
        BitMatrix { rows, cols, bits }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Header `n` and `k` as little-endian u32, then the bits row-major,
    /// least significant bit first.
    pub fn to_bytes(&self, k: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + self.bits.len().div_ceil(8));
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(k as u32).to_le_bytes());
        for chunk in self.bits.chunks(8) {
            out.push(chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b as u8) << i));
        }
        out
    }

    /// Inverse of [`BitMatrix::to_bytes`]; returns the matrix and `k`.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Self, usize)> {
        if bytes.len() < 8 {
            return Err(Error::Argument("bit matrix shorter than its header".into()));
        }
        let n = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let k = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let body = &bytes[8..];
        if body.len() != (n * n).div_ceil(8) {
            return Err(Error::Argument(format!("bit matrix body has {} bytes for n = {n}", body.len())));
        }
        Ok((BitMatrix::from_fn(n, n, |i, j| body[(i * n + j) / 8] >> ((i * n + j) % 8) & 1 == 1), k))
    }
}

/// `Σ coeffs·z ≥ threshold` over all `2k` inputs.
#[derive(Clone, Debug)]
struct Form {
    coeffs: Vec<BigInt>,
    threshold: BigInt,
}

impl Form {
    fn negate(self) -> Form {
        Form { coeffs: self.coeffs.iter().map(|c| -c).collect(), threshold: BigInt::from(1) - self.threshold }
    }
}

fn bottom_form(c: &Circuit, src: Source, n: usize) -> Result<Form> {
    let mut coeffs = vec![BigInt::zero(); n];
    match src {
        Source::Input(i) => {
            coeffs[i] = BigInt::from(1);
            Ok(Form { coeffs, threshold: BigInt::from(1) })
        }
        Source::Gate(h) => {
            let g = &c.gates()[h];
            let (ws, mut threshold) = g
                .thr_form()
                .ok_or_else(|| Error::Shape(format!("bottom gate {} ({}) is not a threshold gate", g.id, g.kind.name())))?;
            for (w, wire) in ws.iter().zip(&g.inputs) {
                let Source::Input(i) = wire.source else {
                    return Err(Error::Shape(format!("bottom gate {} reads another gate", g.id)));
                };
                if wire.negated {
                    coeffs[i] -= w;
                    threshold -= w;
                } else {
                    coeffs[i] += w;
                }
            }
            Ok(Form { coeffs, threshold })
        }
    }
}

enum TopRule {
    Threshold(BigInt),
    Table(Vec<bool>),
}

/// Bottom forms, top weights and top rule of a depth-two threshold circuit;
/// input wires into the top become one-input bottom gates.
fn normalize(c: &Circuit, sym_top: bool) -> Result<(Vec<Form>, Vec<BigInt>, TopRule, bool)> {
    let (top, neg) = c.top();
    let g: &Gate = &c.gates()[top];
    let (weights, rule) = if sym_top {
        let table = g.sym_table().ok_or_else(|| Error::Shape(format!("top gate {} is not symmetric", g.id)))?;
        (g.inputs.iter().map(|w| BigInt::from(w.mult)).collect::<Vec<_>>(), TopRule::Table(table))
    } else {
        let (ws, t) = g.thr_form().ok_or_else(|| Error::Shape(format!("top gate {} is not a threshold gate", g.id)))?;
        (ws, TopRule::Threshold(t))
    };
    let mut forms = Vec::with_capacity(g.inputs.len());
    for w in &g.inputs {
        let f = bottom_form(c, w.source, c.n())?;
        forms.push(if w.negated { f.negate() } else { f });
    }
    Ok((forms, weights, rule, neg))
}

fn half_value(f: &Form, lo: usize, z: &[bool]) -> BigInt {
    f.coeffs[lo..lo + z.len()].iter().zip(z).filter(|(_, &b)| b).map(|(c, _)| c).sum()
}

/// `M[i,k] = t_k - ℓ_k^x(A_i)`, `N[k,j] = ℓ_k^y(B_j)`.
fn encode(forms: &[Form], weights: &[BigInt], rect: &RectInput) -> WtpBig {
    let d = forms.len();
    let n = rect.len();
    let mut m = Vec::with_capacity(n * d);
    for a in &rect.a {
        for f in forms {
            m.push(&f.threshold - half_value(f, 0, a));
        }
    }
    let mut nn = vec![BigInt::zero(); d * n];
    for (j, b) in rect.b.iter().enumerate() {
        for (k, f) in forms.iter().enumerate() {
            nn[k * n + j] = half_value(f, rect.k, b);
        }
    }
    WtpInstance { rows: n, d, cols: n, m, n: nn, w: weights.to_vec() }
}

fn narrow(inst: &WtpBig) -> Option<WtpI64> {
    let conv = |v: &[BigInt]| v.iter().map(|x| x.to_i64().filter(|y| y.unsigned_abs() < 1 << 62)).collect::<Option<Vec<_>>>();
    let wsum: BigInt = inst.w.iter().map(|w| w.abs()).sum();
    if wsum.bits() >= 62 {
        return None;
    }
    Some(WtpInstance { rows: inst.rows, d: inst.d, cols: inst.cols, m: conv(&inst.m)?, n: conv(&inst.n)?, w: conv(&inst.w)? })
}

/// The product over i64 when every value fits, else over BigInt.
fn product(inst: &WtpBig, params: &Depth2Params) -> Result<Vec<BigInt>> {
    match narrow(inst) {
        Some(small) => Ok(weighted_threshold_product(&small, params)?.into_iter().map(BigInt::from).collect()),
        None => weighted_threshold_product(inst, params),
    }
}

fn check_inputs(c: &Circuit, rect: &RectInput) -> Result<()> {
    if c.n() != 2 * rect.k {
        return Err(Error::Shape(format!("circuit has {} inputs, rectangle needs 2k = {}", c.n(), 2 * rect.k)));
    }
    Ok(())
}

/// Output of a THR∘THR circuit on every pair `(A_i, B_j)`.
pub fn eval_thrthr_rectangle(c: &Circuit, rect: &RectInput, params: &Depth2Params) -> Result<BitMatrix> {
    check_inputs(c, rect)?;
    let (forms, weights, rule, neg) = normalize(c, false)?;
    let TopRule::Threshold(t) = rule else { unreachable!() };
    let p = product(&encode(&forms, &weights, rect), params)?;
    let n = rect.len();
    Ok(BitMatrix::from_fn(n, n, |i, j| (p[i * n + j] >= t) ^ neg))
}

/// Output of a SYM∘THR circuit: the product with unit weights (wire
/// multiplicities) counts true bottom gates, then the top table applies.
pub fn eval_symthr_rectangle(c: &Circuit, rect: &RectInput, params: &Depth2Params) -> Result<BitMatrix> {
    check_inputs(c, rect)?;
    let (forms, weights, rule, neg) = normalize(c, true)?;
    let TopRule::Table(table) = rule else { unreachable!() };
    let p = product(&encode(&forms, &weights, rect), params)?;
    let n = rect.len();
    Ok(BitMatrix::from_fn(n, n, |i, j| table[p[i * n + j].to_usize().unwrap()] ^ neg))
}

/// Gate-by-gate evaluation on every pair.
pub fn brute_force_rectangle(c: &Circuit, rect: &RectInput) -> Result<BitMatrix> {
    check_inputs(c, rect)?;
    let cc = crate::circuit::CompiledCircuit::new(c);
    let idx = |z: &[bool]| z.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
    let ai: Vec<usize> = rect.a.iter().map(|z| idx(z)).collect();
    let bi: Vec<usize> = rect.b.iter().map(|z| idx(z) << rect.k).collect();
    let n = rect.len();
    Ok(BitMatrix::from_fn(n, n, |i, j| cc.eval_index(ai[i] | bi[j])))
}
