//! The five-product x-adic identity for the pattern-restricted 2×3 by 3×2
//! product, its trace rotation, and the windowed recursion that runs a
//! stack of such levels over truncated polynomials.
//!
//! Digit conventions per level:
//! A digits `a11 a12 a13 a22 a23` (a21 = 0), B digits `b11 b12 b21 b31`
//! (b22 = b32 = 0), C digits `c11 c12 c21 c22` (index `2·row + col`).

use crate::field::{Acc, PrimeField};
use std::collections::BTreeMap;

/// `±x^pow · input[digit]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub digit: usize,
    pub neg: bool,
    pub pow: usize,
}

const fn t(digit: usize, neg: bool, pow: usize) -> Term {
    Term { digit, neg, pow }
}

/// One level of a bilinear scheme: product `r` is `(Σ a_forms[r])·(Σ b_forms[r])`
/// and output digit `o` is `Σ ±x^pow·product`, where each output carries its
/// true value at x^2.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub n_a: usize,
    pub n_b: usize,
    pub n_out: usize,
    pub a_forms: Vec<Vec<Term>>,
    pub b_forms: Vec<Vec<Term>>,
    /// Per output digit: (product, negated, power of x).
    pub outputs: Vec<Vec<(usize, bool, usize)>>,
}

impl Scheme {
    pub fn products(&self) -> usize {
        self.a_forms.len()
    }

    /// The same scheme with its two inputs exchanged.
    pub fn swapped(&self) -> Scheme {
        Scheme {
            n_a: self.n_b,
            n_b: self.n_a,
            n_out: self.n_out,
            a_forms: self.b_forms.clone(),
            b_forms: self.a_forms.clone(),
            outputs: self.outputs.clone(),
        }
    }
}

pub const A11: usize = 0;
pub const A12: usize = 1;
pub const A13: usize = 2;
pub const A22: usize = 3;
pub const A23: usize = 4;
pub const B11: usize = 0;
pub const B12: usize = 1;
pub const B21: usize = 2;
pub const B31: usize = 3;
pub const C11: usize = 0;
pub const C12: usize = 1;
pub const C21: usize = 2;

/// (row, col) of each A digit.
pub const A_DIGITS: [(usize, usize); 5] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2)];
/// (row, col) of each B digit.
pub const B_DIGITS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (2, 0)];

/// A (5 digits) × B (4 digits) → C (4 digits).
pub fn forward() -> Scheme {
    Scheme {
        n_a: 5,
        n_b: 4,
        n_out: 4,
        a_forms: vec![
            vec![t(A11, false, 0), t(A12, false, 2)],
            vec![t(A11, false, 0), t(A13, false, 2)],
            vec![t(A11, false, 0), t(A22, false, 2)],
            vec![t(A11, false, 0), t(A23, false, 2)],
            vec![t(A11, false, 0)],
        ],
        b_forms: vec![
            vec![t(B21, false, 0), t(B11, false, 2)],
            vec![t(B31, false, 0)],
            vec![t(B21, false, 0), t(B12, true, 1)],
            vec![t(B31, false, 0), t(B12, false, 1)],
            vec![t(B21, false, 0), t(B31, false, 0)],
        ],
        outputs: vec![
            vec![(0, false, 0), (1, false, 0), (4, true, 0)],
            vec![(3, false, 1), (1, true, 1)],
            vec![(2, false, 0), (3, false, 0), (4, true, 0)],
            vec![],
        ],
    }
}

/// Trace rotation: B (4 digits) × c' (4 digits, `c'[i][j]` pairs with
/// `a_ik b_kj`) → the coefficient of every A digit, i.e. `Σ_j b_kj c'_ij`.
pub fn rotated() -> Scheme {
    Scheme {
        n_a: 4,
        n_b: 4,
        n_out: 5,
        a_forms: vec![
            vec![t(B21, false, 0), t(B11, false, 2)],
            vec![t(B31, false, 0)],
            vec![t(B21, false, 0), t(B12, true, 1)],
            vec![t(B31, false, 0), t(B12, false, 1)],
            vec![t(B21, false, 0), t(B31, false, 0)],
        ],
        b_forms: vec![
            vec![t(C11, false, 0)],
            vec![t(C11, false, 0), t(C12, true, 1)],
            vec![t(C21, false, 0)],
            vec![t(C21, false, 0), t(C12, false, 1)],
            vec![t(C11, true, 0), t(C21, true, 0)],
        ],
        outputs: vec![
            vec![(0, false, 0), (1, false, 0), (2, false, 0), (3, false, 0), (4, false, 0)],
            vec![(0, false, 2)],
            vec![(1, false, 2)],
            vec![(2, false, 2)],
            vec![(3, false, 2)],
        ],
    }
}

/// Trilinear polynomial: (A digit, B digit, C digit, power of x) → coefficient.
pub type Trilinear = BTreeMap<(usize, usize, usize, usize), i64>;

fn add_term(map: &mut Trilinear, key: (usize, usize, usize, usize), v: i64) {
    let e = map.entry(key).or_insert(0);
    *e += v;
    if *e == 0 {
        map.remove(&key);
    }
}

fn sign(neg: bool) -> i64 {
    if neg {
        -1
    } else {
        1
    }
}

/// Σ_r L_r R_r Γ_r of the forward scheme.
pub fn forward_trilinear() -> Trilinear {
    let s = forward();
    let mut map = Trilinear::new();
    for (o, outs) in s.outputs.iter().enumerate() {
        for &(r, neg, p) in outs {
            for a in &s.a_forms[r] {
                for b in &s.b_forms[r] {
                    add_term(&mut map, (a.digit, b.digit, o, a.pow + b.pow + p), sign(neg) * sign(a.neg) * sign(b.neg));
                }
            }
        }
    }
    map
}

/// The same trilinear form read off the rotated scheme.
pub fn rotated_trilinear() -> Trilinear {
    let s = rotated();
    let mut map = Trilinear::new();
    for (o, outs) in s.outputs.iter().enumerate() {
        for &(r, neg, p) in outs {
            for b in &s.a_forms[r] {
                for c in &s.b_forms[r] {
                    add_term(&mut map, (o, b.digit, c.digit, b.pow + c.pow + p), sign(neg) * sign(b.neg) * sign(c.neg));
                }
            }
        }
    }
    map
}

/// Σ a_ik b_kj c_ij over the pattern positions, all at x^2.
pub fn target_trilinear() -> Trilinear {
    let mut map = Trilinear::new();
    for (ad, &(i, k)) in A_DIGITS.iter().enumerate() {
        for (bd, &(k2, j)) in B_DIGITS.iter().enumerate() {
            if k == k2 {
                add_term(&mut map, (ad, bd, 2 * i + j, 2), 1);
            }
        }
    }
    map
}

/// Checks by exact expansion that both schemes have no x^0, x^1 terms and
/// that their x^2 part is exactly the pattern product.
pub fn verify_base_identity() -> bool {
    let target = target_trilinear();
    [forward_trilinear(), rotated_trilinear()].iter().all(|m| {
        let low: Trilinear = m.iter().filter(|(k, _)| k.3 <= 2).map(|(k, v)| (*k, *v)).collect();
        low == target
    })
}

/// Polynomial in x truncated at degree `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly {
    pub coeffs: Vec<u64>,
}

impl TruncPoly {
    pub fn zero(d: usize) -> Self {
        TruncPoly { coeffs: vec![0; d + 1] }
    }

    pub fn constant(v: u64, d: usize) -> Self {
        let mut p = Self::zero(d);
        p.coeffs[0] = v;
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// `self += ±x^pow · other`.
    pub fn add_shifted(&mut self, other: &TruncPoly, neg: bool, pow: usize, f: &PrimeField) {
        for (k, &c) in other.coeffs.iter().enumerate() {
            if let Some(slot) = self.coeffs.get_mut(k + pow) {
                *slot = if neg { f.sub(*slot, c) } else { f.add(*slot, c) };
            }
        }
    }

    pub fn mul(&self, other: &TruncPoly, f: &PrimeField) -> TruncPoly {
        let d = self.degree_bound();
        let mut out = Self::zero(d);
        for k in 0..=d {
            let mut acc = Acc::new(f);
            for i in 0..=k.min(other.degree_bound()) {
                if k - i <= d {
                    acc.push(self.coeff(k - i), other.coeff(i));
                }
            }
            out.coeffs[k] = acc.finish();
        }
        out
    }
}

/// One level of the forward scheme on polynomial entries: `a` is 2×3 with
/// a21 = 0, `b` is 3×2 with b22 = b32 = 0; the result's x^2 coefficients
/// (for scalar inputs) are the product.
pub fn base_bilinear_step(a: &[[TruncPoly; 3]; 2], b: &[[TruncPoly; 2]; 3], f: &PrimeField) -> [[TruncPoly; 2]; 2] {
    let d = a[0][0].degree_bound();
    let s = forward();
    let av: Vec<&TruncPoly> = A_DIGITS.iter().map(|&(i, k)| &a[i][k]).collect();
    let bv: Vec<&TruncPoly> = B_DIGITS.iter().map(|&(k, j)| &b[k][j]).collect();
    let form = |terms: &[Term], v: &[&TruncPoly]| {
        let mut p = TruncPoly::zero(d);
        for t in terms {
            p.add_shifted(v[t.digit], t.neg, t.pow, f);
        }
        p
    };
    let prods: Vec<TruncPoly> = (0..s.products()).map(|r| form(&s.a_forms[r], &av).mul(&form(&s.b_forms[r], &bv), f)).collect();
    let mut c: [[TruncPoly; 2]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| TruncPoly::zero(d)));
    for (o, outs) in s.outputs.iter().enumerate() {
        for &(r, neg, p) in outs {
            c[o / 2][o % 2].add_shifted(&prods[r], neg, p, f);
        }
    }
    c
}

/// Runs a stack of scheme levels. Inputs at remaining depth L hold degrees
/// 0..=d-2L; outputs hold degrees 2L..=d, so both have width d-2L+1.
pub struct Engine<'a> {
    levels: Vec<&'a Scheme>,
    /// Per level and product: (output digit, negated, power of x).
    routes: Vec<Vec<Vec<(usize, bool, usize)>>>,
    d: usize,
    f: &'a PrimeField,
    /// Leaf products that fit a u128 without intermediate reduction.
    lazy: bool,
    /// Field multiplications in leaf products.
    pub mults: u64,
}

struct Work {
    a: Vec<u64>,
    b: Vec<u64>,
    out: Vec<u64>,
}

impl<'a> Engine<'a> {
    pub fn new(levels: Vec<&'a Scheme>, d: usize, f: &'a PrimeField) -> Self {
        assert!(d >= 2 * levels.len(), "truncation degree below the extraction degree");
        let routes = levels
            .iter()
            .map(|s| {
                (0..s.products())
                    .map(|r| {
                        let mut v = Vec::new();
                        for (o, outs) in s.outputs.iter().enumerate() {
                            v.extend(outs.iter().filter(|t| t.0 == r).map(|&(_, neg, p)| (o, neg, p)));
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let bits = 64 - f.p().leading_zeros() as u128;
        let lazy = (d as u128 + 1) << (2 * bits) <= u128::MAX >> 1;
        Engine { levels, routes, d, f, lazy, mults: 0 }
    }

    fn width(&self, depth: usize) -> usize {
        self.d + 1 - 2 * (self.levels.len() - depth)
    }

    fn prod<F: Fn(&Scheme) -> usize>(&self, depth: usize, g: F) -> usize {
        self.levels[depth..].iter().map(|s| g(s)).product()
    }

    /// `a`, `b` are flattened (most significant digit first) with top-level
    /// width `d - 2·levels + 1`; returns the outputs in the same layout.
    pub fn run(&mut self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let w = self.width(0);
        assert_eq!(a.len(), self.prod(0, |s| s.n_a) * w);
        assert_eq!(b.len(), self.prod(0, |s| s.n_b) * w);
        let mut out = vec![0; self.prod(0, |s| s.n_out) * w];
        if self.levels.is_empty() {
            self.leaf(a, b, &mut out);
            return out;
        }
        let mut work: Vec<Work> = (1..self.levels.len())
            .map(|depth| {
                let wc = self.width(depth);
                Work {
                    a: vec![0; self.prod(depth, |s| s.n_a) * wc],
                    b: vec![0; self.prod(depth, |s| s.n_b) * wc],
                    out: vec![0; self.prod(depth, |s| s.n_out) * wc],
                }
            })
            .collect();
        self.step(0, a, b, &mut out, &mut work);
        out
    }

    /// out[k] += Σ_{i+j=k} a[i]·b[j] for k ≤ d.
    fn leaf(&mut self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let f = self.f;
        let d = self.d;
        let top = |v: &[u64]| v[..=d].iter().rposition(|&x| x != 0);
        let (Some(da), Some(db)) = (top(a), top(b)) else { return };
        for k in 0..=d.min(da + db) {
            let lo = k.saturating_sub(db);
            let hi = k.min(da);
            let xs = &a[lo..=hi];
            let ys = &b[k - hi..=k - lo];
            let v = if self.lazy {
                let mut s: u128 = 0;
                for (&x, &y) in xs.iter().zip(ys.iter().rev()) {
                    s += x as u128 * y as u128;
                }
                f.reduce(s)
            } else {
                let mut acc = Acc::new(f);
                for (&x, &y) in xs.iter().zip(ys.iter().rev()) {
                    acc.push(x, y);
                }
                acc.finish()
            };
            out[k] = f.add(out[k], v);
            self.mults += xs.len() as u64;
        }
    }

    fn step(&mut self, depth: usize, a: &[u64], b: &[u64], out: &mut [u64], work: &mut [Work]) {
        let f = self.f;
        let s = self.levels[depth];
        let w = self.width(depth);
        let wc = w + 2;
        if depth + 1 == self.levels.len() {
            // last level: single polynomials, products computed in place
            let mut ca = vec![0u64; wc];
            let mut cb = vec![0u64; wc];
            let mut prod = vec![0u64; wc];
            for r in 0..s.products() {
                form(&s.a_forms[r], a, 1, w, &mut ca, f);
                form(&s.b_forms[r], b, 1, w, &mut cb, f);
                prod.iter_mut().for_each(|v| *v = 0);
                self.leaf(&ca, &cb, &mut prod);
                for &(o, neg, p) in &self.routes[depth][r] {
                    accumulate(&mut out[o * w..(o + 1) * w], &prod[2 - p..2 - p + w], neg, f);
                }
            }
            return;
        }
        let (cur, rest) = work.split_first_mut().unwrap();
        let sub_a = cur.a.len() / wc;
        let sub_b = cur.b.len() / wc;
        let sub_o = cur.out.len() / wc;
        for r in 0..s.products() {
            form(&s.a_forms[r], a, sub_a, w, &mut cur.a, f);
            form(&s.b_forms[r], b, sub_b, w, &mut cur.b, f);
            cur.out.iter_mut().for_each(|v| *v = 0);
            self.step(depth + 1, &cur.a, &cur.b, &mut cur.out, rest);
            for &(o, neg, p) in &self.routes[depth][r] {
                for sidx in 0..sub_o {
                    let dst = &mut out[(o * sub_o + sidx) * w..(o * sub_o + sidx + 1) * w];
                    accumulate(dst, &cur.out[sidx * wc + 2 - p..sidx * wc + 2 - p + w], neg, f);
                }
            }
        }
    }
}

#[inline]
fn accumulate(dst: &mut [u64], src: &[u64], neg: bool, f: &PrimeField) {
    let p = f.p();
    if neg {
        for (x, &y) in dst.iter_mut().zip(src) {
            let (v, borrow) = x.overflowing_sub(y);
            *x = if borrow { v.wrapping_add(p) } else { v };
        }
    } else {
        for (x, &y) in dst.iter_mut().zip(src) {
            let v = *x + y;
            *x = if v >= p { v - p } else { v };
        }
    }
}

/// child[s] = Σ ±x^pow · parent[digit][s], widening each entry by two.
fn form(terms: &[Term], parent: &[u64], sub: usize, w: usize, child: &mut [u64], f: &PrimeField) {
    let wc = w + 2;
    let (first, more) = terms.split_first().unwrap();
    for s in 0..sub {
        let src = &parent[(first.digit * sub + s) * w..(first.digit * sub + s + 1) * w];
        let dst = &mut child[s * wc..(s + 1) * wc];
        dst[..first.pow].iter_mut().for_each(|v| *v = 0);
        if first.neg {
            dst[first.pow..first.pow + w].iter_mut().zip(src).for_each(|(x, &y)| *x = f.neg(y));
        } else {
            dst[first.pow..first.pow + w].copy_from_slice(src);
        }
        dst[first.pow + w..].iter_mut().for_each(|v| *v = 0);
    }
    for t in more {
        for s in 0..sub {
            let src = &parent[(t.digit * sub + s) * w..(t.digit * sub + s + 1) * w];
            accumulate(&mut child[s * wc + t.pow..s * wc + t.pow + w], src, t.neg, f);
        }
    }
}
