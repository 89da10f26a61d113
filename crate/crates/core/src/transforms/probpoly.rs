//! Probabilistic F2 polynomials for AND/OR/XOR circuits (gate-wise
//! Razborov-Smolensky).

use super::poly::F2Polynomial;
use crate::circuit::{Circuit, GateKind, Source};
use crate::error::{Error, Result};
use rand::Rng;

/// Error target `num/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbPolyParams {
    pub eps_num: u64,
    pub eps_den: u64,
    pub monomial_cap: usize,
}

impl ProbPolyParams {
    pub fn new(eps_num: u64, eps_den: u64) -> Self {
        assert!(eps_num > 0 && eps_num < eps_den, "eps must lie in (0, 1)");
        ProbPolyParams { eps_num, eps_den, monomial_cap: 1 << 20 }
    }

    /// ⌈log2(s / eps)⌉, at least 1.
    pub fn ell(&self, s: usize) -> u32 {
        let target = s.max(1) as u128 * self.eps_den as u128;
        let mut l = 0;
        while (self.eps_num as u128) << l < target {
            l += 1;
        }
        l.max(1)
    }

    pub fn eps(&self) -> f64 {
        self.eps_num as f64 / self.eps_den as f64
    }
}

/// Gate count (NOT excluded) and depth of an AND/OR/XOR circuit.
pub fn ac0_size_depth(c: &Circuit) -> Result<(usize, usize)> {
    let mut s = 0;
    for g in c.gates() {
        match g.kind {
            GateKind::And | GateKind::Or | GateKind::Xor => s += 1,
            GateKind::Not => {}
            _ => return Err(Error::Shape(format!("gate {} ({}) is not AND/OR/XOR", g.id, g.kind.name()))),
        }
    }
    let depth = crate::circuit::classify_shape(c).depth;
    Ok((s, depth))
}

/// Degree bound ⌈log2(s/eps)⌉^d of the sampled polynomials.
pub fn degree_bound(c: &Circuit, params: &ProbPolyParams) -> Result<usize> {
    let (s, d) = ac0_size_depth(c)?;
    Ok((params.ell(s) as usize).pow(d as u32))
}

trait Repr: Clone {
    fn one(&self) -> Self;
    fn var(&self, i: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Result<Self>;
}

/// Value table; multilinear reduction is implicit.
#[derive(Clone)]
struct Dense {
    n: usize,
    words: Vec<u64>,
}

impl Repr for Dense {
    fn one(&self) -> Self {
        Dense { n: self.n, words: vec![!0; self.words.len()] }
    }
    fn var(&self, i: usize) -> Self {
        Dense { n: self.n, words: F2Polynomial::var(self.n, i).to_truth_table() }
    }
    fn add(&self, o: &Self) -> Self {
        Dense { n: self.n, words: self.words.iter().zip(&o.words).map(|(a, b)| a ^ b).collect() }
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(Dense { n: self.n, words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect() })
    }
}

#[derive(Clone)]
struct Sparse {
    p: F2Polynomial,
    cap: usize,
}

impl Repr for Sparse {
    fn one(&self) -> Self {
        Sparse { p: F2Polynomial::one(self.p.nvars()), cap: self.cap }
    }
    fn var(&self, i: usize) -> Self {
        Sparse { p: F2Polynomial::var(self.p.nvars(), i), cap: self.cap }
    }
    fn add(&self, o: &Self) -> Self {
        Sparse { p: self.p.add(&o.p), cap: self.cap }
    }
    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(Sparse { p: self.p.mul(&o.p, self.cap)?, cap: self.cap })
    }
}

fn product<T: Repr>(proto: &T, fs: &[T]) -> Result<T> {
    let mut acc = proto.one();
    for f in fs {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

fn sample<T: Repr>(c: &Circuit, ell: u32, proto: &T, rng: &mut impl Rng) -> Result<T> {
    let mut vals: Vec<T> = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let ins: Vec<T> = g
            .inputs
            .iter()
            .map(|w| {
                let v = match w.source {
                    Source::Input(i) => proto.var(i),
                    Source::Gate(h) => vals[h].clone(),
                };
                if w.negated {
                    v.add(&proto.one())
                } else {
                    v
                }
            })
            .collect();
        let one = proto.one();
        let v = match g.kind {
            GateKind::Not => ins[0].add(&one),
            GateKind::Xor => {
                let mut acc = one.add(&one);
                for (v, w) in ins.iter().zip(&g.inputs) {
                    if w.mult % 2 == 1 {
                        acc = acc.add(v);
                    }
                }
                acc
            }
            GateKind::And if ins.len() <= ell as usize => product(proto, &ins)?,
            GateKind::Or if ins.len() <= ell as usize => {
                let neg: Vec<T> = ins.iter().map(|v| v.add(&one)).collect();
                product(proto, &neg)?.add(&one)
            }
            GateKind::And => {
                // Π_r (1 + Σ_{i∈S_r} (1 + q_i))
                let mut factors = Vec::with_capacity(ell as usize);
                for _ in 0..ell {
                    let mut f = one.clone();
                    for v in &ins {
                        if rng.gen::<bool>() {
                            f = f.add(&v.add(&one));
                        }
                    }
                    factors.push(f);
                }
                product(proto, &factors)?
            }
            GateKind::Or => {
                // 1 + Π_r (1 + Σ_{i∈S_r} q_i)
                let mut factors = Vec::with_capacity(ell as usize);
                for _ in 0..ell {
                    let mut f = one.clone();
                    for v in &ins {
                        if rng.gen::<bool>() {
                            f = f.add(v);
                        }
                    }
                    factors.push(f);
                }
                product(proto, &factors)?.add(&one)
            }
            _ => return Err(Error::Shape(format!("gate {} is not AND/OR/XOR/NOT", g.id))),
        };
        vals.push(v);
    }
    Ok(vals.swap_remove(c.output()))
}

/// Largest variable count handled through value tables.
pub const DENSE_LIMIT: usize = 20;

/// Draws a polynomial agreeing with `c` on any fixed input with probability at
/// least 1 - eps. Gates of fan-in at most ℓ are converted exactly; wider
/// AND/OR gates use ℓ random subset sums.
pub fn sample_prob_poly(c: &Circuit, params: &ProbPolyParams, rng: &mut impl Rng) -> Result<F2Polynomial> {
    let (s, _) = ac0_size_depth(c)?;
    let ell = params.ell(s);
    let m = c.n();
    let p = if m <= DENSE_LIMIT {
        let proto = Dense { n: m, words: vec![0; (1usize << m).div_ceil(64)] };
        F2Polynomial::from_truth_table(m, &sample(c, ell, &proto, rng)?.words)
    } else {
        sample(c, ell, &Sparse { p: F2Polynomial::zero(m), cap: params.monomial_cap }, rng)?.p
    };
    if p.len() > params.monomial_cap {
        return Err(Error::cap("polynomial monomials", params.monomial_cap));
    }
    Ok(p)
}

/// Same distribution, always through the sparse representation.
pub fn sample_prob_poly_sparse(c: &Circuit, params: &ProbPolyParams, rng: &mut impl Rng) -> Result<F2Polynomial> {
    let (s, _) = ac0_size_depth(c)?;
    sample(c, params.ell(s), &Sparse { p: F2Polynomial::zero(c.n()), cap: params.monomial_cap }, rng).map(|s| s.p)
}
