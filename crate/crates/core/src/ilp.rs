//! Randomized exact 0-1 integer linear programming.
//!
//! Feasibility of `{x : a_r·x ≤ b_r for all r, c·x ≥ v}` is decided by
//! splitting off the first `k` variables into `2^k` restricted copies of the
//! AND-of-THR circuit, replacing each copy's AND by a sampled F2 polynomial,
//! merging the copies with a random OR-to-XOR combiner and evaluating the
//! resulting parity of collapsed monomials on every assignment of the
//! remaining `n - k` variables. The optimum is found by binary search on `v`.

use crate::caps::Caps;
use crate::circuit::{brute_force_truth_table, Circuit, Gate, GateKind, TruthTableBitmap, Wire};
use crate::error::{Error, Result};
use crate::evaluator::{ac0_abstraction, eval_all_symsym_cached, GridCache, DEFAULT_REPEATS};
use crate::transforms::{
    collapse_and_of_sym, expand_copies, or_to_xor_randomized, sample_prob_poly, F2Polynomial, GeneralizedSymGate, ProbPolyParams,
    SymSymCircuit,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use std::fmt::Write;

/// `a·x ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub a: Vec<BigInt>,
    pub b: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpInstance {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    /// Maximized when present; otherwise only feasibility is asked.
    pub objective: Option<Vec<BigInt>>,
}

fn dot(a: &[BigInt], x: &[bool]) -> BigInt {
    a.iter().zip(x).filter(|(_, &b)| b).map(|(v, _)| v).sum()
}

impl IlpInstance {
    pub fn new(n: usize, constraints: Vec<Constraint>, objective: Option<Vec<BigInt>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("an instance needs at least one variable".into()));
        }
        if let Some(c) = constraints.iter().find(|c| c.a.len() != n) {
            return Err(Error::Argument(format!("constraint with {} coefficients for {n} variables", c.a.len())));
        }
        if objective.as_ref().is_some_and(|c| c.len() != n) {
            return Err(Error::Argument(format!("objective length differs from {n} variables")));
        }
        Ok(IlpInstance { n, constraints, objective })
    }

    /// Largest bit length over all coefficients, at least 1.
    pub fn bit_length(&self) -> u64 {
        let cons = self.constraints.iter().flat_map(|c| c.a.iter().chain([&c.b]));
        cons.chain(self.objective.iter().flatten()).map(|v| v.bits()).max().unwrap_or(0).max(1)
    }

    pub fn satisfies(&self, x: &[bool]) -> bool {
        self.constraints.iter().all(|c| dot(&c.a, x) <= c.b)
    }

    pub fn value(&self, x: &[bool]) -> BigInt {
        self.objective.as_deref().map(|c| dot(c, x)).unwrap_or_default()
    }

    /// Σ|c_i|, the objective's range bound.
    pub fn objective_span(&self) -> BigInt {
        self.objective.iter().flatten().map(|v| v.abs()).sum()
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

fn ints(toks: &[&str], line: usize) -> Result<Vec<BigInt>> {
    toks.iter().map(|t| t.parse::<BigInt>().map_err(|_| syntax(line, format!("malformed integer {t:?}")))).collect()
}

/// Parses the `.ilp` format: `vars n`, then `max c_1 .. c_n` or
/// `feasibility`, then `con a_1 .. a_n <= b` lines. `#` starts a comment.
pub fn parse_ilp(text: &str) -> Result<IlpInstance> {
    let mut n: Option<usize> = None;
    let mut objective: Option<Option<Vec<BigInt>>> = None;
    let mut constraints = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else { continue };
        let arity = |k: usize, n: Option<usize>| -> Result<usize> {
            let n = n.ok_or_else(|| syntax(line, "`vars` must come first"))?;
            if k != n {
                return Err(syntax(line, format!("{k} coefficients for {n} variables")));
            }
            Ok(n)
        };
        match head {
            "vars" => {
                if n.is_some() || rest.len() != 1 {
                    return Err(syntax(line, "expected a single `vars <n>`"));
                }
                n = Some(rest[0].parse().ok().filter(|&v| v > 0).ok_or_else(|| syntax(line, "bad variable count"))?);
            }
            "max" | "feasibility" => {
                if objective.is_some() {
                    return Err(syntax(line, "objective given twice"));
                }
                if head == "max" {
                    arity(rest.len(), n)?;
                    objective = Some(Some(ints(rest, line)?));
                } else if !rest.is_empty() {
                    return Err(syntax(line, "`feasibility` takes no arguments"));
                } else {
                    objective = Some(None);
                }
            }
            "con" => {
                if rest.len() < 2 || rest[rest.len() - 2] != "<=" {
                    return Err(syntax(line, "expected `con a_1 .. a_n <= b`"));
                }
                arity(rest.len() - 2, n)?;
                let a = ints(&rest[..rest.len() - 2], line)?;
                let b = ints(&rest[rest.len() - 1..], line)?.remove(0);
                constraints.push(Constraint { a, b });
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| syntax(1, "missing `vars`"))?;
    IlpInstance::new(n, constraints, objective.flatten())
}

pub fn serialize_ilp(inst: &IlpInstance) -> String {
    let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = format!("vars {}\n", inst.n);
    match &inst.objective {
        Some(c) => writeln!(s, "max {}", join(c)).unwrap(),
        None => s.push_str("feasibility\n"),
    }
    for c in &inst.constraints {
        writeln!(s, "con {} <= {}", join(&c.a), c.b).unwrap();
    }
    s
}

/// AND of one THR gate per constraint, plus `c·x ≥ v` when `v` is given.
pub fn feasibility_circuit(inst: &IlpInstance, v: Option<&BigInt>) -> Circuit {
    let n = inst.n;
    let inputs = || (0..n).map(Wire::input).collect::<Vec<_>>();
    let mut gates: Vec<Gate> = inst
        .constraints
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let weights = c.a.iter().map(|w| -w).collect();
            Gate::new(format!("c{}", r + 1), GateKind::Thr { weights, threshold: -&c.b }, inputs())
        })
        .collect();
    if let Some(v) = v {
        let weights = inst.objective.clone().unwrap_or_else(|| vec![BigInt::zero(); n]);
        gates.push(Gate::new("obj", GateKind::Thr { weights, threshold: v.clone() }, inputs()));
    }
    if gates.is_empty() {
        return Circuit::constant(n, true);
    }
    let top = (0..gates.len()).map(Wire::gate).collect();
    gates.push(Gate::new("all", GateKind::And, top));
    let out = gates.len() - 1;
    Circuit::new(n, gates, out).expect("feasibility circuit is well formed")
}

/// max(1, ⌊n / (M · (log2 s)^5)⌋), kept below n.
pub fn default_k(inst: &IlpInstance) -> usize {
    let s = (inst.constraints.len() + 1).max(2) as f64;
    let k = inst.n as f64 / (inst.bit_length() as f64 * s.log2().powi(5));
    (k.floor() as usize).max(1).min(inst.n - 1)
}

#[derive(Clone, Debug)]
pub struct IlpSolveParams {
    /// Copy-expansion parameter; `None` uses [`default_k`].
    pub k: Option<usize>,
    pub repeats: usize,
    pub caps: Caps,
}

impl Default for IlpSolveParams {
    fn default() -> Self {
        IlpSolveParams { k: None, repeats: DEFAULT_REPEATS, caps: Caps::from_env() }
    }
}

impl IlpSolveParams {
    fn k_for(&self, inst: &IlpInstance) -> Result<usize> {
        let k = self.k.unwrap_or_else(|| default_k(inst));
        if k >= inst.n {
            return Err(Error::Argument(format!("k = {k} must be below n = {}", inst.n)));
        }
        Ok(k)
    }
}

#[derive(Clone, Debug)]
pub struct Feasibility {
    pub feasible: bool,
    /// Per assignment of the last `n - k` variables: majority vote over the repeats.
    pub majority: TruthTableBitmap,
    pub k: usize,
    /// Largest number of votes any assignment received.
    pub best_votes: usize,
    /// The randomized pipeline hit a cap and the exhaustive table was used.
    pub fell_back: bool,
}

struct Pipeline {
    m: usize,
    /// Per copy: its AND/OR part over variable gates, and the global index of its first variable.
    copies: Vec<(Circuit, usize)>,
    vars: Vec<GeneralizedSymGate>,
    params: ProbPolyParams,
    cap: usize,
    cache: GridCache,
}

impl Pipeline {
    fn new(copies: &[Circuit], k: usize, caps: &Caps) -> Result<Self> {
        let m = copies[0].n();
        let mut vars = Vec::new();
        let mut parts = Vec::new();
        for cp in copies {
            let (abs, vs, _) = ac0_abstraction(cp)?;
            parts.push((abs, vars.len()));
            vars.extend(vs);
        }
        let mut params = ProbPolyParams::new(1, 10 << k);
        params.monomial_cap = caps.monomials;
        Ok(Pipeline { m, copies: parts, vars, params, cap: caps.monomials, cache: GridCache::new(m) })
    }

    fn repeat(&mut self, rng: &mut impl Rng) -> Result<TruthTableBitmap> {
        let total = self.vars.len();
        let mut subs = Vec::with_capacity(self.copies.len());
        for (abs, off) in &self.copies {
            let p = sample_prob_poly(abs, &self.params, rng)?;
            let mut q = F2Polynomial::zero(total);
            for mono in p.monomials() {
                q.add_assign(&F2Polynomial::monomial(total, mono.iter().map(|&v| v + *off as u32).collect()));
            }
            subs.push(q);
        }
        let (_, poly) = or_to_xor_randomized(&subs, rng, self.cap)?;
        let bottom: Vec<GeneralizedSymGate> =
            poly.monomials().map(|mono| collapse_and_of_sym(mono.iter().map(|&v| self.vars[v as usize].clone()).collect())).collect();
        let top = (0..=bottom.len()).map(|v| v % 2 == 1).collect();
        eval_all_symsym_cached(&SymSymCircuit::new(self.m, bottom, top)?, &mut self.cache)
    }
}

fn oracle_or(copies: &[Circuit]) -> Result<TruthTableBitmap> {
    let m = copies[0].n();
    let mut words = vec![0u64; (1usize << m).div_ceil(64)];
    for cp in copies {
        for (w, t) in words.iter_mut().zip(brute_force_truth_table(cp)?.words()) {
            *w |= t;
        }
    }
    Ok(TruthTableBitmap::from_words(m, words))
}

fn vote(copies: &[Circuit], k: usize, repeats: usize, caps: &Caps, votes: &mut [u32], rng: &mut impl Rng) -> Result<()> {
    let mut pipe = Pipeline::new(copies, k, caps)?;
    for _ in 0..repeats {
        let t = pipe.repeat(rng)?;
        for (x, v) in votes.iter_mut().enumerate() {
            *v += t.get(x) as u32;
        }
    }
    Ok(())
}

/// Decides whether some x satisfies every constraint and `c·x ≥ v`.
pub fn solve_feasibility_randomized(inst: &IlpInstance, v: Option<&BigInt>, params: &IlpSolveParams, rng: &mut impl Rng) -> Result<Feasibility> {
    let k = params.k_for(inst)?;
    let repeats = params.repeats.max(1);
    let c = feasibility_circuit(inst, v);
    let copies = expand_copies(&c, k, &params.caps)?;
    let m = inst.n - k;
    let mut votes = vec![0u32; 1 << m];
    let (majority, best_votes, fell_back) = match vote(&copies, k, repeats, &params.caps, &mut votes, rng) {
        Ok(()) => {
            let best = votes.iter().copied().max().unwrap_or(0) as usize;
            (TruthTableBitmap::from_fn(m, |x| 2 * votes[x] as usize > repeats), best, false)
        }
        Err(e) if e.is_cap() => {
            if inst.n > params.caps.oracle_n {
                return Err(e);
            }
            let t = oracle_or(&copies)?;
            let best = if t.count_ones() > 0 { repeats } else { 0 };
            (t, best, true)
        }
        Err(e) => return Err(e),
    };
    Ok(Feasibility { feasible: majority.count_ones() > 0, majority, k, best_votes, fell_back })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IlpStatus {
    Optimal,
    Feasible,
    Infeasible,
}

impl std::fmt::Display for IlpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IlpStatus::Optimal => "optimal",
            IlpStatus::Feasible => "feasible",
            IlpStatus::Infeasible => "infeasible",
        })
    }
}

/// One feasibility call made by [`optimize`].
#[derive(Clone, Debug)]
pub struct Probe {
    pub bound: Option<BigInt>,
    pub feasible: bool,
    pub best_votes: usize,
}

#[derive(Clone, Debug)]
pub struct IlpResult {
    pub status: IlpStatus,
    pub value: Option<BigInt>,
    /// Checked against the constraints; absent when the majority table
    /// pointed at no satisfying completion.
    pub witness: Option<Vec<bool>>,
    pub probes: Vec<Probe>,
    pub k: usize,
    pub fell_back: bool,
}

/// Completes a majority-1 assignment of the last `n - k` variables with the
/// first satisfying prefix.
fn find_witness(inst: &IlpInstance, f: &Feasibility, v: Option<&BigInt>) -> Option<Vec<bool>> {
    let m = inst.n - f.k;
    (0..1usize << m).filter(|&x| f.majority.get(x)).find_map(|x| {
        (0..1usize << f.k).find_map(|j| {
            let z: Vec<bool> = (0..inst.n).map(|i| if i < f.k { j >> i & 1 == 1 } else { x >> (i - f.k) & 1 == 1 }).collect();
            (inst.satisfies(&z) && v.is_none_or(|v| inst.value(&z) >= *v)).then_some(z)
        })
    })
}

/// Maximizes the objective by binary search over `v` in `[-Σ|c_i|, Σ|c_i|]`;
/// feasibility-only instances get a single call.
pub fn optimize(inst: &IlpInstance, params: &IlpSolveParams, rng: &mut impl Rng) -> Result<IlpResult> {
    let mut probes = Vec::new();
    let mut fell_back = false;
    let mut call = |v: Option<&BigInt>, probes: &mut Vec<Probe>| -> Result<Feasibility> {
        let f = solve_feasibility_randomized(inst, v, params, rng)?;
        fell_back |= f.fell_back;
        probes.push(Probe { bound: v.cloned(), feasible: f.feasible, best_votes: f.best_votes });
        Ok(f)
    };
    if inst.objective.is_none() {
        let f = call(None, &mut probes)?;
        let witness = if f.feasible { find_witness(inst, &f, None) } else { None };
        let status = if f.feasible { IlpStatus::Feasible } else { IlpStatus::Infeasible };
        return Ok(IlpResult { status, value: None, witness, probes, k: f.k, fell_back });
    }
    let span = inst.objective_span();
    let mut lo = -span.clone();
    let mut hi = span;
    let mut best = call(Some(&lo), &mut probes)?;
    let k = best.k;
    if !best.feasible {
        return Ok(IlpResult { status: IlpStatus::Infeasible, value: None, witness: None, probes, k, fell_back });
    }
    while lo < hi {
        let mid: BigInt = (&lo + &hi + 1u32) >> 1u32;
        let f = call(Some(&mid), &mut probes)?;
        if f.feasible {
            lo = mid;
            best = f;
        } else {
            hi = mid - 1u32;
        }
    }
    let witness = find_witness(inst, &best, Some(&lo));
    let value = match &witness {
        Some(z) => inst.value(z).max(lo),
        None => lo,
    };
    Ok(IlpResult { status: IlpStatus::Optimal, value: Some(value), witness, probes, k, fell_back })
}

/// Exhaustive optimum (`Some(None)` for a feasible feasibility-only
/// instance), or `None` when infeasible.
pub fn brute_force_optimum(inst: &IlpInstance) -> Option<Option<BigInt>> {
    let mut best: Option<Option<BigInt>> = None;
    for idx in 0..1usize << inst.n {
        let x: Vec<bool> = (0..inst.n).map(|i| idx >> i & 1 == 1).collect();
        if !inst.satisfies(&x) {
            continue;
        }
        if inst.objective.is_none() {
            return Some(None);
        }
        let v = inst.value(&x);
        if best.as_ref().and_then(|b| b.as_ref()).is_none_or(|b| v > *b) {
            best = Some(Some(v));
        }
    }
    best
}

/// Random instance with coefficients and right-hand sides uniform in `[-bound, bound]`.
pub fn random_instance(rng: &mut impl Rng, n: usize, s: usize, bound: i64) -> IlpInstance {
    let mut v = || BigInt::from(rng.gen_range(-bound..=bound));
    let constraints = (0..s).map(|_| Constraint { a: (0..n).map(|_| v()).collect(), b: v() }).collect();
    let objective = Some((0..n).map(|_| v()).collect());
    IlpInstance { n, constraints, objective }
}
