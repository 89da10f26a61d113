//! Batch evaluation of SYM∘SYM circuits, split #SAT counting and
//! count-based equivalence checks.

mod count;
mod grid;

pub use count::{
    ac0_abstraction, antiequiv_via_count, count_sat_split, count_sat_split_randomized, default_ell, equiv_via_count, CountOutcome,
    DEFAULT_REPEATS,
};
pub use grid::{add_bits, GridCache};

use crate::caps::Caps;
use crate::circuit::{brute_force_truth_table_threads, Circuit, TruthTableBitmap};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::rectmm::{coppersmith_rect_mm, CoppersmithParams, FieldMatrix, MAX_ALPHA};
use crate::symrank::{decompose, split};
use crate::transforms::SymSymCircuit;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Oracle,
    SymrankNaive,
    SymrankCoppersmith,
    DirectOuterSum,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Oracle => "oracle",
            Method::SymrankNaive => "symrank-naive-mm",
            Method::SymrankCoppersmith => "symrank-coppersmith",
            Method::DirectOuterSum => "direct-outer-sum",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "oracle" | "naive" => Method::Oracle,
            "symrank" | "symrank-naive-mm" | "naive-mm" => Method::SymrankNaive,
            "coppersmith" | "symrank-coppersmith" => Method::SymrankCoppersmith,
            "direct" | "direct-outer-sum" => Method::DirectOuterSum,
            _ => return Err(Error::Argument(format!("unknown method {s:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct EvalPlan {
    pub method: Method,
    pub caps: Caps,
    /// On a rank or shape limit, fall back to direct outer sums instead of failing.
    pub fallback: bool,
    pub field: PrimeField,
    pub mm: CoppersmithParams,
    pub threads: usize,
}

impl EvalPlan {
    pub fn new(method: Method) -> Self {
        EvalPlan {
            method,
            caps: Caps::from_env(),
            fallback: true,
            field: PrimeField::default(),
            mm: CoppersmithParams::default(),
            threads: 1,
        }
    }
}

impl Default for EvalPlan {
    fn default() -> Self {
        EvalPlan::new(Method::SymrankNaive)
    }
}

/// Per-assignment numbers of true bottom gates, plus what produced them.
#[derive(Clone, Debug)]
pub struct Counts {
    pub counts: Vec<u64>,
    pub method: Method,
    pub rank: Option<usize>,
    pub fell_back: bool,
    pub base_mults: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub table: TruthTableBitmap,
    pub method: Method,
    pub rank: Option<usize>,
    pub fell_back: bool,
    pub base_mults: Option<u64>,
}

/// Entrywise `f[v]`; an entry outside the table is an error.
pub fn apply_filter(values: &[u64], f: &[bool]) -> Result<Vec<bool>> {
    values
        .iter()
        .map(|&v| {
            usize::try_from(v)
                .ok()
                .and_then(|i| f.get(i).copied())
                .ok_or_else(|| Error::Invalid(format!("value {v} outside filter domain 0..{}", f.len())))
        })
        .collect()
}

fn to_bitmap(n: usize, bits: &[bool]) -> TruthTableBitmap {
    TruthTableBitmap::from_fn(n, |idx| bits[idx])
}

fn direct_counts(c: &SymSymCircuit) -> Vec<u64> {
    let mut cache = GridCache::new(c.n);
    let mut counts = vec![0u64; 1 << c.n];
    for g in &c.bottom {
        add_bits(&mut counts, &cache.table(g), 1);
    }
    counts
}

fn oracle_counts(c: &SymSymCircuit, caps: &Caps) -> Result<Vec<u64>> {
    if c.n > caps.oracle_n {
        return Err(Error::cap("oracle input count", caps.oracle_n));
    }
    Ok((0..1usize << c.n)
        .map(|idx| {
            let x = crate::circuit::assignment(c.n, idx);
            c.bottom.iter().filter(|g| g.eval_structural(&x)).count() as u64
        })
        .collect())
}

/// Largest rank the rectangular engine accepts for `2^h` rows.
pub fn coppersmith_rank_limit(h: usize) -> usize {
    (2f64.powi(h as i32).powf(MAX_ALPHA) + 1e-9).floor() as usize
}

fn coppersmith_counts(c: &SymSymCircuit, plan: &EvalPlan, rank: usize, d: &crate::symrank::SymRankDecomp) -> Result<(Vec<u64>, u64)> {
    let (h_l, h_r) = split(c.n);
    let field = &plan.field;
    if (field.p() as u128) <= rank as u128 {
        return Err(Error::Argument(format!("prime {} does not exceed rank {rank}", field.p())));
    }
    let size = 1usize << h_l;
    let inner = rank.max(1);
    let mut a = FieldMatrix::zeros(size, inner, field.p());
    let mut b = FieldMatrix::zeros(inner, size, field.p());
    for k in 0..rank {
        for i in 0..size {
            if d.a(i, k) {
                a.set(i, k, 1);
            }
        }
        for j in 0..1usize << h_r {
            if d.b(k, j) {
                b.set(k, j, 1);
            }
        }
    }
    let (prod, ops) = coppersmith_rect_mm(&a, &b, field, &plan.mm)?;
    let mut counts = vec![0u64; 1 << c.n];
    for j in 0..1usize << h_r {
        for i in 0..size {
            counts[i + (j << h_l)] = prod.get(i, j);
        }
    }
    Ok((counts, ops.total()))
}

/// Number of true bottom gates on every assignment.
pub fn symsym_counts(c: &SymSymCircuit, plan: &EvalPlan) -> Result<Counts> {
    let direct = |fell_back, rank| Counts { counts: direct_counts(c), method: Method::DirectOuterSum, rank, fell_back, base_mults: None };
    match plan.method {
        Method::Oracle => Ok(Counts { counts: oracle_counts(c, &plan.caps)?, method: Method::Oracle, rank: None, fell_back: false, base_mults: None }),
        Method::DirectOuterSum => Ok(direct(false, None)),
        Method::SymrankNaive | Method::SymrankCoppersmith => {
            let d = match decompose(c, &plan.caps) {
                Ok(d) => d,
                Err(e) if e.is_cap() && plan.fallback => return Ok(direct(true, None)),
                Err(e) => return Err(e),
            };
            let rank = d.rank();
            if plan.method == Method::SymrankNaive {
                let counts = d.product_naive().into_iter().map(u64::from).collect();
                return Ok(Counts { counts, method: Method::SymrankNaive, rank: Some(rank), fell_back: false, base_mults: None });
            }
            let (h_l, _) = split(c.n);
            if rank > coppersmith_rank_limit(h_l) {
                if plan.fallback {
                    let counts = d.product_naive().into_iter().map(u64::from).collect();
                    return Ok(Counts { counts, method: Method::SymrankNaive, rank: Some(rank), fell_back: true, base_mults: None });
                }
                return Err(Error::cap("rank for the rectangular engine", coppersmith_rank_limit(h_l)));
            }
            let (counts, ops) = coppersmith_counts(c, plan, rank, &d)?;
            Ok(Counts { counts, method: Method::SymrankCoppersmith, rank: Some(rank), fell_back: false, base_mults: Some(ops) })
        }
    }
}

pub fn eval_all_symsym_report(c: &SymSymCircuit, plan: &EvalPlan) -> Result<EvalOutcome> {
    let k = symsym_counts(c, plan)?;
    let bits = apply_filter(&k.counts, &c.top)?;
    Ok(EvalOutcome { table: to_bitmap(c.n, &bits), method: k.method, rank: k.rank, fell_back: k.fell_back, base_mults: k.base_mults })
}

pub fn eval_all_symsym(c: &SymSymCircuit, plan: &EvalPlan) -> Result<TruthTableBitmap> {
    eval_all_symsym_report(c, plan).map(|o| o.table)
}

/// Direct-outer-sum evaluation sharing gate tables across calls.
pub fn eval_all_symsym_cached(c: &SymSymCircuit, cache: &mut GridCache) -> Result<TruthTableBitmap> {
    if cache.n() != c.n {
        return Err(Error::Argument(format!("cache built for n = {}, circuit has n = {}", cache.n(), c.n)));
    }
    let mut counts = vec![0u64; 1 << c.n];
    for g in &c.bottom {
        add_bits(&mut counts, &cache.table(g), 1);
    }
    Ok(to_bitmap(c.n, &apply_filter(&counts, &c.top)?))
}

/// Truth table of an arbitrary circuit: the oracle, or the SYM∘SYM reduction
/// followed by batch evaluation.
pub fn eval_all(c: &Circuit, plan: &EvalPlan) -> Result<EvalOutcome> {
    if plan.method == Method::Oracle {
        if c.n() > plan.caps.oracle_n {
            return Err(Error::cap("oracle input count", plan.caps.oracle_n));
        }
        let table = brute_force_truth_table_threads(c, plan.threads)?;
        return Ok(EvalOutcome { table, method: Method::Oracle, rank: None, fell_back: false, base_mults: None });
    }
    let ss = SymSymCircuit::from_circuit(c, &plan.caps)?;
    eval_all_symsym_report(&ss, plan)
}
