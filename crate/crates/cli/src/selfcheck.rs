//! Small oracle-equivalence checks, one group per module.

use accthr::circuit::{brute_force_count_sat, brute_force_truth_table, parse_circuit, serialize_circuit};
use accthr::depth2::{brute_force_rectangle, circledast_naive, eval_thrthr_rectangle, weighted_threshold_product, Depth2Params, RectInput, WtpInstance};
use accthr::evaluator::{count_sat_split, eval_all_symsym, EvalPlan, Method};
use accthr::ilp::{brute_force_optimum, optimize, random_instance, IlpSolveParams};
use accthr::random::{random_circuit, random_depth2, random_symsym, random_thrthr, BottomKind, Depth2Config, TopKind};
use accthr::rectmm::{naive_mm, structured_sparse_mm, verify_base_identity, FieldMatrix, SparsityPattern};
use accthr::rng::{stream, Rng};
use accthr::symrank::decompose;
use accthr::transforms::SymSymCircuit;
use accthr::{Caps, PrimeField, Result};
use rand::Rng as _;

type Check = fn(u64, bool) -> Result<bool>;

const CHECKS: [(&str, Check); 7] = [
    ("circuit", circuit),
    ("transforms", transforms),
    ("symrank", symrank),
    ("evaluator", evaluator),
    ("rectmm", rectmm),
    ("ilp", ilp),
    ("depth2", depth2),
];

/// Runs every check; `fault` names a module whose intermediate data is corrupted.
pub fn run(seed: u64, fault: Option<&str>) -> Result<Vec<(&'static str, bool)>> {
    if let Some(f) = fault {
        if !CHECKS.iter().any(|(name, _)| *name == f) {
            return Err(accthr::Error::Argument(format!("unknown module {f:?}")));
        }
    }
    CHECKS.iter().map(|(name, check)| Ok((*name, check(seed, fault == Some(*name))?))).collect()
}

fn rng(seed: u64, tag: &str) -> Rng {
    stream(seed, &format!("selfcheck-{tag}"), 0)
}

fn circuit(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "circuit");
    for _ in 0..20 {
        let c = random_circuit(&mut rng, 8, 6);
        let back = parse_circuit(&serialize_circuit(&c))?;
        let back = if fault { back.negate() } else { back };
        if brute_force_truth_table(&c)? != brute_force_truth_table(&back)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn transforms(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "transforms");
    for _ in 0..10 {
        let c = random_depth2(&mut rng, &Depth2Config::new(9, 4, TopKind::Sym, BottomKind::Mixed));
        let mut ss = SymSymCircuit::from_circuit(&c, &Caps::default())?;
        if fault {
            ss.bottom[0] = ss.bottom[0].clone().negate();
        }
        if ss.brute_force() != brute_force_truth_table(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn symrank(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "symrank");
    let plan = EvalPlan::new(Method::SymrankNaive);
    for _ in 0..10 {
        let c = random_symsym(&mut rng, 10, 60);
        let mut ss = SymSymCircuit::from_circuit(&c, &plan.caps)?;
        let d = decompose(&ss, &plan.caps)?;
        if (0..d.rows()).any(|i| (0..d.cols()).any(|j| d.reconstruct_entry(i, j) != ss.eval(&grid_point(ss.n, d.rows(), i, j)))) {
            return Ok(false);
        }
        if fault {
            // flip the filter entry used by the all-zero input
            let v = ss.bottom.iter().filter(|g| g.eval(&vec![false; ss.n])).count();
            ss.top[v] = !ss.top[v];
        }
        if eval_all_symsym(&ss, &plan)? != brute_force_truth_table(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Assignment at grid row i (low inputs) and column j (high inputs).
fn grid_point(n: usize, rows: usize, i: usize, j: usize) -> Vec<bool> {
    let idx = i + j * rows;
    (0..n).map(|b| idx >> b & 1 == 1).collect()
}

fn evaluator(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "evaluator");
    let plan = EvalPlan::new(Method::SymrankNaive);
    for _ in 0..5 {
        let c = random_depth2(&mut rng, &Depth2Config::new(10, 3, TopKind::And, BottomKind::Thr));
        let got = count_sat_split(&c, 2, &plan)?.count + fault as u64;
        if got != brute_force_count_sat(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rectmm(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "rectmm");
    let f = PrimeField::default();
    for m in 1..=2 {
        let pat = SparsityPattern::new(m);
        let (rows, mid) = (1 << m, 3usize.pow(m as u32));
        let mut a = FieldMatrix::zeros(rows, mid, f.p());
        let mut b = FieldMatrix::zeros(mid, rows, f.p());
        for r in 0..rows {
            for q in 0..mid {
                if pat.a_index(r, q).is_some() {
                    a.set(r, q, f.random(&mut rng));
                }
                if pat.b_index(q, r).is_some() {
                    b.set(q, r, f.random(&mut rng));
                }
            }
        }
        let mut got = structured_sparse_mm(&a, &b, m, &f)?;
        if fault {
            got.set(0, 0, f.add(got.get(0, 0), 1));
        }
        if got != naive_mm(&a, &b, &f)? {
            return Ok(false);
        }
    }
    Ok(verify_base_identity())
}

fn ilp(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "ilp");
    let params = IlpSolveParams { k: Some(2), ..Default::default() };
    for _ in 0..3 {
        let inst = random_instance(&mut rng, 8, 3, 100);
        let r = optimize(&inst, &params, &mut rng)?;
        let want = brute_force_optimum(&inst);
        let got = if fault { None } else { r.value.clone() };
        match want {
            None if r.witness.is_some() => return Ok(false),
            Some(v) if v != got || !r.witness.is_some_and(|w| inst.satisfies(&w)) => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

fn depth2(seed: u64, fault: bool) -> Result<bool> {
    let mut rng = rng(seed, "depth2");
    let (n, d) = (16, 4);
    let m = (0..n * d).map(|_| rng.gen_range(0..20i64)).collect();
    let nn = (0..d * n).map(|_| rng.gen_range(0..20i64)).collect();
    let w = (0..d).map(|_| rng.gen_range(-1000..=1000i64)).collect();
    let inst = WtpInstance::new(n, d, n, m, nn, w)?;
    let mut got = weighted_threshold_product(&inst, &Depth2Params::with_capacity(3))?;
    if fault {
        got[0] += 1;
    }
    if got != circledast_naive(&inst) {
        return Ok(false);
    }
    let c = random_thrthr(&mut rng, 8, 4, 16, 1);
    let rect = RectInput::full(4);
    Ok(eval_thrthr_rectangle(&c, &rect, &Depth2Params::with_capacity(5))? == brute_force_rectangle(&c, &rect)?)
}
