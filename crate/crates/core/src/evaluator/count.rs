use super::{apply_filter, symsym_counts, EvalPlan};
use crate::circuit::{Circuit, Gate, GateKind, Source, Wire};
use crate::error::{Error, Result};
use crate::transforms::{
    bank_width, collapse, collapse_and_of_sym, collapse_circuit, lower_gate, sample_prob_poly, suffix_copies, Combine,
    GeneralizedSymGate, Literal, ProbPolyParams, SymSymCircuit,
};
use rand::Rng;
use std::collections::HashMap;

/// Repetitions of the randomized counting path.
pub const DEFAULT_REPEATS: usize = 25;

/// ⌊n^(1/3)⌋ clamped to [1, (n-1)/2].
pub fn default_ell(n: usize) -> usize {
    let mut e = 1;
    while (e + 1) * (e + 1) * (e + 1) <= n {
        e += 1;
    }
    e.min(n.saturating_sub(1) / 2).max(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOutcome {
    pub count: u64,
    pub ell: usize,
    /// Per-bit totals Σ_x B_i(x).
    pub bit_totals: Vec<u64>,
    pub rank: Option<usize>,
    pub fell_back: bool,
}

fn check_ell(c: &Circuit, ell: usize) -> Result<()> {
    if ell == 0 || 2 * ell >= c.n() {
        return Err(Error::Argument(format!("ell = {ell} needs 1 <= ell and 2*ell < n = {}", c.n())));
    }
    Ok(())
}

fn bank_counts(bottom: Vec<GeneralizedSymGate>, n: usize, plan: &EvalPlan) -> Result<super::Counts> {
    let t = bottom.len();
    symsym_counts(&SymSymCircuit::new(n, bottom, vec![false; t + 1])?, plan)
}

fn totals_from_counts(counts: &[u64], ell: usize, copies: usize) -> Result<(u64, Vec<u64>)> {
    let mut total = 0u64;
    let mut bit_totals = Vec::new();
    for i in 0..bank_width(ell) {
        let f: Vec<bool> = (0..=copies).map(|v| v >> i & 1 == 1).collect();
        let ones = apply_filter(counts, &f)?.iter().filter(|&&b| b).count() as u64;
        total += ones << i;
        bit_totals.push(ones);
    }
    Ok((total, bit_totals))
}

/// #SAT through the bit-extractor bank over the last `2·ell` inputs: each
/// restricted copy becomes one generalized gate, the per-assignment number
/// of satisfied copies is batch-evaluated and its bits summed.
pub fn count_sat_split(c: &Circuit, ell: usize, plan: &EvalPlan) -> Result<CountOutcome> {
    check_ell(c, ell)?;
    let copies = suffix_copies(c, ell, &plan.caps)?;
    let bottom = copies.iter().map(|cp| collapse_circuit(cp, &plan.caps)).collect::<Result<Vec<_>>>()?;
    let k = bank_counts(bottom, c.n() - 2 * ell, plan)?;
    let (count, bit_totals) = totals_from_counts(&k.counts, ell, copies.len())?;
    Ok(CountOutcome { count, ell, bit_totals, rank: k.rank, fell_back: k.fell_back })
}

/// Splits a circuit into input-reading gates (the variables) and an
/// AND/OR/XOR/NOT circuit over them. Direct input wires above the bottom
/// layer become literal variables.
pub fn ac0_abstraction(c: &Circuit) -> Result<(Circuit, Vec<GeneralizedSymGate>, Vec<usize>)> {
    let gates = c.gates();
    let is_bottom: Vec<bool> = gates.iter().map(|g| g.inputs.iter().all(|w| matches!(w.source, Source::Input(_)))).collect();
    let mut vars: Vec<GeneralizedSymGate> = Vec::new();
    let mut origin: Vec<usize> = Vec::new();
    let mut var_of_gate: HashMap<usize, usize> = HashMap::new();
    let mut var_of_input: HashMap<usize, usize> = HashMap::new();
    let caps = crate::caps::Caps::default();
    let mut upper: Vec<Gate> = Vec::new();
    let mut upper_index: HashMap<usize, usize> = HashMap::new();
    let mut map_wire = |w: &Wire, vars: &mut Vec<GeneralizedSymGate>, origin: &mut Vec<usize>, upper_index: &HashMap<usize, usize>| -> Result<Wire> {
        let source = match w.source {
            Source::Input(i) => Source::Input(*var_of_input.entry(i).or_insert_with(|| {
                vars.push(GeneralizedSymGate::literal(Literal::new(i, false)));
                origin.push(usize::MAX);
                vars.len() - 1
            })),
            Source::Gate(h) if is_bottom[h] => {
                let v = match var_of_gate.get(&h) {
                    Some(&v) => v,
                    None => {
                        vars.push(lower_gate(&gates[h], &caps)?);
                        origin.push(h);
                        var_of_gate.insert(h, vars.len() - 1);
                        vars.len() - 1
                    }
                };
                Source::Input(v)
            }
            Source::Gate(h) => Source::Gate(upper_index[&h]),
        };
        Ok(Wire { source, ..*w })
    };
    let out = c.output();
    if is_bottom[out] {
        let v = map_wire(&Wire::gate(out), &mut vars, &mut origin, &upper_index)?;
        upper.push(Gate::new("z", GateKind::And, vec![v]));
    } else {
        for (h, g) in gates.iter().enumerate() {
            if is_bottom[h] {
                continue;
            }
            if !matches!(g.kind, GateKind::And | GateKind::Or | GateKind::Xor | GateKind::Not) {
                return Err(Error::Shape(format!("gate {} ({}) above the bottom layer is not AND/OR/XOR", g.id, g.kind.name())));
            }
            let inputs = g.inputs.iter().map(|w| map_wire(w, &mut vars, &mut origin, &upper_index)).collect::<Result<Vec<_>>>()?;
            upper_index.insert(h, upper.len());
            upper.push(Gate::new(g.id.clone(), g.kind.clone(), inputs));
        }
    }
    let top = upper_index.get(&out).copied().unwrap_or(upper.len() - 1);
    let abs = Circuit::new(vars.len(), upper, top)?;
    Ok((abs, vars, origin))
}

/// Bottom gate of one copy: the parity of its sampled polynomial's
/// monomials, each monomial an AND of variable gates.
fn copy_gate(abs: &Circuit, vars: &[GeneralizedSymGate], params: &ProbPolyParams, rng: &mut impl Rng) -> Result<GeneralizedSymGate> {
    let p = sample_prob_poly(abs, params, rng)?;
    let monos: Vec<GeneralizedSymGate> =
        p.monomials().map(|m| collapse_and_of_sym(m.iter().map(|&v| vars[v as usize].clone()).collect())).collect();
    Ok(match monos.len() {
        0 => GeneralizedSymGate::constant(false),
        1 => monos.into_iter().next().unwrap(),
        _ => collapse(monos, Combine::Parity),
    })
}

/// #SAT for circuits with an AND/OR/XOR part above the input-reading gates:
/// every copy's upper part is replaced by a sampled F2 polynomial
/// (error 1/(10·4^ell) per copy), and each assignment's count is the most
/// frequent value over `repeats` independent samples.
pub fn count_sat_split_randomized(c: &Circuit, ell: usize, plan: &EvalPlan, repeats: usize, rng: &mut impl Rng) -> Result<CountOutcome> {
    check_ell(c, ell)?;
    let copies = suffix_copies(c, ell, &plan.caps)?;
    let abstractions = copies.iter().map(ac0_abstraction).collect::<Result<Vec<_>>>()?;
    let mut params = ProbPolyParams::new(1, 10 << (2 * ell));
    params.monomial_cap = plan.caps.monomials;
    let m = c.n() - 2 * ell;
    let mut samples: Vec<Vec<u64>> = Vec::with_capacity(repeats);
    let mut rank = None;
    let mut fell_back = false;
    for _ in 0..repeats.max(1) {
        let bottom = abstractions.iter().map(|(abs, vars, _)| copy_gate(abs, vars, &params, rng)).collect::<Result<Vec<_>>>()?;
        let k = bank_counts(bottom, m, plan)?;
        rank = rank.max(k.rank);
        fell_back |= k.fell_back;
        samples.push(k.counts);
    }
    let mode: Vec<u64> = (0..1usize << m)
        .map(|x| {
            let mut freq: HashMap<u64, usize> = HashMap::new();
            for s in &samples {
                *freq.entry(s[x]).or_default() += 1;
            }
            let best = freq.values().copied().max().unwrap();
            freq.into_iter().filter(|&(_, f)| f == best).map(|(v, _)| v).min().unwrap()
        })
        .collect();
    let (count, bit_totals) = totals_from_counts(&mode, ell, copies.len())?;
    Ok(CountOutcome { count, ell, bit_totals, rank, fell_back })
}

fn counts3(g: &Circuit, h: &Circuit, ell: usize, plan: &EvalPlan) -> Result<(u64, u64, u64)> {
    if g.n() != h.n() {
        return Err(Error::Argument(format!("input counts differ: {} vs {}", g.n(), h.n())));
    }
    let both = Circuit::and_of(g, h)?;
    Ok((count_sat_split(g, ell, plan)?.count, count_sat_split(h, ell, plan)?.count, count_sat_split(&both, ell, plan)?.count))
}

/// G ≡ H iff #SAT(G) = #SAT(H) = #SAT(G ∧ H).
pub fn equiv_via_count(g: &Circuit, h: &Circuit, ell: usize, plan: &EvalPlan) -> Result<bool> {
    let (a, b, ab) = counts3(g, h, ell, plan)?;
    Ok(a == b && b == ab)
}

/// G ≡ ¬H iff #SAT(G) + #SAT(H) = 2^n and #SAT(G ∧ H) = 0.
pub fn antiequiv_via_count(g: &Circuit, h: &Circuit, ell: usize, plan: &EvalPlan) -> Result<bool> {
    let (a, b, ab) = counts3(g, h, ell, plan)?;
    Ok(a + b == 1u64 << g.n() && ab == 0)
}
