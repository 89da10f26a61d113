//! Random instance generators used by tests, the acceptance suite and `selfcheck`.

use crate::circuit::{Circuit, Gate, GateKind, Wire};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BottomKind {
    /// SYM, XOR, MOD, MAJ, AND or OR.
    Sym,
    /// THR with random signed weights.
    Thr,
    /// Either of the above.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopKind {
    Sym,
    And,
    Or,
    Xor,
    Maj,
    Thr,
}

fn random_bits(rng: &mut impl Rng, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.gen()).collect()
}

fn pick_wires(rng: &mut impl Rng, pool: &[Wire], fanin: usize, mult_max: u32) -> Vec<Wire> {
    let mut ws: Vec<Wire> = pool.choose_multiple(rng, fanin.min(pool.len())).copied().collect();
    for w in &mut ws {
        w.negated = rng.gen_bool(0.3);
        w.mult = if mult_max > 1 && rng.gen_bool(0.2) { rng.gen_range(2..=mult_max) } else { 1 };
    }
    ws
}

fn random_weight(rng: &mut impl Rng, bound: i64) -> BigInt {
    BigInt::from(rng.gen_range(-bound..=bound))
}

/// A gate of the requested family reading the given wires.
pub fn random_gate(rng: &mut impl Rng, id: String, kind: BottomKind, inputs: Vec<Wire>, wbound: i64) -> Gate {
    let kind = match kind {
        BottomKind::Mixed => {
            if rng.gen_bool(0.5) {
                BottomKind::Sym
            } else {
                BottomKind::Thr
            }
        }
        k => k,
    };
    let total: usize = inputs.iter().map(|w| w.mult as usize).sum();
    let gk = match kind {
        BottomKind::Thr => {
            let weights: Vec<BigInt> = inputs.iter().map(|_| random_weight(rng, wbound)).collect();
            let span: i64 = weights.iter().map(|w| i64::try_from(w.magnitude().clone()).unwrap_or(i64::MAX / 4)).sum::<i64>()
                * inputs.iter().map(|w| w.mult as i64).max().unwrap_or(1);
            let threshold = BigInt::from(rng.gen_range(-span / 2..=span / 2 + 1));
            GateKind::Thr { weights, threshold }
        }
        _ => match rng.gen_range(0..6) {
            0 => GateKind::Sym(random_bits(rng, total + 1)),
            1 => GateKind::Xor,
            2 => GateKind::Mod(rng.gen_range(2..=4)),
            3 => GateKind::Maj,
            4 => GateKind::And,
            _ => GateKind::Or,
        },
    };
    Gate::new(id, gk, inputs)
}

fn top_gate(rng: &mut impl Rng, kind: TopKind, inputs: Vec<Wire>, wbound: i64) -> Gate {
    let total: usize = inputs.iter().map(|w| w.mult as usize).sum();
    let gk = match kind {
        TopKind::Sym => GateKind::Sym(random_bits(rng, total + 1)),
        TopKind::And => GateKind::And,
        TopKind::Or => GateKind::Or,
        TopKind::Xor => GateKind::Xor,
        TopKind::Maj => GateKind::Maj,
        TopKind::Thr => {
            let weights: Vec<BigInt> = inputs.iter().map(|_| random_weight(rng, wbound)).collect();
            let span: i64 = weights.iter().map(|w| i64::try_from(w.magnitude().clone()).unwrap()).sum();
            GateKind::Thr { weights, threshold: BigInt::from(rng.gen_range(-span / 2..=span / 2 + 1)) }
        }
    };
    Gate::new("out", gk, inputs)
}

#[derive(Clone, Debug)]
pub struct Depth2Config {
    pub n: usize,
    pub bottoms: usize,
    pub fanin: (usize, usize),
    pub weight: i64,
    pub top: TopKind,
    pub bottom: BottomKind,
    /// Direct input wires into the top gate.
    pub direct: usize,
    pub max_mult: u32,
}

impl Depth2Config {
    pub fn new(n: usize, bottoms: usize, top: TopKind, bottom: BottomKind) -> Self {
        Depth2Config { n, bottoms, fanin: (1, n.min(6)), weight: 20, top, bottom, direct: 0, max_mult: 1 }
    }
}

/// Random depth-two circuit.
pub fn random_depth2(rng: &mut impl Rng, cfg: &Depth2Config) -> Circuit {
    let pool: Vec<Wire> = (0..cfg.n).map(Wire::input).collect();
    let mut gates = Vec::new();
    for b in 0..cfg.bottoms {
        let f = rng.gen_range(cfg.fanin.0..=cfg.fanin.1);
        let ws = pick_wires(rng, &pool, f, cfg.max_mult);
        gates.push(random_gate(rng, format!("g{}", b + 1), cfg.bottom, ws, cfg.weight));
    }
    let mut top_inputs: Vec<Wire> = (0..cfg.bottoms)
        .map(|g| {
            let mut w = Wire::gate(g);
            w.negated = rng.gen_bool(0.25);
            if cfg.max_mult > 1 && rng.gen_bool(0.2) {
                w.mult = rng.gen_range(2..=cfg.max_mult);
            }
            w
        })
        .collect();
    top_inputs.extend(pick_wires(rng, &pool, cfg.direct, 1));
    top_inputs.shuffle(rng);
    gates.push(top_gate(rng, cfg.top, top_inputs, cfg.weight));
    let out = gates.len() - 1;
    Circuit::new(cfg.n, gates, out).expect("generated circuit is valid")
}

/// Random SYM∘SYM circuit with at most `max_wires` wires.
pub fn random_symsym(rng: &mut impl Rng, n: usize, max_wires: usize) -> Circuit {
    loop {
        let bottoms = rng.gen_range(1..=(max_wires / 4).clamp(1, 24));
        let mut cfg = Depth2Config::new(n, bottoms, TopKind::Sym, BottomKind::Sym);
        cfg.fanin = (1, n.min((max_wires / bottoms).saturating_sub(2).max(1)));
        cfg.direct = rng.gen_range(0..=2);
        cfg.max_mult = 2;
        let c = random_depth2(rng, &cfg);
        if c.wire_count() <= max_wires {
            return c;
        }
    }
}

/// Random DAG over all gate kinds.
pub fn random_circuit(rng: &mut impl Rng, n: usize, gates: usize) -> Circuit {
    let mut pool: Vec<Wire> = (0..n).map(Wire::input).collect();
    let mut gs: Vec<Gate> = Vec::new();
    for g in 0..gates {
        let id = format!("g{}", g + 1);
        let gate = if g > 0 && rng.gen_bool(0.1) {
            let src = *pool[n..].choose(rng).unwrap();
            Gate::new(id, GateKind::Not, vec![Wire { negated: false, mult: 1, ..src }])
        } else {
            let f = rng.gen_range(1..=4.min(pool.len()));
            // favour recent gates so the circuit has some depth
            let mut ws = pick_wires(rng, &pool, f, 3);
            if g > 0 && rng.gen_bool(0.7) {
                ws[0] = Wire { source: crate::circuit::Source::Gate(g - 1), ..ws[0] };
                ws.dedup_by_key(|w| w.source);
            }
            let kind = if rng.gen_bool(0.3) { BottomKind::Thr } else { BottomKind::Sym };
            random_gate(rng, id, kind, ws, 6)
        };
        gs.push(gate);
        pool.push(Wire::gate(g));
    }
    Circuit::new(n, gs, gates - 1).expect("generated circuit is valid")
}

/// OR of ANDs (or AND of ORs) over THR/SYM bottom gates.
pub fn random_ac0_top(rng: &mut impl Rng, n: usize, bottoms: usize, clauses: usize) -> Circuit {
    let pool: Vec<Wire> = (0..n).map(Wire::input).collect();
    let mut gates = Vec::new();
    for b in 0..bottoms {
        let f = rng.gen_range(2..=n.min(6));
        let ws = pick_wires(rng, &pool, f, 1);
        gates.push(random_gate(rng, format!("b{}", b + 1), BottomKind::Mixed, ws, 8));
    }
    let or_top = rng.gen_bool(0.5);
    let mut mids = Vec::new();
    for k in 0..clauses {
        let f = rng.gen_range(1..=bottoms.min(3));
        let mut idx: Vec<usize> = (0..bottoms).collect();
        idx.shuffle(rng);
        let ws = idx[..f].iter().map(|&b| Wire { negated: rng.gen_bool(0.3), ..Wire::gate(b) }).collect();
        let kind = if or_top { GateKind::And } else { GateKind::Or };
        gates.push(Gate::new(format!("m{}", k + 1), kind, ws));
        mids.push(gates.len() - 1);
    }
    let ws = mids.iter().map(|&m| Wire::gate(m)).collect();
    gates.push(Gate::new("out", if or_top { GateKind::Or } else { GateKind::And }, ws));
    let out = gates.len() - 1;
    Circuit::new(n, gates, out).expect("generated circuit is valid")
}

/// Uniform integer with `|v| < 2^bits`.
pub fn random_big(rng: &mut impl Rng, bits: u32) -> BigInt {
    let words: Vec<u32> = (0..bits.div_ceil(32)).map(|_| rng.gen()).collect();
    let mag = num_bigint::BigUint::from_slice(&words) >> (words.len() as u32 * 32 - bits);
    if rng.gen() {
        -BigInt::from(mag)
    } else {
        BigInt::from(mag)
    }
}

/// THR∘THR circuit whose weights have up to `bits` bits; `direct` inputs
/// also feed the top gate.
pub fn random_thrthr(rng: &mut impl Rng, n: usize, bottoms: usize, bits: u32, direct: usize) -> Circuit {
    let pool: Vec<Wire> = (0..n).map(Wire::input).collect();
    let mut gates = Vec::new();
    let thr = |rng: &mut _, ws: &[Wire]| {
        let weights: Vec<BigInt> = ws.iter().map(|_| random_big(rng, bits)).collect();
        let span: BigInt = weights.iter().map(|w| w.magnitude().clone()).map(BigInt::from).sum();
        let threshold = if span == BigInt::from(0) { BigInt::from(0) } else { random_big(rng, bits) % span };
        GateKind::Thr { weights, threshold }
    };
    for b in 0..bottoms {
        let f = rng.gen_range(1..=n);
        let ws = pick_wires(rng, &pool, f, 1);
        let kind = thr(rng, &ws);
        gates.push(Gate::new(format!("g{}", b + 1), kind, ws));
    }
    let mut top: Vec<Wire> = (0..bottoms).map(|g| Wire { negated: rng.gen_bool(0.2), ..Wire::gate(g) }).collect();
    top.extend(pick_wires(rng, &pool, direct, 1));
    let kind = thr(rng, &top);
    gates.push(Gate::new("out", kind, top));
    let out = gates.len() - 1;
    Circuit::new(n, gates, out).expect("generated circuit is valid")
}
