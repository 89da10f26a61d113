//! Circuit representation.
//!
//! Inputs are 0-based internally and printed as `x1..xn`. Gates are stored in
//! topological order and wires refer to earlier gates by position.

mod bitmap;
mod eval;
mod parse;
mod restrict;
mod shape;

pub use bitmap::TruthTableBitmap;
pub use eval::{assignment, brute_force_count_sat, brute_force_truth_table, brute_force_truth_table_threads, eval_on_assignment, CompiledCircuit};
pub use parse::{parse_circuit, serialize_circuit};
pub use shape::{classify_shape, ShapeReport, ShapeTag};

use crate::error::{Error, Result};
use num_bigint::BigInt;

pub const DEFAULT_ORACLE_LIMIT: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Input(usize),
    Gate(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Wire {
    pub source: Source,
    pub negated: bool,
    pub mult: u32,
}

impl Wire {
    pub fn input(i: usize) -> Self {
        Wire { source: Source::Input(i), negated: false, mult: 1 }
    }

    pub fn gate(g: usize) -> Self {
        Wire { source: Source::Gate(g), negated: false, mult: 1 }
    }

    pub fn neg(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn times(mut self, m: u32) -> Self {
        self.mult = m;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Mod(u32),
    Maj,
    Thr { weights: Vec<BigInt>, threshold: BigInt },
    Sym(Vec<bool>),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Xor => "XOR",
            GateKind::Mod(_) => "MOD",
            GateKind::Maj => "MAJ",
            GateKind::Thr { .. } => "THR",
            GateKind::Sym(_) => "SYM",
        }
    }

    /// Output depends only on the number of true wires.
    pub fn is_symmetric(&self) -> bool {
        matches!(self, GateKind::And | GateKind::Or | GateKind::Xor | GateKind::Mod(_) | GateKind::Maj | GateKind::Sym(_))
    }

    /// Expressible as a single linear threshold.
    pub fn is_threshold(&self) -> bool {
        matches!(self, GateKind::And | GateKind::Or | GateKind::Maj | GateKind::Thr { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<Wire>,
}

impl Gate {
    pub fn new(id: impl Into<String>, kind: GateKind, inputs: Vec<Wire>) -> Self {
        Gate { id: id.into(), kind, inputs }
    }

    pub fn total_mult(&self) -> usize {
        self.inputs.iter().map(|w| w.mult as usize).sum()
    }

    /// The gate's truth value as a function of the number of true wires
    /// (counted with multiplicity). `None` for THR and NOT.
    pub fn sym_table(&self) -> Option<Vec<bool>> {
        let t = self.total_mult();
        let table = match &self.kind {
            GateKind::And => (0..=t).map(|v| v == t).collect(),
            GateKind::Or => (0..=t).map(|v| v >= 1).collect(),
            GateKind::Xor => (0..=t).map(|v| v % 2 == 1).collect(),
            GateKind::Mod(m) => (0..=t).map(|v| v % *m as usize == 0).collect(),
            GateKind::Maj => (0..=t).map(|v| 2 * v > t).collect(),
            GateKind::Sym(tab) => tab.clone(),
            GateKind::Thr { .. } | GateKind::Not => return None,
        };
        Some(table)
    }

    /// Threshold form `(weights per wire, threshold)` for threshold-type gates.
    pub fn thr_form(&self) -> Option<(Vec<BigInt>, BigInt)> {
        let t = self.total_mult() as i64;
        let unit = || self.inputs.iter().map(|w| BigInt::from(w.mult)).collect::<Vec<_>>();
        match &self.kind {
            GateKind::And => Some((unit(), BigInt::from(t))),
            GateKind::Or => Some((unit(), BigInt::from(1))),
            GateKind::Maj => Some((unit(), BigInt::from(t / 2 + 1))),
            GateKind::Thr { weights, threshold } => Some((
                weights.iter().zip(&self.inputs).map(|(w, x)| w * BigInt::from(x.mult)).collect(),
                threshold.clone(),
            )),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    output: usize,
}

impl Circuit {
    /// Validates the DAG and folds NOT gates into wire flags. A NOT gate is kept
    /// only when it is the output.
    pub fn new(n: usize, gates: Vec<Gate>, output: usize) -> Result<Self> {
        let c = Circuit { n, gates, output };
        c.validate()?;
        Ok(c.fold_not())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn output_gate(&self) -> &Gate {
        &self.gates[self.output]
    }

    /// Constant circuit: a SYM gate with no inputs.
    pub fn constant(n: usize, value: bool) -> Self {
        Circuit { n, gates: vec![Gate::new("c", GateKind::Sym(vec![value]), vec![])], output: 0 }
    }

    /// `x_{i+1}` as a one-gate circuit.
    pub fn identity(n: usize, i: usize) -> Self {
        Circuit { n, gates: vec![Gate::new("g", GateKind::And, vec![Wire::input(i)])], output: 0 }
    }

    /// Looks through an output NOT: returns the effective top gate index and
    /// whether its value is negated.
    pub fn top(&self) -> (usize, bool) {
        let g = &self.gates[self.output];
        if let GateKind::Not = g.kind {
            if let Source::Gate(h) = g.inputs[0].source {
                return (h, !g.inputs[0].negated);
            }
        }
        (self.output, false)
    }

    fn validate(&self) -> Result<()> {
        if self.output >= self.gates.len() {
            return Err(Error::Invalid("output gate does not exist".into()));
        }
        let mut ids = std::collections::HashSet::new();
        for (gi, g) in self.gates.iter().enumerate() {
            if !ids.insert(g.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate gate id {}", g.id)));
            }
            for w in &g.inputs {
                if w.mult == 0 {
                    return Err(Error::Invalid(format!("gate {}: zero multiplicity", g.id)));
                }
                match w.source {
                    Source::Input(i) if i >= self.n => {
                        return Err(Error::Invalid(format!("gate {}: input x{} out of range", g.id, i + 1)))
                    }
                    Source::Gate(h) if h >= gi => {
                        return Err(Error::Invalid(format!("gate {}: reference to a later gate", g.id)))
                    }
                    _ => {}
                }
            }
            match &g.kind {
                GateKind::Not if g.inputs.len() != 1 || g.inputs[0].mult != 1 => {
                    return Err(Error::Invalid(format!("gate {}: NOT takes exactly one wire", g.id)))
                }
                GateKind::Mod(m) if *m < 2 => return Err(Error::Invalid(format!("gate {}: MOD needs m >= 2", g.id))),
                GateKind::Thr { weights, .. } if weights.len() != g.inputs.len() => {
                    return Err(Error::Invalid(format!(
                        "gate {}: {} weights for {} wires",
                        g.id,
                        weights.len(),
                        g.inputs.len()
                    )))
                }
                GateKind::Sym(t) if t.len() != g.total_mult() + 1 => {
                    return Err(Error::Invalid(format!(
                        "gate {}: table length {} but {} wires",
                        g.id,
                        t.len(),
                        g.total_mult()
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn fold_not(self) -> Self {
        if !self.gates.iter().any(|g| g.kind == GateKind::Not) {
            return self;
        }
        // resolve[i]: wire equivalent to gate i's output (for NOT gates, looks through)
        let mut resolve: Vec<Wire> = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.iter().enumerate() {
            if g.kind == GateKind::Not {
                let w = g.inputs[0];
                let base = match w.source {
                    Source::Gate(h) => resolve[h],
                    Source::Input(_) => Wire { negated: false, mult: 1, ..w },
                };
                let neg = base.negated ^ w.negated;
                resolve.push(Wire { source: base.source, negated: !neg, mult: 1 });
            } else {
                resolve.push(Wire::gate(i));
            }
        }
        let out_is_not = self.gates[self.output].kind == GateKind::Not;
        let mut map = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            if g.kind == GateKind::Not {
                continue;
            }
            let inputs = g.inputs.iter().map(|w| remap(w, &resolve, &map)).collect();
            map[i] = gates.len();
            gates.push(Gate { id: g.id.clone(), kind: g.kind.clone(), inputs });
        }
        let output = if out_is_not {
            let r = remap(&Wire::gate(self.output), &resolve, &map);
            let id = self.gates[self.output].id.clone();
            match r.source {
                // NOT of a literal: a one-wire AND over the literal
                Source::Input(_) => gates.push(Gate::new(id, GateKind::And, vec![r])),
                Source::Gate(_) => gates.push(Gate::new(id, GateKind::Not, vec![r.neg()])),
            }
            gates.len() - 1
        } else {
            map[self.output]
        };
        Circuit { n: self.n, gates, output }
    }

    /// Total wire count (multiplicities counted).
    pub fn wire_count(&self) -> usize {
        self.gates.iter().map(|g| g.total_mult()).sum()
    }

    /// Disjoint union of two circuits over the same inputs with an AND on top.
    pub fn and_of(a: &Circuit, b: &Circuit) -> Result<Circuit> {
        Circuit::combine(a, b, GateKind::And)
    }

    pub fn combine(a: &Circuit, b: &Circuit, kind: GateKind) -> Result<Circuit> {
        if a.n != b.n {
            return Err(Error::Argument(format!("input counts differ: {} vs {}", a.n, b.n)));
        }
        let mut gates: Vec<Gate> = a.gates.iter().map(|g| Gate { id: format!("a.{}", g.id), ..g.clone() }).collect();
        let off = gates.len();
        for g in &b.gates {
            let inputs = g
                .inputs
                .iter()
                .map(|w| match w.source {
                    Source::Gate(h) => Wire { source: Source::Gate(h + off), ..*w },
                    _ => *w,
                })
                .collect();
            gates.push(Gate { id: format!("b.{}", g.id), kind: g.kind.clone(), inputs });
        }
        let out = gates.len();
        gates.push(Gate::new("top", kind, vec![Wire::gate(a.output), Wire::gate(b.output + off)]));
        Circuit::new(a.n, gates, out)
    }

    /// Negation of the circuit.
    pub fn negate(&self) -> Circuit {
        let mut gates = self.gates.clone();
        let id = format!("{}.not", self.gates[self.output].id);
        gates.push(Gate::new(id, GateKind::Not, vec![Wire::gate(self.output)]));
        let out = gates.len() - 1;
        Circuit::new(self.n, gates, out).expect("negation of a valid circuit")
    }

    /// Replaces every AND/OR/XOR/MOD/MAJ gate by its SYM table.
    pub fn to_sym_tables(&self) -> Circuit {
        let gates = self
            .gates
            .iter()
            .map(|g| match (&g.kind, g.sym_table()) {
                (GateKind::Sym(_), _) | (_, None) => g.clone(),
                (_, Some(t)) => Gate { id: g.id.clone(), kind: GateKind::Sym(t), inputs: g.inputs.clone() },
            })
            .collect();
        Circuit { n: self.n, gates, output: self.output }
    }
}

fn remap(w: &Wire, resolve: &[Wire], map: &[usize]) -> Wire {
    match w.source {
        Source::Input(_) => *w,
        Source::Gate(h) => {
            let r = resolve[h];
            let source = match r.source {
                Source::Gate(t) => Source::Gate(map[t]),
                s => s,
            };
            Wire { source, negated: r.negated ^ w.negated, mult: w.mult }
        }
    }
}
