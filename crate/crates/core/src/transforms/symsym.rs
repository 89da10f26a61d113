//! SYM∘SYM circuits over generalized bottom gates, and the deterministic
//! reduction of arbitrary circuits into that form.

use super::gsym::{collapse, lower_gate, Combine, GeneralizedSymGate, Literal};
use crate::caps::Caps;
use crate::circuit::{Circuit, GateKind, Source, TruthTableBitmap, Wire};
use crate::error::{Error, Result};
use num_bigint::BigInt;

/// A symmetric top gate over generalized bottom gates. A bottom gate listed
/// twice counts twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSymCircuit {
    pub n: usize,
    pub bottom: Vec<GeneralizedSymGate>,
    /// `top[v]` is the output when `v` bottom gates are true; length bottom+1.
    pub top: Vec<bool>,
}

impl SymSymCircuit {
    pub fn new(n: usize, bottom: Vec<GeneralizedSymGate>, top: Vec<bool>) -> Result<Self> {
        if top.len() != bottom.len() + 1 {
            return Err(Error::Invalid(format!("top table length {} for {} bottom gates", top.len(), bottom.len())));
        }
        if let Some(l) = bottom.iter().flat_map(|g| g.literals.iter()).find(|l| l.input >= n) {
            return Err(Error::Invalid(format!("literal on input {} beyond n={n}", l.input + 1)));
        }
        Ok(SymSymCircuit { n, bottom, top })
    }

    pub fn eval(&self, x: &[bool]) -> bool {
        self.top[self.bottom.iter().filter(|g| g.eval_structural(x)).count()]
    }

    /// Per-assignment evaluation of every input.
    pub fn brute_force(&self) -> TruthTableBitmap {
        let mut x = vec![false; self.n];
        TruthTableBitmap::from_fn(self.n, |idx| {
            for (i, b) in x.iter_mut().enumerate() {
                *b = idx >> i & 1 == 1;
            }
            self.eval(&x)
        })
    }

    /// Reduces a circuit: a symmetric top keeps its children as separate
    /// bottom gates (each collapsed to one gate); any other top is collapsed
    /// whole under an identity top.
    pub fn from_circuit(c: &Circuit, caps: &Caps) -> Result<Self> {
        let (top, neg) = c.top();
        let g = &c.gates()[top];
        let (bottom, mut table) = match g.sym_table() {
            Some(t) => {
                let mut bottom = Vec::new();
                for w in &g.inputs {
                    let part = wire_gate(c, w, caps)?;
                    for _ in 0..w.mult {
                        bottom.push(part.clone());
                    }
                }
                (bottom, t)
            }
            None => (vec![collapse_gate(c, top, caps)?], vec![false, true]),
        };
        if neg {
            table.iter_mut().for_each(|b| *b = !*b);
        }
        SymSymCircuit::new(c.n(), bottom, table)
    }
}

fn wire_gate(c: &Circuit, w: &Wire, caps: &Caps) -> Result<GeneralizedSymGate> {
    let g = match w.source {
        Source::Input(i) => GeneralizedSymGate::literal(Literal::new(i, false)),
        Source::Gate(h) => collapse_gate(c, h, caps)?,
    };
    Ok(if w.negated { g.negate() } else { g })
}

/// Deterministic reduction of the sub-circuit rooted at gate `g` into one
/// generalized gate: gates over inputs are lowered directly, higher gates
/// become a digit-packed combination of their children.
pub fn collapse_gate(c: &Circuit, g: usize, caps: &Caps) -> Result<GeneralizedSymGate> {
    let gate = &c.gates()[g];
    if gate.inputs.iter().all(|w| matches!(w.source, Source::Input(_))) {
        return lower_gate(gate, caps);
    }
    let parts: Vec<GeneralizedSymGate> = gate.inputs.iter().map(|w| wire_gate(c, w, caps)).collect::<Result<_>>()?;
    let mults: Vec<u64> = gate.inputs.iter().map(|w| w.mult as u64).collect();
    Ok(match &gate.kind {
        GateKind::Not => parts.into_iter().next().unwrap().negate(),
        GateKind::And => collapse(parts, Combine::All),
        GateKind::Or => collapse(parts, Combine::Any),
        GateKind::Xor => {
            let odd: Vec<GeneralizedSymGate> = parts.into_iter().zip(&mults).filter(|(_, m)| *m % 2 == 1).map(|(p, _)| p).collect();
            if odd.is_empty() {
                GeneralizedSymGate::constant(false)
            } else {
                collapse(odd, Combine::Parity)
            }
        }
        GateKind::Thr { weights, threshold } => collapse(
            parts,
            Combine::Threshold {
                weights: weights.iter().zip(&mults).map(|(w, m)| w * BigInt::from(*m)).collect(),
                threshold: threshold.clone(),
            },
        ),
        _ => collapse(parts, Combine::Count { mults, table: gate.sym_table().unwrap() }),
    })
}

/// The whole circuit as one generalized gate.
pub fn collapse_circuit(c: &Circuit, caps: &Caps) -> Result<GeneralizedSymGate> {
    collapse_gate(c, c.output(), caps)
}
