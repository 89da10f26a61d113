use super::{Circuit, Gate, GateKind, Source, Wire};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Copy)]
enum Val {
    Const(bool),
    Live(Wire),
}

impl Circuit {
    /// Plugs constants into the given inputs (0-based indices). Remaining inputs
    /// are renumbered in their original order.
    pub fn restrict(&self, assignment: &[(usize, bool)]) -> Result<Circuit> {
        let mut fixed: Vec<Option<bool>> = vec![None; self.n()];
        for &(i, v) in assignment {
            if i >= self.n() {
                return Err(Error::Argument(format!("input index {} out of range", i + 1)));
            }
            fixed[i] = Some(v);
        }
        let mut renum = vec![usize::MAX; self.n()];
        let mut n2 = 0;
        for i in 0..self.n() {
            if fixed[i].is_none() {
                renum[i] = n2;
                n2 += 1;
            }
        }
        let mut vals: Vec<Val> = Vec::with_capacity(self.gates().len());
        let mut gates: Vec<Gate> = Vec::new();
        for g in self.gates() {
            let resolved: Vec<Val> = g
                .inputs
                .iter()
                .map(|w| match w.source {
                    Source::Input(i) => match fixed[i] {
                        Some(v) => Val::Const(v ^ w.negated),
                        None => Val::Live(Wire { source: Source::Input(renum[i]), ..*w }),
                    },
                    Source::Gate(h) => match vals[h] {
                        Val::Const(v) => Val::Const(v ^ w.negated),
                        Val::Live(base) => Val::Live(Wire { source: base.source, negated: w.negated, mult: w.mult }),
                    },
                })
                .collect();
            let live: Vec<Wire> = resolved.iter().filter_map(|v| if let Val::Live(w) = v { Some(*w) } else { None }).collect();
            let all_live = live.len() == resolved.len();
            let new_gate = |kind: GateKind, inputs: Vec<Wire>, gates: &mut Vec<Gate>| {
                gates.push(Gate::new(g.id.clone(), kind, inputs));
                Val::Live(Wire::gate(gates.len() - 1))
            };
            let val = match &g.kind {
                GateKind::And | GateKind::Or => {
                    let absorbing = matches!(g.kind, GateKind::Or);
                    if resolved.iter().any(|v| matches!(v, Val::Const(b) if *b == absorbing)) {
                        Val::Const(absorbing)
                    } else if live.is_empty() {
                        Val::Const(!absorbing)
                    } else {
                        new_gate(g.kind.clone(), live, &mut gates)
                    }
                }
                GateKind::Not => match resolved[0] {
                    Val::Const(v) => Val::Const(!v),
                    Val::Live(w) => new_gate(GateKind::Not, vec![w], &mut gates),
                },
                GateKind::Thr { weights, threshold } => {
                    let mut t = threshold.clone();
                    let mut ws = Vec::new();
                    for ((v, w), wire) in resolved.iter().zip(weights).zip(&g.inputs) {
                        match v {
                            Val::Const(true) => t -= w * BigInt::from(wire.mult),
                            Val::Const(false) => {}
                            Val::Live(_) => ws.push(w.clone()),
                        }
                    }
                    if live.is_empty() {
                        Val::Const(BigInt::zero() >= t)
                    } else {
                        new_gate(GateKind::Thr { weights: ws, threshold: t }, live, &mut gates)
                    }
                }
                _ if all_live => new_gate(g.kind.clone(), live, &mut gates),
                _ => {
                    let table = g.sym_table().unwrap();
                    let shift: usize = resolved
                        .iter()
                        .zip(&g.inputs)
                        .filter(|(v, _)| matches!(v, Val::Const(true)))
                        .map(|(_, w)| w.mult as usize)
                        .sum();
                    if live.is_empty() {
                        Val::Const(table[shift])
                    } else {
                        let rem: usize = live.iter().map(|w| w.mult as usize).sum();
                        new_gate(GateKind::Sym(table[shift..=shift + rem].to_vec()), live, &mut gates)
                    }
                }
            };
            vals.push(val);
        }
        match vals[self.output()] {
            Val::Const(v) => Ok(Circuit::constant(n2, v)),
            Val::Live(w) => {
                let Source::Gate(out) = w.source else { unreachable!("gate values are gates") };
                Circuit::new(n2, gates, out)
            }
        }
    }

    /// Restriction of the first `k` inputs to the bits of `j` (x1 = bit 0).
    pub fn restrict_prefix(&self, k: usize, j: usize) -> Result<Circuit> {
        let a: Vec<(usize, bool)> = (0..k).map(|i| (i, j >> i & 1 == 1)).collect();
        self.restrict(&a)
    }

    /// Restriction of the last `k` inputs to the bits of `j`.
    pub fn restrict_suffix(&self, k: usize, j: usize) -> Result<Circuit> {
        let base = self.n().checked_sub(k).ok_or_else(|| Error::Argument("suffix longer than input".into()))?;
        let a: Vec<(usize, bool)> = (0..k).map(|i| (base + i, j >> i & 1 == 1)).collect();
        self.restrict(&a)
    }
}
