//! Gates whose output is a predicate of a nonnegative weighted sum of literals.

use crate::caps::Caps;
use crate::circuit::{Gate, GateKind, Source};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub input: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(input: usize, negated: bool) -> Self {
        Literal { input, negated }
    }

    #[inline]
    pub fn value(&self, x: &[bool]) -> bool {
        x[self.input] ^ self.negated
    }
}

/// How the parts of a collapsed gate are combined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Combine {
    All,
    Any,
    Parity,
    /// `table[Σ mults_i·part_i]`.
    Count { mults: Vec<u64>, table: Vec<bool> },
    /// `Σ weights_i·part_i >= threshold`.
    Threshold { weights: Vec<BigInt>, threshold: BigInt },
}

impl Combine {
    pub fn apply(&self, vals: &[bool]) -> bool {
        match self {
            Combine::All => vals.iter().all(|&v| v),
            Combine::Any => vals.iter().any(|&v| v),
            Combine::Parity => vals.iter().filter(|&&v| v).count() % 2 == 1,
            Combine::Count { mults, table } => {
                let s: u64 = vals.iter().zip(mults).filter(|(v, _)| **v).map(|(_, m)| *m).sum();
                table.get(s as usize).copied().unwrap_or(false)
            }
            Combine::Threshold { weights, threshold } => {
                vals.iter().zip(weights).filter(|(v, _)| **v).map(|(_, w)| w).sum::<BigInt>() >= *threshold
            }
        }
    }
}

/// Predicate on the weighted sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SumPredicate {
    /// Accepts `v` iff `v < len` and `table[v]`.
    Table(Vec<bool>),
    /// Accepts `v` iff `v >= t`.
    AtLeast(BigUint),
    /// Base-`base` digit `i` of the sum is the weighted sum of `parts[i]`;
    /// the parts' outputs are merged by `combine`.
    Digits { base: BigUint, parts: Vec<GeneralizedSymGate>, combine: Combine },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralizedSymGate {
    pub literals: Vec<Literal>,
    pub weights: Vec<BigUint>,
    pub predicate: SumPredicate,
    /// Output is complemented.
    pub negated: bool,
}

impl SumPredicate {
    pub fn accepts(&self, v: &BigUint) -> bool {
        match self {
            SumPredicate::Table(t) => usize::try_from(v).ok().and_then(|i| t.get(i).copied()).unwrap_or(false),
            SumPredicate::AtLeast(t) => v >= t,
            SumPredicate::Digits { base, parts, combine } => {
                let mut rest = v.clone();
                let mut vals = Vec::with_capacity(parts.len());
                for p in parts {
                    let (q, d) = rest.div_rem(base);
                    vals.push(p.predicate.accepts(&d) ^ p.negated);
                    rest = q;
                }
                combine.apply(&vals)
            }
        }
    }
}

impl GeneralizedSymGate {
    pub fn constant(v: bool) -> Self {
        GeneralizedSymGate { literals: vec![], weights: vec![], predicate: SumPredicate::Table(vec![v]), negated: false }
    }

    pub fn literal(l: Literal) -> Self {
        GeneralizedSymGate {
            literals: vec![l],
            weights: vec![BigUint::one()],
            predicate: SumPredicate::Table(vec![false, true]),
            negated: false,
        }
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn is_atomic(&self) -> bool {
        !matches!(self.predicate, SumPredicate::Digits { .. })
    }

    /// Σ weights, the largest achievable sum.
    pub fn total_weight(&self) -> BigUint {
        self.weights.iter().sum()
    }

    pub fn sum(&self, x: &[bool]) -> BigUint {
        self.literals.iter().zip(&self.weights).filter(|(l, _)| l.value(x)).map(|(_, w)| w).sum()
    }

    /// Predicate value on a sum, including the output complement.
    pub fn accepts(&self, v: &BigUint) -> bool {
        self.predicate.accepts(v) ^ self.negated
    }

    /// Output on a full assignment, through the encoded sum.
    pub fn eval(&self, x: &[bool]) -> bool {
        self.accepts(&self.sum(x))
    }

    /// Output on a full assignment, evaluating parts directly.
    pub fn eval_structural(&self, x: &[bool]) -> bool {
        let v = match &self.predicate {
            SumPredicate::Digits { parts, combine, .. } => {
                let vals: Vec<bool> = parts.iter().map(|p| p.eval_structural(x)).collect();
                combine.apply(&vals)
            }
            p => p.accepts(&self.sum(x)),
        };
        v ^ self.negated
    }

    /// Number of atomic gates in the expression tree.
    pub fn leaf_count(&self) -> usize {
        match &self.predicate {
            SumPredicate::Digits { parts, .. } => parts.iter().map(|p| p.leaf_count()).sum(),
            _ => 1,
        }
    }

    /// Explicit accepted sums over `0..=Σw` (testing aid; domain must be small).
    pub fn accepted_sums(&self) -> Vec<BigUint> {
        let total = self.total_weight();
        let mut out = Vec::new();
        let mut v = BigUint::zero();
        while v <= total {
            if self.accepts(&v) {
                out.push(v.clone());
            }
            v += 1u32;
        }
        out
    }
}

fn merge_literals(terms: impl IntoIterator<Item = (Literal, BigUint)>) -> (Vec<Literal>, Vec<BigUint>) {
    let mut index: HashMap<Literal, usize> = HashMap::new();
    let mut lits = Vec::new();
    let mut ws: Vec<BigUint> = Vec::new();
    for (l, w) in terms {
        match index.get(&l) {
            Some(&k) => ws[k] += w,
            None => {
                index.insert(l, lits.len());
                lits.push(l);
                ws.push(w);
            }
        }
    }
    let keep: Vec<usize> = (0..lits.len()).filter(|&k| !ws[k].is_zero()).collect();
    (keep.iter().map(|&k| lits[k]).collect(), keep.iter().map(|&k| ws[k].clone()).collect())
}

fn input_literals(g: &Gate) -> Result<Vec<(Literal, u32)>> {
    g.inputs
        .iter()
        .map(|w| match w.source {
            Source::Input(i) => Ok((Literal::new(i, w.negated), w.mult)),
            Source::Gate(_) => Err(Error::Shape(format!("gate {} reads another gate", g.id))),
        })
        .collect()
}

/// Lowers a THR gate over (possibly negated) inputs. Negative weights are
/// absorbed by complementing the literal and raising the threshold.
pub fn normalize_thr_to_sym(g: &Gate, caps: &Caps) -> Result<GeneralizedSymGate> {
    let (weights, threshold) = g.thr_form().ok_or_else(|| Error::Shape(format!("gate {} is not a threshold gate", g.id)))?;
    let lits = input_literals(g)?;
    let magnitude: BigUint = weights.iter().map(|w| w.magnitude().clone()).sum();
    if magnitude > caps.weight {
        return Err(Error::cap("THR weight magnitude", &caps.weight));
    }
    // signed weight per literal first, so x and x with opposite signs cancel
    let mut signed: Vec<(Literal, BigInt)> = Vec::new();
    for ((l, _), w) in lits.iter().zip(&weights) {
        match signed.iter_mut().find(|(m, _)| m == l) {
            Some((_, acc)) => *acc += w,
            None => signed.push((*l, w.clone())),
        }
    }
    let mut t = threshold;
    let mut terms = Vec::new();
    for (l, w) in signed {
        match w.sign() {
            Sign::Minus => {
                t += BigInt::from(w.magnitude().clone());
                terms.push((Literal::new(l.input, !l.negated), w.magnitude().clone()));
            }
            Sign::Plus => terms.push((l, w.magnitude().clone())),
            Sign::NoSign => {}
        }
    }
    let (literals, weights) = merge_literals(terms);
    let t = if t.sign() == Sign::Minus { BigUint::zero() } else { t.magnitude().clone() };
    Ok(GeneralizedSymGate { literals, weights, predicate: SumPredicate::AtLeast(t), negated: false })
}

/// Lowers any gate that reads only inputs.
pub fn lower_gate(g: &Gate, caps: &Caps) -> Result<GeneralizedSymGate> {
    if let GateKind::Thr { .. } = g.kind {
        return normalize_thr_to_sym(g, caps);
    }
    if g.kind == GateKind::Not {
        let l = input_literals(g)?[0].0;
        return Ok(GeneralizedSymGate::literal(Literal::new(l.input, !l.negated)));
    }
    let table = g.sym_table().expect("symmetric gate");
    let lits = input_literals(g)?;
    let (literals, weights) = merge_literals(lits.iter().map(|(l, m)| (*l, BigUint::from(*m))));
    Ok(GeneralizedSymGate { literals, weights, predicate: SumPredicate::Table(table), negated: false })
}

/// Packs several gates over the same inputs into one gate whose sum carries
/// each gate's sum in its own base-B digit, B = 1 + max total weight.
pub fn collapse(gates: Vec<GeneralizedSymGate>, combine: Combine) -> GeneralizedSymGate {
    let max_total = gates.iter().map(|g| g.total_weight()).max().unwrap_or_default();
    let base = (max_total + 1u32).max(BigUint::from(2u32));
    let mut terms = Vec::new();
    let mut scale = BigUint::one();
    for g in &gates {
        for (l, w) in g.literals.iter().zip(&g.weights) {
            terms.push((*l, w * &scale));
        }
        scale *= &base;
    }
    let (literals, weights) = merge_literals(terms);
    GeneralizedSymGate { literals, weights, predicate: SumPredicate::Digits { base, parts: gates, combine }, negated: false }
}

/// Single gate equal to the AND of the given gates.
pub fn collapse_and_of_sym(gates: Vec<GeneralizedSymGate>) -> GeneralizedSymGate {
    match gates.len() {
        0 => GeneralizedSymGate::constant(true),
        1 => gates.into_iter().next().unwrap(),
        _ => collapse(gates, Combine::All),
    }
}

/// Per-part sums read off the base-B digits of the encoded sum.
pub fn digits(g: &GeneralizedSymGate, v: &BigUint) -> Option<Vec<BigUint>> {
    let SumPredicate::Digits { base, parts, .. } = &g.predicate else { return None };
    let mut rest = v.clone();
    Some(
        parts
            .iter()
            .map(|_| {
                let (q, d) = rest.div_rem(base);
                rest = q;
                d
            })
            .collect(),
    )
}
