use super::{Circuit, GateKind, Source, TruthTableBitmap, Wire, DEFAULT_ORACLE_LIMIT};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

fn wire_value(w: &Wire, x: &[bool], vals: &[bool]) -> bool {
    let v = match w.source {
        Source::Input(i) => x[i],
        Source::Gate(g) => vals[g],
    };
    v ^ w.negated
}

/// Reference semantics, gate by gate, with arbitrary-precision THR sums.
pub fn eval_on_assignment(c: &Circuit, x: &[bool]) -> bool {
    assert_eq!(x.len(), c.n(), "assignment length");
    let mut vals = Vec::with_capacity(c.gates().len());
    for g in c.gates() {
        let count: usize = g.inputs.iter().filter(|w| wire_value(w, x, &vals)).map(|w| w.mult as usize).sum();
        let total = g.total_mult();
        let v = match &g.kind {
            GateKind::And => g.inputs.iter().all(|w| wire_value(w, x, &vals)),
            GateKind::Or => g.inputs.iter().any(|w| wire_value(w, x, &vals)),
            GateKind::Not => !wire_value(&g.inputs[0], x, &vals),
            GateKind::Xor => count % 2 == 1,
            GateKind::Mod(m) => count % *m as usize == 0,
            GateKind::Maj => 2 * count > total,
            GateKind::Sym(t) => t[count],
            GateKind::Thr { weights, threshold } => {
                let mut s = BigInt::zero();
                for (w, wire) in weights.iter().zip(&g.inputs) {
                    if wire_value(wire, x, &vals) {
                        s += w * BigInt::from(wire.mult);
                    }
                }
                s >= *threshold
            }
        };
        vals.push(v);
    }
    vals[c.output()]
}

/// Bits of the assignment index as a Boolean vector.
pub fn assignment(n: usize, idx: usize) -> Vec<bool> {
    (0..n).map(|i| idx >> i & 1 == 1).collect()
}

#[derive(Clone, Debug)]
enum Op {
    And,
    Or,
    Xor,
    Not,
    Count(Vec<bool>),
    ThrSmall { w: Vec<i128>, t: i128 },
    ThrBig { w: Vec<BigInt>, t: BigInt },
}

/// Circuit lowered to word-parallel form for exhaustive evaluation.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    n: usize,
    ops: Vec<(Op, Vec<Wire>)>,
    output: usize,
}

const LOW_PATTERNS: [u64; 6] = [
    0xaaaa_aaaa_aaaa_aaaa,
    0xcccc_cccc_cccc_cccc,
    0xf0f0_f0f0_f0f0_f0f0,
    0xff00_ff00_ff00_ff00,
    0xffff_0000_ffff_0000,
    0xffff_ffff_0000_0000,
];

const BLOCK_WORDS: usize = 64;

impl CompiledCircuit {
    pub fn new(c: &Circuit) -> Self {
        let ops = c
            .gates()
            .iter()
            .map(|g| {
                let op = match &g.kind {
                    GateKind::And => Op::And,
                    GateKind::Or => Op::Or,
                    GateKind::Not => Op::Not,
                    GateKind::Xor => Op::Xor,
                    GateKind::Thr { .. } => {
                        let (w, t) = g.thr_form().unwrap();
                        let bound: BigInt = w.iter().map(|v| if v < &BigInt::zero() { -v } else { v.clone() }).sum();
                        let fits = bound < BigInt::from(1u128 << 100) && t.to_i128().is_some_and(|t| t.abs() < 1 << 100);
                        if fits {
                            Op::ThrSmall { w: w.iter().map(|v| v.to_i128().unwrap()).collect(), t: t.to_i128().unwrap() }
                        } else {
                            Op::ThrBig { w, t }
                        }
                    }
                    _ => Op::Count(g.sym_table().unwrap()),
                };
                (op, g.inputs.clone())
            })
            .collect();
        CompiledCircuit { n: c.n(), ops, output: c.output() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Output on the assignment with index `idx`.
    pub fn eval_index(&self, idx: usize) -> bool {
        let mut vals: Vec<bool> = Vec::with_capacity(self.ops.len());
        let val = |w: &Wire, vals: &[bool]| {
            (match w.source {
                Source::Input(i) => idx >> i & 1 == 1,
                Source::Gate(g) => vals[g],
            }) ^ w.negated
        };
        for (op, wires) in &self.ops {
            let v = match op {
                Op::And => wires.iter().all(|w| val(w, &vals)),
                Op::Or => wires.iter().any(|w| val(w, &vals)),
                Op::Not => !val(&wires[0], &vals),
                Op::Xor => wires.iter().filter(|w| w.mult % 2 == 1 && val(w, &vals)).count() % 2 == 1,
                Op::Count(t) => t[wires.iter().filter(|w| val(w, &vals)).map(|w| w.mult as usize).sum::<usize>()],
                Op::ThrSmall { w, t } => {
                    wires.iter().zip(w).filter(|(x, _)| val(x, &vals)).map(|(_, w)| *w).sum::<i128>() >= *t
                }
                Op::ThrBig { w, t } => wires.iter().zip(w).filter(|(x, _)| val(x, &vals)).map(|(_, w)| w).sum::<BigInt>() >= *t,
            };
            vals.push(v);
        }
        vals[self.output]
    }

    /// Evaluates assignments `start .. start + 64*nwords` (`start` a multiple
    /// of 64 unless n < 6) and writes the output words.
    pub fn eval_block(&self, start: usize, out: &mut [u64]) {
        let nw = out.len();
        let mut vals = vec![0u64; self.ops.len() * nw];
        let mut counts: Vec<u32> = Vec::new();
        let mut sums: Vec<i128> = Vec::new();
        let input_word = |i: usize, w: usize| -> u64 {
            if i < 6 {
                LOW_PATTERNS[i]
            } else if (start + 64 * w) >> i & 1 == 1 {
                !0
            } else {
                0
            }
        };
        for (gi, (op, wires)) in self.ops.iter().enumerate() {
            let (done, rest) = vals.split_at_mut(gi * nw);
            let dst = &mut rest[..nw];
            let src = |wire: &Wire, w: usize| -> u64 {
                let v = match wire.source {
                    Source::Input(i) => input_word(i, w),
                    Source::Gate(g) => done[g * nw + w],
                };
                if wire.negated {
                    !v
                } else {
                    v
                }
            };
            match op {
                Op::And | Op::Or | Op::Xor | Op::Not => {
                    for (w, d) in dst.iter_mut().enumerate() {
                        *d = match op {
                            Op::And => wires.iter().fold(!0, |a, x| a & src(x, w)),
                            Op::Or => wires.iter().fold(0, |a, x| a | src(x, w)),
                            Op::Xor => wires.iter().filter(|x| x.mult % 2 == 1).fold(0, |a, x| a ^ src(x, w)),
                            _ => !src(&wires[0], w),
                        };
                    }
                }
                Op::Count(table) => {
                    counts.clear();
                    counts.resize(64 * nw, 0);
                    for x in wires {
                        for w in 0..nw {
                            let mut bits = src(x, w);
                            while bits != 0 {
                                counts[64 * w + bits.trailing_zeros() as usize] += x.mult;
                                bits &= bits - 1;
                            }
                        }
                    }
                    for (w, d) in dst.iter_mut().enumerate() {
                        *d = (0..64).fold(0, |a, b| a | (table[counts[64 * w + b] as usize] as u64) << b);
                    }
                }
                Op::ThrSmall { w: weights, t } => {
                    sums.clear();
                    sums.resize(64 * nw, 0);
                    for (x, wt) in wires.iter().zip(weights) {
                        for w in 0..nw {
                            let mut bits = src(x, w);
                            while bits != 0 {
                                sums[64 * w + bits.trailing_zeros() as usize] += wt;
                                bits &= bits - 1;
                            }
                        }
                    }
                    for (w, d) in dst.iter_mut().enumerate() {
                        *d = (0..64).fold(0, |a, b| a | ((sums[64 * w + b] >= *t) as u64) << b);
                    }
                }
                Op::ThrBig { w: weights, t } => {
                    for (w, d) in dst.iter_mut().enumerate() {
                        let words: Vec<u64> = wires.iter().map(|x| src(x, w)).collect();
                        *d = 0;
                        for b in 0..64 {
                            let s: BigInt = words.iter().zip(weights).filter(|(x, _)| *x >> b & 1 == 1).map(|(_, wt)| wt).sum();
                            *d |= ((s >= *t) as u64) << b;
                        }
                    }
                }
            }
        }
        out.copy_from_slice(&vals[self.output * nw..(self.output + 1) * nw]);
    }

    pub fn truth_table(&self) -> TruthTableBitmap {
        self.truth_table_threads(1)
    }

    pub fn truth_table_threads(&self, threads: usize) -> TruthTableBitmap {
        let total = ((1usize << self.n) + 63) / 64;
        let mut words = vec![0u64; total];
        let chunks: Vec<(usize, &mut [u64])> =
            words.chunks_mut(BLOCK_WORDS).enumerate().map(|(b, c)| (b * BLOCK_WORDS * 64, c)).collect();
        if threads <= 1 || chunks.len() < 2 {
            for (start, c) in chunks {
                self.eval_block(start, c);
            }
        } else {
            let mut lanes: Vec<Vec<(usize, &mut [u64])>> = (0..threads).map(|_| Vec::new()).collect();
            for (i, ch) in chunks.into_iter().enumerate() {
                lanes[i % threads].push(ch);
            }
            std::thread::scope(|s| {
                for lane in lanes {
                    s.spawn(move || {
                        for (start, c) in lane {
                            self.eval_block(start, c);
                        }
                    });
                }
            });
        }
        TruthTableBitmap::from_words(self.n, words)
    }
}

fn check_limit(c: &Circuit) -> Result<()> {
    let limit = crate::caps::Caps::from_env().oracle_n;
    let limit = if limit == 0 { DEFAULT_ORACLE_LIMIT } else { limit };
    if c.n() > limit {
        return Err(Error::cap("oracle input count", limit));
    }
    Ok(())
}

pub fn brute_force_truth_table(c: &Circuit) -> Result<TruthTableBitmap> {
    brute_force_truth_table_threads(c, 1)
}

pub fn brute_force_truth_table_threads(c: &Circuit, threads: usize) -> Result<TruthTableBitmap> {
    check_limit(c)?;
    Ok(CompiledCircuit::new(c).truth_table_threads(threads))
}

pub fn brute_force_count_sat(c: &Circuit) -> Result<u64> {
    Ok(brute_force_truth_table(c)?.count_ones())
}
