//! Restricted copies and bit-extractor banks.

use crate::caps::Caps;
use crate::circuit::{Circuit, Gate, GateKind, Source, Wire};
use crate::error::{Error, Result};

fn check_copies(count_log: usize, caps: &Caps) -> Result<()> {
    if count_log >= usize::BITS as usize || 1usize << count_log > caps.copies {
        return Err(Error::cap("restricted copies", caps.copies));
    }
    Ok(())
}

/// Copy `j` fixes the first `k` inputs to the bits of `j`.
pub fn expand_copies(c: &Circuit, k: usize, caps: &Caps) -> Result<Vec<Circuit>> {
    if k >= c.n() && !(k == 0 && c.n() == 0) {
        return Err(Error::Argument(format!("k = {k} must be below n = {}", c.n())));
    }
    check_copies(k, caps)?;
    (0..1usize << k).map(|j| c.restrict_prefix(k, j)).collect()
}

/// The 2^(2ell) copies of `c` with the last 2·ell inputs fixed.
pub fn suffix_copies(c: &Circuit, ell: usize, caps: &Caps) -> Result<Vec<Circuit>> {
    if 2 * ell >= c.n() {
        return Err(Error::Argument(format!("2*ell = {} must be below n = {}", 2 * ell, c.n())));
    }
    check_copies(2 * ell, caps)?;
    (0..1usize << (2 * ell)).map(|j| c.restrict_suffix(2 * ell, j)).collect()
}

/// Number of bank circuits: the count ranges over 0..=2^(2ell), which needs
/// 2·ell + 1 bits.
pub fn bank_width(ell: usize) -> usize {
    2 * ell + 1
}

/// `B_i(x)` = bit i (from 0) of the number of suffix assignments satisfying `c`
/// together with `x`. Each circuit is a SYM gate over the restricted copies.
pub fn build_bit_extractor_bank(c: &Circuit, ell: usize, caps: &Caps) -> Result<Vec<Circuit>> {
    let copies = suffix_copies(c, ell, caps)?;
    let mut gates: Vec<Gate> = Vec::new();
    let mut outs = Vec::new();
    for (j, cp) in copies.iter().enumerate() {
        let off = gates.len();
        for g in cp.gates() {
            let inputs = g
                .inputs
                .iter()
                .map(|w| match w.source {
                    Source::Gate(h) => Wire { source: Source::Gate(h + off), ..*w },
                    _ => *w,
                })
                .collect();
            gates.push(Gate { id: format!("c{j}.{}", g.id), kind: g.kind.clone(), inputs });
        }
        outs.push(Wire::gate(cp.output() + off));
    }
    let t = copies.len();
    (0..bank_width(ell))
        .map(|i| {
            let mut gs = gates.clone();
            let table = (0..=t).map(|v| v >> i & 1 == 1).collect();
            gs.push(Gate::new("bit", GateKind::Sym(table), outs.clone()));
            let out = gs.len() - 1;
            Circuit::new(c.n() - 2 * ell, gs, out)
        })
        .collect()
}
