use super::{Circuit, GateKind, Source};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeTag {
    SymSym,
    ThrThr,
    AndThr,
    Ac02Sym,
    SymThr,
    Generic,
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeTag::SymSym => "SYM∘SYM",
            ShapeTag::ThrThr => "THR∘THR",
            ShapeTag::AndThr => "AND∘THR",
            ShapeTag::Ac02Sym => "AC0[2]∘SYM",
            ShapeTag::SymThr => "SYM∘THR",
            ShapeTag::Generic => "generic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    pub depth: usize,
    pub wire_count: usize,
    pub tags: BTreeSet<ShapeTag>,
}

impl ShapeReport {
    pub fn has(&self, t: ShapeTag) -> bool {
        self.tags.contains(&t)
    }
}

/// Gate depths, with NOT gates transparent.
pub(crate) fn gate_depths(c: &Circuit) -> Vec<usize> {
    let mut d = vec![0usize; c.gates().len()];
    for (i, g) in c.gates().iter().enumerate() {
        let below = g
            .inputs
            .iter()
            .map(|w| match w.source {
                Source::Input(_) => 0,
                Source::Gate(h) => d[h],
            })
            .max()
            .unwrap_or(0);
        d[i] = if g.kind == GateKind::Not { below } else { below + 1 };
    }
    d
}

fn reachable(c: &Circuit) -> Vec<bool> {
    let mut r = vec![false; c.gates().len()];
    r[c.output()] = true;
    for i in (0..c.gates().len()).rev() {
        if r[i] {
            for w in &c.gates()[i].inputs {
                if let Source::Gate(h) = w.source {
                    r[h] = true;
                }
            }
        }
    }
    r
}

fn reads_only_inputs(c: &Circuit, g: usize) -> bool {
    c.gates()[g].inputs.iter().all(|w| matches!(w.source, Source::Input(_)))
}

pub fn classify_shape(c: &Circuit) -> ShapeReport {
    let depths = gate_depths(c);
    let depth = depths[c.output()];
    let live = reachable(c);
    let wire_count = c.gates().iter().zip(&live).filter(|(_, l)| **l).map(|(g, _)| g.total_mult()).sum();
    let mut tags = BTreeSet::new();
    let (top, _) = c.top();
    let tg = &c.gates()[top];
    if depth == 2 {
        let bottoms: Vec<usize> = tg
            .inputs
            .iter()
            .filter_map(|w| if let Source::Gate(h) = w.source { Some(h) } else { None })
            .collect();
        if bottoms.iter().all(|&h| reads_only_inputs(c, h)) {
            let all = |p: fn(&GateKind) -> bool| bottoms.iter().all(|&h| p(&c.gates()[h].kind));
            if tg.kind.is_symmetric() && all(GateKind::is_symmetric) {
                tags.insert(ShapeTag::SymSym);
            }
            if tg.kind.is_threshold() && all(GateKind::is_threshold) {
                tags.insert(ShapeTag::ThrThr);
            }
            if tg.kind == GateKind::And && all(GateKind::is_threshold) {
                tags.insert(ShapeTag::AndThr);
            }
            if tg.kind.is_symmetric() && all(GateKind::is_threshold) {
                tags.insert(ShapeTag::SymThr);
            }
        }
    }
    if depth >= 2 {
        let ok = c.gates().iter().enumerate().filter(|(i, _)| live[*i]).all(|(i, g)| {
            if g.kind == GateKind::Not {
                true
            } else if reads_only_inputs(c, i) {
                g.kind.is_symmetric()
            } else {
                matches!(g.kind, GateKind::And | GateKind::Or | GateKind::Xor)
            }
        });
        if ok {
            tags.insert(ShapeTag::Ac02Sym);
        }
    }
    if tags.is_empty() {
        tags.insert(ShapeTag::Generic);
    }
    ShapeReport { depth, wire_count, tags }
}
