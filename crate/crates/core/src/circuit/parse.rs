use super::{Circuit, Gate, GateKind, Source, Wire};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::collections::HashMap;
use std::fmt::Write;

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

fn input_index(tok: &str) -> Option<usize> {
    let d = tok.strip_prefix('x')?;
    if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    d.parse().ok()
}

fn parse_wire(tok: &str, line: usize, n: usize, ids: &HashMap<String, usize>) -> Result<Wire> {
    let (negated, rest) = match tok.strip_prefix('~') {
        Some(r) => (true, r),
        None => (false, tok),
    };
    let (name, mult) = match rest.split_once('*') {
        Some((a, m)) => {
            let m: u32 = m.parse().map_err(|_| syntax(line, format!("bad multiplicity in {tok:?}")))?;
            if m == 0 {
                return Err(syntax(line, format!("zero multiplicity in {tok:?}")));
            }
            (a, m)
        }
        None => (rest, 1),
    };
    let source = if let Some(k) = input_index(name) {
        if k == 0 || k > n {
            return Err(syntax(line, format!("input {name} out of range 1..{n}")));
        }
        Source::Input(k - 1)
    } else {
        match ids.get(name) {
            Some(&g) => Source::Gate(g),
            None => return Err(syntax(line, format!("dangling reference {name:?}"))),
        }
    };
    Ok(Wire { source, negated, mult })
}

fn parse_bits(tok: &str, line: usize) -> Result<Vec<bool>> {
    tok.chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(syntax(line, format!("bad table {tok:?}"))),
        })
        .collect()
}

/// Parses the `.ckt` netlist format.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut n: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut output: Option<(usize, String)> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "inputs" => {
                if n.is_some() || toks.len() != 2 {
                    return Err(syntax(line, "expected a single `inputs <n>` line"));
                }
                n = Some(toks[1].parse().map_err(|_| syntax(line, "bad input count"))?);
            }
            "output" => {
                if toks.len() != 2 || output.is_some() {
                    return Err(syntax(line, "expected a single `output <id>` line"));
                }
                let g = *ids.get(toks[1]).ok_or_else(|| syntax(line, format!("dangling reference {:?}", toks[1])))?;
                output = Some((g, toks[1].to_string()));
            }
            "gate" => {
                let n = n.ok_or_else(|| syntax(line, "`inputs` must come before gates"))?;
                if toks.len() < 3 {
                    return Err(syntax(line, "expected `gate <id> <KIND> ...`"));
                }
                let id = toks[1];
                if input_index(id).is_some() || id.starts_with('~') || id.contains('*') || id.contains('@') {
                    return Err(syntax(line, format!("invalid gate id {id:?}")));
                }
                if ids.contains_key(id) {
                    return Err(syntax(line, format!("duplicate gate id {id:?}")));
                }
                let args = &toks[3..];
                let wires = |ts: &[&str]| ts.iter().map(|t| parse_wire(t, line, n, &ids)).collect::<Result<Vec<_>>>();
                let (kind, inputs) = match toks[2].to_ascii_uppercase().as_str() {
                    "AND" => (GateKind::And, wires(args)?),
                    "OR" => (GateKind::Or, wires(args)?),
                    "XOR" => (GateKind::Xor, wires(args)?),
                    "MAJ" => (GateKind::Maj, wires(args)?),
                    "NOT" => {
                        let ws = wires(args)?;
                        if ws.len() != 1 || ws[0].mult != 1 {
                            return Err(syntax(line, "NOT takes exactly one wire"));
                        }
                        (GateKind::Not, ws)
                    }
                    "MOD" => {
                        let m: u32 = args
                            .first()
                            .and_then(|t| t.parse().ok())
                            .filter(|&m| m >= 2)
                            .ok_or_else(|| syntax(line, "MOD needs a modulus m >= 2"))?;
                        (GateKind::Mod(m), wires(&args[1..])?)
                    }
                    "SYM" => {
                        let table = parse_bits(args.first().ok_or_else(|| syntax(line, "SYM needs a table"))?, line)?;
                        let ws = wires(&args[1..])?;
                        let total: usize = ws.iter().map(|w| w.mult as usize).sum();
                        if table.len() != total + 1 {
                            return Err(syntax(
                                line,
                                format!("SYM table length {} does not match {} wires (+1)", table.len(), total),
                            ));
                        }
                        (GateKind::Sym(table), ws)
                    }
                    "THR" => {
                        let t: BigInt = args
                            .first()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| syntax(line, "THR needs an integer threshold"))?;
                        let mut weights = Vec::new();
                        let mut ws = Vec::new();
                        for tok in &args[1..] {
                            let (w, wire) = tok
                                .split_once('@')
                                .ok_or_else(|| syntax(line, format!("THR operand {tok:?} is not <weight>@<wire>")))?;
                            weights.push(w.parse::<BigInt>().map_err(|_| syntax(line, format!("bad weight {w:?}")))?);
                            ws.push(parse_wire(wire, line, n, &ids)?);
                        }
                        (GateKind::Thr { weights, threshold: t }, ws)
                    }
                    other => return Err(syntax(line, format!("unknown gate kind {other:?}"))),
                };
                ids.insert(id.to_string(), gates.len());
                gates.push(Gate { id: id.to_string(), kind, inputs });
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| syntax(0, "missing `inputs` line"))?;
    let (out, _) = output.ok_or_else(|| syntax(0, "missing `output` line"))?;
    Circuit::new(n, gates, out)
}

fn wire_token(c: &Circuit, w: &Wire) -> String {
    let mut s = String::new();
    if w.negated {
        s.push('~');
    }
    match w.source {
        Source::Input(i) => write!(s, "x{}", i + 1).unwrap(),
        Source::Gate(g) => s.push_str(&c.gates()[g].id),
    }
    if w.mult != 1 {
        write!(s, "*{}", w.mult).unwrap();
    }
    s
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("inputs {}\n", c.n());
    for g in c.gates() {
        write!(out, "gate {} {}", g.id, g.kind.name()).unwrap();
        match &g.kind {
            GateKind::Mod(m) => write!(out, " {m}").unwrap(),
            GateKind::Sym(t) => {
                out.push(' ');
                out.extend(t.iter().map(|&b| if b { '1' } else { '0' }));
            }
            GateKind::Thr { threshold, .. } => write!(out, " {threshold}").unwrap(),
            _ => {}
        }
        for (k, w) in g.inputs.iter().enumerate() {
            out.push(' ');
            if let GateKind::Thr { weights, .. } = &g.kind {
                write!(out, "{}@", weights[k]).unwrap();
            }
            out.push_str(&wire_token(c, w));
        }
        out.push('\n');
    }
    writeln!(out, "output {}", c.output_gate().id).unwrap();
    out
}
