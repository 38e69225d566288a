//! Line-oriented text format for layered circuits.
//!
//! ```text
//! c comment
//! p ac0 <n> <d> [<k>]
//! g <layer> <id> <AND|OR> <input>+
//! ```
//!
//! Inputs are `@<id>` (a gate of layer+1), `x<v>` / `-x<v>` (bottom layer
//! only) or the constants `T` / `F`. Gate lines may come in any order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind, Input, Literal};
use crate::error::{Error, Result};

enum RawInput {
    Ref(usize),
    Lit(Literal),
    Const(bool),
}

struct RawGate {
    line: usize,
    kind: GateKind,
    inputs: Vec<(usize, RawInput)>,
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn semantic(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic { line, message: message.into() }
}

fn number(line: usize, (col, tok): (usize, &str), what: &str) -> Result<usize> {
    tok.parse().map_err(|_| syntax(line, col, format!("expected {what}, found '{tok}'")))
}

fn parse_input(line: usize, (col, tok): (usize, &str)) -> Result<RawInput> {
    match tok {
        "T" => return Ok(RawInput::Const(true)),
        "F" => return Ok(RawInput::Const(false)),
        _ => {}
    }
    if let Some(id) = tok.strip_prefix('@') {
        return number(line, (col + 1, id), "gate id").map(RawInput::Ref);
    }
    let (negated, rest) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    match rest.strip_prefix('x') {
        Some(v) => number(line, (col, v), "variable index").map(|var| RawInput::Lit(Literal { var, negated })),
        None => Err(syntax(line, col, format!("unrecognized input '{tok}'"))),
    }
}

/// Parses a circuit document. Syntax errors carry line and column; semantic
/// errors (bad references, non-alternating layers, out-of-range variables)
/// carry the offending line.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut header: Option<(usize, usize, Option<usize>)> = None;
    let mut gates: Vec<BTreeMap<usize, RawGate>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&(col, first)) = toks.first() else { continue };
        match first {
            _ if first.starts_with('c') => continue,
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, col, "duplicate header"));
                }
                if toks.len() < 4 || toks.len() > 5 {
                    return Err(syntax(line, col, "header must be 'p ac0 <n> <d> [<k>]'"));
                }
                if toks[1].1 != "ac0" {
                    return Err(syntax(line, toks[1].0, format!("unknown format '{}'", toks[1].1)));
                }
                let n = number(line, toks[2], "variable count")?;
                let d = number(line, toks[3], "depth")?;
                if d == 0 {
                    return Err(syntax(line, toks[3].0, "depth must be at least 1"));
                }
                let k = toks.get(4).map(|&t| number(line, t, "bottom fan-in bound")).transpose()?;
                header = Some((n, d, k));
                gates = (0..d).map(|_| BTreeMap::new()).collect();
            }
            "g" => {
                let Some((_, d, _)) = header else {
                    return Err(syntax(line, col, "gate line before header"));
                };
                if toks.len() < 5 {
                    return Err(syntax(line, col, "gate line must be 'g <layer> <id> <AND|OR> <input>+'"));
                }
                let layer = number(line, toks[1], "layer")?;
                if layer == 0 || layer > d {
                    return Err(semantic(line, format!("layer {layer} outside [1, {d}]")));
                }
                let id = number(line, toks[2], "gate id")?;
                let kind = match toks[3].1 {
                    "AND" => GateKind::And,
                    "OR" => GateKind::Or,
                    other => return Err(syntax(line, toks[3].0, format!("expected AND or OR, found '{other}'"))),
                };
                let inputs = toks[4..]
                    .iter()
                    .map(|&t| parse_input(line, t).map(|inp| (t.0, inp)))
                    .collect::<Result<Vec<_>>>()?;
                if gates[layer - 1].insert(id, RawGate { line, kind, inputs }).is_some() {
                    return Err(semantic(line, format!("duplicate gate id {id} in layer {layer}")));
                }
            }
            other => return Err(syntax(line, col, format!("unexpected line type '{other}'"))),
        }
    }

    let Some((n, d, k)) = header else {
        return Err(syntax(1, 1, "missing header"));
    };
    if gates[0].len() != 1 {
        return Err(semantic(0, format!("layer 1 has {} gates, expected exactly 1", gates[0].len())));
    }

    let index: Vec<BTreeMap<usize, usize>> =
        gates.iter().map(|l| l.keys().enumerate().map(|(i, &id)| (id, i)).collect()).collect();
    let top_kind = gates[0].values().next().map(|g| g.kind).expect("one output gate");
    let mut layers = Vec::with_capacity(d);
    for (li, layer) in gates.iter().enumerate() {
        let expected = if li % 2 == 0 { top_kind } else { top_kind.dual() };
        let mut built = Vec::with_capacity(layer.len());
        for g in layer.values() {
            if g.kind != expected {
                return Err(semantic(g.line, format!("non-alternating layers: layer {} gate is {}", li + 1, g.kind)));
            }
            let mut inputs = Vec::with_capacity(g.inputs.len());
            for (_, inp) in &g.inputs {
                inputs.push(match *inp {
                    RawInput::Const(b) => Input::Const(b),
                    RawInput::Ref(id) => {
                        let target = index.get(li + 1).and_then(|m| m.get(&id));
                        match target {
                            Some(&j) => Input::Gate(j),
                            None => {
                                return Err(semantic(g.line, format!("bad layer reference @{id} from layer {}", li + 1)))
                            }
                        }
                    }
                    RawInput::Lit(l) => {
                        if li + 1 != d {
                            return Err(semantic(g.line, format!("literal {l} outside the bottom layer")));
                        }
                        if l.var >= n {
                            return Err(semantic(g.line, format!("variable x{} out of range for n={n}", l.var)));
                        }
                        Input::Lit(l)
                    }
                });
            }
            built.push(Gate::new(g.kind, inputs));
        }
        layers.push(built);
    }
    Circuit::from_layers(n, layers, k).map_err(|e| match e {
        Error::InvalidCircuit(m) => semantic(0, m),
        other => other,
    })
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    match c.k() {
        Some(k) => writeln!(out, "p ac0 {} {} {k}", c.n(), c.depth()),
        None => writeln!(out, "p ac0 {} {}", c.n(), c.depth()),
    }
    .expect("write to string");
    for (li, layer) in c.layers().iter().enumerate() {
        for (id, g) in layer.iter().enumerate() {
            write!(out, "g {} {id} {}", li + 1, g.kind).expect("write to string");
            for inp in &g.inputs {
                match inp {
                    Input::Gate(j) => write!(out, " @{j}"),
                    Input::Lit(l) => write!(out, " {l}"),
                    Input::Const(true) => write!(out, " T"),
                    Input::Const(false) => write!(out, " F"),
                }
                .expect("write to string");
            }
            out.push('\n');
        }
    }
    out
}
