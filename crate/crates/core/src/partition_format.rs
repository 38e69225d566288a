//! Text form of partitions and run manifests.
//!
//! ```text
//! p partition <n> <entries>
//! <mask> | <guard or -> | <0 | 1 | circuit:<id>>
//! @circuit <id>
//! <circuit document>
//! @end
//! ```
//!
//! The mask has one `0`/`1`/`*` per variable, variable 0 first. A guard is
//! a clause list `( x0 -x3 )( x2 )`. Lines starting with `c` are comments.

use std::fmt::Write as _;

use crate::circuit::{parse_circuit, serialize_circuit, Circuit, Literal};
use crate::error::{Error, Result};
use crate::formula::NormalFormula;
use crate::oracle::{AsConstant, PointValue};
use crate::restriction::{Entry, Partition, Provenance, Region, Restriction};

/// A payload as read back from a partition file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Const(bool),
    Circuit(Circuit),
}

impl PointValue for Payload {
    fn value_at(&self, index: u64) -> bool {
        match self {
            Payload::Const(b) => *b,
            Payload::Circuit(c) => c.evaluate_index(index),
        }
    }
}

impl AsConstant for Payload {
    fn as_constant(&self) -> Option<bool> {
        match self {
            Payload::Const(b) => Some(*b),
            Payload::Circuit(c) => c.constant_value(),
        }
    }
}

/// Payloads that can be written to a partition file.
pub trait WritePayload {
    /// The payload column; attached circuits are appended to `attached`.
    fn payload_text(&self, attached: &mut Vec<String>) -> String;
}

impl WritePayload for bool {
    fn payload_text(&self, _: &mut Vec<String>) -> String {
        u8::from(*self).to_string()
    }
}

impl WritePayload for Circuit {
    fn payload_text(&self, attached: &mut Vec<String>) -> String {
        attached.push(serialize_circuit(self));
        format!("circuit:{}", attached.len() - 1)
    }
}

impl WritePayload for Payload {
    fn payload_text(&self, attached: &mut Vec<String>) -> String {
        match self {
            Payload::Const(b) => b.payload_text(attached),
            Payload::Circuit(c) => c.payload_text(attached),
        }
    }
}

/// One entry line without the trailing newline.
pub fn entry_line<T: WritePayload>(e: &Entry<T>, attached: &mut Vec<String>) -> String {
    let guard = if e.region.guard().is_empty() { "-".to_string() } else { e.region.guard().to_string() };
    format!("{} | {} | {}", e.region.rho(), guard, e.payload.payload_text(attached))
}

pub fn write_partition<T: WritePayload>(p: &Partition<T>) -> String {
    let mut out = format!("p partition {} {}\n", p.n(), p.len());
    let mut attached = Vec::new();
    for e in p.iter() {
        out.push_str(&entry_line(e, &mut attached));
        out.push('\n');
    }
    for (id, doc) in attached.iter().enumerate() {
        let _ = writeln!(out, "@circuit {id}");
        out.push_str(doc);
        if !doc.ends_with('\n') {
            out.push('\n');
        }
        out.push_str("@end\n");
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column: 1, message: message.into() }
}

fn parse_literal(tok: &str, n: usize, line: usize) -> Result<Literal> {
    let (negated, rest) = match tok.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, tok),
    };
    let var: usize = rest
        .strip_prefix('x')
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| syntax(line, format!("bad literal '{tok}'")))?;
    if var >= n {
        return Err(Error::Semantic { line, message: format!("x{var} out of range for n = {n}") });
    }
    Ok(Literal::new(var, negated))
}

fn parse_guard(text: &str, n: usize, line: usize) -> Result<NormalFormula> {
    let text = text.trim();
    if text == "-" {
        return Ok(NormalFormula::true_cnf(n, 0));
    }
    let mut clauses = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| syntax(line, "guard clause must start with '('"))?;
        let end = body.find(')').ok_or_else(|| syntax(line, "unclosed guard clause"))?;
        let clause =
            body[..end].split_whitespace().map(|t| parse_literal(t, n, line)).collect::<Result<Vec<_>>>()?;
        clauses.push(clause);
        rest = body[end + 1..].trim_start();
    }
    let width = clauses.iter().map(Vec::len).max().unwrap_or(0);
    NormalFormula::cnf(n, width, clauses)
}

enum PayloadRef {
    Const(bool),
    Circuit(usize),
}

/// Reads a partition file written by [`write_partition`].
pub fn parse_partition(text: &str) -> Result<Partition<Payload>> {
    let mut n: Option<usize> = None;
    let mut declared = 0;
    let mut rows: Vec<(Region, PayloadRef, usize)> = Vec::new();
    let mut circuits: Vec<Option<Circuit>> = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    while let Some((ln, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let f: Vec<&str> = rest.split_whitespace().collect();
            match f.as_slice() {
                ["partition", a, b] if n.is_none() => {
                    n = Some(a.parse().map_err(|_| syntax(ln, "bad variable count"))?);
                    declared = b.parse().map_err(|_| syntax(ln, "bad entry count"))?;
                }
                _ => return Err(syntax(ln, "expected 'p partition <n> <entries>'")),
            }
            continue;
        }
        let n = n.ok_or_else(|| syntax(ln, "missing 'p partition' header"))?;
        if let Some(id) = line.strip_prefix("@circuit ") {
            let id: usize = id.trim().parse().map_err(|_| syntax(ln, "bad circuit id"))?;
            let mut doc = String::new();
            loop {
                let (_, l) = lines.next().ok_or_else(|| syntax(ln, "attached circuit without '@end'"))?;
                if l.trim() == "@end" {
                    break;
                }
                doc.push_str(l);
                doc.push('\n');
            }
            let c = parse_circuit(&doc)?;
            if c.n() != n {
                return Err(Error::Semantic { line: ln, message: format!("attached circuit has n = {}", c.n()) });
            }
            if circuits.len() <= id {
                circuits.resize(id + 1, None);
            }
            circuits[id] = Some(c);
            continue;
        }
        let cols: Vec<&str> = line.split('|').collect();
        let [mask, guard, payload] = cols.as_slice() else {
            return Err(syntax(ln, "expected '<mask> | <guard> | <payload>'"));
        };
        let rho: Restriction = mask.trim().parse().map_err(|e| match e {
            Error::Syntax { column, message, .. } => Error::Syntax { line: ln, column, message },
            other => other,
        })?;
        if rho.n() != n {
            return Err(Error::Semantic { line: ln, message: format!("mask has {} variables, expected {n}", rho.n()) });
        }
        let region = Region::new(parse_guard(guard, n, ln)?, rho)?;
        let payload = match payload.trim() {
            "0" => PayloadRef::Const(false),
            "1" => PayloadRef::Const(true),
            other => PayloadRef::Circuit(
                other
                    .strip_prefix("circuit:")
                    .and_then(|id| id.parse().ok())
                    .ok_or_else(|| syntax(ln, format!("bad payload '{other}'")))?,
            ),
        };
        rows.push((region, payload, ln));
    }
    let n = n.ok_or_else(|| syntax(1, "missing 'p partition' header"))?;
    if rows.len() != declared {
        return Err(Error::Semantic { line: 1, message: format!("header declares {declared} entries, found {}", rows.len()) });
    }
    let entries = rows
        .into_iter()
        .map(|(region, payload, ln)| {
            let payload = match payload {
                PayloadRef::Const(b) => Payload::Const(b),
                PayloadRef::Circuit(id) => Payload::Circuit(
                    circuits
                        .get(id)
                        .cloned()
                        .flatten()
                        .ok_or_else(|| Error::Semantic { line: ln, message: format!("no attached circuit {id}") })?,
                ),
            };
            Ok(Entry { region, payload, provenance: Provenance::default() })
        })
        .collect::<Result<_>>()?;
    Ok(Partition::from_entries(n, entries))
}

/// `key<TAB>value` lines.
pub fn write_manifest<K: AsRef<str>, V: AsRef<str>>(pairs: &[(K, V)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{}\t{}", k.as_ref(), v.as_ref());
    }
    out
}

pub fn parse_manifest(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.split_once('\t')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| syntax(i + 1, "manifest line without a tab"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bool_partition_round_trips() {
        let guard = NormalFormula::cnf(3, 2, vec![vec![Literal::pos(0), Literal::neg(2)]]).unwrap();
        let p = Partition::from_entries(
            3,
            vec![
                Entry {
                    region: Region::new(guard, Restriction::from_values(vec![None, Some(true), None])).unwrap(),
                    payload: true,
                    provenance: Provenance::default(),
                },
                Entry {
                    region: Region::from_restriction(Restriction::from_values(vec![None, Some(false), None])),
                    payload: false,
                    provenance: Provenance::default(),
                },
            ],
        );
        let text = write_partition(&p);
        assert_eq!(text, "p partition 3 2\n*1* | ( x0 -x2 ) | 1\n*0* | - | 0\n");
        let back = parse_partition(&text).unwrap();
        assert_eq!(write_partition(&back), text);
    }

    #[test]
    fn attached_circuits_round_trip() {
        let c = parse_circuit("p ac0 2 1\ng 1 0 OR x0 -x1\n").unwrap();
        let p = Partition::from_entries(
            2,
            vec![Entry { region: Region::universal(2), payload: c.clone(), provenance: Provenance::default() }],
        );
        let text = write_partition(&p);
        assert!(text.contains("| circuit:0\n@circuit 0\n"));
        let back = parse_partition(&text).unwrap();
        assert_eq!(back.entries()[0].payload, Payload::Circuit(c));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_partition("** | - | 1\n").is_err());
        assert!(parse_partition("p partition 2 1\n*** | - | 1\n").is_err());
        assert!(parse_partition("p partition 2 1\n** | - | circuit:4\n").is_err());
        assert!(parse_partition("p partition 2 2\n** | - | 1\n").is_err());
        assert!(parse_partition("p partition 2 1\n** | ( x9 ) | 1\n").is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let text = write_manifest(&[("n", "4"), ("seed", "7")]);
        assert_eq!(text, "n\t4\nseed\t7\n");
        assert_eq!(parse_manifest(&text).unwrap(), vec![("n".into(), "4".into()), ("seed".into(), "7".into())]);
    }
}
