use crate::dtree::{trace_path, PathStep};
use crate::error::{Error, Result};
use crate::formula::FormulaSequence;
use crate::restriction::Restriction;

/// Injective image of a (restriction, bad path) pair.
///
/// `rho_prime` is ρ with every path variable set to the value that leaves
/// its clause alive. For step i, `index[i]` is the 1-based position of the
/// variable in its clause, `last[i]` is 2 when the step is the last one its
/// formula contributes, 1 when it is the last one its clause contributes and
/// 0 otherwise, and `bits[i]` is the value the path gives the variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadPathEncoding {
    pub rho_prime: Restriction,
    pub index: Vec<usize>,
    pub last: Vec<u8>,
    pub bits: Vec<bool>,
}

impl BadPathEncoding {
    /// Path length t.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Encodes a path of the joint tree of `seq|rho`. The formulas contributing
/// along the path must be a prefix of `seq` (each one contributing at least
/// once before the next starts).
pub fn encode_bad_path(rho: &Restriction, path: &[(usize, bool)], seq: &FormulaSequence) -> Result<BadPathEncoding> {
    if rho.n() != seq.n() {
        return Err(Error::LengthMismatch { expected: seq.n(), actual: rho.n() });
    }
    let steps = trace_path(seq.formulas(), rho, path)?;
    let mut expected = 0;
    for (i, s) in steps.iter().enumerate() {
        if s.formula != expected && s.formula != expected + 1 || i == 0 && s.formula != 0 {
            return Err(Error::PathMismatch(format!(
                "step {i} comes from formula {} but formula {expected} or its successor was expected",
                s.formula
            )));
        }
        expected = s.formula;
    }

    let mut rho_prime = rho.clone();
    let mut index = Vec::with_capacity(steps.len());
    let mut last = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let phi = &seq.formulas()[s.formula];
        let clause = &phi.clauses()[s.clause];
        let pos = clause
            .iter()
            .position(|l| l.var == s.var)
            .ok_or_else(|| Error::Internal(format!("x{} missing from its clause", s.var)))?;
        // the literal takes the value that does not remove the clause
        rho_prime.set(s.var, !phi.kind().kill_value() != clause[pos].negated);
        index.push(pos + 1);
        last.push(match steps.get(i + 1) {
            None => 2,
            Some(next) if next.formula != s.formula => 2,
            Some(next) if next.clause != s.clause => 1,
            Some(_) => 0,
        });
    }
    let bits = steps.iter().map(|s| s.value).collect();
    Ok(BadPathEncoding { rho_prime, index, last, bits })
}

/// Inverts [`encode_bad_path`]: returns ρ and the labelled path.
pub fn decode_bad_path(enc: &BadPathEncoding, seq: &FormulaSequence) -> Result<(Restriction, Vec<PathStep>)> {
    let t = enc.bits.len();
    if enc.index.len() != t || enc.last.len() != t {
        return Err(Error::InconsistentEncoding("index, last and bit vectors differ in length".into()));
    }
    if enc.rho_prime.n() != seq.n() {
        return Err(Error::LengthMismatch { expected: seq.n(), actual: enc.rho_prime.n() });
    }
    let mut r = enc.rho_prime.clone();
    let mut steps: Vec<PathStep> = Vec::with_capacity(t);
    let mut formula = 0;
    let mut clause: Option<usize> = None;
    for i in 0..t {
        if let Some(&prev) = i.checked_sub(1).map(|j| &enc.last[j]) {
            match prev {
                0 => {}
                1 => clause = None,
                2 => {
                    formula += 1;
                    clause = None;
                }
                other => return Err(Error::InconsistentEncoding(format!("last marker {other} at step {}", i - 1))),
            }
        }
        let phi = seq
            .formulas()
            .get(formula)
            .ok_or_else(|| Error::InconsistentEncoding(format!("step {i} refers to formula {formula}")))?;
        let kill = phi.kind().kill_value();
        let c = match clause {
            Some(c) => c,
            None => phi
                .clauses()
                .iter()
                .position(|cl| !cl.iter().any(|l| r.get(l.var).is_some_and(|v| l.value(v) == kill)))
                .ok_or_else(|| Error::InconsistentEncoding(format!("no live clause at step {i}")))?,
        };
        clause = Some(c);
        let lit = enc.index[i]
            .checked_sub(1)
            .and_then(|j| phi.clauses()[c].get(j))
            .ok_or_else(|| Error::InconsistentEncoding(format!("index {} out of range at step {i}", enc.index[i])))?;
        r.set(lit.var, enc.bits[i]);
        steps.push(PathStep { var: lit.var, value: enc.bits[i], formula, clause: c });
    }
    for s in &steps {
        r.clear(s.var);
    }
    Ok((r, steps))
}
