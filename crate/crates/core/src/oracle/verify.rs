use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::formula::NormalFormula;
use crate::restriction::{coverage_sweep, Partition, StructureReport};

use super::brute::truth_table;

/// Payloads that have a value at each point of their region.
pub trait PointValue {
    fn value_at(&self, index: u64) -> bool;
}

impl PointValue for bool {
    fn value_at(&self, _: u64) -> bool {
        *self
    }
}

impl PointValue for Circuit {
    fn value_at(&self, index: u64) -> bool {
        self.evaluate_index(index)
    }
}

impl PointValue for NormalFormula {
    fn value_at(&self, index: u64) -> bool {
        let x: Vec<bool> = (0..self.n()).map(|v| index >> v & 1 == 1).collect();
        self.evaluate(&x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub structure: StructureReport,
    /// (point, region) incidences where the payload disagrees with the circuit.
    pub value_mismatches: u64,
    pub first_mismatch: Option<u64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.structure.is_partition && self.value_mismatches == 0
    }

    /// First point that is not covered exactly once or has a wrong value.
    pub fn counterexample(&self) -> Option<u64> {
        match (self.structure.first_bad_point, self.first_mismatch) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Exhaustively checks that `p` tiles the cube and that every payload
/// agrees with `c` on its region.
pub fn verify_partition<T: PointValue>(c: &Circuit, p: &Partition<T>, cutoff: usize) -> Result<VerifyReport> {
    if p.n() != c.n() {
        return Err(Error::LengthMismatch { expected: c.n(), actual: p.n() });
    }
    let table = truth_table(c, cutoff)?;
    let mut value_mismatches = 0;
    let mut first_mismatch: Option<u64> = None;
    let structure = coverage_sweep(p, cutoff, |e, idx| {
        if e.payload.value_at(idx) != table[idx as usize] {
            value_mismatches += 1;
            first_mismatch = Some(first_mismatch.map_or(idx, |f| f.min(idx)));
        }
    })?;
    Ok(VerifyReport { structure, value_mismatches, first_mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::restriction::{Entry, Provenance, Region, Restriction};

    #[test]
    fn constant_circuit_single_region() {
        let c = Circuit::constant(4, 2, true);
        let p = Partition::from_entries(
            4,
            vec![Entry { region: Region::universal(4), payload: true, provenance: Provenance::default() }],
        );
        assert!(verify_partition(&c, &p, 20).unwrap().passed());
    }

    #[test]
    fn flipped_constant_is_caught() {
        let c = crate::circuit::parse_circuit("p ac0 2 1\ng 1 0 OR x0\n").unwrap();
        let entries = (0..2u8)
            .map(|b| Entry {
                region: Region::from_restriction(Restriction::from_values(vec![Some(b == 1), None])),
                payload: b == 0,
                provenance: Provenance::default(),
            })
            .collect();
        let rep = verify_partition(&c, &Partition::from_entries(2, entries), 20).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.value_mismatches, 4);
        assert_eq!(rep.counterexample(), Some(0));
    }
}
