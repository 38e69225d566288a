//! Restrictions, regions and partitions of the Boolean cube.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{FormulaKind, NormalFormula};

/// Default largest `n` for exhaustive structure checks.
pub const DEFAULT_SWEEP_CUTOFF: usize = 20;

/// A total map from variables to {0, 1, *}. Unset (`*`) variables span a
/// sub-cube of {0,1}^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Restriction {
    values: Vec<Option<bool>>,
}

impl Restriction {
    pub fn all_star(n: usize) -> Self {
        Restriction { values: vec![None; n] }
    }

    pub fn from_values(values: Vec<Option<bool>>) -> Self {
        Restriction { values }
    }

    /// The full restriction fixing every variable to `x`.
    pub fn from_assignment(x: &[bool]) -> Self {
        Restriction { values: x.iter().map(|&b| Some(b)).collect() }
    }

    /// Full restriction for the point whose bit `v` is variable `v`.
    pub fn from_index(n: usize, index: u64) -> Self {
        Restriction { values: (0..n).map(|v| Some(index >> v & 1 == 1)).collect() }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    #[inline]
    pub fn get(&self, var: usize) -> Option<bool> {
        self.values[var]
    }

    #[inline]
    pub fn set(&mut self, var: usize, value: bool) {
        self.values[var] = Some(value);
    }

    #[inline]
    pub fn clear(&mut self, var: usize) {
        self.values[var] = None;
    }

    pub fn is_set(&self, var: usize) -> bool {
        self.values[var].is_some()
    }

    pub fn unset_vars(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&v| self.values[v].is_none()).collect()
    }

    pub fn num_unset(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn is_full(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }

    /// Pointwise merge. Fails on the first variable the two set differently.
    pub fn compose(&self, other: &Restriction) -> Result<Restriction> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch { expected: self.n(), actual: other.n() });
        }
        let mut values = self.values.clone();
        for (v, (slot, theirs)) in values.iter_mut().zip(&other.values).enumerate() {
            match (*slot, *theirs) {
                (Some(a), Some(b)) if a != b => return Err(Error::Conflict { var: v }),
                (None, Some(b)) => *slot = Some(b),
                _ => {}
            }
        }
        Ok(Restriction { values })
    }

    /// True if `self` agrees with every variable `base` sets.
    pub fn extends(&self, base: &Restriction) -> bool {
        self.n() == base.n()
            && base.values.iter().zip(&self.values).all(|(b, s)| b.is_none() || b == s)
    }

    pub fn consistent_with(&self, x: &[bool]) -> bool {
        self.values.iter().zip(x).all(|(v, &b)| v.is_none_or(|v| v == b))
    }

    pub fn consistent_with_index(&self, index: u64) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(v, val)| val.is_none_or(|b| (index >> v & 1 == 1) == b))
    }

    /// Completion with every unset variable set to `fill`.
    pub fn fill(&self, fill: bool) -> Vec<bool> {
        self.values.iter().map(|v| v.unwrap_or(fill)).collect()
    }

    /// Point index of the set variables (unset bits zero); requires n ≤ 64.
    pub fn base_index(&self) -> u64 {
        self.values
            .iter()
            .enumerate()
            .fold(0u64, |acc, (v, val)| if *val == Some(true) { acc | 1 << v } else { acc })
    }

    /// Calls `visit` with the index of every point of the sub-cube, in
    /// increasing order of the unset variables read as a counter.
    pub fn for_each_point(&self, mut visit: impl FnMut(u64)) {
        let base = self.base_index();
        let free = self.unset_vars();
        let count = 1u64 << free.len();
        for bits in 0..count {
            let mut idx = base;
            for (j, &v) in free.iter().enumerate() {
                if bits >> j & 1 == 1 {
                    idx |= 1 << v;
                }
            }
            visit(idx);
        }
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            let c = match v {
                Some(false) => '0',
                Some(true) => '1',
                None => '*',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Restriction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                other => Err(Error::Syntax {
                    line: 0,
                    column: i + 1,
                    message: format!("unexpected '{other}' in restriction mask"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Restriction { values })
    }
}

/// The set of points extending `rho` and satisfying the CNF `guard`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    guard: NormalFormula,
    rho: Restriction,
}

impl Region {
    pub fn universal(n: usize) -> Self {
        Region { guard: NormalFormula::true_cnf(n, 0), rho: Restriction::all_star(n) }
    }

    pub fn from_restriction(rho: Restriction) -> Self {
        Region { guard: NormalFormula::true_cnf(rho.n(), 0), rho }
    }

    pub fn new(guard: NormalFormula, rho: Restriction) -> Result<Self> {
        if guard.kind() != FormulaKind::Cnf {
            return Err(Error::InvalidFormula("region guards are CNFs".into()));
        }
        if guard.n() != rho.n() {
            return Err(Error::LengthMismatch { expected: rho.n(), actual: guard.n() });
        }
        Ok(Region { guard, rho })
    }

    /// Builds the region with the guard simplified under `rho`. Returns
    /// `None` when the simplified guard has an exhausted clause, i.e. the
    /// region is empty.
    pub fn simplified(guard: &NormalFormula, rho: Restriction) -> Result<Option<Self>> {
        let guard = guard.restrict(&rho);
        if guard.constant_value() == Some(false) {
            return Ok(None);
        }
        Region::new(guard, rho).map(Some)
    }

    /// Intersection with a region of a partition of this region's sub-cube.
    pub fn refine(&self, inner: &Region) -> Result<Option<Region>> {
        let rho = self.rho.compose(&inner.rho)?;
        let guard = self.guard.and(&inner.guard)?;
        Region::simplified(&guard, rho)
    }

    pub fn guard(&self) -> &NormalFormula {
        &self.guard
    }

    pub fn rho(&self) -> &Restriction {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }

    /// No guard: the region is exactly the sub-cube of `rho`.
    pub fn is_subcube(&self) -> bool {
        self.guard.is_empty()
    }

    pub fn contains(&self, x: &[bool]) -> bool {
        self.rho.consistent_with(x) && self.guard.evaluate(x)
    }

    pub fn contains_index(&self, index: u64) -> bool {
        self.rho.consistent_with_index(index) && guard_holds_at(&self.guard, index)
    }
}

pub(crate) fn guard_holds_at(guard: &NormalFormula, index: u64) -> bool {
    guard.clauses().iter().all(|c| c.iter().any(|l| l.eval_index(index)))
}

/// Bookkeeping for how an entry was produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Provenance {
    /// Branches of the fan-in reduction where the first-k disjunction was false.
    pub false_branches: usize,
    /// Formulas handled through long-path branching during switching.
    pub targeted: usize,
    /// Switching rounds (depth reductions) applied.
    pub switch_rounds: usize,
}

impl Provenance {
    pub fn merge(self, other: Provenance) -> Provenance {
        Provenance {
            false_branches: self.false_branches + other.false_branches,
            targeted: self.targeted + other.targeted,
            switch_rounds: self.switch_rounds + other.switch_rounds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry<T> {
    pub region: Region,
    pub payload: T,
    pub provenance: Provenance,
}

/// Regions tiling {0,1}^n, each carrying a payload equivalent to the
/// partitioned object inside the region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition<T> {
    n: usize,
    entries: Vec<Entry<T>>,
}

impl<T> Partition<T> {
    pub fn new(n: usize) -> Self {
        Partition { n, entries: Vec::new() }
    }

    pub fn from_entries(n: usize, entries: Vec<Entry<T>>) -> Self {
        Partition { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Entry<T>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Entry<T>> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, region: Region, payload: T, provenance: Provenance) {
        self.entries.push(Entry { region, payload, provenance });
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Entry<T>> {
        self.entries.iter()
    }

    pub fn map_payload<U>(self, mut f: impl FnMut(T) -> U) -> Partition<U> {
        Partition {
            n: self.n,
            entries: self
                .entries
                .into_iter()
                .map(|e| Entry { region: e.region, payload: f(e.payload), provenance: e.provenance })
                .collect(),
        }
    }

    /// Largest number of false fan-in branches over all entries.
    pub fn max_false_branches(&self) -> usize {
        self.entries.iter().map(|e| e.provenance.false_branches).max().unwrap_or(0)
    }

    pub fn count_targeted(&self) -> usize {
        self.entries.iter().filter(|e| e.provenance.targeted > 0).count()
    }
}

/// Outcome of an exhaustive coverage count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub points: u64,
    pub is_partition: bool,
    /// Points contained in two or more regions.
    pub multiply_covered: u64,
    /// Points contained in no region.
    pub uncovered: u64,
    pub first_bad_point: Option<u64>,
}

/// Counts, for every point of {0,1}^n, the regions containing it.
pub fn verify_partition_structure<T>(p: &Partition<T>, cutoff: usize) -> Result<StructureReport> {
    coverage_sweep(p, cutoff, |_, _| {})
}

/// Exhaustive coverage count that also hands every (entry, point) incidence
/// to `visit`.
pub fn coverage_sweep<T>(
    p: &Partition<T>,
    cutoff: usize,
    mut visit: impl FnMut(&Entry<T>, u64),
) -> Result<StructureReport> {
    let n = p.n();
    if n > cutoff || n > 40 {
        return Err(Error::CutoffExceeded { n, cutoff: cutoff.min(40) });
    }
    let points = 1u64 << n;
    let mut counts = vec![0u8; points as usize];
    for entry in p.entries() {
        if entry.region.n() != n {
            return Err(Error::LengthMismatch { expected: n, actual: entry.region.n() });
        }
        let guard = entry.region.guard();
        entry.region.rho().for_each_point(|idx| {
            if guard_holds_at(guard, idx) {
                let c = &mut counts[idx as usize];
                *c = c.saturating_add(1);
                visit(entry, idx);
            }
        });
    }
    let mut multiply_covered = 0;
    let mut uncovered = 0;
    let mut first_bad_point = None;
    for (idx, &c) in counts.iter().enumerate() {
        if c != 1 {
            if c == 0 {
                uncovered += 1;
            } else {
                multiply_covered += 1;
            }
            first_bad_point.get_or_insert(idx as u64);
        }
    }
    Ok(StructureReport {
        points,
        is_partition: multiply_covered == 0 && uncovered == 0,
        multiply_covered,
        uncovered,
        first_bad_point,
    })
}
