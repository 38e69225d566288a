//! Width-bounded CNF and DNF formulas.
//!
//! Clause order and the literal order inside each clause are part of a
//! formula's identity: canonical decision trees query "the first clause"
//! and walk its literals in stored order.

use std::fmt;

use crate::circuit::Literal;
use crate::error::{Error, Result};
use crate::restriction::Restriction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Cnf,
    Dnf,
}

impl FormulaKind {
    pub fn dual(self) -> Self {
        match self {
            FormulaKind::Cnf => FormulaKind::Dnf,
            FormulaKind::Dnf => FormulaKind::Cnf,
        }
    }

    /// Literal value that removes a clause: a true literal satisfies a CNF
    /// clause, a false literal falsifies a DNF term.
    pub fn kill_value(self) -> bool {
        matches!(self, FormulaKind::Cnf)
    }
}

impl fmt::Display for FormulaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaKind::Cnf => write!(f, "CNF"),
            FormulaKind::Dnf => write!(f, "DNF"),
        }
    }
}

/// Result of looking at a formula under a partial assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Const(bool),
    /// First clause that is neither removed nor exhausted, with its unset
    /// variables in stored order.
    Open { clause: usize, unset: Vec<usize> },
}

/// A k-CNF or k-DNF over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalFormula {
    kind: FormulaKind,
    n: usize,
    width: usize,
    clauses: Vec<Vec<Literal>>,
}

impl NormalFormula {
    /// Builds a formula, removing repeated literals and dropping clauses that
    /// contain both polarities of a variable (always-true clauses of a CNF,
    /// always-false terms of a DNF).
    pub fn new(kind: FormulaKind, n: usize, width: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        let mut kept = Vec::with_capacity(clauses.len());
        'clauses: for clause in clauses {
            let mut lits: Vec<Literal> = Vec::with_capacity(clause.len());
            for lit in clause {
                if lit.var >= n {
                    return Err(Error::InvalidFormula(format!("variable x{} out of range for n={n}", lit.var)));
                }
                match lits.iter().find(|l| l.var == lit.var) {
                    Some(l) if l.negated == lit.negated => {}
                    Some(_) => continue 'clauses,
                    None => lits.push(lit),
                }
            }
            if lits.len() > width {
                return Err(Error::InvalidFormula(format!(
                    "clause of {} literals exceeds width {width}",
                    lits.len()
                )));
            }
            kept.push(lits);
        }
        Ok(NormalFormula { kind, n, width, clauses: kept })
    }

    pub fn constant(kind: FormulaKind, n: usize, width: usize, value: bool) -> Self {
        let clauses = if value == kind.kill_value() { Vec::new() } else { vec![Vec::new()] };
        NormalFormula { kind, n, width, clauses }
    }

    pub fn cnf(n: usize, width: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        Self::new(FormulaKind::Cnf, n, width, clauses)
    }

    pub fn dnf(n: usize, width: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        Self::new(FormulaKind::Dnf, n, width, clauses)
    }

    /// The always-true CNF over `n` variables.
    pub fn true_cnf(n: usize, width: usize) -> Self {
        Self::constant(FormulaKind::Cnf, n, width, true)
    }

    pub fn kind(&self) -> FormulaKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Value of the formula if it is syntactically constant.
    pub fn constant_value(&self) -> Option<bool> {
        let kill = self.kind.kill_value();
        if self.clauses.is_empty() {
            Some(kill)
        } else if self.clauses.iter().any(|c| c.is_empty()) {
            Some(!kill)
        } else {
            None
        }
    }

    pub fn evaluate(&self, x: &[bool]) -> bool {
        let kill = self.kind.kill_value();
        let killed = |c: &Vec<Literal>| c.iter().any(|l| l.eval(x) == kill);
        match self.kind {
            FormulaKind::Cnf => self.clauses.iter().all(killed),
            FormulaKind::Dnf => !self.clauses.iter().all(killed),
        }
    }

    /// Looks at the formula under a partial assignment. An exhausted clause
    /// (every literal set, none removing it) wins over the first open clause.
    pub fn status(&self, partial: &Restriction) -> Status {
        let kill = self.kind.kill_value();
        let mut first_open: Option<(usize, Vec<usize>)> = None;
        for (ci, clause) in self.clauses.iter().enumerate() {
            let mut killed = false;
            let mut unset = Vec::new();
            for lit in clause {
                match partial.get(lit.var) {
                    Some(v) => {
                        if lit.value(v) == kill {
                            killed = true;
                            break;
                        }
                    }
                    None => unset.push(lit.var),
                }
            }
            if killed {
                continue;
            }
            if unset.is_empty() {
                return Status::Const(!kill);
            }
            if first_open.is_none() {
                first_open = Some((ci, unset));
            }
        }
        match first_open {
            Some((clause, unset)) => Status::Open { clause, unset },
            None => Status::Const(kill),
        }
    }

    /// `self|rho`: removed clauses dropped, set literals deleted, clause
    /// order preserved. Variable indices stay global.
    pub fn restrict(&self, rho: &Restriction) -> NormalFormula {
        let kill = self.kind.kill_value();
        let mut clauses = Vec::with_capacity(self.clauses.len());
        for clause in &self.clauses {
            let mut killed = false;
            let mut rest = Vec::with_capacity(clause.len());
            for lit in clause {
                match rho.get(lit.var) {
                    Some(v) if lit.value(v) == kill => {
                        killed = true;
                        break;
                    }
                    Some(_) => {}
                    None => rest.push(*lit),
                }
            }
            if killed {
                continue;
            }
            if rest.is_empty() {
                return NormalFormula::constant(self.kind, self.n, self.width, !kill);
            }
            clauses.push(rest);
        }
        NormalFormula { kind: self.kind, n: self.n, width: self.width, clauses }
    }

    /// Conjunction of two CNFs; identical clauses are kept once.
    pub fn and(&self, other: &NormalFormula) -> Result<NormalFormula> {
        if self.kind != FormulaKind::Cnf || other.kind != FormulaKind::Cnf {
            return Err(Error::InvalidFormula("conjunction is defined for CNFs only".into()));
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: other.n });
        }
        let mut clauses = self.clauses.clone();
        for c in &other.clauses {
            if !clauses.contains(c) {
                clauses.push(c.clone());
            }
        }
        Ok(NormalFormula { kind: FormulaKind::Cnf, n: self.n, width: self.width.max(other.width), clauses })
    }

    /// Variables mentioned, sorted and deduplicated.
    pub fn support(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self.clauses.iter().flatten().map(|l| l.var).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

impl fmt::Display for NormalFormula {
    /// Clause list in the `( l1 l2 )( .. )` notation of the partition format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for clause in &self.clauses {
            write!(f, "(")?;
            for lit in clause {
                write!(f, " {lit}")?;
            }
            write!(f, " )")?;
        }
        Ok(())
    }
}

/// An ordered sequence of formulas over a shared variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaSequence {
    formulas: Vec<NormalFormula>,
}

impl FormulaSequence {
    pub fn new(formulas: Vec<NormalFormula>) -> Result<Self> {
        if let Some(first) = formulas.first() {
            if let Some(bad) = formulas.iter().find(|f| f.n() != first.n()) {
                return Err(Error::LengthMismatch { expected: first.n(), actual: bad.n() });
            }
        }
        Ok(FormulaSequence { formulas })
    }

    pub fn formulas(&self) -> &[NormalFormula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn n(&self) -> usize {
        self.formulas.first().map_or(0, |f| f.n())
    }

    /// Common width bound: every member's clauses fit in it.
    pub fn width(&self) -> usize {
        self.formulas.iter().map(|f| f.width()).max().unwrap_or(0)
    }

    pub fn restrict(&self, rho: &Restriction) -> FormulaSequence {
        FormulaSequence { formulas: self.formulas.iter().map(|f| f.restrict(rho)).collect() }
    }

    pub fn evaluate(&self, x: &[bool]) -> Vec<bool> {
        self.formulas.iter().map(|f| f.evaluate(x)).collect()
    }
}
