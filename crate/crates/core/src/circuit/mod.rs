//! Layered, alternating AND/OR circuits with literals at the bottom.
//!
//! Layer 1 (index 0 of [`Circuit::layers`]) holds the single output gate;
//! layer `d` holds the bottom gates, the only gates allowed to read
//! literals. Gate inputs reference gates of the next deeper layer by index.
//!
//! Every constructed circuit is normalized: constants are propagated
//! upward, repeated inputs are removed, structurally identical gates of a
//! layer are merged and unreachable gates are pruned. A gate that reduces to
//! a constant disappears into its parent, so only the output gate can carry
//! a [`Input::Const`], and then it is the whole circuit.

mod format;
mod generate;

use std::collections::HashMap;
use std::fmt;

pub use format::{parse_circuit, serialize_circuit};
pub use generate::{gen_parity_benchmark, gen_random, MAX_PARITY_GATES};

use crate::error::{Error, Result};
use crate::formula::{FormulaKind, NormalFormula};
use crate::restriction::Restriction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: usize, negated: bool) -> Self {
        Literal { var, negated }
    }

    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn negate(self) -> Self {
        Literal { var: self.var, negated: !self.negated }
    }

    /// Value of the literal when its variable has value `v`.
    #[inline]
    pub fn value(self, v: bool) -> bool {
        v != self.negated
    }

    #[inline]
    pub fn eval(self, x: &[bool]) -> bool {
        self.value(x[self.var])
    }

    #[inline]
    pub fn eval_index(self, index: u64) -> bool {
        self.value(index >> self.var & 1 == 1)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
}

impl GateKind {
    pub fn dual(self) -> Self {
        match self {
            GateKind::And => GateKind::Or,
            GateKind::Or => GateKind::And,
        }
    }

    /// The input value that decides the gate on its own.
    pub fn absorbing(self) -> bool {
        matches!(self, GateKind::Or)
    }

    /// Kind of the formula a gate of this kind forms over bottom gates.
    pub fn formula_kind(self) -> FormulaKind {
        match self {
            GateKind::And => FormulaKind::Cnf,
            GateKind::Or => FormulaKind::Dnf,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::And => write!(f, "AND"),
            GateKind::Or => write!(f, "OR"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Input {
    /// Index into the next deeper layer.
    Gate(usize),
    Lit(Literal),
    Const(bool),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<Input>,
}

impl Gate {
    pub fn new(kind: GateKind, inputs: Vec<Input>) -> Self {
        Gate { kind, inputs }
    }

    /// Literal inputs of a bottom gate, in order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.inputs.iter().filter_map(|i| match i {
            Input::Lit(l) => Some(*l),
            _ => None,
        })
    }

    pub fn fan_in(&self) -> usize {
        self.inputs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    k: Option<usize>,
    layers: Vec<Vec<Gate>>,
}

/// Parameters of a circuit as reported by [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeReport {
    pub n: usize,
    pub d: usize,
    pub gates_per_layer: Vec<usize>,
    /// Largest layer.
    pub m: usize,
    pub bottom_fanin_max: usize,
    pub k: Option<usize>,
    pub is_k_bounded: bool,
}

#[derive(Clone, Copy)]
enum Resolved {
    Const(bool),
    Gate(usize),
}

impl Circuit {
    /// Checks the raw layered structure and returns the normalized circuit.
    pub fn from_layers(n: usize, layers: Vec<Vec<Gate>>, k: Option<usize>) -> Result<Self> {
        check_structure(n, &layers)?;
        let c = normalize(n, k, &layers, None);
        if let Some(k) = k {
            if c.bottom_fanin_max() > k {
                return Err(Error::InvalidCircuit(format!(
                    "bottom fan-in {} exceeds declared bound {k}",
                    c.bottom_fanin_max()
                )));
            }
        }
        Ok(c)
    }

    /// A depth-`d` circuit computing the constant `value`.
    pub fn constant(n: usize, d: usize, value: bool) -> Self {
        let d = d.max(1);
        let mut layers = vec![Vec::new(); d];
        layers[0].push(Gate::new(GateKind::And, vec![Input::Const(value)]));
        Circuit { n, k: None, layers }
    }

    /// Depth-2 circuit for a CNF (AND of ORs) or DNF (OR of ANDs).
    pub fn from_formula(f: &NormalFormula) -> Self {
        if let Some(b) = f.constant_value() {
            return Circuit::constant(f.n(), 2, b);
        }
        let (top, bottom) = match f.kind() {
            FormulaKind::Cnf => (GateKind::And, GateKind::Or),
            FormulaKind::Dnf => (GateKind::Or, GateKind::And),
        };
        let bottoms: Vec<Gate> = f
            .clauses()
            .iter()
            .map(|c| Gate::new(bottom, c.iter().map(|&l| Input::Lit(l)).collect()))
            .collect();
        let output = Gate::new(top, (0..bottoms.len()).map(Input::Gate).collect());
        normalize(f.n(), Some(f.width()), &[vec![output], bottoms], None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn output(&self) -> &Gate {
        &self.layers[0][0]
    }

    pub fn output_kind(&self) -> GateKind {
        self.output().kind
    }

    /// Kind of the gates in 0-based layer `i`.
    pub fn layer_kind(&self, i: usize) -> GateKind {
        if i.is_multiple_of(2) {
            self.output_kind()
        } else {
            self.output_kind().dual()
        }
    }

    pub fn bottom_kind(&self) -> GateKind {
        self.layer_kind(self.depth() - 1)
    }

    pub fn constant_value(&self) -> Option<bool> {
        match self.output().inputs.as_slice() {
            [Input::Const(b)] => Some(*b),
            _ => None,
        }
    }

    /// Largest number of gates in a layer.
    pub fn max_layer_size(&self) -> usize {
        self.layers.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn bottom_fanin_max(&self) -> usize {
        if self.constant_value().is_some() {
            return 0;
        }
        self.layers.last().map_or(0, |l| l.iter().map(Gate::fan_in).max().unwrap_or(0))
    }

    /// Total number of wires.
    pub fn size(&self) -> usize {
        self.layers.iter().flatten().map(Gate::fan_in).sum()
    }

    /// Sorted variables that appear in some literal.
    pub fn support(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .layers
            .last()
            .into_iter()
            .flatten()
            .flat_map(|g| g.literals().map(|l| l.var))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Declares a bottom fan-in bound.
    pub fn with_k(mut self, k: usize) -> Result<Self> {
        if self.bottom_fanin_max() > k {
            return Err(Error::InvalidCircuit(format!(
                "bottom fan-in {} exceeds requested bound {k}",
                self.bottom_fanin_max()
            )));
        }
        self.k = Some(k);
        Ok(self)
    }

    pub fn validate(&self) -> ShapeReport {
        let bottom_fanin_max = self.bottom_fanin_max();
        ShapeReport {
            n: self.n,
            d: self.depth(),
            gates_per_layer: self.layers.iter().map(Vec::len).collect(),
            m: self.max_layer_size(),
            bottom_fanin_max,
            k: self.k,
            is_k_bounded: self.k.is_some_and(|k| bottom_fanin_max <= k),
        }
    }

    pub fn evaluate(&self, x: &[bool]) -> bool {
        let mut below: Vec<bool> = Vec::new();
        for layer in self.layers.iter().rev() {
            let current = layer
                .iter()
                .map(|g| {
                    let value = |i: &Input| match *i {
                        Input::Gate(j) => below[j],
                        Input::Lit(l) => l.eval(x),
                        Input::Const(b) => b,
                    };
                    match g.kind {
                        GateKind::And => g.inputs.iter().all(value),
                        GateKind::Or => g.inputs.iter().any(value),
                    }
                })
                .collect();
            below = current;
        }
        below[0]
    }

    pub fn evaluate_index(&self, index: u64) -> bool {
        let x: Vec<bool> = (0..self.n).map(|v| index >> v & 1 == 1).collect();
        self.evaluate(&x)
    }

    /// Bit-parallel evaluation: bit `j` of `words[v]` is variable `v` in the
    /// `j`-th of 64 simultaneous assignments.
    pub fn evaluate_words(&self, words: &[u64]) -> u64 {
        let mut below: Vec<u64> = Vec::new();
        for layer in self.layers.iter().rev() {
            let current = layer
                .iter()
                .map(|g| {
                    let value = |i: &Input| match *i {
                        Input::Gate(j) => below[j],
                        Input::Lit(l) => {
                            if l.negated {
                                !words[l.var]
                            } else {
                                words[l.var]
                            }
                        }
                        Input::Const(b) => {
                            if b {
                                u64::MAX
                            } else {
                                0
                            }
                        }
                    };
                    match g.kind {
                        GateKind::And => g.inputs.iter().fold(u64::MAX, |acc, i| acc & value(i)),
                        GateKind::Or => g.inputs.iter().fold(0, |acc, i| acc | value(i)),
                    }
                })
                .collect();
            below = current;
        }
        below[0]
    }

    /// `C|rho`: set literals become constants and constants propagate. The
    /// result keeps the global variable numbering and never gets deeper.
    pub fn restrict(&self, rho: &Restriction) -> Circuit {
        debug_assert_eq!(rho.n(), self.n);
        normalize(self.n, self.k, &self.layers, Some(rho))
    }

    /// Depth-1 circuits become depth 2 by wrapping the output gate; deeper
    /// circuits are returned unchanged.
    pub fn lift_to_depth_two(&self) -> Circuit {
        if self.depth() >= 2 {
            return self.clone();
        }
        if let Some(b) = self.constant_value() {
            return Circuit::constant(self.n, 2, b);
        }
        let g = self.output().clone();
        let top = Gate::new(g.kind.dual(), vec![Input::Gate(0)]);
        normalize(self.n, self.k, &[vec![top], vec![g]], None)
    }

    /// The CNF/DNF computed by a circuit of depth at most 2.
    pub fn to_normal_formula(&self) -> Result<NormalFormula> {
        let width = self.k.unwrap_or(0).max(self.bottom_fanin_max()).max(1);
        if let Some(b) = self.constant_value() {
            return Ok(NormalFormula::constant(FormulaKind::Cnf, self.n, width, b));
        }
        match self.depth() {
            1 => {
                let g = self.output();
                let lits: Vec<_> = g.literals().collect();
                let width = width.max(lits.len());
                match g.kind {
                    GateKind::Or => NormalFormula::cnf(self.n, width, vec![lits]),
                    GateKind::And => NormalFormula::dnf(self.n, width, vec![lits]),
                }
            }
            2 => {
                let clauses = self
                    .output()
                    .inputs
                    .iter()
                    .map(|i| match *i {
                        Input::Gate(j) => Ok(self.layers[1][j].literals().collect()),
                        _ => Err(Error::Internal("depth-2 output reads a non-gate input".into())),
                    })
                    .collect::<Result<Vec<Vec<Literal>>>>()?;
                NormalFormula::new(self.output_kind().formula_kind(), self.n, width, clauses)
            }
            d => Err(Error::InvalidCircuit(format!("depth {d} circuit is not a normal formula"))),
        }
    }
}

fn check_structure(n: usize, layers: &[Vec<Gate>]) -> Result<()> {
    let d = layers.len();
    if d == 0 {
        return Err(Error::InvalidCircuit("circuit has no layers".into()));
    }
    if layers[0].len() != 1 {
        return Err(Error::InvalidCircuit(format!("layer 1 has {} gates, expected exactly 1", layers[0].len())));
    }
    let top = layers[0][0].kind;
    for (i, layer) in layers.iter().enumerate() {
        let expected = if i % 2 == 0 { top } else { top.dual() };
        for (j, g) in layer.iter().enumerate() {
            if g.kind != expected {
                return Err(Error::InvalidCircuit(format!("non-alternating layers: layer {} gate {j} is {}", i + 1, g.kind)));
            }
            if g.inputs.is_empty() {
                return Err(Error::InvalidCircuit(format!("layer {} gate {j} has no inputs", i + 1)));
            }
            for input in &g.inputs {
                match *input {
                    Input::Gate(c) => {
                        if i + 1 >= d || c >= layers[i + 1].len() {
                            return Err(Error::InvalidCircuit(format!(
                                "layer {} gate {j} references missing gate @{c} of layer {}",
                                i + 1,
                                i + 2
                            )));
                        }
                    }
                    Input::Lit(l) => {
                        if i + 1 != d {
                            return Err(Error::InvalidCircuit(format!(
                                "literal {l} at layer {}; literals are only allowed at layer {d}",
                                i + 1
                            )));
                        }
                        if l.var >= n {
                            return Err(Error::InvalidCircuit(format!("variable x{} out of range for n={n}", l.var)));
                        }
                    }
                    Input::Const(_) => {}
                }
            }
        }
    }
    Ok(())
}

/// Normalizes raw layers, optionally substituting the variables `rho` sets.
fn normalize(n: usize, k: Option<usize>, layers: &[Vec<Gate>], rho: Option<&Restriction>) -> Circuit {
    let d = layers.len();
    let mut built: Vec<Vec<Gate>> = vec![Vec::new(); d];
    let mut below: Vec<Resolved> = Vec::new();
    for i in (0..d).rev() {
        let mut index: HashMap<Vec<Input>, usize> = HashMap::new();
        let mut current = Vec::with_capacity(layers[i].len());
        for gate in &layers[i] {
            let absorbing = gate.kind.absorbing();
            let mut inputs: Vec<Input> = Vec::with_capacity(gate.inputs.len());
            let mut decided: Option<bool> = None;
            for input in &gate.inputs {
                let constant = match *input {
                    Input::Const(b) => Some(b),
                    Input::Lit(l) => match rho.and_then(|r| r.get(l.var)) {
                        Some(v) => Some(l.value(v)),
                        None => {
                            let clash = inputs.iter().any(|i| matches!(i, Input::Lit(o) if o.var == l.var && o.negated != l.negated));
                            if clash {
                                decided = Some(absorbing);
                                break;
                            }
                            if !inputs.contains(&Input::Lit(l)) {
                                inputs.push(Input::Lit(l));
                            }
                            None
                        }
                    },
                    Input::Gate(c) => match below[c] {
                        Resolved::Const(b) => Some(b),
                        Resolved::Gate(nc) => {
                            if !inputs.contains(&Input::Gate(nc)) {
                                inputs.push(Input::Gate(nc));
                            }
                            None
                        }
                    },
                };
                if constant == Some(absorbing) {
                    decided = Some(absorbing);
                    break;
                }
            }
            if decided.is_none() && inputs.is_empty() {
                decided = Some(!absorbing);
            }
            let resolved = match decided {
                Some(b) => Resolved::Const(b),
                None => {
                    let layer = &mut built[i];
                    let idx = *index.entry(inputs.clone()).or_insert_with(|| {
                        layer.push(Gate::new(gate.kind, inputs));
                        layer.len() - 1
                    });
                    Resolved::Gate(idx)
                }
            };
            current.push(resolved);
        }
        below = current;
    }

    let top = below[0];
    let top_kind = layers[0][0].kind;
    match top {
        Resolved::Const(b) => {
            let mut layers = vec![Vec::new(); d];
            layers[0].push(Gate::new(top_kind, vec![Input::Const(b)]));
            Circuit { n, k, layers }
        }
        Resolved::Gate(t) => Circuit { n, k, layers: prune(built, t) },
    }
}

/// Keeps only gates reachable from gate `top` of layer 0, preserving order.
fn prune(layers: Vec<Vec<Gate>>, top: usize) -> Vec<Vec<Gate>> {
    let d = layers.len();
    let mut reach: Vec<Vec<bool>> = layers.iter().map(|l| vec![false; l.len()]).collect();
    reach[0][top] = true;
    for i in 0..d {
        for (j, g) in layers[i].iter().enumerate() {
            if !reach[i][j] {
                continue;
            }
            for input in &g.inputs {
                if let Input::Gate(c) = *input {
                    reach[i + 1][c] = true;
                }
            }
        }
    }
    let remap: Vec<Vec<Option<usize>>> = reach
        .iter()
        .map(|r| {
            let mut next = 0;
            r.iter()
                .map(|&keep| {
                    keep.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    layers
        .into_iter()
        .enumerate()
        .map(|(i, layer)| {
            layer
                .into_iter()
                .enumerate()
                .filter(|(j, _)| reach[i][*j])
                .map(|(_, mut g)| {
                    for input in &mut g.inputs {
                        if let Input::Gate(c) = input {
                            *c = remap[i + 1][*c].expect("reachable child");
                        }
                    }
                    g
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: usize) -> Input {
        Input::Lit(Literal::pos(v))
    }
    fn nlit(v: usize) -> Input {
        Input::Lit(Literal::neg(v))
    }

    /// (x0 ∨ x1) ∧ (¬x0 ∨ x2)
    fn small_cnf() -> Circuit {
        Circuit::from_layers(
            3,
            vec![
                vec![Gate::new(GateKind::And, vec![Input::Gate(0), Input::Gate(1)])],
                vec![Gate::new(GateKind::Or, vec![lit(0), lit(1)]), Gate::new(GateKind::Or, vec![nlit(0), lit(2)])],
            ],
            None,
        )
        .unwrap()
    }

    fn bits(n: usize, idx: u64) -> Vec<bool> {
        (0..n).map(|v| idx >> v & 1 == 1).collect()
    }

    #[test]
    fn and_of_three() {
        let c = Circuit::from_layers(3, vec![vec![Gate::new(GateKind::And, vec![lit(0), lit(1), lit(2)])]], None).unwrap();
        assert!(c.evaluate(&[true, true, true]));
        assert!(!c.evaluate(&[true, true, false]));
    }

    #[test]
    fn restrict_to_x2() {
        let c = small_cnf();
        let mut rho = Restriction::all_star(3);
        rho.set(0, true);
        let r = c.restrict(&rho);
        assert_eq!(r.support(), vec![2]);
        for idx in 0..8 {
            let x = bits(3, idx);
            if x[0] {
                assert_eq!(r.evaluate(&x), x[2]);
                assert_eq!(r.evaluate(&x), c.evaluate(&x));
            }
        }
    }

    #[test]
    fn full_restriction_is_constant() {
        let c = small_cnf();
        for idx in 0..8 {
            let x = bits(3, idx);
            let r = c.restrict(&Restriction::from_assignment(&x));
            assert_eq!(r.constant_value(), Some(c.evaluate(&x)));
            assert_eq!(r.depth(), c.depth());
        }
    }

    #[test]
    fn identity_restriction_keeps_circuit() {
        let c = small_cnf();
        assert_eq!(c.restrict(&Restriction::all_star(3)), c);
    }

    #[test]
    fn complementary_literals_simplify() {
        // OR(x0, ¬x0) is true, so the AND reduces to its other input.
        let c = Circuit::from_layers(
            2,
            vec![
                vec![Gate::new(GateKind::And, vec![Input::Gate(0), Input::Gate(1)])],
                vec![Gate::new(GateKind::Or, vec![lit(0), nlit(0)]), Gate::new(GateKind::Or, vec![lit(1)])],
            ],
            None,
        )
        .unwrap();
        assert_eq!(c.layers()[1].len(), 1);
        assert!(c.evaluate(&[false, true]));
    }

    #[test]
    fn identical_gates_merged_and_unreachable_pruned() {
        let c = Circuit::from_layers(
            2,
            vec![
                vec![Gate::new(GateKind::Or, vec![Input::Gate(0), Input::Gate(1)])],
                vec![
                    Gate::new(GateKind::And, vec![lit(0), lit(1)]),
                    Gate::new(GateKind::And, vec![lit(0), lit(1)]),
                    Gate::new(GateKind::And, vec![lit(1)]),
                ],
            ],
            None,
        )
        .unwrap();
        assert_eq!(c.layers()[1].len(), 1);
        assert_eq!(c.output().inputs, vec![Input::Gate(0)]);
    }

    #[test]
    fn structural_errors() {
        let same_kind = Circuit::from_layers(
            2,
            vec![vec![Gate::new(GateKind::And, vec![Input::Gate(0)])], vec![Gate::new(GateKind::And, vec![lit(0)])]],
            None,
        );
        assert!(matches!(same_kind, Err(Error::InvalidCircuit(m)) if m.contains("non-alternating")));
        let dangling = Circuit::from_layers(
            2,
            vec![vec![Gate::new(GateKind::And, vec![Input::Gate(3)])], vec![Gate::new(GateKind::Or, vec![lit(0)])]],
            None,
        );
        assert!(dangling.is_err());
        let high_literal = Circuit::from_layers(
            2,
            vec![vec![Gate::new(GateKind::And, vec![lit(0)])], vec![Gate::new(GateKind::Or, vec![lit(0)])]],
            None,
        );
        assert!(high_literal.is_err());
        let out_of_range =
            Circuit::from_layers(2, vec![vec![Gate::new(GateKind::And, vec![lit(5)])]], None);
        assert!(out_of_range.is_err());
    }

    #[test]
    fn validate_reports_shape() {
        let c = Circuit::from_layers(
            3,
            vec![
                vec![Gate::new(GateKind::And, vec![Input::Gate(0)])],
                vec![Gate::new(GateKind::Or, vec![lit(0), lit(1), lit(2)])],
            ],
            None,
        )
        .unwrap();
        let rep = c.validate();
        assert_eq!(rep.d, 2);
        assert_eq!(rep.bottom_fanin_max, 3);
        assert!(!rep.is_k_bounded);
        assert!(c.with_k(3).unwrap().validate().is_k_bounded);
    }

    #[test]
    fn word_evaluation_matches_scalar() {
        let c = small_cnf();
        let words: Vec<u64> = (0..3).map(|v| (0..64u64).fold(0, |acc, j| acc | ((j >> v & 1) << j))).collect();
        let w = c.evaluate_words(&words);
        for j in 0..8u64 {
            assert_eq!(w >> j & 1 == 1, c.evaluate_index(j));
        }
    }

    #[test]
    fn formula_round_trip() {
        let c = small_cnf();
        let f = c.to_normal_formula().unwrap();
        assert_eq!(f.kind(), FormulaKind::Cnf);
        assert_eq!(Circuit::from_formula(&f).layers(), c.layers());
    }

    #[test]
    fn lift_depth_one() {
        let c = Circuit::from_layers(2, vec![vec![Gate::new(GateKind::Or, vec![lit(0), lit(1)])]], None).unwrap();
        let l = c.lift_to_depth_two();
        assert_eq!(l.depth(), 2);
        for idx in 0..4 {
            assert_eq!(l.evaluate_index(idx), c.evaluate_index(idx));
        }
    }
}
