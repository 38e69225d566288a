//! Canonical decision trees for formulas and formula sequences, and the
//! short-path / long-path split used by switching.
//!
//! The tree for a single formula takes the first clause that is neither
//! removed nor exhausted, queries all of its still-unset variables in stored
//! order (a complete subtree), then recurses. A sequence tree runs the tree
//! of the first formula and, at each of its leaves, continues with the next
//! formula restricted by the path. Every query node records which formula
//! and clause contributed it.

use std::fmt::Write as _;

use crate::circuit::Literal;
use crate::error::{Error, Result};
use crate::formula::{FormulaKind, FormulaSequence, NormalFormula, Status};
use crate::restriction::Restriction;

/// Default node cap for tree construction.
pub const DEFAULT_MAX_TREE_NODES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// `children[b]` is the subtree for `var = b`.
    Query { var: usize, formula: usize, clause: usize, children: [usize; 2] },
    /// One value per formula of the sequence.
    Leaf(Vec<bool>),
}

/// A canonical decision tree stored as an arena; the root is node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    n: usize,
    arity: usize,
    nodes: Vec<Node>,
}

/// One query on a root-to-leaf path, with the formula and clause that
/// contributed it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathStep {
    pub var: usize,
    pub value: bool,
    pub formula: usize,
    pub clause: usize,
}

impl PathStep {
    /// The literal made true by this step.
    pub fn literal(&self) -> Literal {
        Literal::new(self.var, !self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePath {
    pub steps: Vec<PathStep>,
    pub leaf: Vec<bool>,
}

impl TreePath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The path as a restriction on `n` variables.
    pub fn to_restriction(&self, n: usize) -> Restriction {
        let mut r = Restriction::all_star(n);
        for s in &self.steps {
            r.set(s.var, s.value);
        }
        r
    }

    /// Number of nodes each of `arity` formulas contributed.
    pub fn contributions(&self, arity: usize) -> Vec<usize> {
        let mut out = vec![0; arity];
        for s in &self.steps {
            out[s.formula] += 1;
        }
        out
    }
}

struct Builder<'a> {
    formulas: &'a [NormalFormula],
    nodes: Vec<Node>,
    cap: usize,
}

impl Builder<'_> {
    fn alloc(&mut self) -> Result<usize> {
        if self.nodes.len() >= self.cap {
            return Err(Error::TreeTooLarge { cap: self.cap });
        }
        self.nodes.push(Node::Leaf(Vec::new()));
        Ok(self.nodes.len() - 1)
    }

    /// Subtree rooted at the current state: formulas before `i` are decided
    /// with values `vals`.
    fn build(&mut self, r: &mut Restriction, i: usize, vals: &mut Vec<bool>) -> Result<usize> {
        let mut i = i;
        let mut decided = 0;
        let node = loop {
            if i == self.formulas.len() {
                let id = self.alloc()?;
                self.nodes[id] = Node::Leaf(vals.clone());
                break id;
            }
            match self.formulas[i].status(r) {
                Status::Const(b) => {
                    vals.push(b);
                    decided += 1;
                    i += 1;
                }
                Status::Open { clause, unset } => break self.query(r, i, clause, &unset, vals)?,
            }
        };
        vals.truncate(vals.len() - decided);
        Ok(node)
    }

    fn query(&mut self, r: &mut Restriction, i: usize, clause: usize, vars: &[usize], vals: &mut Vec<bool>) -> Result<usize> {
        let Some((&var, rest)) = vars.split_first() else {
            return self.build(r, i, vals);
        };
        let id = self.alloc()?;
        let mut children = [0; 2];
        for b in [false, true] {
            r.set(var, b);
            children[usize::from(b)] = self.query(r, i, clause, rest, vals)?;
            r.clear(var);
        }
        self.nodes[id] = Node::Query { var, formula: i, clause, children };
        Ok(id)
    }
}

/// Canonical tree of a single formula, with the default node cap.
pub fn canonical_tree(phi: &NormalFormula) -> Result<DecisionTree> {
    canonical_tree_under(std::slice::from_ref(phi), &Restriction::all_star(phi.n()), DEFAULT_MAX_TREE_NODES)
}

/// Canonical tree of a sequence; errors once more than `max_nodes` nodes
/// would be built.
pub fn canonical_tree_seq(seq: &FormulaSequence, max_nodes: usize) -> Result<DecisionTree> {
    canonical_tree_under(seq.formulas(), &Restriction::all_star(seq.n()), max_nodes)
}

/// Canonical tree of `formulas|base`. Variables set by `base` are never
/// queried; clause and formula indices refer to the unrestricted formulas.
pub fn canonical_tree_under(formulas: &[NormalFormula], base: &Restriction, max_nodes: usize) -> Result<DecisionTree> {
    let n = base.n();
    if let Some(f) = formulas.iter().find(|f| f.n() != n) {
        return Err(Error::LengthMismatch { expected: n, actual: f.n() });
    }
    let mut b = Builder { formulas, nodes: Vec::new(), cap: max_nodes.max(1) };
    let mut r = base.clone();
    b.build(&mut r, 0, &mut Vec::with_capacity(formulas.len()))?;
    Ok(DecisionTree { n, arity: formulas.len(), nodes: b.nodes })
}

/// Follows the canonical construction of `formulas|base` along the given
/// assignments and labels each with its contributing formula and clause.
/// Fails if some variable is not the one the tree queries at that point.
pub fn trace_path(formulas: &[NormalFormula], base: &Restriction, assignments: &[(usize, bool)]) -> Result<Vec<PathStep>> {
    let mut r = base.clone();
    let mut i = 0;
    let mut pending: std::collections::VecDeque<usize> = Default::default();
    let mut clause = 0;
    let mut steps = Vec::with_capacity(assignments.len());
    for (pos, &(var, value)) in assignments.iter().enumerate() {
        while pending.is_empty() {
            let Some(f) = formulas.get(i) else {
                return Err(Error::PathMismatch(format!("step {pos} runs past a leaf")));
            };
            match f.status(&r) {
                Status::Const(_) => i += 1,
                Status::Open { clause: c, unset } => {
                    clause = c;
                    pending.extend(unset);
                }
            }
        }
        let expected = pending.pop_front().expect("non-empty queue");
        if expected != var {
            return Err(Error::PathMismatch(format!("step {pos} queries x{var}, the tree queries x{expected}")));
        }
        r.set(var, value);
        steps.push(PathStep { var, value, formula: i, clause });
    }
    Ok(steps)
}

impl DecisionTree {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of formulas in the labelling sequence.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            match &self.nodes[id] {
                Node::Leaf(_) => best = best.max(depth),
                Node::Query { children, .. } => {
                    stack.push((children[1], depth + 1));
                    stack.push((children[0], depth + 1));
                }
            }
        }
        best
    }

    /// Leaf tuple reached by the full assignment `x`.
    pub fn evaluate(&self, x: &[bool]) -> &[bool] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf(v) => return v,
                Node::Query { var, children, .. } => id = children[usize::from(x[*var])],
            }
        }
    }

    /// The path followed by `x`.
    pub fn path_of(&self, x: &[bool]) -> TreePath {
        let mut steps = Vec::new();
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                Node::Leaf(v) => return TreePath { steps, leaf: v.clone() },
                Node::Query { var, formula, clause, children } => {
                    let value = x[*var];
                    steps.push(PathStep { var: *var, value, formula: *formula, clause: *clause });
                    id = children[usize::from(value)];
                }
            }
        }
    }

    /// All root-to-leaf paths, 0-branches first.
    pub fn paths(&self) -> Vec<TreePath> {
        let mut out = Vec::new();
        self.walk(0, &mut Vec::new(), &mut |steps, leaf| {
            out.push(TreePath { steps: steps.to_vec(), leaf: leaf.to_vec() });
        });
        out
    }

    fn walk(&self, id: usize, prefix: &mut Vec<PathStep>, visit: &mut impl FnMut(&[PathStep], &[bool])) {
        match &self.nodes[id] {
            Node::Leaf(v) => visit(prefix, v),
            Node::Query { var, formula, clause, children } => {
                for b in [false, true] {
                    prefix.push(PathStep { var: *var, value: b, formula: *formula, clause: *clause });
                    self.walk(children[usize::from(b)], prefix, visit);
                    prefix.pop();
                }
            }
        }
    }

    /// Indented text, one node per line; children follow their parent,
    /// 0-branch first.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(0usize, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let indent = "  ".repeat(depth);
            match &self.nodes[id] {
                Node::Leaf(v) => {
                    let tuple: Vec<&str> = v.iter().map(|&b| if b { "1" } else { "0" }).collect();
                    writeln!(out, "{indent}leaf ({})", tuple.join(",")).expect("write to string");
                }
                Node::Query { var, formula, clause, children } => {
                    writeln!(out, "{indent}x{var} [formula={formula} clause={clause}]").expect("write to string");
                    stack.push((children[1], depth + 1));
                    stack.push((children[0], depth + 1));
                }
            }
        }
        out
    }

    /// Splits the paths of a single-formula tree at depth `k`. `kind` is the
    /// kind of the formula the tree was built for.
    pub fn split(&self, k: usize, kind: FormulaKind) -> Result<PathSplit> {
        let n = self.n;
        let width = k.max(1);
        let mut truncations: Vec<Vec<Literal>> = Vec::new();
        let mut short_clauses: Vec<Vec<Literal>> = Vec::new();
        let mut long = Vec::new();
        let mut short_paths = 0;
        self.walk(0, &mut Vec::new(), &mut |steps, leaf| {
            let value = leaf.first().copied().unwrap_or(true);
            if steps.len() > k {
                // ¬σ for the depth-k truncation σ
                let clause: Vec<Literal> = steps[..k].iter().map(|s| s.literal().negate()).collect();
                if truncations.last() != Some(&clause) {
                    truncations.push(clause);
                }
                long.push(TreePath { steps: steps.to_vec(), leaf: leaf.to_vec() });
            } else {
                short_paths += 1;
                match kind {
                    FormulaKind::Cnf if value => short_clauses.push(steps.iter().map(PathStep::literal).collect()),
                    FormulaKind::Dnf if !value => {
                        short_clauses.push(steps.iter().map(|s| s.literal().negate()).collect())
                    }
                    _ => {}
                }
            }
        });
        let mut seen = std::collections::HashSet::new();
        truncations.retain(|c| seen.insert(c.clone()));
        Ok(PathSplit {
            guard: NormalFormula::cnf(n, width, truncations)?,
            short: NormalFormula::new(kind.dual(), n, width, short_clauses)?,
            long,
            short_paths,
        })
    }
}

/// A tree's paths split at depth k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSplit {
    /// k-CNF true exactly on points whose path has length at most k.
    pub guard: NormalFormula,
    /// Formula of the dual kind equal to the tree's function on the guard.
    pub short: NormalFormula,
    /// Paths longer than k, in tree order.
    pub long: Vec<TreePath>,
    pub short_paths: usize,
}

/// The k-CNF of negated depth-k truncations of long paths. It is a CNF for
/// both input kinds.
pub fn short_guard(phi: &NormalFormula, k: usize) -> Result<NormalFormula> {
    Ok(canonical_tree(phi)?.split(k, phi.kind())?.guard)
}

/// The dual-kind formula read off the short paths: for a CNF the DNF of
/// 1-labelled short paths, for a DNF the CNF of negated 0-labelled ones.
pub fn short_formula(phi: &NormalFormula, k: usize) -> Result<NormalFormula> {
    Ok(canonical_tree(phi)?.split(k, phi.kind())?.short)
}

/// Root-to-leaf paths of `canonical_tree(phi)` longer than `k`.
pub fn long_paths(phi: &NormalFormula, k: usize) -> Result<Vec<TreePath>> {
    Ok(canonical_tree(phi)?.split(k, phi.kind())?.long)
}
