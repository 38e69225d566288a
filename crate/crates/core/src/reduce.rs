//! Bottom fan-in reduction and depth reduction.

use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, GateKind, Input, Literal};
use crate::error::{Error, Result};
use crate::formula::{FormulaSequence, NormalFormula};
use crate::restriction::{Entry, Partition, Provenance, Region, Restriction};
use crate::rng::derive_seed;
use crate::switching::{switch_within, StageParams};

/// Partition whose payloads have bottom fan-in at most `k`.
///
/// The first bottom gate wider than `k` (in index order, rescanning after
/// every branch) is split on its first `k` inputs ℓ1..ℓk. For an OR gate the
/// keep branch conjoins (ℓ1 ∨ … ∨ ℓk) to the guard and truncates the gate;
/// the set branch makes all of them false. AND gates are dual, and their
/// keep-branch guard clause is (¬ℓ1 ∨ … ∨ ¬ℓk), so guards stay CNFs.
pub fn bottom_fanin_reduce(c: &Circuit, k: usize) -> Result<Partition<Circuit>> {
    if k == 0 {
        return Err(Error::InvalidParameter("bottom fan-in bound must be at least 1".into()));
    }
    let n = c.n();
    let mut out = Vec::new();
    fanin_branch(c.clone(), k, NormalFormula::true_cnf(n, k), Restriction::all_star(n), 0, &mut out)?;
    Ok(Partition::from_entries(n, out))
}

fn fanin_branch(
    c: Circuit,
    k: usize,
    guard: NormalFormula,
    rho: Restriction,
    f: usize,
    out: &mut Vec<Entry<Circuit>>,
) -> Result<()> {
    let n = c.n();
    let d = c.depth();
    let wide = c.layers()[d - 1].iter().position(|g| g.fan_in() > k);
    let Some(gi) = wide else {
        if let Some(region) = Region::simplified(&guard, rho)? {
            let payload = Circuit::from_layers(n, c.layers().to_vec(), Some(k))?;
            out.push(Entry { region, payload, provenance: Provenance { false_branches: f, ..Provenance::default() } });
        }
        return Ok(());
    };
    let gate = &c.layers()[d - 1][gi];
    let first: Vec<Literal> = gate.literals().take(k).collect();
    if first.len() != k {
        return Err(Error::Internal("wide bottom gate with non-literal inputs".into()));
    }
    let or_bottom = gate.kind == GateKind::Or;

    let clause: Vec<Literal> = if or_bottom { first.clone() } else { first.iter().map(|l| l.negate()).collect() };
    let kept_guard = guard.and(&NormalFormula::cnf(n, k, vec![clause])?)?;
    let mut layers = c.layers().to_vec();
    layers[d - 1][gi] = Gate::new(gate.kind, first.iter().map(|&l| Input::Lit(l)).collect());
    let truncated = Circuit::from_layers(n, layers, None)?;
    fanin_branch(truncated, k, kept_guard, rho.clone(), f, out)?;

    let mut set = rho;
    for l in &first {
        // OR: make ℓ false; AND: make ℓ true
        set.set(l.var, if or_bottom { l.negated } else { !l.negated });
    }
    let restricted = c.restrict(&set);
    fanin_branch(restricted, k, guard, set, f + 1, out)
}

/// The formulas computed by the gates one layer above the bottom, in gate
/// order (AND-over-OR gates become CNFs).
pub fn bottom_formulas(c: &Circuit) -> Result<FormulaSequence> {
    let d = c.depth();
    if d < 2 {
        return Err(Error::InvalidCircuit("need at least two layers".into()));
    }
    let k = c.k().unwrap_or(0).max(c.bottom_fanin_max()).max(1);
    let bottom = &c.layers()[d - 1];
    let formulas = c.layers()[d - 2]
        .iter()
        .map(|g| {
            let clauses = g
                .inputs
                .iter()
                .map(|i| match *i {
                    Input::Gate(j) => Ok(bottom[j].literals().collect()),
                    _ => Err(Error::Internal("non-gate input above the bottom layer".into())),
                })
                .collect::<Result<Vec<Vec<Literal>>>>()?;
            NormalFormula::new(g.kind.formula_kind(), c.n(), k, clauses)
        })
        .collect::<Result<Vec<_>>>()?;
    FormulaSequence::new(formulas)
}

/// One depth reduction inside `base`: the formulas rooted one layer above
/// the bottom are switched, spliced into the layer above them, and the two
/// now same-kind layers merge. Payloads have depth d−1.
pub fn depth_reduce_once(
    c: &Circuit,
    log2_q: f64,
    seed: u64,
    base: &Region,
    params: &StageParams,
) -> Result<Partition<Circuit>> {
    let n = c.n();
    let d = c.depth();
    if d < 3 {
        return Err(Error::InvalidCircuit(format!("depth reduction needs depth >= 3, got {d}")));
    }
    if let Some(b) = c.constant_value() {
        return Ok(Partition::from_entries(
            n,
            vec![Entry { region: base.clone(), payload: Circuit::constant(n, d - 1, b), provenance: Provenance::default() }],
        ));
    }
    let k = c.k().unwrap_or(0).max(c.bottom_fanin_max()).max(1);
    let seq = bottom_formulas(c)?;
    let switched = switch_within(&seq, base.rho(), log2_q, seed, params)?;

    let mut out = Vec::with_capacity(switched.len());
    for e in switched.into_entries() {
        let Some(region) = base.refine(&e.region)? else { continue };
        let payload = splice(c, &e.payload, k)?.restrict(region.rho());
        out.push(Entry { region, payload, provenance: e.provenance });
    }
    Ok(Partition::from_entries(n, out))
}

/// Replaces the gates one layer above the bottom by `psis` (dual-kind
/// formulas) and merges them into the layer above.
fn splice(c: &Circuit, psis: &FormulaSequence, k: usize) -> Result<Circuit> {
    let d = c.depth();
    let mut layers: Vec<Vec<Gate>> = c.layers()[..d - 2].to_vec();
    let bottom_kind = c.layer_kind(d - 2);
    let mut bottom: Vec<Gate> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for g in layers.last_mut().expect("depth >= 3") {
        let mut inputs = Vec::with_capacity(g.inputs.len());
        for input in &g.inputs {
            let Input::Gate(j) = *input else {
                inputs.push(*input);
                continue;
            };
            let psi = &psis.formulas()[j];
            if let Some(b) = psi.constant_value() {
                inputs.push(Input::Const(b));
                continue;
            }
            for clause in psi.clauses() {
                let id = *index.entry(clause.clone()).or_insert_with(|| {
                    bottom.push(Gate::new(bottom_kind, clause.iter().map(|&l| Input::Lit(l)).collect()));
                    bottom.len() - 1
                });
                inputs.push(Input::Gate(id));
            }
        }
        g.inputs = inputs;
    }
    layers.push(bottom);
    Circuit::from_layers(c.n(), layers, Some(k))
}

/// Repeated depth reduction inside `base` down to depth-2 payloads. One
/// reduction runs with failure budget q/2, then every resulting region is
/// reduced recursively with budget q/2^(n'+1), where n' is the number of
/// variables `base` leaves unset.
pub fn depth_reduce(
    c: &Circuit,
    log2_q: f64,
    seed: u64,
    base: &Region,
    params: &StageParams,
) -> Result<Partition<Circuit>> {
    let n = c.n();
    if c.depth() <= 2 {
        return Ok(Partition::from_entries(
            n,
            vec![Entry { region: base.clone(), payload: c.clone(), provenance: Provenance::default() }],
        ));
    }
    let first = depth_reduce_once(c, log2_q - 1.0, derive_seed(seed, 0), base, params)?;
    let inner_log2_q = log2_q - (base.rho().num_unset() as f64 + 1.0);
    let parts: Vec<Vec<Entry<Circuit>>> = first
        .into_entries()
        .into_par_iter()
        .enumerate()
        .map(|(j, e)| {
            let sub = depth_reduce(&e.payload, inner_log2_q, derive_seed(seed, j as u64 + 1), &e.region, params)?;
            Ok(sub
                .into_entries()
                .into_iter()
                .map(|s| Entry { region: s.region, payload: s.payload, provenance: e.provenance.merge(s.provenance) })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(Partition::from_entries(n, parts.into_iter().flatten().collect()))
}
