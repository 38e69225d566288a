//! Switching a sequence of k-CNFs into k-DNFs (or the dual) region by
//! region.
//!
//! A random set U of ⌊p·n'⌋ variables stays free; every restriction ρ0 of
//! the other free variables is a branch. Inside a branch each formula is
//! either not targeted (the short-path guard joins the region guard and the
//! formula is replaced by its short-path formula) or targeted along one of
//! its long paths (the path joins the restriction and the formula becomes
//! the leaf constant).

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::dtree::{canonical_tree_under, DEFAULT_MAX_TREE_NODES};
use crate::error::{Error, Result};
use crate::formula::{FormulaSequence, NormalFormula};
use crate::restriction::{Entry, Partition, Provenance, Region, Restriction};
use crate::rng::{derive_seed, seeded_rng};

/// Knobs shared by the randomized stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageParams {
    /// Fraction of free variables left unset; `None` uses the stage default.
    pub p: Option<f64>,
    /// Upper bound on independent runs (the smallest result is kept).
    pub max_retries: Option<usize>,
    pub max_tree_nodes: usize,
}

impl Default for StageParams {
    fn default() -> Self {
        StageParams { p: None, max_retries: None, max_tree_nodes: DEFAULT_MAX_TREE_NODES }
    }
}

/// Default unset fraction for switching: 1/(100k).
pub fn default_switch_p(k: usize) -> f64 {
    1.0 / (100.0 * k.max(1) as f64)
}

pub(crate) fn check_log2_q(log2_q: f64) -> Result<()> {
    if log2_q.is_nan() || log2_q > -1.0 {
        return Err(Error::InvalidProbability(log2_q.exp2()));
    }
    Ok(())
}

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("unset fraction {p} outside [0, 1]")));
    }
    Ok(())
}

/// ⌊p·free⌋, clamped to `free`.
pub fn unset_budget(p: f64, free: usize) -> usize {
    ((p * free as f64).floor() as usize).min(free)
}

/// Independent runs for failure probability 2^log2_q: ⌈lg 1/q⌉, at most 64
/// when n < 8, and a single run when the choice of U is forced.
pub(crate) fn run_count(log2_q: f64, n: usize, u: usize, free: usize, max_retries: Option<usize>) -> usize {
    if u == 0 || u == free {
        return 1;
    }
    let mut runs = (-log2_q).ceil().min(1e6) as usize;
    if n < 8 {
        runs = runs.min(64);
    }
    if let Some(cap) = max_retries {
        runs = runs.min(cap);
    }
    runs.max(1)
}

/// Picks the variables left free (`u` of `free`, uniformly) and returns the
/// remaining ones, ascending.
pub(crate) fn branch_variables(free: &[usize], u: usize, seed: u64) -> Vec<usize> {
    let mut rng = seeded_rng(seed);
    let mut keep = vec![false; free.len()];
    for i in sample(&mut rng, free.len(), u) {
        keep[i] = true;
    }
    free.iter().zip(&keep).filter(|(_, k)| !**k).map(|(&v, _)| v).collect()
}

/// Runs `branch` on every extension of `base` over `vars`, in lexicographic
/// order with the lowest-index variable as the most significant bit, and
/// concatenates the results in that order.
pub(crate) fn for_each_branch<E, F>(base: &Restriction, vars: &[usize], branch: F) -> Result<Vec<E>>
where
    E: Send,
    F: Fn(Restriction) -> Result<Vec<E>> + Sync,
{
    let len = vars.len();
    if len > 40 {
        return Err(Error::InvalidParameter(format!("{len} branch variables is beyond exhaustive reach")));
    }
    let chunks: Vec<Vec<E>> = (0..1usize << len)
        .into_par_iter()
        .with_min_len(32)
        .map(|idx| {
            let mut rho = base.clone();
            for (j, &v) in vars.iter().enumerate() {
                rho.set(v, idx >> (len - 1 - j) & 1 == 1);
            }
            branch(rho)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Switching over the whole cube.
pub fn switch_sequence(
    seq: &FormulaSequence,
    log2_q: f64,
    seed: u64,
    params: &StageParams,
) -> Result<Partition<FormulaSequence>> {
    switch_within(seq, &Restriction::all_star(seq.n()), log2_q, seed, params)
}

/// Switching inside the sub-cube of `base`. Output restrictions extend
/// `base`; output guards are k-CNFs; every payload formula has the dual
/// kind of its input, width k, and mentions only variables its region's
/// restriction leaves unset.
pub fn switch_within(
    seq: &FormulaSequence,
    base: &Restriction,
    log2_q: f64,
    seed: u64,
    params: &StageParams,
) -> Result<Partition<FormulaSequence>> {
    check_log2_q(log2_q)?;
    let n = base.n();
    if seq.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: seq.n() });
    }
    let k = seq.width().max(1);
    let p = params.p.unwrap_or_else(|| default_switch_p(k));
    check_p(p)?;
    let restricted = seq.restrict(base);
    let free = base.unset_vars();
    let u = unset_budget(p, free.len());
    let runs = run_count(log2_q, free.len(), u, free.len(), params.max_retries);

    let mut best: Option<Vec<Entry<FormulaSequence>>> = None;
    for run in 0..runs {
        let vars = branch_variables(&free, u, derive_seed(seed, run as u64));
        let entries = for_each_branch(base, &vars, |rho0| {
            let mut out = Vec::new();
            let mut psis = Vec::with_capacity(restricted.len());
            switch_branch(&restricted, k, params.max_tree_nodes, 0, rho0, NormalFormula::true_cnf(n, k), &mut psis, 0, &mut out)?;
            Ok(out)
        })?;
        if best.as_ref().is_none_or(|b| entries.len() < b.len()) {
            best = Some(entries);
        }
    }
    Ok(Partition::from_entries(n, best.unwrap_or_default()))
}

#[allow(clippy::too_many_arguments)]
fn switch_branch(
    seq: &FormulaSequence,
    k: usize,
    cap: usize,
    i: usize,
    rho: Restriction,
    guard: NormalFormula,
    psis: &mut Vec<NormalFormula>,
    targeted: usize,
    out: &mut Vec<Entry<FormulaSequence>>,
) -> Result<()> {
    let n = rho.n();
    let Some(phi) = seq.formulas().get(i) else {
        if let Some(region) = Region::simplified(&guard, rho)? {
            let payload = FormulaSequence::new(psis.iter().map(|f| f.restrict(region.rho())).collect())?;
            let provenance = Provenance { targeted, switch_rounds: 1, ..Provenance::default() };
            out.push(Entry { region, payload, provenance });
        }
        return Ok(());
    };
    let tree = canonical_tree_under(std::slice::from_ref(phi), &rho, cap)?;
    let split = tree.split(k, phi.kind())?;

    if split.short_paths > 0 {
        let g = guard.and(&split.guard)?.restrict(&rho);
        if g.constant_value() != Some(false) {
            psis.push(split.short);
            switch_branch(seq, k, cap, i + 1, rho.clone(), g, psis, targeted, out)?;
            psis.pop();
        }
    }
    for path in &split.long {
        let mut extended = rho.clone();
        for s in &path.steps {
            extended.set(s.var, s.value);
        }
        psis.push(NormalFormula::constant(phi.kind().dual(), n, k, path.leaf[0]));
        switch_branch(seq, k, cap, i + 1, extended, guard.clone(), psis, targeted + 1, out)?;
        psis.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Literal;
    use crate::formula::FormulaKind;
    use crate::restriction::verify_partition_structure;

    fn p(v: usize) -> Literal {
        Literal::pos(v)
    }

    fn check_equivalence(seq: &FormulaSequence, part: &Partition<FormulaSequence>) {
        let n = seq.n();
        let rep = verify_partition_structure(part, 20).unwrap();
        assert!(rep.is_partition, "{rep:?}");
        for e in part.iter() {
            let unset = e.region.rho().unset_vars();
            for f in e.payload.formulas() {
                assert!(f.support().iter().all(|v| unset.contains(v)));
            }
            for idx in 0..1u64 << n {
                if e.region.contains_index(idx) {
                    let x: Vec<bool> = (0..n).map(|v| idx >> v & 1 == 1).collect();
                    assert_eq!(e.payload.evaluate(&x), seq.evaluate(&x));
                }
            }
        }
    }

    #[test]
    fn single_short_clause_never_targeted() {
        let phi = NormalFormula::cnf(2, 2, vec![vec![p(0), p(1)]]).unwrap();
        let seq = FormulaSequence::new(vec![phi]).unwrap();
        let params = StageParams { p: Some(1.0), ..StageParams::default() };
        let part = switch_sequence(&seq, -1.0, 3, &params).unwrap();
        assert_eq!(part.len(), 1);
        assert_eq!(part.count_targeted(), 0);
        assert_eq!(part.entries()[0].payload.formulas()[0].kind(), FormulaKind::Dnf);
        check_equivalence(&seq, &part);
    }

    #[test]
    fn two_clauses_get_targeted() {
        // tree height 4 exceeds k = 2
        let phi = NormalFormula::cnf(4, 2, vec![vec![p(0), p(1)], vec![p(2), p(3)]]).unwrap();
        let seq = FormulaSequence::new(vec![phi]).unwrap();
        let params = StageParams { p: Some(1.0), ..StageParams::default() };
        let part = switch_sequence(&seq, -1.0, 3, &params).unwrap();
        check_equivalence(&seq, &part);
        assert!(part.count_targeted() > 0);
    }

    #[test]
    fn degenerate_p_enumerates_points() {
        let phi = NormalFormula::cnf(3, 2, vec![vec![p(0), p(1)], vec![p(2)]]).unwrap();
        let seq = FormulaSequence::new(vec![phi]).unwrap();
        let part = switch_sequence(&seq, -5.0, 1, &StageParams::default()).unwrap();
        assert_eq!(part.len(), 8);
        check_equivalence(&seq, &part);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = NormalFormula::cnf(6, 2, vec![vec![p(0), p(1)], vec![p(2), p(3)], vec![p(4), p(5)]]).unwrap();
        let b = NormalFormula::cnf(6, 2, vec![vec![p(1), p(4)], vec![p(0), p(5)]]).unwrap();
        let seq = FormulaSequence::new(vec![a, b]).unwrap();
        let params = StageParams { p: Some(0.5), max_retries: Some(3), ..StageParams::default() };
        let x = switch_sequence(&seq, -3.0, 77, &params).unwrap();
        let y = switch_sequence(&seq, -3.0, 77, &params).unwrap();
        assert_eq!(x, y);
        check_equivalence(&seq, &x);
    }

    #[test]
    fn rejects_bad_q() {
        let seq = FormulaSequence::new(vec![NormalFormula::true_cnf(2, 1)]).unwrap();
        assert!(matches!(switch_sequence(&seq, -0.5, 0, &StageParams::default()), Err(Error::InvalidProbability(_))));
    }
}
