use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::dtree::{canonical_tree_under, DecisionTree};
use crate::error::{Error, Result};
use crate::circuit::Literal;
use crate::formula::{FormulaSequence, NormalFormula};
use crate::restriction::Restriction;
use crate::rng::{derive_seed, seeded_rng};

#[derive(Debug, Clone, PartialEq)]
pub struct TailRow {
    pub s: usize,
    pub hits: u64,
    pub empirical: f64,
    pub std_error: f64,
    /// (13pk)^s
    pub single_bound: f64,
    /// (2^m − 1)(13pk)^s
    pub union_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub p: f64,
    /// ⌊p·n⌋ variables left unset per sample.
    pub unset: usize,
    pub samples: u64,
    /// Samples whose tree exceeded the node cap; excluded from the rates.
    pub discarded: u64,
    pub rows: Vec<TailRow>,
}

/// `m` random k-CNFs on `n` variables with `clauses` clauses each; every
/// clause has `k` distinct variables with independent uniform signs.
pub fn random_cnf_sequence(n: usize, m: usize, k: usize, clauses: usize, seed: u64) -> Result<FormulaSequence> {
    if k == 0 || k > n || m == 0 {
        return Err(Error::InvalidParameter(format!("cannot draw {m} {k}-CNFs on {n} variables")));
    }
    let mut rng = seeded_rng(seed);
    let formulas = (0..m)
        .map(|_| {
            let cls = (0..clauses)
                .map(|_| sample(&mut rng, n, k).iter().map(|v| Literal::new(v, rng.random())).collect())
                .collect();
            NormalFormula::cnf(n, k, cls)
        })
        .collect::<Result<_>>()?;
    FormulaSequence::new(formulas)
}

/// Longest root-to-leaf path of `tree` on which every formula contributes
/// at least one query, or `None` if there is no such path.
pub fn joint_contribution_length(tree: &DecisionTree) -> Option<usize> {
    tree.paths()
        .iter()
        .filter(|p| p.contributions(tree.arity()).iter().all(|&c| c > 0))
        .map(|p| p.len())
        .max()
}

/// Monte Carlo estimate of Pr[some path of the joint tree of `seq|ρ` has
/// length ≥ s with every formula contributing] for ρ leaving a uniform
/// ⌊p·n⌋-set unset and the rest uniform. The event for s = 0 always holds.
pub fn tail_estimate(
    seq: &FormulaSequence,
    p: f64,
    s_values: &[usize],
    samples: u64,
    seed: u64,
    max_tree_nodes: usize,
) -> Result<TailReport> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("unset fraction {p} outside [0, 1]")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let n = seq.n();
    let m = seq.len();
    let k = seq.width();
    let unset = ((p * n as f64).floor() as usize).min(n);

    let outcomes: Vec<Option<Option<usize>>> = (0..samples as usize)
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            let mut rng = seeded_rng(derive_seed(seed, i as u64));
            let free = sample(&mut rng, n, unset);
            let mut keep = vec![false; n];
            for v in free.iter() {
                keep[v] = true;
            }
            let mut rho = Restriction::all_star(n);
            for (v, &kept) in keep.iter().enumerate() {
                if !kept {
                    rho.set(v, rng.random());
                }
            }
            let restricted = seq.restrict(&rho);
            match canonical_tree_under(restricted.formulas(), &rho, max_tree_nodes) {
                Ok(tree) => Ok(Some(joint_contribution_length(&tree))),
                Err(Error::TreeTooLarge { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let discarded = outcomes.iter().filter(|o| o.is_none()).count() as u64;
    let kept = samples - discarded;
    let base = 13.0 * p * k as f64;
    let rows = s_values
        .iter()
        .map(|&s| {
            let hits = outcomes.iter().flatten().filter(|len| s == 0 || len.is_some_and(|l| l >= s)).count() as u64;
            let rate = if kept == 0 { 0.0 } else { hits as f64 / kept as f64 };
            let std_error = if kept == 0 { 0.0 } else { (rate * (1.0 - rate) / kept as f64).sqrt() };
            let single = base.powi(s as i32);
            TailRow {
                s,
                hits,
                empirical: rate,
                std_error,
                single_bound: single,
                union_bound: ((m as f64).exp2() - 1.0) * single,
            }
        })
        .collect();
    Ok(TailReport { n, m, k, p, unset, samples, discarded, rows })
}
