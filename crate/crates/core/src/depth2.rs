//! Constant-valued sub-cube partition of a guarded k-CNF or k-DNF.

use crate::dtree::canonical_tree_under;
use crate::error::{Error, Result};
use crate::formula::NormalFormula;
use crate::restriction::{Entry, Partition, Provenance, Region, Restriction};
use crate::rng::derive_seed;
use crate::switching::{branch_variables, check_log2_q, check_p, for_each_branch, run_count, unset_budget, StageParams};

/// Default unset fraction for the depth-two step: 1/(30k).
pub fn default_depth2_p(k: usize) -> f64 {
    1.0 / (30.0 * k.max(1) as f64)
}

/// Partition of `{x : guard(x)}` into sub-cubes on which `c` is constant.
pub fn depth_two_partition(
    c: &NormalFormula,
    guard: &NormalFormula,
    log2_q: f64,
    seed: u64,
    params: &StageParams,
) -> Result<Partition<bool>> {
    depth_two_within(c, guard, &Restriction::all_star(c.n()), log2_q, seed, params)
}

/// As [`depth_two_partition`], restricted to the sub-cube of `base`. Each
/// output is `(ρ0∘ρ′, b)` for a path ρ′ of the joint tree of `(c, guard)|ρ0`
/// ending at a leaf `(b, 1)`; leaves `(·, 0)` lie outside the guard and are
/// dropped.
pub fn depth_two_within(
    c: &NormalFormula,
    guard: &NormalFormula,
    base: &Restriction,
    log2_q: f64,
    seed: u64,
    params: &StageParams,
) -> Result<Partition<bool>> {
    check_log2_q(log2_q)?;
    let n = base.n();
    for f in [c, guard] {
        if f.n() != n {
            return Err(Error::LengthMismatch { expected: n, actual: f.n() });
        }
    }
    let k = c.width().max(guard.width()).max(1);
    let p = params.p.unwrap_or_else(|| default_depth2_p(k));
    check_p(p)?;
    let pair = [c.restrict(base), guard.restrict(base)];
    let free = base.unset_vars();
    let u = unset_budget(p, free.len());
    let runs = run_count(log2_q, free.len(), u, free.len(), params.max_retries);

    let mut best: Option<Vec<Entry<bool>>> = None;
    for run in 0..runs {
        let vars = branch_variables(&free, u, derive_seed(seed, run as u64));
        let entries = for_each_branch(base, &vars, |rho0| {
            let tree = canonical_tree_under(&pair, &rho0, params.max_tree_nodes)?;
            let mut out = Vec::new();
            for path in tree.paths() {
                if !path.leaf[1] {
                    continue;
                }
                let mut rho = rho0.clone();
                for s in &path.steps {
                    rho.set(s.var, s.value);
                }
                out.push(Entry { region: Region::from_restriction(rho), payload: path.leaf[0], provenance: Provenance::default() });
            }
            Ok(out)
        })?;
        if best.as_ref().is_none_or(|b| entries.len() < b.len()) {
            best = Some(entries);
        }
    }
    Ok(Partition::from_entries(n, best.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Literal;
    use crate::restriction::verify_partition_structure;

    #[test]
    fn constant_formula_tiles_cube() {
        let c = NormalFormula::true_cnf(3, 1);
        let g = NormalFormula::true_cnf(3, 1);
        let part = depth_two_partition(&c, &g, -1.0, 0, &StageParams::default()).unwrap();
        assert!(verify_partition_structure(&part, 10).unwrap().is_partition);
        assert!(part.iter().all(|e| e.payload));
    }

    #[test]
    fn guard_excludes_its_complement() {
        let c = NormalFormula::cnf(4, 1, vec![vec![Literal::pos(0)]]).unwrap();
        let g = NormalFormula::cnf(4, 1, vec![vec![Literal::neg(0)]]).unwrap();
        let params = StageParams { p: Some(0.5), max_retries: Some(2), ..StageParams::default() };
        let part = depth_two_partition(&c, &g, -2.0, 9, &params).unwrap();
        let mut covered = [0u32; 16];
        for e in part.iter() {
            assert!(e.region.is_subcube());
            assert!(!e.payload);
            e.region.rho().for_each_point(|i| covered[i as usize] += 1);
        }
        for (i, &cnt) in covered.iter().enumerate() {
            assert_eq!(cnt, u32::from(i & 1 == 0), "point {i}");
        }
    }
}
