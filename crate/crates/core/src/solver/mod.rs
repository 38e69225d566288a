//! The composed pipeline: a partition of the whole cube into sub-cubes on
//! which the circuit is constant, and SAT, counting and enumeration on top
//! of it.

mod bounds;

use std::ops::ControlFlow;

use rayon::prelude::*;

pub use bounds::{
    bounded_fanin_pipeline_bound_log2, choose_k, depth_two_size_bound_log2, fanin_region_bound_log2,
    pipeline_size_bound_log2, repeated_reduction_bound_log2, savings_mu, switching_size_bound_log2,
};

use crate::circuit::Circuit;
use crate::depth2::{default_depth2_p, depth_two_within};
use crate::dtree::DEFAULT_MAX_TREE_NODES;
use crate::error::{Error, Result};
use crate::oracle::truth_table;
use crate::reduce::{bottom_fanin_reduce, depth_reduce};
use crate::restriction::{Entry, Partition, Provenance, Region, Restriction};
use crate::rng::derive_seed;
use crate::switching::{default_switch_p, StageParams};

/// Largest n for which the full-enumeration fallback is attempted.
pub const FALLBACK_MAX_N: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    /// Bottom fan-in bound; `None` uses [`choose_k`].
    pub k: Option<usize>,
    /// lg of the failure probability; `None` means −n.
    pub log2_q: Option<f64>,
    pub p_switch: Option<f64>,
    pub p_depth2: Option<f64>,
    pub seed: u64,
    /// Circuits with n at most this are enumerated point by point.
    pub brute_force_cutoff: usize,
    pub max_tree_nodes: usize,
    /// Caps the independent runs of each randomized stage.
    pub max_retries: Option<usize>,
    /// Allows the point-by-point fallback for very large m.
    pub allow_fallback: bool,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            k: None,
            log2_q: None,
            p_switch: None,
            p_depth2: None,
            seed: 0,
            brute_force_cutoff: 0,
            max_tree_nodes: DEFAULT_MAX_TREE_NODES,
            max_retries: None,
            allow_fallback: true,
        }
    }
}

impl SolveParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Sizes and bounds of one pipeline run. Every `*_log2` field is a base-2
/// logarithm of a region count.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub k: usize,
    /// m/n
    pub density: f64,
    pub log2_q: f64,
    pub p_switch: f64,
    pub p_depth2: f64,
    pub seed: u64,
    pub fallback: bool,
    /// The fallback triggers when lg m ≥ n^(1/(d−1)).
    pub fallback_threshold_log2: f64,
    pub brute_force_cutoff: usize,
    pub max_tree_nodes: usize,
    pub max_retries: Option<usize>,
    pub allow_fallback: bool,
    pub max_false_branches: usize,
    pub max_targeted: usize,
    pub fanin_bound_log2: f64,
    pub switching_bound_log2: f64,
    pub repeated_reduction_bound_log2: f64,
    pub depth_two_bound_log2: f64,
    pub bounded_fanin_bound_log2: f64,
    pub pipeline_bound_log2: f64,
    pub mu: f64,
    pub fanin_regions: usize,
    pub reduced_regions: usize,
    pub regions: usize,
    pub one_regions: usize,
}

impl BoundReport {
    pub fn measured_log2(&self) -> f64 {
        (self.regions.max(1) as f64).log2()
    }

    /// 1 − lg|P|/n.
    pub fn measured_savings(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        1.0 - self.measured_log2() / self.n as f64
    }

    /// Whether |P| respects the pipeline bound; `None` when the bound is
    /// at least 2^n and says nothing.
    pub fn pipeline_bound_holds(&self) -> Option<bool> {
        (self.pipeline_bound_log2 < self.n as f64).then(|| self.measured_log2() <= self.pipeline_bound_log2 + 1e-9)
    }

    /// `(key, value)` lines describing the run. Contains no timing, so equal
    /// inputs give equal manifests.
    pub fn manifest(&self) -> Vec<(&'static str, String)> {
        let f = |x: f64| format!("{x:.6}");
        vec![
            ("n", self.n.to_string()),
            ("m", self.m.to_string()),
            ("d", self.d.to_string()),
            ("k", self.k.to_string()),
            ("density", f(self.density)),
            ("log2_q", f(self.log2_q)),
            ("p_switch", f(self.p_switch)),
            ("p_depth2", f(self.p_depth2)),
            ("seed", self.seed.to_string()),
            ("brute_force_cutoff", self.brute_force_cutoff.to_string()),
            ("max_tree_nodes", self.max_tree_nodes.to_string()),
            ("max_retries", self.max_retries.map_or_else(|| "auto".to_string(), |r| r.to_string())),
            ("allow_fallback", self.allow_fallback.to_string()),
            ("fallback", self.fallback.to_string()),
            ("fallback_threshold_log2", f(self.fallback_threshold_log2)),
            ("max_false_branches", self.max_false_branches.to_string()),
            ("max_targeted", self.max_targeted.to_string()),
            ("fanin_regions", self.fanin_regions.to_string()),
            ("reduced_regions", self.reduced_regions.to_string()),
            ("regions", self.regions.to_string()),
            ("one_regions", self.one_regions.to_string()),
            ("measured_log2", f(self.measured_log2())),
            ("measured_savings", f(self.measured_savings())),
            ("bound_fanin_log2", f(self.fanin_bound_log2)),
            ("bound_switching_log2", f(self.switching_bound_log2)),
            ("bound_repeated_reduction_log2", f(self.repeated_reduction_bound_log2)),
            ("bound_depth_two_log2", f(self.depth_two_bound_log2)),
            ("bound_bounded_fanin_log2", f(self.bounded_fanin_bound_log2)),
            ("bound_pipeline_log2", f(self.pipeline_bound_log2)),
            (
                "bound_pipeline_holds",
                self.pipeline_bound_holds().map_or_else(|| "vacuous".to_string(), |b| b.to_string()),
            ),
            ("mu", format!("{:.6e}", self.mu)),
        ]
    }
}

/// Resolved parameters for one circuit.
struct Plan {
    n: usize,
    m: usize,
    d: usize,
    k: usize,
    log2_q: f64,
    switch: StageParams,
    depth2: StageParams,
    fallback: bool,
    fallback_threshold_log2: f64,
}

fn plan(c: &Circuit, params: &SolveParams) -> Result<Plan> {
    let n = c.n();
    let d = c.depth();
    let m = c.max_layer_size().max(1);
    if params.k == Some(0) {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let k = params.k.unwrap_or_else(|| choose_k(n.max(1), m, d));
    let log2_q = params.log2_q.unwrap_or(-(n.max(1) as f64));
    if log2_q.is_nan() || log2_q > -1.0 {
        return Err(Error::InvalidProbability(log2_q.exp2()));
    }
    let fallback_threshold_log2 = (n as f64).powf(1.0 / (d - 1) as f64);
    let large_m = params.allow_fallback && (m as f64).log2() >= fallback_threshold_log2;
    let fallback = n <= FALLBACK_MAX_N && (large_m || n <= params.brute_force_cutoff);
    let stage = |p| StageParams { p, max_retries: params.max_retries, max_tree_nodes: params.max_tree_nodes };
    Ok(Plan {
        n,
        m,
        d,
        k,
        log2_q,
        switch: stage(params.p_switch),
        depth2: stage(params.p_depth2),
        fallback,
        fallback_threshold_log2,
    })
}

#[derive(Default)]
struct Tally {
    fanin_regions: usize,
    reduced_regions: usize,
    regions: usize,
    one_regions: usize,
    max_false_branches: usize,
    max_targeted: usize,
}

impl Tally {
    fn see(&mut self, e: &Entry<bool>) {
        self.regions += 1;
        self.one_regions += usize::from(e.payload);
        self.max_false_branches = self.max_false_branches.max(e.provenance.false_branches);
        self.max_targeted = self.max_targeted.max(e.provenance.targeted);
    }
}

/// Runs the pipeline and hands every region to `visit` in deterministic
/// order; `Break` stops the run early. Regions are sub-cubes, disjoint,
/// cover {0,1}^n, and `c` equals the payload on each.
///
/// Fan-in regions are processed one at a time; inside one, depth reduction
/// and the depth-two step run in parallel and are visited in order.
pub fn for_each_region(
    c: &Circuit,
    params: &SolveParams,
    mut visit: impl FnMut(&Entry<bool>) -> ControlFlow<()>,
) -> Result<BoundReport> {
    let c = c.lift_to_depth_two();
    let plan = plan(&c, params)?;
    let mut tally = Tally::default();

    if plan.fallback {
        let table = truth_table(&c, FALLBACK_MAX_N)?;
        for (idx, &value) in table.iter().enumerate() {
            let e = Entry {
                region: Region::from_restriction(Restriction::from_index(plan.n, idx as u64)),
                payload: value,
                provenance: Provenance::default(),
            };
            tally.see(&e);
            if visit(&e).is_break() {
                break;
            }
        }
        return Ok(report(&plan, params, &tally));
    }

    let n = plan.n;
    let inner_log2_q = plan.log2_q - n as f64 - 1.0;
    let depth2_log2_q = inner_log2_q - n as f64 - 1.0;
    let fanin = bottom_fanin_reduce(&c, plan.k)?;
    tally.fanin_regions = fanin.len();
    'outer: for (i, fe) in fanin.into_entries().into_iter().enumerate() {
        let i = i as u64;
        let reduced = depth_reduce(
            &fe.payload,
            inner_log2_q,
            derive_seed(derive_seed(params.seed, 1), i),
            &fe.region,
            &plan.switch,
        )?;
        tally.reduced_regions += reduced.len();
        let seed2 = derive_seed(derive_seed(params.seed, 2), i);
        let parts: Vec<Vec<Entry<bool>>> = reduced
            .into_entries()
            .into_par_iter()
            .enumerate()
            .map(|(j, re)| {
                let formula = re.payload.to_normal_formula()?;
                let part = depth_two_within(
                    &formula,
                    re.region.guard(),
                    re.region.rho(),
                    depth2_log2_q,
                    derive_seed(seed2, j as u64),
                    &plan.depth2,
                )?;
                let prov = fe.provenance.merge(re.provenance);
                Ok(part.into_entries().into_iter().map(|e| Entry { provenance: prov.merge(e.provenance), ..e }).collect())
            })
            .collect::<Result<_>>()?;
        for e in parts.iter().flatten() {
            tally.see(e);
            if visit(e).is_break() {
                break 'outer;
            }
        }
    }
    Ok(report(&plan, params, &tally))
}

fn report(plan: &Plan, params: &SolveParams, t: &Tally) -> BoundReport {
    let (n, m, d, k) = (plan.n, plan.m, plan.d, plan.k);
    BoundReport {
        n,
        m,
        d,
        k,
        density: m as f64 / n.max(1) as f64,
        log2_q: plan.log2_q,
        p_switch: plan.switch.p.unwrap_or_else(|| default_switch_p(k)),
        p_depth2: plan.depth2.p.unwrap_or_else(|| default_depth2_p(k)),
        seed: params.seed,
        fallback: plan.fallback,
        fallback_threshold_log2: plan.fallback_threshold_log2,
        brute_force_cutoff: params.brute_force_cutoff,
        max_tree_nodes: params.max_tree_nodes,
        max_retries: params.max_retries,
        allow_fallback: params.allow_fallback,
        max_false_branches: t.max_false_branches,
        max_targeted: t.max_targeted,
        fanin_bound_log2: fanin_region_bound_log2(m, t.max_false_branches),
        switching_bound_log2: switching_size_bound_log2(n, m, k),
        repeated_reduction_bound_log2: repeated_reduction_bound_log2(n, m, d, k),
        depth_two_bound_log2: depth_two_size_bound_log2(n, k),
        bounded_fanin_bound_log2: bounded_fanin_pipeline_bound_log2(n, m, d, k),
        pipeline_bound_log2: pipeline_size_bound_log2(n, m, d, k),
        mu: savings_mu(n, m, d),
        fanin_regions: t.fanin_regions,
        reduced_regions: t.reduced_regions,
        regions: t.regions,
        one_regions: t.one_regions,
    }
}

/// The full constant partition of {0,1}^n.
pub fn partition_circuit(c: &Circuit, params: &SolveParams) -> Result<(Partition<bool>, BoundReport)> {
    let mut entries = Vec::new();
    let report = for_each_region(c, params, |e| {
        entries.push(e.clone());
        ControlFlow::Continue(())
    })?;
    Ok((Partition::from_entries(c.n(), entries), report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// A satisfying assignment, checked against the circuit.
    pub witness: Option<Vec<bool>>,
}

/// Stops at the first 1-region and completes it with zeros.
pub fn decide_sat(c: &Circuit, params: &SolveParams) -> Result<SatResult> {
    let mut hit: Option<Restriction> = None;
    for_each_region(c, params, |e| {
        if e.payload {
            hit = Some(e.region.rho().clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let Some(rho) = hit else {
        return Ok(SatResult { satisfiable: false, witness: None });
    };
    let x = rho.fill(false);
    if !c.evaluate(&x) {
        return Err(Error::Internal(format!("witness from region {rho} does not satisfy the circuit")));
    }
    Ok(SatResult { satisfiable: true, witness: Some(x) })
}

/// Exact number of satisfying assignments.
pub fn count_sat(c: &Circuit, params: &SolveParams) -> Result<u128> {
    if c.n() > 127 {
        return Err(Error::InvalidParameter(format!("model counts for n = {} overflow u128", c.n())));
    }
    let mut total: u128 = 0;
    for_each_region(c, params, |e| {
        if e.payload {
            total += 1u128 << e.region.rho().num_unset();
        }
        ControlFlow::Continue(())
    })?;
    Ok(total)
}

/// Streams the 1-regions; their sub-cubes are disjoint and their union is
/// the solution set.
pub fn enumerate(
    c: &Circuit,
    params: &SolveParams,
    mut visit: impl FnMut(&Restriction) -> ControlFlow<()>,
) -> Result<BoundReport> {
    for_each_region(c, params, |e| if e.payload { visit(e.region.rho()) } else { ControlFlow::Continue(()) })
}
