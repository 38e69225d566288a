//! Region-count bounds, all as base-2 logarithms so they stay finite at
//! any n.

/// Smallest bottom fan-in bound for an (n, m, d)-circuit:
/// max(1, ⌈lg max(m/n, 2)⌉, ⌈d·lg max(d, 2)⌉).
pub fn choose_k(n: usize, m: usize, d: usize) -> usize {
    let ratio = (m as f64 / n.max(1) as f64).max(2.0);
    let d_f = d as f64;
    let by_density = ratio.log2().ceil() as usize;
    let by_depth = (d_f * d_f.max(2.0).log2()).ceil() as usize;
    1.max(by_density).max(by_depth)
}

/// lg C(m+f, f): regions with f false branches after fan-in reduction.
pub fn fanin_region_bound_log2(m: usize, f: usize) -> f64 {
    (1..=f).map(|i| ((m + i) as f64 / i as f64).log2()).fold(0.0, |a, b| a + b)
}

fn third_pow(k: usize) -> f64 {
    3f64.powi(-(k as i32))
}

/// One depth reduction: lg(2n/(100k)) + n − n/(100k) + 3^−k·m.
pub fn switching_size_bound_log2(n: usize, m: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    (2.0 * n / (100.0 * k)).log2() + n - n / (100.0 * k) + third_pow(k as usize) * m as f64
}

/// d − 2 depth reductions:
/// (d−2)·lg 2n − ((d−1)(d−2)/2)·lg 100k + n − n/(100k)^(d−2) + (d−2)·3^−k·m.
pub fn repeated_reduction_bound_log2(n: usize, m: usize, d: usize, k: usize) -> f64 {
    let r = d.saturating_sub(2) as f64;
    let (nf, kf) = (n as f64, k as f64);
    r * (2.0 * nf).log2() - (r + 1.0) * r / 2.0 * (100.0 * kf).log2() + nf - nf / (100.0 * kf).powf(r)
        + r * third_pow(k) * m as f64
}

/// Constant partition of a guarded k-CNF: lg 50 + n(1 − 1/(30k)).
pub fn depth_two_size_bound_log2(n: usize, k: usize) -> f64 {
    50f64.log2() + n as f64 * (1.0 - 1.0 / (30.0 * k as f64))
}

/// Whole pipeline for bottom fan-in ≤ k:
/// lg 50 + (d−2)·lg 2n − ((d−1)(d−2)/2)·lg 100k + n − 3n/(100k)^(d−1) + (d−2)·3^−k·m.
pub fn bounded_fanin_pipeline_bound_log2(n: usize, m: usize, d: usize, k: usize) -> f64 {
    let r = d.saturating_sub(2) as f64;
    let (nf, kf) = (n as f64, k as f64);
    50f64.log2() + r * (2.0 * nf).log2() - (r + 1.0) * r / 2.0 * (100.0 * kf).log2() + nf
        - 3.0 * nf / (100.0 * kf).powf(r + 1.0)
        + r * third_pow(k) * m as f64
}

/// Whole pipeline with the fan-in reduction in front: the bounded bound
/// plus 4·2^−k·max(m, n/k).
pub fn pipeline_size_bound_log2(n: usize, m: usize, d: usize, k: usize) -> f64 {
    let kf = k as f64;
    bounded_fanin_pipeline_bound_log2(n, m, d, k) + 4.0 * (-kf).exp2() * (m as f64).max(n as f64 / kf)
}

/// Savings μ = 1/(max(lg c, 1) + d·lg d)^(d−1) with c = m/n.
pub fn savings_mu(n: usize, m: usize, d: usize) -> f64 {
    let c = m as f64 / n.max(1) as f64;
    let d_f = d as f64;
    let base = c.log2().max(1.0) + d_f * d_f.log2();
    1.0 / base.powi(d as i32 - 1)
}
