//! Parameter choice and region-count bounds next to a measured run.

use ac0_sat::circuit::gen_parity_benchmark;
use ac0_sat::solver::{choose_k, partition_circuit, pipeline_size_bound_log2, savings_mu, SolveParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (n, m, d) in [(100, 100, 2), (10, 640, 2), (1000, 4000, 3), (1 << 20, 1 << 22, 4)] {
        let k = choose_k(n, m, d);
        println!(
            "n={n} m={m} d={d}: k={k} lg bound={:.1} (lg 2^n = {n}) mu={:.3e}",
            pipeline_size_bound_log2(n, m, d, k),
            savings_mu(n, m, d)
        );
    }

    let c = gen_parity_benchmark(12, 4, 3)?;
    let params = SolveParams {
        p_switch: Some(0.4),
        p_depth2: Some(0.5),
        max_retries: Some(2),
        allow_fallback: false,
        ..SolveParams::default()
    };
    let (part, report) = partition_circuit(&c, &params)?;
    println!(
        "parity 12/4/3: {} regions (lg {:.2}), savings {:.3}, bound check {:?}",
        part.len(),
        report.measured_log2(),
        report.measured_savings(),
        report.pipeline_bound_holds()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
