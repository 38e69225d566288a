//! Correlation with parity, computed exhaustively and read off a partition.

use ac0_sat::circuit::{gen_parity_benchmark, gen_random};
use ac0_sat::oracle::{parity_correlation, parity_correlation_from_partition};
use ac0_sat::solver::{partition_circuit, SolveParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let params = SolveParams { p_switch: Some(0.4), p_depth2: Some(0.5), max_retries: Some(2), ..SolveParams::default() };
    let mut circuits = vec![gen_parity_benchmark(6, 3, 2)?, gen_parity_benchmark(6, 6, 3)?];
    // random circuits that ignore some variable are uncorrelated with parity
    circuits.extend((0..3).map(|s| gen_random(6, 6, 3, None, s)).collect::<Result<Vec<_>, _>>()?);
    for (seed, c) in circuits.iter().enumerate() {
        let seed = seed as u64;
        let direct = parity_correlation(c, 20)?;
        let (part, _) = partition_circuit(c, &params.with_seed(seed))?;
        let from_regions = parity_correlation_from_partition(&part)?;
        println!("circuit {seed}: {direct} (from {} regions: {from_regions})", part.len());
        assert_eq!(direct, from_regions);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
