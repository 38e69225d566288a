//! Generate the grouped-parity benchmark and a random layered circuit.

use ac0_sat::circuit::{gen_parity_benchmark, gen_random};
use ac0_sat::oracle::brute_count;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (n, group, d) in [(8, 4, 2), (12, 4, 3), (16, 4, 3)] {
        let c = gen_parity_benchmark(n, group, d)?;
        let models = brute_count(&c)?;
        let expected = 1u128 << ((group - 1) * (n / group));
        println!("parity n={n} group={group} d={d}: m={} models={models}", c.max_layer_size());
        assert_eq!(models, expected);
    }

    let c = gen_random(10, 8, 4, Some(3), 42)?;
    let shape = c.validate();
    println!("random: d={} layer sizes={:?} k-bounded={}", c.depth(), shape.gates_per_layer, shape.is_k_bounded);
    assert_eq!(c, gen_random(10, 8, 4, Some(3), 42)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
