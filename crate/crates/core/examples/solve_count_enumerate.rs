//! Decide, count and enumerate the satisfying assignments of a circuit.

use std::ops::ControlFlow;

use ac0_sat::circuit::gen_random;
use ac0_sat::oracle::{brute_count, brute_sat};
use ac0_sat::solver::{count_sat, decide_sat, enumerate, SolveParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = gen_random(12, 10, 3, None, 7)?;
    // desk-scale overrides so the randomized stages actually leave variables free
    let params = SolveParams {
        p_switch: Some(0.4),
        p_depth2: Some(0.5),
        max_retries: Some(2),
        allow_fallback: false,
        seed: 1,
        ..SolveParams::default()
    };

    let sat = decide_sat(&c, &params)?;
    println!("satisfiable: {}", sat.satisfiable);
    if let Some(x) = &sat.witness {
        assert!(c.evaluate(x));
    }
    assert_eq!(sat.satisfiable, brute_sat(&c)?);

    let count = count_sat(&c, &params)?;
    println!("models: {count}");
    assert_eq!(count, brute_count(&c)?);

    let mut cubes = 0;
    let mut points = 0u128;
    enumerate(&c, &params, |rho| {
        cubes += 1;
        points += 1 << rho.num_unset();
        if cubes <= 5 {
            println!("  {rho}");
        }
        ControlFlow::Continue(())
    })?;
    println!("{cubes} sub-cubes with {points} points");
    assert_eq!(points, count);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
