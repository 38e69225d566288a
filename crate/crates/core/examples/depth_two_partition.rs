//! Cut the satisfying set of a guard into sub-cubes on which a k-CNF is constant.

use ac0_sat::circuit::Literal;
use ac0_sat::depth2::depth_two_partition;
use ac0_sat::formula::NormalFormula;
use ac0_sat::switching::StageParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = NormalFormula::cnf(
        5,
        2,
        vec![vec![Literal::pos(0), Literal::neg(1)], vec![Literal::pos(2), Literal::pos(3)], vec![Literal::neg(4)]],
    )?;
    let guard = NormalFormula::cnf(5, 2, vec![vec![Literal::pos(1), Literal::pos(4)]])?;
    let params = StageParams { p: Some(0.4), max_retries: Some(3), ..StageParams::default() };
    let part = depth_two_partition(&c, &guard, -5.0, 3, &params)?;

    let mut covered = 0u64;
    for e in part.iter() {
        println!("{} -> {}", e.region.rho(), u8::from(e.payload));
        covered += 1 << e.region.rho().num_unset();
    }
    let in_guard = (0..32u64).filter(|&i| i >> 1 & 1 == 1 || i >> 4 & 1 == 1).count() as u64;
    println!("{covered} points covered, guard has {in_guard}");
    assert_eq!(covered, in_guard);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
