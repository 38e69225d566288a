//! Reduce a depth-4 circuit to depth-2 payloads region by region.

use ac0_sat::circuit::gen_random;
use ac0_sat::reduce::depth_reduce;
use ac0_sat::restriction::{coverage_sweep, Region};
use ac0_sat::switching::StageParams;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = gen_random(9, 6, 4, Some(2), 5)?;
    let params = StageParams { p: Some(0.45), max_retries: Some(2), ..StageParams::default() };
    let part = depth_reduce(&c, -9.0, 1, &Region::universal(c.n()), &params)?;
    let rounds = part.iter().map(|e| e.provenance.switch_rounds).max().unwrap_or(0);
    println!("{} regions, {} switching rounds, all depth 2: {}", part.len(), rounds, part.iter().all(|e| e.payload.depth() == 2));

    let mut wrong = 0;
    let rep = coverage_sweep(&part, 20, |e, idx| wrong += u32::from(e.payload.evaluate_index(idx) != c.evaluate_index(idx)))?;
    assert!(rep.is_partition && wrong == 0);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
