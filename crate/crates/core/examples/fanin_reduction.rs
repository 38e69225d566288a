//! Split wide bottom gates until every bottom gate has fan-in at most k.

use ac0_sat::circuit::parse_circuit;
use ac0_sat::reduce::bottom_fanin_reduce;
use ac0_sat::restriction::coverage_sweep;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = parse_circuit("p ac0 5 2\ng 1 0 AND @0\ng 2 0 OR x0 x1 x2 x3 x4\n")?;
    let part = bottom_fanin_reduce(&c, 2)?;
    for e in part.iter() {
        println!(
            "{} guard[{}] f={} bottom fan-in {}",
            e.region.rho(),
            e.region.guard(),
            e.provenance.false_branches,
            e.payload.bottom_fanin_max()
        );
    }
    let mut wrong = 0;
    let rep = coverage_sweep(&part, 20, |e, idx| wrong += u32::from(e.payload.evaluate_index(idx) != c.evaluate_index(idx)))?;
    assert!(rep.is_partition && wrong == 0);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
