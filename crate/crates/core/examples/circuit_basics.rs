//! Parse a layered circuit, evaluate it, restrict it and print its shape.

use ac0_sat::circuit::{parse_circuit, serialize_circuit};
use ac0_sat::restriction::Restriction;

const DOC: &str = "\
c (x0 | x1) & (-x0 | x2)
p ac0 3 2
g 1 0 AND @0 @1
g 2 0 OR x0 x1
g 2 1 OR -x0 x2
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = parse_circuit(DOC)?;
    let shape = c.validate();
    println!("n={} d={} bottom fan-in={}", c.n(), c.depth(), shape.bottom_fanin_max);

    for idx in 0..1u64 << c.n() {
        let x: Vec<bool> = (0..c.n()).map(|v| idx >> v & 1 == 1).collect();
        println!("{x:?} -> {}", c.evaluate(&x));
    }

    // x0 = 1 leaves x2
    let rho: Restriction = "1**".parse()?;
    let r = c.restrict(&rho);
    print!("{}", serialize_circuit(&r));
    assert!(r.evaluate(&[true, false, true]));
    assert!(!r.evaluate(&[true, true, false]));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
