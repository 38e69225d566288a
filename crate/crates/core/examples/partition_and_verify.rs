//! Build the full constant partition, write it with its manifest, read it
//! back and verify it against the circuit.

use ac0_sat::circuit::gen_random;
use ac0_sat::oracle::verify_partition;
use ac0_sat::partition_format::{parse_partition, write_manifest, write_partition};
use ac0_sat::solver::{partition_circuit, SolveParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = gen_random(10, 8, 4, None, 21)?;
    let params = SolveParams {
        p_switch: Some(0.4),
        p_depth2: Some(0.5),
        max_retries: Some(2),
        allow_fallback: false,
        ..SolveParams::default()
    };
    let (part, report) = partition_circuit(&c, &params)?;
    let text = write_partition(&part);
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    print!("{}", write_manifest(&report.manifest()));

    let back = parse_partition(&text)?;
    let rep = verify_partition(&c, &back, 20)?;
    println!("verified: {}", rep.passed());
    assert!(rep.passed());
    assert!(report.regions <= 1 << c.n());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
