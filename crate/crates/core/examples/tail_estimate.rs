//! Empirical tail of the longest jointly contributing path after a random
//! restriction, next to the analytic tail.

use ac0_sat::oracle::{random_cnf_sequence, tail_estimate};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seq = random_cnf_sequence(416, 3, 2, 4, 1)?;
    let rep = tail_estimate(&seq, 1.0 / 52.0, &[0, 1, 2, 3, 4, 5, 6], 50_000, 3, 1 << 20)?;
    println!("n={} m={} k={} unset={} samples={}", rep.n, rep.m, rep.k, rep.unset, rep.samples);
    println!("s  rate        se          (13pk)^s");
    for r in &rep.rows {
        println!("{}  {:.4e}  {:.2e}  {:.4e}", r.s, r.empirical, r.std_error, r.single_bound);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
