//! Switch a sequence of 2-CNFs into 2-DNFs region by region.

use ac0_sat::circuit::Literal;
use ac0_sat::formula::{FormulaSequence, NormalFormula};
use ac0_sat::restriction::verify_partition_structure;
use ac0_sat::switching::{switch_sequence, StageParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Literal::pos;
    let a = NormalFormula::cnf(6, 2, vec![vec![p(0), p(1)], vec![p(2), p(3)], vec![p(4), p(5)]])?;
    let b = NormalFormula::cnf(6, 2, vec![vec![p(1), Literal::neg(4)], vec![p(0), p(5)]])?;
    let seq = FormulaSequence::new(vec![a, b])?;

    let params = StageParams { p: Some(0.5), max_retries: Some(4), ..StageParams::default() };
    let part = switch_sequence(&seq, -4.0, 7, &params)?;
    println!("{} regions, {} targeted", part.len(), part.count_targeted());
    for e in part.iter().take(6) {
        let psis: Vec<String> = e
            .payload
            .formulas()
            .iter()
            .map(|f| match f.constant_value() {
                Some(b) => u8::from(b).to_string(),
                None => format!("{} {f}", f.kind()),
            })
            .collect();
        println!("{} guard[{}] -> {}", e.region.rho(), e.region.guard(), psis.join(" ; "));
    }
    assert!(verify_partition_structure(&part, 20)?.is_partition);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
