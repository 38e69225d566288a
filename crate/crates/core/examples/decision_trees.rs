//! Canonical decision trees of a CNF and the split of their paths at depth k.

use ac0_sat::circuit::Literal;
use ac0_sat::dtree::{canonical_tree, long_paths, short_formula, short_guard};
use ac0_sat::formula::NormalFormula;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // (x0 | x1) & (x2 | -x3)
    let phi = NormalFormula::cnf(
        4,
        2,
        vec![vec![Literal::pos(0), Literal::pos(1)], vec![Literal::pos(2), Literal::neg(3)]],
    )?;
    let tree = canonical_tree(&phi)?;
    println!("height {} with {} nodes", tree.height(), tree.node_count());
    print!("{}", tree.dump());

    // the tree computes phi
    for idx in 0..16u64 {
        let x: Vec<bool> = (0..4).map(|v| idx >> v & 1 == 1).collect();
        assert_eq!(tree.evaluate(&x)[0], phi.evaluate(&x));
    }

    let k = 2;
    println!("guard  {}", short_guard(&phi, k)?);
    println!("short  {} ({})", short_formula(&phi, k)?, short_formula(&phi, k)?.kind());
    for p in long_paths(&phi, k)? {
        let steps: Vec<String> = p.steps.iter().map(|s| format!("x{}={}", s.var, u8::from(s.value))).collect();
        println!("long   {} -> {}", steps.join(" "), u8::from(p.leaf[0]));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
