//! Encode a restriction together with a long path of the joint decision
//! tree, then recover both from the encoding.

use ac0_sat::dtree::canonical_tree_under;
use ac0_sat::oracle::{decode_bad_path, encode_bad_path, random_cnf_sequence};
use ac0_sat::restriction::Restriction;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let seq = random_cnf_sequence(12, 3, 2, 5, 8)?;
    // one fixed variable cannot exhaust a 2-clause, so formula 0 stays open
    let mut rho = Restriction::all_star(12);
    rho.set(0, true);
    let tree = canonical_tree_under(seq.restrict(&rho).formulas(), &rho, 1 << 16)?;
    let mut round_trips = 0;
    for path in tree.paths() {
        let steps: Vec<(usize, bool)> = path.steps.iter().map(|s| (s.var, s.value)).collect();
        // paths that skip a formula are outside the encoder's domain
        let Ok(enc) = encode_bad_path(&rho, &steps, &seq) else { continue };
        let (back, decoded) = decode_bad_path(&enc, &seq)?;
        assert_eq!(back, rho);
        assert_eq!(decoded.iter().map(|s| (s.var, s.value)).collect::<Vec<_>>(), steps);
        if round_trips == 0 {
            println!("rho' {} index {:?} last {:?}", enc.rho_prime, enc.index, enc.last);
        }
        round_trips += 1;
    }
    println!("{round_trips} paths encoded and decoded exactly");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
