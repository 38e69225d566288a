//! Small hand-traced cases with frozen expected values, plus dual-oracle
//! sweeps over fixed seeds.

mod common;

use ac0_sat::circuit::{gen_parity_benchmark, gen_random, parse_circuit, Literal};
use ac0_sat::dtree::{canonical_tree, long_paths, short_formula, short_guard};
use ac0_sat::formula::{FormulaSequence, NormalFormula};
use ac0_sat::oracle::{decode_bad_path, encode_bad_path, random_cnf_sequence, tail_estimate};
use ac0_sat::reduce::bottom_fanin_reduce;
use ac0_sat::restriction::{verify_partition_structure, Restriction};
use ac0_sat::rng::seeded_rng;
use ac0_sat::switching::{switch_sequence, StageParams};
use common::*;
use rand::Rng;

fn two_pairs() -> NormalFormula {
    NormalFormula::cnf(4, 2, vec![vec![Literal::pos(0), Literal::pos(1)], vec![Literal::pos(2), Literal::pos(3)]]).unwrap()
}

#[test]
fn tree_queries_first_clause_then_restricts_the_second() {
    let phi = NormalFormula::cnf(3, 2, vec![vec![Literal::pos(0), Literal::pos(1)], vec![Literal::neg(0), Literal::pos(2)]])
        .unwrap();
    let tree = canonical_tree(&phi).unwrap();
    let dump = tree.dump();
    let queried: Vec<&str> = dump.lines().take(2).map(str::trim).collect();
    assert_eq!(queried, ["x0 [formula=0 clause=0]", "x1 [formula=0 clause=0]"]);
    // x0=1 leaves (x2) of the second clause on both x1 branches
    assert_eq!(dump.matches("clause=1").count(), 2);
    for idx in 0..8 {
        let x = point(3, idx);
        assert_eq!(tree.evaluate(&x), [eval_formula(&phi, &x)]);
    }
}

#[test]
fn single_clause_tree_has_height_two() {
    let phi = NormalFormula::cnf(2, 2, vec![vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
    assert_eq!(canonical_tree(&phi).unwrap().height(), 2);
}

#[test]
fn two_pair_cnf_splits_at_depth_two() {
    let phi = two_pairs();
    let guard = short_guard(&phi, 2).unwrap();
    // every variable of the first clause is queried, so paths have length 2
    // (x0 = x1 = 0) or 4; the three depth-2 prefixes other than 00 are long
    assert_eq!(guard.to_string(), "( x0 -x1 )( -x0 x1 )( -x0 -x1 )");

    let long = long_paths(&phi, 2).unwrap();
    let shape: Vec<(String, bool)> =
        long.iter().map(|p| (p.to_restriction(4).to_string(), p.leaf[0])).collect();
    let mut expected = Vec::new();
    for prefix in ["01", "10", "11"] {
        for suffix in ["00", "01", "10", "11"] {
            expected.push((format!("{prefix}{suffix}"), suffix != "00"));
        }
    }
    assert_eq!(shape, expected);
    assert!(long.iter().all(|p| p.len() == 4));

    let tree = canonical_tree(&phi).unwrap();
    let short = short_formula(&phi, 2).unwrap();
    for idx in 0..16 {
        let x = point(4, idx);
        let short_path = tree.path_of(&x).len() <= 2;
        assert_eq!(eval_formula(&guard, &x), short_path);
        if short_path {
            assert_eq!(eval_formula(&short, &x), eval_formula(&phi, &x));
        }
    }
}

#[test]
fn switching_with_all_variables_free_targets_long_paths() {
    // k is the sequence width (2); each of the 12 length-4 paths is targeted
    let seq = FormulaSequence::new(vec![two_pairs()]).unwrap();
    let params = StageParams { p: Some(1.0), max_retries: Some(1), ..StageParams::default() };
    let p = switch_sequence(&seq, -4.0, 1, &params).unwrap();
    assert!(verify_partition_structure(&p, 12).unwrap().is_partition);
    assert_eq!(p.iter().filter(|e| e.provenance.targeted > 0).count(), 12);
    for e in p.iter() {
        for idx in (0..16).filter(|&i| e.region.contains_index(i)) {
            let x = point(4, idx);
            assert_eq!(eval_formula(&e.payload.formulas()[0], &x), eval_formula(&seq.formulas()[0], &x));
        }
    }
}

#[test]
fn fanin_reduced_circuits_are_k_bounded() {
    for seed in 0..50 {
        let c = gen_random(8, 12, 3, None, seed).unwrap();
        for e in bottom_fanin_reduce(&c, 2).unwrap().iter() {
            let shape = e.payload.validate();
            assert!(shape.is_k_bounded && shape.bottom_fanin_max <= 2 && shape.k == Some(2), "seed {seed}");
        }
    }
}

#[test]
fn single_clause_bad_path_hand_trace() {
    let phi = NormalFormula::cnf(2, 2, vec![vec![Literal::pos(0), Literal::pos(1)]]).unwrap();
    let seq = FormulaSequence::new(vec![phi]).unwrap();
    let rho = Restriction::all_star(2);
    let enc = encode_bad_path(&rho, &[(0, false), (1, false)], &seq).unwrap();
    assert_eq!(enc.rho_prime.to_string(), "00");
    assert_eq!(enc.index, [1, 2]);
    assert_eq!(enc.last, [0, 2]);
    assert_eq!(enc.bits, [false, false]);
    let (back, steps) = decode_bad_path(&enc, &seq).unwrap();
    assert_eq!(back, rho);
    assert_eq!(steps.iter().map(|s| (s.var, s.value)).collect::<Vec<_>>(), [(0, false), (1, false)]);

    let empty = encode_bad_path(&rho, &[], &seq).unwrap();
    assert!(empty.is_empty() && empty.rho_prime == rho);
    assert_eq!(decode_bad_path(&empty, &seq).unwrap(), (rho, Vec::new()));
}

#[test]
fn tail_at_one_thirteenth_has_bound_k_to_the_s() {
    let seq = random_cnf_sequence(39, 2, 3, 3, 2).unwrap();
    let rep = tail_estimate(&seq, 1.0 / 13.0, &[0, 1, 2, 3], 200, 2, 1 << 20).unwrap();
    assert_eq!(rep.unset, 3);
    for row in &rep.rows {
        assert!((row.single_bound - 3f64.powi(row.s as i32)).abs() < 1e-9);
        assert!(row.empirical <= row.single_bound);
    }
    assert_eq!(rep.rows[0].empirical, 1.0);
}

#[test]
fn parity_benchmark_is_false_on_all_zeros() {
    for (n, l, d) in [(8, 4, 2), (12, 3, 3), (12, 6, 4), (16, 4, 3)] {
        let c = gen_parity_benchmark(n, l, d).unwrap();
        let zeros = vec![false; n];
        // every group has even parity, so no group is odd
        assert!(!c.evaluate(&zeros));
        assert!(!eval_recursive(&c, &zeros));
        let text = ac0_sat::circuit::serialize_circuit(&c);
        let back = parse_circuit(&text).unwrap();
        assert_eq!(back.depth(), d);
        assert_eq!(back, c);
    }
}

#[test]
fn evaluation_agrees_with_recursive_oracle_on_ten_thousand_pairs() {
    let mut rng = seeded_rng(85);
    for i in 0..10_000u64 {
        let n = rng.random_range(1..=16);
        let d = rng.random_range(1..=5);
        let m = rng.random_range(1..=3 * n);
        let c = gen_random(n, m, d, None, i).unwrap();
        let x: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        assert_eq!(c.evaluate(&x), eval_recursive(&c, &x), "pair {i}");
    }
}
