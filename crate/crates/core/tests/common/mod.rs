//! Independent oracles and corpus builders shared by the integration tests.
//!
//! The evaluators here walk the public structure directly and never call
//! the library's own evaluation code, so they can serve as a second
//! implementation.

#![allow(dead_code)]

use std::io::Write;

use ac0_sat::circuit::{gen_parity_benchmark, gen_random, Circuit, GateKind, Input, Literal};
use ac0_sat::formula::{FormulaKind, NormalFormula};
use ac0_sat::restriction::Restriction;
use ac0_sat::rng::seeded_rng;
use ac0_sat::solver::SolveParams;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Prints one line to the real stdout, past the test harness capture.
pub fn report_line(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

pub fn point(n: usize, index: u64) -> Vec<bool> {
    (0..n).map(|v| index >> v & 1 == 1).collect()
}

fn literal_value(l: Literal, x: &[bool]) -> bool {
    x[l.var] != l.negated
}

fn gate_value(c: &Circuit, layer: usize, id: usize, x: &[bool]) -> bool {
    let g = &c.layers()[layer][id];
    let mut values = g.inputs.iter().map(|input| match *input {
        Input::Gate(j) => gate_value(c, layer + 1, j, x),
        Input::Lit(l) => literal_value(l, x),
        Input::Const(b) => b,
    });
    match g.kind {
        GateKind::And => values.all(|v| v),
        GateKind::Or => values.any(|v| v),
    }
}

/// Top-down recursive evaluation of the output gate.
pub fn eval_recursive(c: &Circuit, x: &[bool]) -> bool {
    gate_value(c, 0, 0, x)
}

/// Clause-by-clause evaluation of a CNF or DNF.
pub fn eval_formula(f: &NormalFormula, x: &[bool]) -> bool {
    match f.kind() {
        FormulaKind::Cnf => f.clauses().iter().all(|c| c.iter().any(|&l| literal_value(l, x))),
        FormulaKind::Dnf => f.clauses().iter().any(|t| t.iter().all(|&l| literal_value(l, x))),
    }
}

pub fn index_consistent(rho: &Restriction, index: u64) -> bool {
    rho.values().iter().enumerate().all(|(v, val)| val.is_none_or(|b| (index >> v & 1 == 1) == b))
}

pub fn random_formula(rng: &mut ChaCha8Rng, kind: FormulaKind, n: usize, width: usize, clauses: usize) -> NormalFormula {
    let cls = (0..clauses)
        .map(|_| {
            let w = rng.random_range(1..=width.min(n));
            sample(rng, n, w).iter().map(|v| Literal::new(v, rng.random())).collect()
        })
        .collect();
    NormalFormula::new(kind, n, width, cls).expect("well-formed random formula")
}

/// Each variable is set with probability `p_set` to a uniform value.
pub fn random_restriction(rng: &mut ChaCha8Rng, n: usize, p_set: f64) -> Restriction {
    let mut r = Restriction::all_star(n);
    for v in 0..n {
        if rng.random_bool(p_set) {
            r.set(v, rng.random());
        }
    }
    r
}

/// Pipeline knobs that leave variables unset at small n, so the randomized
/// stages do real work instead of enumerating points.
pub fn pipeline_params(seed: u64) -> SolveParams {
    SolveParams {
        p_switch: Some(0.4),
        p_depth2: Some(0.5),
        max_retries: Some(2),
        allow_fallback: false,
        ..SolveParams::default()
    }
    .with_seed(seed)
}

/// Even case numbers run the default parameters, odd ones the pipeline
/// overrides.
pub fn mixed_params(case: u64) -> SolveParams {
    if case.is_multiple_of(2) {
        SolveParams::default().with_seed(case)
    } else {
        pipeline_params(case)
    }
}

/// One seeded random circuit with n ≤ `max_n`, d ∈ {2, 3, 4}, m ≤ 3n, and
/// a bottom fan-in bound on every third case.
pub fn random_case(case: u64, min_n: usize, max_n: usize) -> Circuit {
    let mut rng = seeded_rng(case ^ 0x5eed_0000);
    let n = rng.random_range(min_n..=max_n);
    let d = 2 + (case % 3) as usize;
    let m = rng.random_range(1..=3 * n);
    let k_bottom = (case % 3 == 1).then(|| rng.random_range(1..=3.min(n)));
    gen_random(n, m, d, k_bottom, case).expect("valid generator parameters")
}

/// Single-group parity circuits on `n` inputs at each depth, plus grouped
/// ones, all with n ≤ `max_n`.
pub fn parity_cases(max_n: usize) -> Vec<Circuit> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for d in 2..=4 {
            out.push(gen_parity_benchmark(n, n, d).expect("parity circuit"));
            if n % 2 == 0 && n >= 4 {
                out.push(gen_parity_benchmark(n, 2, d).expect("grouped parity circuit"));
            }
        }
    }
    out
}
