//! Circuit generators: seeded random layered circuits and the grouped-parity
//! benchmark family.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng;

use super::{Circuit, Gate, GateKind, Input, Literal};
use crate::error::{Error, Result};
use crate::rng::seeded_rng;

/// Gate budget for [`gen_parity_benchmark`].
pub const MAX_PARITY_GATES: usize = 1 << 20;

/// Random layered circuit with at most `m` gates per layer.
///
/// Bottom gates read distinct variables; their fan-in is at most `k_bottom`
/// when given (and the bound is declared on the circuit), otherwise at most
/// `max(3, n/2)`. Every gate is referenced by some gate one layer up, so the
/// generated shape survives normalization unless gates coincide.
pub fn gen_random(n: usize, m: usize, d: usize, k_bottom: Option<usize>, seed: u64) -> Result<Circuit> {
    if n == 0 || m == 0 || d == 0 {
        return Err(Error::InvalidParameter("gen_random needs n, m, d >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let top = if rng.random_bool(0.5) { GateKind::And } else { GateKind::Or };
    let kind_at = |i: usize| if i.is_multiple_of(2) { top } else { top.dual() };
    let max_fan = k_bottom.unwrap_or((n / 2).max(3)).clamp(1, n);

    let sizes: Vec<usize> = (0..d).map(|i| if i == 0 { 1 } else { rng.random_range(m.div_ceil(2)..=m) }).collect();
    let mut layers: Vec<Vec<Gate>> = vec![Vec::new(); d];
    for i in (0..d).rev() {
        let kind = kind_at(i);
        let mut layer = Vec::with_capacity(sizes[i]);
        for _ in 0..sizes[i] {
            let inputs: Vec<Input> = if i == d - 1 {
                let fan = rng.random_range(1..=max_fan);
                let mut vars = sample(&mut rng, n, fan).into_vec();
                vars.sort_unstable();
                vars.into_iter().map(|v| Input::Lit(Literal::new(v, rng.random_bool(0.5)))).collect()
            } else {
                let below = sizes[i + 1];
                let fan = rng.random_range(1..=below.min(4));
                let mut idx = sample(&mut rng, below, fan).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(Input::Gate).collect()
            };
            layer.push(Gate::new(kind, inputs));
        }
        if i + 1 < d {
            let mut used = vec![false; sizes[i + 1]];
            for g in &layer {
                for inp in &g.inputs {
                    if let Input::Gate(j) = inp {
                        used[*j] = true;
                    }
                }
            }
            for (j, _) in used.iter().enumerate().filter(|(_, u)| !**u) {
                let parent = rng.random_range(0..layer.len());
                layer[parent].inputs.push(Input::Gate(j));
            }
        }
        layers[i] = layer;
    }
    Circuit::from_layers(n, layers, k_bottom)
}

#[derive(Clone)]
enum Node {
    Gate(GateKind, Vec<Node>),
    Lit(Literal),
}

fn splice(node: Node) -> Vec<Node> {
    match node {
        Node::Gate(_, children) => children,
        lit => vec![lit],
    }
}

struct Budget(usize);

impl Budget {
    fn spend(&mut self, gates: usize) -> Result<()> {
        if gates > self.0 {
            return Err(Error::InvalidParameter(format!(
                "parity subcircuit exceeds the gate budget of {MAX_PARITY_GATES}"
            )));
        }
        self.0 -= gates;
        Ok(())
    }
}

/// Depth-`depth` circuit with output kind `out` that is true exactly when
/// the parity of `vars` equals `odd`.
fn parity_node(vars: &[usize], depth: usize, out: GateKind, odd: bool, budget: &mut Budget) -> Result<Node> {
    let width = vars.len();
    if depth <= 2 {
        if width >= 24 {
            return Err(Error::InvalidParameter(format!("depth-2 parity block on {width} inputs is too large")));
        }
        budget.spend(1 << width)?;
        let mut children = Vec::new();
        for a in 0u64..1 << width {
            let parity_is_odd = a.count_ones() % 2 == 1;
            let literal_for = |j: usize| {
                let bit = a >> j & 1 == 1;
                match out {
                    // clause excluding assignment `a`
                    GateKind::And => Literal::new(vars[j], bit),
                    // term selecting assignment `a`
                    GateKind::Or => Literal::new(vars[j], !bit),
                }
            };
            let keep = match out {
                GateKind::And => parity_is_odd != odd,
                GateKind::Or => parity_is_odd == odd,
            };
            if keep {
                children.push(Node::Gate(out.dual(), (0..width).map(|j| Node::Lit(literal_for(j))).collect()));
            }
        }
        return Ok(Node::Gate(out, children));
    }

    let blocks = ((width as f64).powf(1.0 / (depth - 1) as f64).ceil() as usize).clamp(1, width);
    let chunks: Vec<&[usize]> = {
        let base = width / blocks;
        let extra = width % blocks;
        let mut out = Vec::with_capacity(blocks);
        let mut start = 0;
        for j in 0..blocks {
            let len = base + usize::from(j < extra);
            out.push(&vars[start..start + len]);
            start += len;
        }
        out
    };
    // Sub-parities for both polarities, computed once per block.
    let mut subs: Vec<[Node; 2]> = Vec::with_capacity(blocks);
    for chunk in &chunks {
        let even = parity_node(chunk, depth - 1, out.dual(), false, budget)?;
        let odd_node = parity_node(chunk, depth - 1, out.dual(), true, budget)?;
        subs.push([even, odd_node]);
    }
    budget.spend(1 << (blocks - 1))?;
    let mut children = Vec::new();
    for a in 0u64..1 << blocks {
        let parity_is_odd = a.count_ones() % 2 == 1;
        // AND: clause saying some block parity differs from `a`.
        // OR: term saying every block parity equals `a`.
        let (keep, flip) = match out {
            GateKind::And => (parity_is_odd != odd, true),
            GateKind::Or => (parity_is_odd == odd, false),
        };
        if !keep {
            continue;
        }
        let mut inner = Vec::new();
        for (j, pair) in subs.iter().enumerate() {
            let bit = a >> j & 1 == 1;
            inner.extend(splice(pair[usize::from(bit != flip)].clone()));
        }
        children.push(Node::Gate(out.dual(), inner));
    }
    Ok(Node::Gate(out, children))
}

fn place(node: &Node, level: usize, layers: &mut [Vec<Gate>], index: &mut [HashMap<Gate, usize>]) -> Input {
    match node {
        Node::Lit(l) => Input::Lit(*l),
        Node::Gate(kind, children) => {
            let inputs = children.iter().map(|c| place(c, level + 1, layers, index)).collect();
            let gate = Gate::new(*kind, inputs);
            let layer = &mut layers[level];
            let id = *index[level].entry(gate.clone()).or_insert_with(|| {
                layer.push(gate);
                layer.len() - 1
            });
            Input::Gate(id)
        }
    }
}

/// AND of per-group depth-`d` parity circuits (groups of `group_size`
/// consecutive variables, each with an AND output). True exactly when every
/// group has odd parity, so it has `(2^(group_size-1))^(n/group_size)` models.
pub fn gen_parity_benchmark(n: usize, group_size: usize, d: usize) -> Result<Circuit> {
    if group_size == 0 || n == 0 || !n.is_multiple_of(group_size) {
        return Err(Error::InvalidParameter(format!("n={n} is not divisible by group size {group_size}")));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("parity benchmark needs depth >= 2".into()));
    }
    let mut budget = Budget(MAX_PARITY_GATES);
    let vars: Vec<usize> = (0..n).collect();
    let mut top_children = Vec::new();
    for group in vars.chunks(group_size) {
        top_children.extend(splice(parity_node(group, d, GateKind::And, true, &mut budget)?));
    }
    let root = Node::Gate(GateKind::And, top_children);
    let mut layers = vec![Vec::new(); d];
    let mut index = vec![HashMap::new(); d];
    place(&root, 0, &mut layers, &mut index);
    Circuit::from_layers(n, layers, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(c: &Circuit) -> u64 {
        (0..1u64 << c.n()).filter(|&i| c.evaluate_index(i)).count() as u64
    }

    fn group_parities_odd(n: usize, l: usize, idx: u64) -> bool {
        (0..n / l).all(|g| ((idx >> (g * l)) & ((1 << l) - 1)).count_ones() % 2 == 1)
    }

    #[test]
    fn two_groups_of_two() {
        let c = gen_parity_benchmark(4, 2, 2).unwrap();
        for idx in 0..16u64 {
            let x0 = idx & 1 == 1;
            let x1 = idx >> 1 & 1 == 1;
            let x2 = idx >> 2 & 1 == 1;
            let x3 = idx >> 3 & 1 == 1;
            assert_eq!(c.evaluate_index(idx), (x0 ^ x1) && (x2 ^ x3));
        }
        assert_eq!(brute_count(&c), 4);
    }

    #[test]
    fn single_group_is_parity() {
        for n in 1..=12 {
            for d in 2..=4 {
                let c = gen_parity_benchmark(n, n, d).unwrap();
                assert_eq!(c.depth(), d);
                for idx in 0..1u64 << n {
                    assert_eq!(c.evaluate_index(idx), idx.count_ones() % 2 == 1, "n={n} d={d} idx={idx}");
                }
            }
        }
    }

    #[test]
    fn grouped_model_count() {
        for &(n, l, d) in &[(8, 4, 2), (8, 2, 3), (12, 3, 3), (12, 4, 3), (16, 4, 3), (12, 6, 4)] {
            let c = gen_parity_benchmark(n, l, d).unwrap();
            for idx in (0..1u64 << n).step_by(7) {
                assert_eq!(c.evaluate_index(idx), group_parities_odd(n, l, idx));
            }
            assert_eq!(brute_count(&c), (1u64 << (l - 1)).pow((n / l) as u32), "n={n} l={l} d={d}");
        }
    }

    #[test]
    fn flipping_a_bit_of_a_model_falsifies() {
        let c = gen_parity_benchmark(8, 4, 3).unwrap();
        for idx in 0..256u64 {
            if c.evaluate_index(idx) {
                for v in 0..8 {
                    assert!(!c.evaluate_index(idx ^ (1 << v)));
                }
            }
        }
    }

    #[test]
    fn benchmark_size_within_target() {
        let c = gen_parity_benchmark(16, 4, 3).unwrap();
        let rep = c.validate();
        assert_eq!(rep.d, 3);
        assert!(rep.m <= 4 * 16, "m = {}", rep.m);
    }

    #[test]
    fn parity_errors() {
        assert!(gen_parity_benchmark(10, 4, 2).is_err());
        assert!(gen_parity_benchmark(30, 30, 2).is_err());
        assert!(gen_parity_benchmark(4, 2, 1).is_err());
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let a = gen_random(10, 20, 3, None, 99).unwrap();
        let b = gen_random(10, 20, 3, None, 99).unwrap();
        assert_eq!(a, b);
        for seed in 0..1000 {
            let c = gen_random(10, 20, 3, None, seed).unwrap();
            let rep = c.validate();
            assert_eq!(rep.d, 3);
            assert!(rep.gates_per_layer.iter().all(|&g| g <= 20));
        }
    }

    #[test]
    fn random_respects_bottom_bound() {
        for seed in 0..100 {
            let c = gen_random(12, 8, 3, Some(3), seed).unwrap();
            let rep = c.validate();
            assert!(rep.bottom_fanin_max <= 3);
            assert!(rep.is_k_bounded);
        }
    }
}
