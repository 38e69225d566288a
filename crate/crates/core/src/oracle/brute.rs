use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub const DEFAULT_BRUTE_CUTOFF: usize = 26;

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn check_cutoff(n: usize, cutoff: usize) -> Result<()> {
    if n > cutoff || n > 40 {
        return Err(Error::CutoffExceeded { n, cutoff: cutoff.min(40) });
    }
    Ok(())
}

/// Values of `c` on the 64 points `block*64 .. block*64+63`, masked to the
/// points that exist.
fn eval_block(c: &Circuit, block: u64) -> u64 {
    let n = c.n();
    let base = block << 6;
    let words: Vec<u64> = (0..n)
        .map(|v| {
            if v < 6 {
                LANE_PATTERNS[v]
            } else if base >> v & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        })
        .collect();
    let mask = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
    c.evaluate_words(&words) & mask
}

fn blocks(n: usize) -> u64 {
    if n >= 6 {
        1 << (n - 6)
    } else {
        1
    }
}

/// Visits every point of {0,1}^n in increasing index order with the value
/// of `c` there, stopping early on `Break`.
pub fn for_each_point_value(
    c: &Circuit,
    cutoff: usize,
    mut visit: impl FnMut(u64, bool) -> ControlFlow<()>,
) -> Result<()> {
    check_cutoff(c.n(), cutoff)?;
    let points = 1u64 << c.n();
    for b in 0..blocks(c.n()) {
        let word = eval_block(c, b);
        for j in 0..64.min(points) {
            if visit((b << 6) | j, word >> j & 1 == 1).is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Value of `c` at every point, indexed by point.
pub fn truth_table(c: &Circuit, cutoff: usize) -> Result<Vec<bool>> {
    let mut out = Vec::with_capacity(1 << c.n());
    for_each_point_value(c, cutoff, |_, v| {
        out.push(v);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn brute_witness(c: &Circuit, cutoff: usize) -> Result<Option<u64>> {
    let mut found = None;
    for_each_point_value(c, cutoff, |idx, v| {
        if v {
            found = Some(idx);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(found)
}

pub fn brute_sat_with(c: &Circuit, cutoff: usize) -> Result<bool> {
    Ok(brute_witness(c, cutoff)?.is_some())
}

pub fn brute_sat(c: &Circuit) -> Result<bool> {
    brute_sat_with(c, DEFAULT_BRUTE_CUTOFF)
}

pub fn brute_count_with(c: &Circuit, cutoff: usize) -> Result<u128> {
    check_cutoff(c.n(), cutoff)?;
    let count: u64 = (0..blocks(c.n())).into_par_iter().map(|b| u64::from(eval_block(c, b).count_ones())).sum();
    Ok(u128::from(count))
}

pub fn brute_count(c: &Circuit) -> Result<u128> {
    brute_count_with(c, DEFAULT_BRUTE_CUTOFF)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gen_parity_benchmark;

    #[test]
    fn constant_false() {
        let c = Circuit::constant(5, 2, false);
        assert!(!brute_sat(&c).unwrap());
        assert_eq!(brute_count(&c).unwrap(), 0);
    }

    #[test]
    fn parity_counts() {
        assert_eq!(brute_count(&gen_parity_benchmark(4, 4, 2).unwrap()).unwrap(), 8);
        assert_eq!(brute_count(&gen_parity_benchmark(8, 4, 2).unwrap()).unwrap(), 64);
        assert_eq!(brute_count(&gen_parity_benchmark(1, 1, 2).unwrap()).unwrap(), 1);
    }

    #[test]
    fn words_agree_with_scalar() {
        let c = gen_parity_benchmark(9, 3, 3).unwrap();
        let table = truth_table(&c, 20).unwrap();
        for (idx, &v) in table.iter().enumerate() {
            assert_eq!(v, c.evaluate_index(idx as u64));
        }
    }

    #[test]
    fn cutoff_enforced() {
        let c = Circuit::constant(30, 2, true);
        assert_eq!(brute_count(&c), Err(Error::CutoffExceeded { n: 30, cutoff: 26 }));
    }
}
