use std::ops::ControlFlow;

use num_rational::Ratio;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::restriction::Partition;

use super::brute::for_each_point_value;

/// Payloads that may be constant.
pub trait AsConstant {
    fn as_constant(&self) -> Option<bool>;
}

impl AsConstant for bool {
    fn as_constant(&self) -> Option<bool> {
        Some(*self)
    }
}

impl AsConstant for Circuit {
    fn as_constant(&self) -> Option<bool> {
        self.constant_value()
    }
}

fn over_cube(total: i128, n: usize) -> Result<Ratio<i128>> {
    if n > 120 {
        return Err(Error::InvalidParameter(format!("correlation denominator 2^{n} does not fit")));
    }
    Ok(Ratio::new(total, 1i128 << n))
}

/// Pr[C = parity] − Pr[C ≠ parity] over the uniform cube, exactly.
pub fn parity_correlation(c: &Circuit, cutoff: usize) -> Result<Ratio<i128>> {
    let mut total: i128 = 0;
    for_each_point_value(c, cutoff, |idx, v| {
        let parity = idx.count_ones() % 2 == 1;
        total += if v == parity { 1 } else { -1 };
        ControlFlow::Continue(())
    })?;
    over_cube(total, c.n())
}

/// Correlation with parity read off a constant partition: only regions
/// fixing every variable count (±2^-n each); a region leaving a variable
/// free is balanced with respect to parity and contributes 0.
pub fn parity_correlation_from_partition<T: AsConstant>(p: &Partition<T>) -> Result<Ratio<i128>> {
    let mut total: i128 = 0;
    for e in p.iter() {
        if !e.region.is_subcube() {
            return Err(Error::GuardedRegion);
        }
        let value = e.payload.as_constant().ok_or(Error::NonConstantPayload)?;
        let rho = e.region.rho();
        if rho.is_full() {
            let parity = rho.values().iter().filter(|v| **v == Some(true)).count() % 2 == 1;
            total += if value == parity { 1 } else { -1 };
        }
    }
    over_cube(total, p.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gen_parity_benchmark;
    use crate::restriction::{Entry, Provenance, Region, Restriction};

    #[test]
    fn parity_correlates_perfectly() {
        let c = gen_parity_benchmark(6, 6, 2).unwrap();
        assert_eq!(parity_correlation(&c, 20).unwrap(), Ratio::from_integer(1));
    }

    #[test]
    fn constant_is_uncorrelated() {
        assert_eq!(parity_correlation(&Circuit::constant(3, 2, false), 20).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn partition_forms() {
        let star = Partition::from_entries(
            3,
            vec![Entry { region: Region::universal(3), payload: true, provenance: Provenance::default() }],
        );
        assert_eq!(parity_correlation_from_partition(&star).unwrap(), Ratio::from_integer(0));
        let full = Partition::from_entries(
            3,
            (0..8u64)
                .map(|i| Entry {
                    region: Region::from_restriction(Restriction::from_index(3, i)),
                    payload: i.count_ones() % 2 == 1,
                    provenance: Provenance::default(),
                })
                .collect(),
        );
        assert_eq!(parity_correlation_from_partition(&full).unwrap(), Ratio::from_integer(1));
    }
}
