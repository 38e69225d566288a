//! Reference oracles and the executable side of the switching-lemma
//! counting argument.

mod brute;
mod correlation;
mod encoding;
mod tail;
mod verify;

pub use brute::{
    brute_count, brute_count_with, brute_sat, brute_sat_with, brute_witness, for_each_point_value, truth_table,
    DEFAULT_BRUTE_CUTOFF,
};
pub use correlation::{parity_correlation, parity_correlation_from_partition, AsConstant};
pub use encoding::{decode_bad_path, encode_bad_path, BadPathEncoding};
pub use tail::{joint_contribution_length, random_cnf_sequence, tail_estimate, TailReport, TailRow};
pub use verify::{verify_partition, PointValue, VerifyReport};
