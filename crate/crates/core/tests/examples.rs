//! Every example runs to completion.

macro_rules! example {
    ($module:ident, $test:ident, $file:literal) => {
        #[allow(dead_code)]
        #[path = $file]
        mod $module;

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(circuit_basics, circuit_basics_runs, "../examples/circuit_basics.rs");
example!(generate_benchmarks, generate_benchmarks_runs, "../examples/generate_benchmarks.rs");
example!(decision_trees, decision_trees_runs, "../examples/decision_trees.rs");
example!(switching, switching_runs, "../examples/switching.rs");
example!(fanin_reduction, fanin_reduction_runs, "../examples/fanin_reduction.rs");
example!(depth_reduction, depth_reduction_runs, "../examples/depth_reduction.rs");
example!(depth_two_partition, depth_two_partition_runs, "../examples/depth_two_partition.rs");
example!(solve_count_enumerate, solve_count_enumerate_runs, "../examples/solve_count_enumerate.rs");
example!(partition_and_verify, partition_and_verify_runs, "../examples/partition_and_verify.rs");
example!(parity_correlation, parity_correlation_runs, "../examples/parity_correlation.rs");
example!(bad_path_encoding, bad_path_encoding_runs, "../examples/bad_path_encoding.rs");
example!(tail_estimate, tail_estimate_runs, "../examples/tail_estimate.rs");
example!(bounds_report, bounds_report_runs, "../examples/bounds_report.rs");
