//! The `ac0sat` command line.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::circuit::{gen_parity_benchmark, gen_random, parse_circuit, serialize_circuit, Circuit};
use crate::dtree::DEFAULT_MAX_TREE_NODES;
use crate::error::Error;
use crate::oracle::{brute_count, random_cnf_sequence, tail_estimate, verify_partition, DEFAULT_BRUTE_CUTOFF};
use crate::partition_format::{parse_partition, write_manifest, write_partition};
use crate::restriction::{Entry, DEFAULT_SWEEP_CUTOFF};
use crate::solver::{count_sat, decide_sat, enumerate, partition_circuit, SolveParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ac0sat", version, about = "SAT, model counting and enumeration for bounded-depth circuits")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized stage.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Bottom fan-in bound (default: chosen from n, m, d).
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Failure probability in (0, 1/2] (default 2^-n).
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Unset fraction for switching (default 1/(100k)).
    #[arg(long = "p-switch", global = true)]
    pub p_switch: Option<f64>,
    /// Unset fraction for the depth-two step (default 1/(30k)).
    #[arg(long = "p-depth2", global = true)]
    pub p_depth2: Option<f64>,
    /// Enumerate point by point when n is at most this.
    #[arg(long = "cutoff-brute", global = true, default_value_t = 0)]
    pub cutoff_brute: usize,
    /// Node cap for any single decision tree.
    #[arg(long = "max-tree-nodes", global = true, default_value_t = DEFAULT_MAX_TREE_NODES)]
    pub max_tree_nodes: usize,
    /// Cap on independent runs per randomized stage.
    #[arg(long = "max-retries", global = true)]
    pub max_retries: Option<usize>,
    /// Never fall back to point-by-point enumeration for large m.
    #[arg(long = "no-fallback", global = true)]
    pub no_fallback: bool,
    /// Worker threads (default: all cores). Output order does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

impl GlobalArgs {
    pub fn solve_params(&self) -> Result<SolveParams, Error> {
        let log2_q = match self.q {
            None => None,
            Some(q) if q > 0.0 && q <= 0.5 => Some(q.log2()),
            Some(q) => return Err(Error::InvalidProbability(q)),
        };
        Ok(SolveParams {
            k: self.k,
            log2_q,
            p_switch: self.p_switch,
            p_depth2: self.p_depth2,
            seed: self.seed,
            brute_force_cutoff: self.cutoff_brute,
            max_tree_nodes: self.max_tree_nodes,
            max_retries: self.max_retries,
            allow_fallback: !self.no_fallback,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide satisfiability; prints SAT and a witness, or UNSAT (exit 1).
    Solve { circuit: PathBuf },
    /// Exact number of satisfying assignments.
    Count { circuit: PathBuf },
    /// Stream the sub-cubes of satisfying assignments as partition lines.
    Enumerate { circuit: PathBuf },
    /// Full constant partition of the cube plus a run manifest.
    Partition {
        circuit: PathBuf,
        /// Partition file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Manifest file (default: stderr).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Check a partition file against a circuit; exit 3 on failure.
    Verify {
        circuit: PathBuf,
        partition: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SWEEP_CUTOFF)]
        cutoff: usize,
    },
    /// Emit a generated circuit.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Tail table for restricted joint decision trees of random k-CNFs.
    SwitchStats {
        #[arg(long, default_value_t = 416)]
        n: usize,
        /// Clause width.
        #[arg(long, default_value_t = 2)]
        width: usize,
        /// Number of formulas.
        #[arg(long, default_value_t = 3)]
        formulas: usize,
        /// Clauses per formula.
        #[arg(long, default_value_t = 4)]
        clauses: usize,
        /// Unset fraction (default 1/(26·width), so 13pk = 1/2).
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8")]
        s: Vec<usize>,
    },
    /// Time the pipeline against exhaustive evaluation on random circuits.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "8,10,12,14")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        depths: Vec<usize>,
        /// Gates per layer as a multiple of n.
        #[arg(long, default_value_t = 1)]
        density: usize,
        /// Circuits per (n, d).
        #[arg(long, default_value_t = 3)]
        count: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// AND of depth-d parity circuits on groups of `group` variables.
    Parity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        group: usize,
        #[arg(long)]
        d: usize,
    },
    /// Seeded random layered circuit with at most m gates per layer.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long = "k-bottom")]
        k_bottom: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_circuit(&read_input(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn mask(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit status.
pub fn run_cli<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.global.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| execute(&cli, out, err)),
            Err(e) => Err(Failure::Usage(format!("cannot start {j} worker threads: {e}"))),
        },
        None => execute(&cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32, Failure> {
    let params = cli.global.solve_params()?;
    match &cli.command {
        Command::Solve { circuit } => {
            let c = read_circuit(circuit)?;
            let r = decide_sat(&c, &params)?;
            match r.witness {
                Some(x) => {
                    writeln!(out, "SAT")?;
                    writeln!(out, "witness {}", mask(&x))?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "UNSAT")?;
                    Ok(EXIT_UNSAT)
                }
            }
        }
        Command::Count { circuit } => {
            let c = read_circuit(circuit)?;
            writeln!(out, "{}", count_sat(&c, &params)?)?;
            Ok(EXIT_OK)
        }
        Command::Enumerate { circuit } => {
            let c = read_circuit(circuit)?;
            let mut io_error = None;
            enumerate(&c, &params, |rho| match writeln!(out, "{rho} | - | 1") {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    io_error = Some(e);
                    ControlFlow::Break(())
                }
            })?;
            match io_error {
                Some(e) => Err(e.into()),
                None => Ok(EXIT_OK),
            }
        }
        Command::Partition { circuit, out: out_path, manifest } => {
            let c = read_circuit(circuit)?;
            let (p, report) = partition_circuit(&c, &params)?;
            let text = write_partition(&p);
            let man = write_manifest(&report.manifest());
            match out_path {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            match manifest {
                Some(path) => fs::write(path, man)?,
                None => err.write_all(man.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify { circuit, partition, cutoff } => {
            let c = read_circuit(circuit)?;
            let p = parse_partition(&read_input(partition)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", partition.display())))?;
            let rep = verify_partition(&c, &p, *cutoff)?;
            if rep.passed() {
                writeln!(out, "OK {} regions", p.len())?;
                return Ok(EXIT_OK);
            }
            writeln!(
                out,
                "FAIL uncovered={} multiply_covered={} value_mismatches={}",
                rep.structure.uncovered, rep.structure.multiply_covered, rep.value_mismatches
            )?;
            if let Some(idx) = rep.counterexample() {
                let x: Vec<bool> = (0..c.n()).map(|v| idx >> v & 1 == 1).collect();
                writeln!(out, "counterexample {}", mask(&x))?;
            }
            Ok(EXIT_VERIFY_FAILED)
        }
        Command::Gen { kind } => {
            let c = match *kind {
                GenKind::Parity { n, group, d } => gen_parity_benchmark(n, group, d)?,
                GenKind::Random { n, m, d, k_bottom } => gen_random(n, m, d, k_bottom, cli.global.seed)?,
            };
            out.write_all(serialize_circuit(&c).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::SwitchStats { n, width, formulas, clauses, p, samples, s } => {
            let p = p.unwrap_or(1.0 / (26.0 * *width as f64));
            let seq = random_cnf_sequence(*n, *formulas, *width, *clauses, cli.global.seed)?;
            let rep = tail_estimate(&seq, p, s, *samples, cli.global.seed, cli.global.max_tree_nodes)?;
            writeln!(
                out,
                "# n={} m={} k={} p={} unset={} samples={} discarded={}",
                rep.n, rep.m, rep.k, rep.p, rep.unset, rep.samples, rep.discarded
            )?;
            writeln!(out, "s\thits\trate\tstd_error\t(13pk)^s\t(2^m-1)(13pk)^s\t2^-s")?;
            for r in &rep.rows {
                writeln!(
                    out,
                    "{}\t{}\t{:.6e}\t{:.3e}\t{:.6e}\t{:.6e}\t{:.6e}",
                    r.s,
                    r.hits,
                    r.empirical,
                    r.std_error,
                    r.single_bound,
                    r.union_bound,
                    (-(r.s as f64)).exp2()
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { sizes, depths, density, count } => {
            writeln!(out, "n\td\tm\tseed\tregions\tpipeline_ms\tbrute_ms\tagree")?;
            let mut all_agree = true;
            for &n in sizes {
                for &d in depths {
                    for i in 0..*count {
                        let seed = crate::rng::derive_seed(cli.global.seed, (n * 16 + d) as u64 * 1000 + i);
                        let m = (density * n).max(1);
                        let c = gen_random(n, m, d, None, seed)?;
                        let run = params.with_seed(seed);
                        let t0 = Instant::now();
                        let mut regions = 0u64;
                        let mut models: u128 = 0;
                        crate::solver::for_each_region(&c, &run, |e: &Entry<bool>| {
                            regions += 1;
                            if e.payload {
                                models += 1u128 << e.region.rho().num_unset();
                            }
                            ControlFlow::Continue(())
                        })?;
                        let pipeline_ms = t0.elapsed().as_secs_f64() * 1e3;
                        let t1 = Instant::now();
                        let brute = if n <= DEFAULT_BRUTE_CUTOFF { Some(brute_count(&c)?) } else { None };
                        let brute_ms = t1.elapsed().as_secs_f64() * 1e3;
                        let agree = brute.is_none_or(|b| b == models);
                        all_agree &= agree;
                        writeln!(out, "{n}\t{d}\t{m}\t{seed}\t{regions}\t{pipeline_ms:.2}\t{brute_ms:.2}\t{agree}")?;
                    }
                }
            }
            Ok(if all_agree { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

