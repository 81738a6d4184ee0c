//! Command-line front end: single-operation subcommands plus the check /
//! search-tight / replay suite drivers.
//!
//! Exit codes: 0 = all pass, 1 = fails found, 2 = usage / resource /
//! precondition error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sumsetlab::abgroup::{
    enumerate_subgroups, minkowski_sum, parse_group, stabilizer, ChowlaMode, GroupSubset,
};
use sumsetlab::density::EventuallyPeriodicSet;
use sumsetlab::dyson::{apply_transform, iterate_transform};
use sumsetlab::error::Error;
use sumsetlab::harness::{
    replay, run_suite, search_tight, GenMode, SuiteId, SuiteOptions, WitnessLog,
};
use sumsetlab::intset::shnirelman_sumset;
use sumsetlab::ranksum::{RankProfile, SetFamily};
use sumsetlab::Result;

#[derive(Parser)]
#[command(name = "sumsetlab", version, about = "Sumset arithmetic and theorem checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shnirel'man-convention sumset of a family
    Sumset {
        /// Family encoding, e.g. g=5;{1,2};{3}
        #[arg(long)]
        family: String,
    },
    /// Rank-r counting function values
    Phi {
        #[arg(long)]
        family: String,
        /// Rank r; omit to print all ranks
        #[arg(long)]
        rank: Option<usize>,
        /// Argument m; omit to print all m up to the bound
        #[arg(long)]
        m: Option<usize>,
    },
    /// Exact densities of an eventually periodic set
    Density {
        /// Encoding N:{head}|m:{residues}, e.g. 0:{}|2:{1}
        #[arg(long)]
        ep: String,
        /// Print the lower asymptotic density instead of Shnirel'man density
        #[arg(long)]
        lower: bool,
    },
    /// One Dyson transform step, or the full trace with --trace
    Transform {
        #[arg(long)]
        family: String,
        /// Iterate until A_n is empty, printing one JSON step per line
        #[arg(long)]
        trace: bool,
    },
    /// Apply the e-transform to a pair of group subsets
    Etransform {
        /// Subset encoding, e.g. Z5:{0,1}
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        e: usize,
    },
    /// Stabilizer subgroup H(X) of a group subset
    Stabilizer {
        #[arg(long)]
        set: String,
    },
    /// The full subgroup lattice of a group
    Subgroups {
        /// Group encoding, e.g. Z6 or Z2xZ4
        #[arg(long)]
        group: String,
    },
    /// Run a verification suite; exits 1 on any fail verdict
    Check {
        suite: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Collect instances achieving equality in a suite's inequality
    SearchTight {
        suite: String,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Re-evaluate a witness file and compare verdicts
    Replay { file: PathBuf },
}

#[derive(Args)]
struct SweepArgs {
    /// Group for group suites, e.g. Z6
    #[arg(long)]
    group: Option<String>,
    /// Bound g for integer-set suites
    #[arg(long, default_value_t = 6)]
    g: usize,
    /// Family size (exhaustive) or maximum size (random)
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Exhaustive enumeration (the default)
    #[arg(long)]
    exhaustive: bool,
    /// Seeded random sampling instead of exhaustive enumeration
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    count: u64,
    /// chowla or cd, for the chowla-cd suite
    #[arg(long, default_value = "chowla")]
    mode: String,
    /// Largest modulus for the congruence-example sweep
    #[arg(long, default_value_t = 12)]
    max_modulus: usize,
    /// Instance budget override (also SUMSETLAB_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
    /// Append witnesses to this JSON-lines file
    #[arg(long)]
    log: Option<PathBuf>,
    /// Also log not-applicable verdicts
    #[arg(long)]
    log_na: bool,
    /// Machine-readable JSON report
    #[arg(long)]
    json: bool,
}

impl SweepArgs {
    fn options(&self) -> Result<SuiteOptions> {
        let group = match &self.group {
            Some(sp) => Some(parse_group(sp)?),
            None => None,
        };
        let chowla_mode = match self.mode.as_str() {
            "chowla" => ChowlaMode::Chowla,
            "cd" => ChowlaMode::CauchyDavenport,
            other => return Err(Error::Usage(format!("unknown mode `{other}`"))),
        };
        let mode = if self.random {
            GenMode::Random {
                seed: self.seed,
                count: self.count,
            }
        } else {
            GenMode::Exhaustive
        };
        Ok(SuiteOptions {
            mode,
            g: self.g,
            n: self.n,
            group,
            max_modulus: self.max_modulus,
            chowla_mode,
            budget: self.budget,
            ..SuiteOptions::default()
        })
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Sumset { family } => {
            let family: SetFamily = family.parse()?;
            let sum = shnirelman_sumset(family.sets(), family.bound())?;
            println!("{sum}");
            Ok(0)
        }
        Command::Phi { family, rank, m } => {
            let family: SetFamily = family.parse()?;
            let profile = RankProfile::compute(&family)?;
            let ranks: Vec<usize> = match rank {
                Some(r) => vec![r],
                None => (1..=family.len()).collect(),
            };
            let ms: Vec<usize> = match m {
                Some(m) => vec![m],
                None => (1..=family.bound()).collect(),
            };
            if ranks.len() == 1 && ms.len() == 1 {
                println!("{}", profile.phi(ranks[0], ms[0])?);
            } else {
                for &r in &ranks {
                    for &m in &ms {
                        println!("phi_{r}({m}) = {}", profile.phi(r, m)?);
                    }
                }
            }
            Ok(0)
        }
        Command::Density { ep, lower } => {
            let s: EventuallyPeriodicSet = ep.parse()?;
            if lower {
                println!("{}", s.lower_density());
            } else {
                println!("{}", s.shnirelman_density());
            }
            Ok(0)
        }
        Command::Transform { family, trace } => {
            let family: SetFamily = family.parse()?;
            if trace {
                let trace = iterate_transform(&family)?;
                for step in &trace.steps {
                    println!("{}", step.to_json());
                }
            } else {
                let step = apply_transform(&family)?;
                println!("{}", step.to_json());
            }
            Ok(0)
        }
        Command::Etransform { a, b, e } => {
            let a: GroupSubset = a.parse()?;
            let b: GroupSubset = b.parse()?;
            let (ae, be) = sumsetlab::abgroup::e_transform(&a, &b, e)?;
            println!("A(e) = {ae}");
            println!("B(e) = {be}");
            println!("A+B  = {}", minkowski_sum(&a, &b)?);
            println!("A(e)+B(e) = {}", minkowski_sum(&ae, &be)?);
            Ok(0)
        }
        Command::Stabilizer { set } => {
            let x: GroupSubset = set.parse()?;
            println!("{}", stabilizer(&x)?.carrier());
            Ok(0)
        }
        Command::Subgroups { group } => {
            let g = parse_group(&group)?;
            for h in enumerate_subgroups(&g)? {
                println!("{}", h.carrier());
            }
            Ok(0)
        }
        Command::Check { suite, sweep } => {
            let suite: SuiteId = suite.parse()?;
            let opts = sweep.options()?;
            let mut log = match &sweep.log {
                Some(path) => WitnessLog::to_file(path)?,
                None => WitnessLog::disabled(),
            };
            log.log_na = sweep.log_na;
            let report = run_suite(suite, &opts, &mut log)?;
            if sweep.json {
                println!("{}", report.to_json());
            } else {
                println!(
                    "{}: {} pass, {} fail, {} not-applicable ({} instances, {} ms)",
                    report.suite,
                    report.pass,
                    report.fail,
                    report.not_applicable,
                    report.total(),
                    report.elapsed_ms
                );
                for w in &report.failures {
                    println!("  FAIL {}", w.instance);
                }
            }
            Ok(if report.ok() { 0 } else { 1 })
        }
        Command::SearchTight { suite, sweep } => {
            let suite: SuiteId = suite.parse()?;
            let opts = sweep.options()?;
            let tight = search_tight(suite, &opts)?;
            if sweep.json {
                println!(
                    "{}",
                    serde_json::json!({"v": 1, "suite": suite.as_str(), "tight": tight})
                );
            } else {
                for instance in &tight {
                    println!("{instance}");
                }
            }
            Ok(0)
        }
        Command::Replay { file } => {
            let outcome = replay(&file)?;
            println!(
                "replayed {} records, {} mismatches",
                outcome.records,
                outcome.mismatches.len()
            );
            for m in &outcome.mismatches {
                println!("  {m}");
            }
            Ok(if outcome.mismatches.is_empty() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
