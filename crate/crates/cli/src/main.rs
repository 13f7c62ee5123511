use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use ordlab::verify::Budget;

mod commands;

const DEFAULT_SEED: u64 = 20240611;

#[derive(Parser, Debug)]
#[command(name = "ordlab", version, about = "Finite checks for embeddings of orders and reduced products")]
struct Cli {
    /// Indented JSON output.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
    /// Compact JSON output (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Add wall time to the JSON report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The depletion relation on the domain of s.
    Depletion {
        #[command(flatten)]
        inst: InstArgs,
    },
    /// Searches for a walk from x to y along s.
    Walk {
        #[command(flatten)]
        inst: InstArgs,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
    },
    /// The star condition for a pair of indices, or a maximal star set.
    Star {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, requires = "eta")]
        xi: Option<String>,
        #[arg(long, requires = "xi")]
        eta: Option<String>,
        /// Cross-check against a search over every admissible s.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Applies phi to f, with a strict-increase certificate against g.
    Phi {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
        /// Coordinate from which f <= g is assumed.
        #[arg(long, default_value_t = 0)]
        from: usize,
    },
    /// Embeds a finite binary structure into the universal relation.
    UniversalEmbed {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Atomic transfer checks in a reduced product.
    Product {
        #[arg(long = "in")]
        input: PathBuf,
        /// A literal to check; all literals in x0, x1 when absent.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        max_assignments: usize,
    },
    /// A longest chain of tuples for a formula in phi(x, y) form.
    Chains {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        formula: String,
        /// Largest tuple count searched exactly.
        #[arg(long, default_value_t = ordlab::product::DEFAULT_CHAIN_BUDGET)]
        budget: usize,
    },
    #[command(subcommand)]
    Forcing(ForcingCmd),
    /// Tie decomposition of a point and its check on depth-bounded clopens.
    Tiepoint {
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Runs the property suites.
    CheckAll {
        #[arg(long, default_value = "small")]
        budget: Budget,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Comma-separated suite numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum ForcingCmd {
    /// Meets the dense requests up to a depth and reads off Y.
    Generic {
        #[arg(long, alias = "in")]
        poset: PathBuf,
        #[arg(long)]
        depth: usize,
        /// Shuffles each round of requests.
        #[arg(long)]
        seed: Option<u64>,
        /// Witness horizon for the verification; defaults to the depth.
        #[arg(long)]
        upto: Option<usize>,
    },
    /// Generic embedding pushed through phi and the chains.
    Pipeline {
        #[arg(long, alias = "in")]
        poset: PathBuf,
        #[arg(long)]
        depth: usize,
        /// All coordinates linear when absent.
        #[arg(long)]
        chains: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct InstArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated index labels.
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<String>,
}

/// Input files read by a command, with their digests.
#[derive(Default)]
pub struct Inputs {
    digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.digests
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))
    }
}

/// What a command hands back: the verdict, the JSON result and a line for
/// standard error.
pub struct Outcome {
    pub ok: bool,
    pub result: Value,
    pub summary: String,
}

impl Outcome {
    pub fn new(ok: bool, result: impl Serialize, summary: impl Into<String>) -> Result<Self> {
        Ok(Outcome {
            ok,
            result: serde_json::to_value(result)?,
            summary: summary.into(),
        })
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: Vec<String>,
    inputs: &'a BTreeMap<String, String>,
    ok: bool,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

fn dispatch(cmd: &Cmd, inputs: &mut Inputs) -> Result<Outcome> {
    use commands::*;
    match cmd {
        Cmd::Depletion { inst } => depletion(inputs, &inst.input, &inst.s),
        Cmd::Walk { inst, x, y } => walk(inputs, &inst.input, &inst.s, *x, *y),
        Cmd::Star { input, xi, eta, exhaustive } => {
            let pair = xi.as_deref().zip(eta.as_deref());
            star(inputs, input, pair, *exhaustive)
        }
        Cmd::Phi { input, against, from } => phi(inputs, input, against.as_deref(), *from),
        Cmd::UniversalEmbed { input } => universal_embed(inputs, input),
        Cmd::Product { input, formula, max_assignments } => {
            product(inputs, input, formula.as_deref(), *max_assignments)
        }
        Cmd::Chains { input, formula, budget } => chains(inputs, input, formula, *budget),
        Cmd::Forcing(ForcingCmd::Generic { poset, depth, seed, upto }) => {
            generic(inputs, poset, *depth, *seed, upto.unwrap_or(*depth))
        }
        Cmd::Forcing(ForcingCmd::Pipeline { poset, depth, chains }) => {
            pipeline(inputs, poset, *depth, chains.as_deref())
        }
        Cmd::Tiepoint { point, depth } => tiepoint(point, *depth),
        Cmd::CheckAll { budget, seed, only } => {
            if let Some(&bad) = only.iter().find(|&&i| !(1..=ordlab::verify::SUITES.len()).contains(&i)) {
                bail!("no suite numbered {bad}");
            }
            check_all(*budget, *seed, only)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match dispatch(&cli.cmd, &mut inputs) {
        Ok(o) => o,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    let report = RunReport {
        command: std::env::args().skip(1).collect(),
        inputs: &inputs.digests,
        ok: outcome.ok,
        result: &outcome.result,
        wall_ms: cli.timing.then_some(elapsed.as_millis()),
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("report serializes");
    println!("{text}");
    eprintln!("{}", outcome.summary);
    eprintln!("{} in {:.2?}", if outcome.ok { "pass" } else { "FAIL" }, elapsed);
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
