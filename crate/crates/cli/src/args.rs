use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use infmln_core::sampler::{BoundaryPolicy, DEFAULT_BURNIN, DEFAULT_SWEEPS};
use infmln_core::{gibbs, sat, uniqueness};

#[derive(Parser, Debug)]
#[command(name = "infmln", version, about = "Markov logic over infinite Herbrand domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Free,
    AllZero,
    AllOne,
}

impl Policy {
    pub fn core(self) -> BoundaryPolicy {
        match self {
            Policy::Free => BoundaryPolicy::Free,
            Policy::AllZero => BoundaryPolicy::AllZero,
            Policy::AllOne => BoundaryPolicy::AllOne,
        }
    }

    pub fn name(self) -> &'static str {
        self.core().name()
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile a program and check sigma-determinacy clause by clause.
    Analyze { file: PathBuf },
    /// Interaction-sum uniqueness check over atom depths.
    Uniqueness {
        file: PathBuf,
        #[arg(long, default_value_t = uniqueness::DEFAULT_MAX_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = uniqueness::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Exact conditional distribution of a volume given its boundary.
    Query {
        file: PathBuf,
        /// Volume atom; repeat for more.
        #[arg(long = "atom", required = true)]
        atoms: Vec<String>,
        #[arg(long, value_enum, default_value_t = Policy::AllZero)]
        boundary: Policy,
        /// Override one boundary value, as ATOM=0 or ATOM=1.
        #[arg(long = "set")]
        set: Vec<String>,
        #[arg(long, default_value_t = gibbs::DEFAULT_EXACT_CAP)]
        cap: usize,
        /// Infinite-weight limit instead of the finite-weight conditional.
        #[arg(long)]
        limit: bool,
    },
    /// Gibbs sampling on the ball around query atoms.
    Sample {
        file: PathBuf,
        #[arg(long = "atom", required = true)]
        atoms: Vec<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_SWEEPS)]
        sweeps: usize,
        #[arg(long, default_value_t = DEFAULT_BURNIN)]
        burnin: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Policy::AllZero)]
        boundary: Policy,
        #[arg(long = "set")]
        set: Vec<String>,
        /// Write the state after every sweep, one line of 0/1 per sweep.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compare sampled query marginals across boundary policies.
    Sensitivity {
        file: PathBuf,
        #[arg(long = "atom", required = true)]
        atoms: Vec<String>,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_SWEEPS)]
        sweeps: usize,
        #[arg(long, default_value_t = DEFAULT_BURNIN)]
        burnin: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Policy::AllZero, Policy::AllOne])]
        policies: Vec<Policy>,
    },
    /// Satisfiability of a hard knowledge base by Herbrand truncation.
    Sat {
        file: PathBuf,
        #[arg(long, default_value_t = sat::DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Entailment of a closed formula by a hard knowledge base.
    Entail {
        file: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = sat::DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
}

fn path(p: &std::path::Path) -> String {
    p.to_string_lossy().into_owned()
}

fn push_atoms(out: &mut Vec<String>, atoms: &[String]) {
    for a in atoms {
        out.extend(["--atom".to_string(), a.clone()]);
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Uniqueness { .. } => "uniqueness",
            Command::Query { .. } => "query",
            Command::Sample { .. } => "sample",
            Command::Sensitivity { .. } => "sensitivity",
            Command::Sat { .. } => "sat",
            Command::Entail { .. } => "entail",
        }
    }

    pub fn file(&self) -> &std::path::Path {
        match self {
            Command::Analyze { file }
            | Command::Uniqueness { file, .. }
            | Command::Query { file, .. }
            | Command::Sample { file, .. }
            | Command::Sensitivity { file, .. }
            | Command::Sat { file, .. }
            | Command::Entail { file, .. } => file,
        }
    }

    /// Canonical arguments, defaults spelled out, that reproduce this
    /// command. The output path is not part of it.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = vec![self.name().to_string(), path(self.file())];
        match self {
            Command::Analyze { .. } => {}
            Command::Uniqueness { depth, window, .. } => {
                out.extend([
                    "--depth".into(),
                    depth.to_string(),
                    "--window".into(),
                    window.to_string(),
                ]);
            }
            Command::Query {
                atoms,
                boundary,
                set,
                cap,
                limit,
                ..
            } => {
                push_atoms(&mut out, atoms);
                out.extend(["--boundary".into(), boundary.name().into()]);
                for s in set {
                    out.extend(["--set".into(), s.clone()]);
                }
                out.extend(["--cap".into(), cap.to_string()]);
                if *limit {
                    out.push("--limit".into());
                }
            }
            Command::Sample {
                atoms,
                radius,
                sweeps,
                burnin,
                seed,
                boundary,
                set,
                trace,
                ..
            } => {
                push_atoms(&mut out, atoms);
                out.extend([
                    "--radius".into(),
                    radius.to_string(),
                    "--sweeps".into(),
                    sweeps.to_string(),
                    "--burnin".into(),
                    burnin.to_string(),
                    "--seed".into(),
                    seed.to_string(),
                    "--boundary".into(),
                    boundary.name().into(),
                ]);
                for s in set {
                    out.extend(["--set".into(), s.clone()]);
                }
                if let Some(t) = trace {
                    out.extend(["--trace".into(), path(t)]);
                }
            }
            Command::Sensitivity {
                atoms,
                radius,
                sweeps,
                burnin,
                seed,
                policies,
                ..
            } => {
                push_atoms(&mut out, atoms);
                let names: Vec<&str> = policies.iter().map(|p| p.name()).collect();
                out.extend([
                    "--radius".into(),
                    radius.to_string(),
                    "--sweeps".into(),
                    sweeps.to_string(),
                    "--burnin".into(),
                    burnin.to_string(),
                    "--seed".into(),
                    seed.to_string(),
                    "--policies".into(),
                    names.join(","),
                ]);
            }
            Command::Sat { max_depth, .. } => {
                out.extend(["--max-depth".into(), max_depth.to_string()]);
            }
            Command::Entail { query, max_depth, .. } => {
                out.extend([
                    "--query".into(),
                    query.clone(),
                    "--max-depth".into(),
                    max_depth.to_string(),
                ]);
            }
        }
        out
    }
}
