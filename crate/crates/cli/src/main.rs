#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Control-landscape analysis for a driven qubit `H0 + f(t)·V`.
///
/// Every subcommand reads one strict JSON config (unknown keys are errors).
/// Matrices are Pauli coefficients `[c_I, c_x, c_y, c_z]` or entries
/// `[[[re,im],[re,im]],[[re,im],[re,im]]]`; states are amplitude pairs
/// `[[re,im],[re,im]]`. Times are given as `"horizon": T` or
/// `"t_multiplier": m` (in units of T_min), never both.
///
/// Exit codes: 0 success, 1 verification failure, 2 config or I/O error,
/// 3 hypothesis violation.
#[derive(Parser)]
#[command(name = "qlandscape", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// JSON config file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed (gradcheck, sweep); ignored elsewhere.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a control and dump node times and unitaries as JSON.
    ///
    /// {"pair": {"h0": M, "v": M}, "horizon": T, "control": C, "objective"?: O}
    ///
    /// C is {"values": [...]}, {"constant": f, "segments": N} or
    /// {"exceptional": true, "segments": N}. O is
    /// {"type": "gate", "W": "hadamard" | "not" | {"phase": φ} | entries},
    /// {"type": "transition", "initial": ψ, "target": ψ} or
    /// {"type": "observable", "rho0": [c_I,c_x,c_y,c_z], "observable": M}.
    #[command(verbatim_doc_comment)]
    Propagate(Common),
    /// Compare analytic gradients with central differences on random instances.
    ///
    /// {"instances"?: 50, "segments"?: 32, "threshold"?: 1e-6, "step"?: 1e-6, "seed"?: 0}
    ///
    /// Exits 1 when any relative error exceeds the threshold.
    #[command(verbatim_doc_comment)]
    Gradcheck(Common),
    /// Gradient ascent (or descent) from an initial control.
    ///
    /// {"pair", "objective", "horizon" | "t_multiplier", "init": C,
    ///  "optimizer"?: {"max_iters", "grad_tol", "armijo_c", "backtrack_factor",
    ///                 "initial_step", "direction": "ascend" | "descend"},
    ///  "tolerances"?: {"grad_tol", "value_tol", "spec_tol"}}
    #[command(verbatim_doc_comment)]
    Optimize(Common),
    /// Seeded sweep over random pairs and starts; writes one CSV row per run.
    ///
    /// {"pairs", "starts", "segments", "seed",
    ///  "objective": {"type": "gate", "target": entries}
    ///             | {"type": "transition", "initial": ψ, "target": ψ}
    ///             | {"type": "random_observable", "eigenvalues": [ω0, ω1]},
    ///  "t_multiplier"?: 2, "traceless"?: true, "comm_floor"?: 0.1,
    ///  "start_amplitude"?: 1, "optimizer"?, "tolerances"?, "max_escapes"?: 5,
    ///  "escape_step"?: 0.01, "workers"?}
    ///
    /// Exits 1 when any trap candidate survives re-verification.
    #[command(verbatim_doc_comment)]
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Where to write the JSON summary; standard error when omitted.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Second-order report at the exceptional control f0.
    ///
    /// {"pair", "objective", "horizon" | "t_multiplier", "segments", "epsilons": [...]}
    ///
    /// Exits 3 when Tr V ≠ 0 or the horizon is below T_min, 1 when the
    /// verdict is inconclusive.
    #[command(verbatim_doc_comment)]
    F0(Common),
    /// Rank of {I, V, [H0,V], E(f)} at f0, at probe values and along a control.
    ///
    /// {"pair", "probes"?: [f, ...], "control"?: C, "horizon" | "t_multiplier" (with control)}
    #[command(verbatim_doc_comment)]
    Rank(Common),
    /// Objective values on a 2-D plane through a base control.
    ///
    /// {"pair", "objective", "horizon" | "t_multiplier", "base": C,
    ///  "directions": {"a": [...], "b": [...]} | {"exceptional_variations": true},
    ///  "extent": [ea, eb], "resolution": n}
    #[command(verbatim_doc_comment)]
    Slice(Common),
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Hypothesis(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Config(_) => 2,
            Failure::Hypothesis(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<qubit_landscape::Error> for Failure {
    fn from(e: qubit_landscape::Error) -> Self {
        match e {
            qubit_landscape::Error::Hypothesis(h) => Failure::Hypothesis(h.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Propagate(c) => commands::propagate(&c),
        Command::Gradcheck(c) => commands::gradcheck(&c),
        Command::Optimize(c) => commands::optimize(&c),
        Command::Sweep { common, summary } => commands::sweep(&common, summary.as_deref()),
        Command::F0(c) => commands::f0(&c),
        Command::Rank(c) => commands::rank(&c),
        Command::Slice(c) => commands::slice(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qlandscape: {e}");
            ExitCode::from(e.code())
        }
    }
}
