//! `latinv`: runs the invariant-element constructions on files and prints a
//! JSON run report.

mod commands;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latinv::geomset::SelfRespect;
use latinv::Error;

use commands::{GroupArgs, LawArgs, Outcome};
use report::{exit_status, summarize, Failure, Inputs, RunReport};

#[derive(Parser)]
#[command(name = "latinv", version, about = "Symmetric invariant elements of finite lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for randomized paths.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search cap for orbit and automorphism enumeration.
    #[arg(long)]
    cap: Option<usize>,
    /// Include full engine traces in the report.
    #[arg(long)]
    trace: bool,
    /// Recheck the per-step trace inequalities and add them as clauses.
    #[arg(long)]
    verify: bool,
}

#[derive(Args, Debug)]
struct GroupInput {
    /// Cayley table file: order, then one row per element.
    #[arg(long, conflicts_with = "group")]
    input: Option<PathBuf>,
    /// A built-in group: C2..C12, S3, D4, Q8, A4, D6, S3xC2.
    #[arg(long)]
    group: Option<String>,
    /// Normal subgroup N as a JSON array of element ids (or a file).
    #[arg(long)]
    subgroup: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariant edge set whose removal leaves no forbidden subgraph.
    GraphForbid {
        #[arg(long)]
        input: PathBuf,
        /// Edge ids N̄ as a JSON array (or a file holding one).
        #[arg(long, default_value = "[]")]
        removed: String,
        /// triangle, c4, c5, k4, k5, k33, p3, or a JSON graph file; repeatable.
        #[arg(long)]
        forbidden: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Invariant edge set whose removal leaves a planar graph.
    GraphPlanarize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "[]")]
        removed: String,
        #[command(flatten)]
        common: Common,
    },
    /// Invariant edge set whose complement embeds into G minus the given edges.
    GraphLocalEmbed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "[]")]
        removed: String,
        /// Largest accepted edge count.
        #[arg(long, default_value_t = 64)]
        size_cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The G_n family: a 5n-cycle with rotated pentagram diagonals.
    GraphGn {
        #[arg(long)]
        n: usize,
        /// Also planarize invariantly, starting from the designated edges.
        #[arg(long)]
        planarize: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Characteristic subgroup satisfying outer-commutator laws.
    GroupLaw {
        #[command(flatten)]
        group: GroupInput,
        /// Outer commutator word such as [[x1,x2],x3]; repeatable.
        #[arg(long)]
        word: Vec<String>,
        /// trivial, solvable, nilpotent or pi:p,q; one per word, or one for all.
        #[arg(long)]
        class: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Characteristic subgroup whose quotient spectrum stays inside that of G/N.
    GroupSpectrum {
        #[command(flatten)]
        group: GroupInput,
        #[command(flatten)]
        common: Common,
    },
    /// Characteristic subgroup with a normal series of a given shape.
    GroupSeries {
        #[command(flatten)]
        group: GroupInput,
        /// JSON layers bottom-up, e.g. [{"word":"[x1,x2]"},{"class":"pi:2"}] (or a file).
        #[arg(long)]
        series: String,
        #[command(flatten)]
        common: Common,
    },
    /// Isometry-invariant point removal leaving no k points on a sphere.
    SetSphere {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "[]")]
        removed: String,
        #[arg(long, default_value_t = 4)]
        arity: usize,
        /// Count planes as spheres.
        #[arg(long)]
        allow_planes: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Relation-invariant expulsion leaving an efficient team.
    SetTeam {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "[]")]
        expel: String,
        #[arg(long, default_value_t = 5)]
        arity: usize,
        /// counted or excluded.
        #[arg(long, default_value = "counted")]
        self_respect: SelfRespect,
        #[command(flatten)]
        common: Common,
    },
    /// Exact f^k(x) with f(x) = x(x+1), against x·(x+1)^(2^k-1).
    Bound {
        #[arg(long)]
        x: String,
        #[arg(long)]
        k: u32,
        /// Pool size to compare the iterate with, e.g. 10^100.
        #[arg(long)]
        pool: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Monotonicity and multilinearity checks for a shipped predicate.
    VerifyLaws {
        /// triangle, spectrum, team, sphere, even-kept or at-most-one-kept.
        #[arg(long)]
        predicate: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        subgroup: Option<String>,
        #[arg(long)]
        arity: Option<usize>,
        /// Ground-set size for the negative controls.
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value = "counted")]
        self_respect: SelfRespect,
        #[arg(long)]
        allow_planes: bool,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GraphForbid { .. } => "graph-forbid",
            Command::GraphPlanarize { .. } => "graph-planarize",
            Command::GraphLocalEmbed { .. } => "graph-local-embed",
            Command::GraphGn { .. } => "graph-gn",
            Command::GroupLaw { .. } => "group-law",
            Command::GroupSpectrum { .. } => "group-spectrum",
            Command::GroupSeries { .. } => "group-series",
            Command::SetSphere { .. } => "set-sphere",
            Command::SetTeam { .. } => "set-team",
            Command::Bound { .. } => "bound",
            Command::VerifyLaws { .. } => "verify-laws",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::GraphForbid { common, .. }
            | Command::GraphPlanarize { common, .. }
            | Command::GraphLocalEmbed { common, .. }
            | Command::GraphGn { common, .. }
            | Command::GroupLaw { common, .. }
            | Command::GroupSpectrum { common, .. }
            | Command::GroupSeries { common, .. }
            | Command::SetSphere { common, .. }
            | Command::SetTeam { common, .. }
            | Command::Bound { common, .. }
            | Command::VerifyLaws { common, .. } => common,
        }
    }
}

fn group_args(g: &GroupInput) -> GroupArgs<'_> {
    GroupArgs { input: g.input.as_deref(), group: g.group.as_deref(), subgroup: &g.subgroup }
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome, Failure> {
    let cap = cmd.common().cap;
    match cmd {
        Command::GraphForbid { input, removed, forbidden, .. } => commands::graph_forbid(inputs, input, removed, forbidden, cap),
        Command::GraphPlanarize { input, removed, .. } => commands::graph_planarize(inputs, input, removed, cap),
        Command::GraphLocalEmbed { input, removed, size_cap, .. } => {
            commands::graph_local_embed(inputs, input, removed, *size_cap, cap)
        }
        Command::GraphGn { n, planarize, .. } => commands::graph_gn(inputs, *n, *planarize, cap),
        Command::GroupLaw { group, word, class, .. } => commands::group_law(inputs, &group_args(group), word, class),
        Command::GroupSpectrum { group, .. } => commands::group_spectrum(inputs, &group_args(group)),
        Command::GroupSeries { group, series, .. } => commands::group_series(inputs, &group_args(group), series, cap),
        Command::SetSphere { input, removed, arity, allow_planes, .. } => {
            commands::set_sphere(inputs, input, removed, *arity, *allow_planes, cap)
        }
        Command::SetTeam { input, expel, arity, self_respect, .. } => {
            commands::set_team(inputs, input, expel, *arity, *self_respect, cap)
        }
        Command::Bound { x, k, pool, .. } => commands::bound(inputs, x, *k, pool.as_deref()),
        Command::VerifyLaws { predicate, input, group, subgroup, arity, size, self_respect, allow_planes, common } => {
            commands::verify_laws(
                inputs,
                &LawArgs {
                    predicate,
                    input: input.as_ref(),
                    group: group.as_deref(),
                    subgroup: subgroup.as_deref(),
                    arity: *arity,
                    size: *size,
                    seed: common.seed,
                    self_respect: *self_respect,
                    allow_planes: *allow_planes,
                },
            )
        }
    }
}

fn build_report(cmd: &Command) -> RunReport {
    let common = cmd.common();
    let mut inputs = Inputs::default();
    let outcome = dispatch(cmd, &mut inputs);
    let mut report = RunReport {
        command: cmd.name().into(),
        version: env!("CARGO_PKG_VERSION"),
        seed: common.seed,
        inputs: Vec::new(),
        status: "ok",
        exit_code: 0,
        error: None,
        witness: None,
        result: serde_json::Value::Null,
        clauses: Vec::new(),
        trace_summary: Vec::new(),
        trace: None,
    };
    match outcome {
        Ok(mut out) => {
            if common.verify {
                let extra = commands::verify_traces(&out);
                out.clauses.extend(extra);
            }
            if let Some(c) = out.clauses.iter().find(|c| !c.passed) {
                let (status, code) = exit_status(&Error::InvariantViolation(String::new()));
                report.status = status;
                report.exit_code = code;
                report.error = Some(format!("clause {} failed", c.name));
            }
            report.trace_summary = out.traces.iter().map(|(l, t, _)| summarize(l.clone(), t)).collect();
            if common.trace {
                let full: serde_json::Map<String, serde_json::Value> = out
                    .traces
                    .iter()
                    .map(|(l, t, _)| (l.clone(), serde_json::to_value(t).expect("serializable")))
                    .collect();
                report.trace = Some(full.into());
            }
            report.result = out.result;
            report.clauses = out.clauses;
        }
        Err(Failure { error, witness }) => {
            let (status, code) = exit_status(&error);
            report.status = status;
            report.exit_code = code;
            report.error = Some(error.to_string());
            report.witness = witness;
        }
    }
    report.inputs = inputs.digests;
    report
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = build_report(&cli.command);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    match &cli.command.common().output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("latinv: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = &report.error {
        eprintln!("latinv: {}: {err}", report.status);
    }
    ExitCode::from(report.exit_code as u8)
}
