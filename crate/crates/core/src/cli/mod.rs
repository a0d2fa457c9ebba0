//! Command-line front end: scope loading (file plus flag overrides),
//! subcommands, human and json-lines output, and the exit-code contract.
//!
//! Exit codes: 0 all checks held / run clean; 1 a violation or check failure
//! was found (the expected outcome for the unsafe variant, still a
//! successful analysis); 2 usage or configuration error; 3 the state cap was
//! hit with no violation found, so the exploration is incomplete.

pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::domain::{Scope, Variant};
use crate::explorer::{explore, ExploreOptions, DEFAULT_STATE_CAP};
use crate::simulator::{run_scenario, scenario_scope, simulate};
use format::{scope_from_json, ScopeExtras};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;

pub const STATE_CAP_ENV: &str = "PAXOS_HIST_STATE_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "paxos-hist",
    version,
    about = "Explore, check, and simulate message-history Paxos variants"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exhaustively explore reachable states and check every invariant
    Check(RunArgs),
    /// Explore while also asserting per-transition invariant preservation
    Induct(RunArgs),
    /// Run one seeded random execution with online checks
    Simulate(SimArgs),
    /// Run a named scripted scenario (appendix-f, appendix-f-safe)
    Scenario(ScenarioArgs),
    /// Load, validate, and print the normalized scope
    #[command(name = "validate-scope")]
    ValidateScope(RunArgs),
}

#[derive(Args, Debug, Default)]
struct ScopeFlags {
    /// Scope file (JSON); explicit flags override file values
    #[arg(long)]
    scope: Option<PathBuf>,
    /// basic | basic-unsafe-2a | multi | multi-preempt
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    acceptors: Option<u8>,
    /// Multi variants only
    #[arg(long)]
    proposers: Option<u8>,
    #[arg(long)]
    ballots: Option<i32>,
    /// Number of distinct proposable values (named v1..vN)
    #[arg(long)]
    values: Option<u8>,
    /// Multi variants only
    #[arg(long)]
    slots: Option<u8>,
    /// Cap on fresh decrees per 2a (multi variants only)
    #[arg(long = "max-new")]
    max_new: Option<u8>,
    /// Exploration depth: a number or "unlimited"
    #[arg(long)]
    depth: Option<String>,
    /// "majority" or a path to a JSON file holding a list of acceptor-index lists
    #[arg(long)]
    quorums: Option<String>,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    #[command(flatten)]
    scope: ScopeFlags,
    /// human | json-lines
    #[arg(long, default_value = "human")]
    format: String,
    /// Write output here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stop exploring after this many states (default 5000000;
    /// PAXOS_HIST_STATE_CAP overrides the default)
    #[arg(long = "state-cap")]
    state_cap: Option<usize>,
    /// Worker threads for exploration (results are identical for any count)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    steps: u32,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// Scenario name
    name: String,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

fn config<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

fn default_scope_for(variant: Variant) -> Scope {
    if variant.is_basic() {
        Scope::basic(variant, 3, 2, 2)
    } else {
        Scope::multi(variant, 3, 1, 2, 2, 1, 1)
    }
}

/// Builds the effective scope: scenario default or file first, then flag
/// overrides, then validation. Fields of the wrong protocol family are
/// rejected rather than ignored.
fn resolve_scope(
    flags: &ScopeFlags,
    scenario_base: Option<Scope>,
) -> Result<(Scope, ScopeExtras), CliError> {
    let is_scenario = scenario_base.is_some();
    if is_scenario && flags.scope.is_some() {
        return config("a scenario fixes its own scope; override with flags, not --scope");
    }
    if is_scenario && flags.variant.is_some() {
        return config("the variant is part of the scenario and cannot be overridden");
    }

    let (mut scope, extras) = if let Some(path) = &flags.scope {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read scope file: {e}")))?;
        let doc: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("malformed scope file: {e}")))?;
        scope_from_json(&doc).map_err(|e| CliError::Config(e.to_string()))?
    } else if let Some(base) = scenario_base {
        (base, ScopeExtras::default())
    } else {
        let Some(name) = &flags.variant else {
            return config("missing --variant (or a scope file that sets one)");
        };
        let Some(variant) = Variant::parse(name) else {
            return config(format!("unknown variant {name:?}"));
        };
        (default_scope_for(variant), ScopeExtras::default())
    };

    if let Some(name) = &flags.variant {
        let Some(variant) = Variant::parse(name) else {
            return config(format!("unknown variant {name:?}"));
        };
        if variant != scope.variant {
            // Changing family resets family-specific fields to defaults.
            let depth = scope.depth_limit;
            let mut fresh = default_scope_for(variant);
            fresh.n_acceptors = scope.n_acceptors;
            fresh.ballot_bound = scope.ballot_bound;
            fresh.value_domain = scope.value_domain.clone();
            fresh.quorums = scope.quorums.clone();
            fresh.depth_limit = depth;
            scope = fresh;
        }
    }

    if scope.variant.is_basic() {
        for (name, set) in [
            ("--proposers", flags.proposers.is_some()),
            ("--slots", flags.slots.is_some()),
            ("--max-new", flags.max_new.is_some()),
        ] {
            if set {
                return config(format!(
                    "{name} is not valid for variant {}",
                    scope.variant.name()
                ));
            }
        }
    }

    if let Some(n) = flags.acceptors {
        scope.n_acceptors = n;
    }
    if let Some(n) = flags.proposers {
        scope.n_proposers = n;
    }
    if let Some(n) = flags.ballots {
        scope.ballot_bound = n;
    }
    if let Some(n) = flags.values {
        scope.value_domain = crate::domain::default_value_domain(n);
    }
    if let Some(n) = flags.slots {
        scope.slot_bound = n;
    }
    if let Some(n) = flags.max_new {
        scope.max_new_proposals_per_2a = n;
    }
    if let Some(depth) = &flags.depth {
        scope.depth_limit = if depth == "unlimited" {
            None
        } else {
            match depth.parse::<u32>() {
                Ok(d) => Some(d),
                Err(_) => return config("--depth takes a number or \"unlimited\""),
            }
        };
    }
    if let Some(q) = &flags.quorums {
        if q == "majority" {
            scope.quorums = crate::domain::QuorumSpec::Majority;
        } else {
            let text = fs::read_to_string(q)
                .map_err(|e| CliError::Config(format!("cannot read quorum file: {e}")))?;
            let doc: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("malformed quorum file: {e}")))?;
            let wrapped = serde_json::json!({
                "variant": scope.variant.name(),
                "quorums": doc
            });
            let (parsed, _) =
                scope_from_json(&wrapped).map_err(|e| CliError::Config(e.to_string()))?;
            scope.quorums = parsed.quorums;
        }
    }

    scope
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok((scope, extras))
}

fn effective_state_cap(flag: Option<usize>, file: Option<usize>) -> usize {
    if let Some(n) = flag {
        return n;
    }
    if let Some(n) = file {
        return n;
    }
    if let Ok(s) = std::env::var(STATE_CAP_ENV) {
        if let Ok(n) = s.trim().parse::<usize>() {
            return n;
        }
    }
    DEFAULT_STATE_CAP
}

fn effective_workers(flag: Option<usize>) -> usize {
    flag.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
            .min(8)
    })
    .max(1)
}

fn make_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        None => Ok(Box::new(std::io::stdout().lock())),
        Some(path) => Ok(Box::new(std::io::BufWriter::new(fs::File::create(path)?))),
    }
}

fn check_format(format: &str) -> Result<bool, CliError> {
    match format {
        "human" => Ok(false),
        "json-lines" => Ok(true),
        other => config(format!("unknown format {other:?} (human | json-lines)")),
    }
}

fn run_explore(args: &RunArgs, inductive: bool) -> Result<i32, CliError> {
    let json = check_format(&args.format)?;
    let (scope, extras) = resolve_scope(&args.scope, None)?;
    let opts = ExploreOptions {
        checks: Default::default(),
        workers: effective_workers(args.workers),
        state_cap: effective_state_cap(args.state_cap, extras.state_cap),
        inductive,
    };
    let report = explore(&scope, &opts);
    let mut w = make_writer(&args.out)?;
    if json {
        format::emit_report_json(&mut w, &report)?;
    } else {
        format::emit_report_human(&mut w, &report, inductive)?;
    }
    w.flush()?;
    Ok(if report.has_violations() {
        EXIT_VIOLATION
    } else if report.state_cap_hit {
        EXIT_INCOMPLETE
    } else {
        EXIT_OK
    })
}

fn run_simulate(args: &SimArgs) -> Result<i32, CliError> {
    let json = check_format(&args.run.format)?;
    let (scope, _) = resolve_scope(&args.run.scope, None)?;
    let rec = simulate(&scope, args.seed, args.steps);
    let mut w = make_writer(&args.run.out)?;
    if json {
        format::emit_run_json(&mut w, &rec)?;
    } else {
        format::emit_run_human(&mut w, &rec)?;
    }
    w.flush()?;
    Ok(if rec.clean() { EXIT_OK } else { EXIT_VIOLATION })
}

fn run_scenario_cmd(args: &ScenarioArgs) -> Result<i32, CliError> {
    let json = check_format(&args.run.format)?;
    let base = scenario_scope(&args.name).map_err(|e| CliError::Config(e.to_string()))?;
    let (scope, _) = resolve_scope(&args.run.scope, Some(base))?;
    let rec = run_scenario(&args.name, &scope).map_err(|e| CliError::Config(e.to_string()))?;
    let mut w = make_writer(&args.run.out)?;
    if json {
        format::emit_run_json(&mut w, &rec)?;
    } else {
        format::emit_run_human(&mut w, &rec)?;
    }
    w.flush()?;
    Ok(if rec.clean() { EXIT_OK } else { EXIT_VIOLATION })
}

fn run_validate(args: &RunArgs) -> Result<i32, CliError> {
    let json = check_format(&args.format)?;
    let (scope, _) = resolve_scope(&args.scope, None)?;
    let mut w = make_writer(&args.out)?;
    if json {
        writeln!(w, "{}", format::scope_to_json(&scope))?;
    } else {
        writeln!(w, "scope ok: {}", format::human_scope_line(&scope))?;
        let quorums = scope.quorum_system();
        writeln!(w, "quorum system: {} quorums, pairwise intersecting", quorums.len())?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code.
pub fn run_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let result = match &cli.cmd {
        Cmd::Check(args) => run_explore(args, false),
        Cmd::Induct(args) => run_explore(args, true),
        Cmd::Simulate(args) => run_simulate(args),
        Cmd::Scenario(args) => run_scenario_cmd(args),
        Cmd::ValidateScope(args) => run_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
