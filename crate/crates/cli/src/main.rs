//! `gonosomal` command-line tool.
//!
//! Exit codes: 0 success, 1 domain-level failure (constraint violation,
//! solver mismatch, failed prediction, absorption at the start), 2 bad input.

mod predict;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gonosomal::dynamics::{iterate, outcome_trailer, trajectory_csv};
use gonosomal::fixed_points::{
    closed_form_fixed_points_hemophilia, closed_form_fixed_points_type11, closed_form_fixed_points_type21,
    solve_fixed_points_numeric, FamilyDescriptor,
};
use gonosomal::identities::check_identities;
use gonosomal::scenarios::SCENARIOS;
use gonosomal::{
    Algebra, FixedPointRecord, GonosomalError, IterationOptions, Operator, Outcome, Scenario, State,
};
use serde::Serialize;

/// Cross-check tolerance between closed-form and Newton fixed points.
const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "gonosomal",
    version,
    about = "Gonosomal algebras and their evolution operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (csv is available for `simulate` only).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for random algebras, random initial states and solver starts.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Maximum number of iteration steps.
    #[arg(long, global = true)]
    steps: Option<usize>,

    /// Convergence tolerance of the iteration.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Longest cycle period searched for.
    #[arg(long, global = true)]
    max_period: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure constants in an algebra file.
    Validate { path: PathBuf },
    /// Iterate W or V and write the trajectory.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "W")]
        operator: Operator,
        /// Initial state `x1,..,xn,y1,..,yν`; a seeded uniform simplex point if absent.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Option<Vec<f64>>,
    },
    /// Fixed points by closed form where one exists and by multi-start Newton.
    FixedPoints {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "W")]
        operator: Operator,
        /// Lattice points per axis for the Newton starts.
        #[arg(long, default_value_t = 4)]
        grid: usize,
    },
    /// Search for witnesses against the standard algebraic identities.
    Identities {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Predict the limit of a scenario orbit and confirm it by iteration.
    Predict {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Option<Vec<f64>>,
    },
    /// Built-in scenarios.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// List scenario tags and their parameters.
    List,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Algebra JSON file.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Scenario tag, see `scenario list`.
    #[arg(long)]
    scenario: Option<String>,
    /// Random stochastic algebra of type `n,nu` drawn from `--seed`.
    #[arg(long, value_parser = parse_type)]
    random: Option<(usize, usize)>,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
    #[arg(long)]
    delta1: Option<f64>,
    #[arg(long)]
    delta2: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
}

impl Params {
    fn given(&self) -> BTreeMap<String, f64> {
        [
            ("gamma", self.gamma),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("mu", self.mu),
            ("eta", self.eta),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }
}

fn parse_type(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected n,nu")?;
    let n = a.trim().parse().map_err(|e| format!("n: {e}"))?;
    let nu = b.trim().parse().map_err(|e| format!("nu: {e}"))?;
    Ok((n, nu))
}

/// Misuse of the command line that clap cannot catch. Exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

struct Loaded {
    spec: Algebra,
    scenario: Option<Scenario>,
}

fn load(source: &Source, params: &Params, seed: u64) -> Result<Loaded> {
    let given = params.given();
    if let Some(tag) = &source.scenario {
        let scenario = Scenario::from_tag(tag, &given)?;
        return Ok(Loaded {
            spec: scenario.build_algebra()?,
            scenario: Some(scenario),
        });
    }
    if !given.is_empty() {
        let names: Vec<&str> = given.keys().map(String::as_str).collect();
        return Err(usage(format!("parameters {} need --scenario", names.join(", "))));
    }
    let spec = match (&source.algebra, source.random) {
        (Some(path), _) => read_algebra(path)?,
        (None, Some((n, nu))) => Algebra::random_stochastic(n, nu, seed)?,
        _ => unreachable!("clap requires one source"),
    };
    Ok(Loaded { spec, scenario: None })
}

fn read_algebra(path: &Path) -> Result<Algebra> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Algebra::from_json(&text)?)
}

fn initial_state(spec: &Algebra, init: &Option<Vec<f64>>, seed: u64) -> Result<State> {
    match init {
        Some(v) if v.len() != spec.dim() => Err(GonosomalError::ShapeMismatch(format!(
            "--init has {} values, the algebra has dimension {}",
            v.len(),
            spec.dim()
        ))
        .into()),
        Some(v) => Ok(State::from_concat(spec.n(), v)),
        None => Ok(State::random_simplex(spec.n(), spec.nu(), seed)),
    }
}

fn options(cli: &Cli) -> IterationOptions<f64> {
    let mut o = IterationOptions::default();
    if let Some(s) = cli.steps {
        o.max_steps = s;
    }
    if let Some(t) = cli.tol {
        o.conv_tol = t;
    }
    if let Some(p) = cli.max_period {
        o.max_period = p;
    }
    o
}

fn json_only(cli: &Cli, cmd: &str) -> Result<()> {
    if cli.format == Some(Format::Csv) {
        return Err(usage(format!("{cmd} writes JSON only")));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<S: Serialize>(v: &S) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_validate(path: &Path) -> Result<ExitCode> {
    let spec = read_algebra(path)?;
    let report = spec.validate();
    println!("type ({}, {})", spec.n(), spec.nu());
    println!("gonosomal: {}", report.is_gonosomal);
    println!("stochastic: {}", report.is_stochastic);
    for v in &report.violations {
        println!("violation: {v}");
    }
    Ok(if report.is_gonosomal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_simulate(cli: &Cli, l: &Loaded, op: Operator, init: &Option<Vec<f64>>) -> Result<ExitCode> {
    let z0 = initial_state(&l.spec, init, cli.seed)?;
    let tr = iterate(&l.spec, &z0, op, &options(cli))?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => trajectory_csv(&tr),
        Format::Json => to_json(&tr)?,
    };
    emit(&cli.out, &text)?;
    let summary = outcome_trailer(&tr.outcome);
    if cli.out.is_some() {
        println!("{}", summary.trim_start_matches("# "));
    } else {
        eprintln!("{}", summary.trim_start_matches("# "));
    }
    if let Outcome::AbsorbedToO { step: 0 } = tr.outcome {
        eprintln!("error: the initial state lies in O (all female or all male coordinates are zero), where V is undefined");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ClosedFormSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<String>,
    points: Vec<FixedPointRecord<f64>>,
}

#[derive(Serialize)]
struct NumericSection {
    starts: usize,
    converged: usize,
    omega_violations: usize,
    points: Vec<FixedPointRecord<f64>>,
}

#[derive(Serialize)]
struct CrossCheck {
    max_mismatch: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct FixedPointReport {
    n: usize,
    nu: usize,
    operator: Operator,
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<Scenario>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedFormSection>,
    numeric: NumericSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheck>,
}

/// Moves a type-(2,1) record into the opposite algebra's coordinates.
fn swap_record(spec: &Algebra, r: &FixedPointRecord<f64>) -> FixedPointRecord<f64> {
    let rotate = |v: &[f64]| [&v[2..], &v[..2]].concat();
    let mut out = FixedPointRecord::new(spec, r.operator, r.point.swapped());
    out.family = r.family.as_ref().map(|f| FamilyDescriptor {
        base_point: rotate(&f.base_point),
        direction: rotate(&f.direction),
        parameter_range_tested: f.parameter_range_tested,
    });
    out
}

fn closed_form(l: &Loaded) -> Result<Option<ClosedFormSection>> {
    let Some(s) = l.scenario else { return Ok(None) };
    let section = |points| Some(ClosedFormSection { case: None, points });
    let r = match s {
        Scenario::LrLethal(p) => closed_form_fixed_points_type11(p.gamma).map(section),
        Scenario::LrMutation(p) => {
            closed_form_fixed_points_type11((1.0 - p.eta) / (2.0 - p.eta)).map(section)
        }
        Scenario::Hemophilia(p) => closed_form_fixed_points_hemophilia(p.mu, p.eta).map(section),
        Scenario::XlrecLethal(p) => closed_form_fixed_points_type21(p.gamma1, p.gamma2, p.delta1, p.delta2)
            .map(|c| {
                Some(ClosedFormSection {
                    case: Some(c.case),
                    points: c.records,
                })
            }),
        Scenario::XicInactivation(p) => {
            closed_form_fixed_points_type21(p.gamma1, p.gamma2, p.delta1, p.delta2).map(|c| {
                let points = c.records.iter().map(|r| swap_record(&l.spec, r)).collect();
                Some(ClosedFormSection {
                    case: Some(c.case),
                    points,
                })
            })
        }
    };
    match r {
        Ok(c) => Ok(c),
        // no closed form here: numeric only
        Err(GonosomalError::UncoveredCase(_) | GonosomalError::DegenerateParameter(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Largest scaled L1 distance from a point of one set to the other set.
/// Points on a closed-form family count as matched.
fn max_mismatch(closed: &[FixedPointRecord<f64>], numeric: &[FixedPointRecord<f64>]) -> f64 {
    let gap = |a: &State, b: &State| a.l1_dist(b) / (1.0 + a.l1_norm().min(b.l1_norm()));
    let to_closed = |p: &State| {
        closed
            .iter()
            .map(|c| match &c.family {
                Some(f) => f.distance(&p.to_concat()) / (1.0 + p.l1_norm()),
                None => gap(p, &c.point),
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut worst: f64 = 0.0;
    for r in numeric {
        worst = worst.max(to_closed(&r.point));
    }
    for c in closed.iter().filter(|c| c.family.is_none()) {
        let d = numeric
            .iter()
            .map(|r| gap(&c.point, &r.point))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    worst
}

fn cmd_fixed_points(cli: &Cli, l: &Loaded, op: Operator, grid: usize) -> Result<ExitCode> {
    json_only(cli, "fixed-points")?;
    let num = solve_fixed_points_numeric(&l.spec, op, grid, cli.seed)?;
    let closed = if op == Operator::W { closed_form(l)? } else { None };
    let cross_check = closed.as_ref().map(|c| {
        let m = max_mismatch(&c.points, &num.records);
        CrossCheck {
            max_mismatch: m,
            tolerance: CROSS_CHECK_TOL,
            pass: m <= CROSS_CHECK_TOL,
        }
    });
    let failed = cross_check.as_ref().is_some_and(|c| !c.pass);
    let report = FixedPointReport {
        n: l.spec.n(),
        nu: l.spec.nu(),
        operator: op,
        scenario: l.scenario,
        closed_form: closed,
        numeric: NumericSection {
            starts: num.starts,
            converged: num.converged,
            omega_violations: num.omega_violations,
            points: num.records,
        },
        cross_check,
    };
    emit(&cli.out, &to_json(&report)?)?;
    if failed {
        eprintln!("error: closed-form and Newton fixed points differ by more than {CROSS_CHECK_TOL:e}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_identities(cli: &Cli, l: &Loaded, samples: usize) -> Result<ExitCode> {
    json_only(cli, "identities")?;
    let report = check_identities(&l.spec, samples, cli.seed);
    emit(&cli.out, &to_json(&report)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ScenarioInfo {
    tag: &'static str,
    params: &'static [&'static str],
    description: &'static str,
}

fn cmd_scenario_list(cli: &Cli) -> Result<ExitCode> {
    let text = if cli.format == Some(Format::Json) {
        let list: Vec<ScenarioInfo> = SCENARIOS
            .iter()
            .map(|&(tag, params, description)| ScenarioInfo {
                tag,
                params,
                description,
            })
            .collect();
        to_json(&list)?
    } else {
        SCENARIOS
            .iter()
            .map(|(tag, params, desc)| format!("{tag:<18} {:<30} {desc}\n", params.join(",")))
            .collect()
    };
    emit(&cli.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Validate { path } => cmd_validate(path),
        Command::Simulate {
            source,
            params,
            operator,
            init,
        } => {
            let l = load(source, params, cli.seed)?;
            cmd_simulate(cli, &l, *operator, init)
        }
        Command::FixedPoints {
            source,
            params,
            operator,
            grid,
        } => {
            let l = load(source, params, cli.seed)?;
            cmd_fixed_points(cli, &l, *operator, *grid)
        }
        Command::Identities {
            source,
            params,
            samples,
        } => {
            let l = load(source, params, cli.seed)?;
            cmd_identities(cli, &l, *samples)
        }
        Command::Predict { source, params, init } => {
            json_only(cli, "predict")?;
            let l = load(source, params, cli.seed)?;
            let scenario = l.scenario.ok_or_else(|| usage("predict needs --scenario"))?;
            let z0 = initial_state(&l.spec, init, cli.seed)?;
            let report = predict::run(scenario, &l.spec, &z0, &options(cli))?;
            emit(&cli.out, &to_json(&report)?)?;
            if !report.agree {
                eprintln!("error: iteration disagrees with the prediction");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenario {
            command: ScenarioCommand::List,
        } => cmd_scenario_list(cli),
    }
}

/// 2 for malformed input, 1 for everything the domain rejects.
fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some()
        || e.downcast_ref::<std::io::Error>().is_some()
        || e.downcast_ref::<serde_json::Error>().is_some()
    {
        return 2;
    }
    match e.downcast_ref::<GonosomalError>() {
        Some(
            GonosomalError::Parse(_)
            | GonosomalError::ShapeMismatch(_)
            | GonosomalError::InvalidParameter(_)
            | GonosomalError::NotInSimplex(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
