mod guard;
mod report;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use blobcx::coefficients::{builtin, from_json, to_json, CategoryPresentation};
use blobcx::fields::BoundaryCondition;
use blobcx::hocolim::{model_homology, ordinary_colimit, stabilization_sweep, Model};
use blobcx::hochschild::hochschild_dims;
use blobcx::manifold::{ComponentKind, OneManifold};
use clap::{Parser, Subcommand, ValueEnum};

use report::{Report, Timings};

const DEFAULT_MAX_CELLS: usize = 5_000_000;

/// Blob complexes of 1-manifolds with coefficients in a linear category.
#[derive(Parser)]
#[command(name = "blobcx", version)]
struct Cli {
    /// Print a table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a coefficient file.
    Validate { path: PathBuf },
    /// Homology of one model on one manifold.
    Homology {
        #[command(flatten)]
        common: Common,
        /// Manifold literal, e.g. `circle:3+interval:2`. Components written
        /// without a count take `--points`.
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_enum, default_value = "blob")]
        model: CliModel,
        /// Degrees below K are reported; the complex is built through K.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// `START,END` or `COMPONENT:START,END`: objects at the two ends of
        /// an interval (all intervals when no component is given).
        #[arg(long)]
        fix_boundary: Vec<String>,
    },
    /// Blob, hocolim and Hochschild homology of a circle in degrees ≤ K.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "circle")]
        manifold: String,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
    },
    /// Homology of circle:N for a range of N, with convergence flags.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `LO..HI`, inclusive.
        #[arg(long, default_value = "2..5")]
        points: String,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "hocolim")]
        model: SweepModel,
    },
    /// Coefficient presentations.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// Print a built-in presentation in the coefficient file format.
    Builtin { name: String },
}

#[derive(clap::Args)]
struct Common {
    /// `builtin:<name>` or a path to a coefficient file.
    #[arg(long)]
    coeff: String,
    /// Refuse when a degree would exceed this many basis elements.
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliModel {
    Blob,
    Hocolim,
    Colimit,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepModel {
    Blob,
    Hocolim,
}

impl From<SweepModel> for Model {
    fn from(m: SweepModel) -> Model {
        match m {
            SweepModel::Blob => Model::Blob,
            SweepModel::Hocolim => Model::Hocolim,
        }
    }
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    fn parse(message: impl Into<String>) -> Exit {
        Exit { code: 3, message: message.into() }
    }
}

impl From<blobcx::Error> for Exit {
    fn from(e: blobcx::Error) -> Exit {
        use blobcx::Error as E;
        let code = match e {
            E::Parse { .. } | E::Manifold(_) | E::UnknownBuiltin(_) | E::BadScalar(_) | E::ZeroDenominator(..) | E::NotPrime(_) => 3,
            E::Presentation(_) | E::InvalidPath(_) | E::NotOneObject(_) => 2,
            _ => 1,
        };
        Exit { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Exit {
        Exit { code: 1, message: format!("{e:#}") }
    }
}

enum Output {
    Report(Report, u8),
    Raw(String),
}

type Outcome = Result<(Report, u8), Exit>;

struct Coefficients {
    label: String,
    presentation: CategoryPresentation,
}

fn load_coefficients(spec: &str) -> Result<Coefficients, Exit> {
    let presentation = match spec.strip_prefix("builtin:") {
        Some(name) => builtin(name)?,
        None => {
            let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
            from_json(&text)?
        }
    };
    if let Err(report) = presentation.validate() {
        let mut message = format!("{} violation(s) in {}", report.total, presentation.name());
        for v in &report.violations {
            message.push_str("\n  ");
            message.push_str(&presentation.describe(v));
        }
        return Err(Exit { code: 2, message });
    }
    Ok(Coefficients {
        label: spec.to_string(),
        presentation,
    })
}

fn boundary_condition(w: &OneManifold, c: &CategoryPresentation, specs: &[String]) -> Result<BoundaryCondition, Exit> {
    let mut b = BoundaryCondition::free();
    let object = |s: &str| -> Result<usize, Exit> {
        let s = s.trim();
        c.object_id(s)
            .or_else(|| s.parse().ok().filter(|&i: &usize| i < c.object_count()))
            .ok_or_else(|| Exit::parse(format!("unknown object {s:?}")))
    };
    for spec in specs {
        let (comps, ends) = match spec.split_once(':') {
            Some((comp, ends)) => (vec![comp.trim().parse::<usize>().map_err(|_| Exit::parse(format!("bad component in {spec:?}")))?], ends),
            None => (
                (0..w.components().len()).filter(|&i| w.component(i).kind == ComponentKind::Interval).collect(),
                spec.as_str(),
            ),
        };
        let (start, end) = ends.split_once(',').ok_or_else(|| Exit::parse(format!("expected START,END in {spec:?}")))?;
        let (start, end) = (object(start)?, object(end)?);
        for comp in comps {
            if w.components().get(comp).is_none_or(|c| c.kind != ComponentKind::Interval) {
                return Err(Exit::parse(format!("component {comp} of {w} is not an interval")));
            }
            b = b.fix(comp, start, end);
        }
    }
    Ok(b)
}

fn betti(dims: &[usize]) -> BTreeMap<usize, usize> {
    dims.iter().copied().enumerate().collect()
}

fn truncation_warning(max_degree: usize, points: usize) -> Option<String> {
    (max_degree >= points).then(|| format!("max degree {max_degree} ≥ {points} points: the truncation may not have converged"))
}

fn homology(common: &Common, manifold: &str, points: Option<usize>, model: CliModel, max_degree: usize, fix: &[String]) -> Outcome {
    let start = Instant::now();
    let coeff = load_coefficients(&common.coeff)?;
    let w = OneManifold::parse_with_points(manifold, points)?;
    let c = &coeff.presentation;
    let boundary = boundary_condition(&w, c, fix)?;
    let mut timings = Timings::default();
    timings.record("load", start);
    let n = w.components().iter().map(|c| c.points).max().unwrap_or(0);
    let mut report = Report::new("homology", &coeff.label, c, Some(&w), Some(n), max_degree);
    let start = Instant::now();
    let dims = match model {
        CliModel::Blob | CliModel::Hocolim => {
            let model = if matches!(model, CliModel::Blob) { Model::Blob } else { Model::Hocolim };
            guard::check(model, &w, c, max_degree, &boundary, common.max_cells)?;
            if max_degree == 0 {
                Vec::new()
            } else {
                model_homology(model, &w, c, max_degree - 1, &boundary)?
            }
        }
        CliModel::Colimit => {
            guard::check(Model::Hocolim, &w, c, 0, &boundary, common.max_cells)?;
            vec![ordinary_colimit(&w, c, &boundary)?.dimension]
        }
    };
    timings.record("compute", start);
    report.model = Some(
        match model {
            CliModel::Blob => "blob",
            CliModel::Hocolim => "hocolim",
            CliModel::Colimit => "colimit",
        }
        .into(),
    );
    report.betti = Some(serde_json::to_value(betti(&dims)).unwrap());
    report.timings_ms = timings;
    if w.components().iter().any(|c| c.kind == ComponentKind::Circle) {
        report.warnings.extend(truncation_warning(max_degree, n));
    }
    Ok((report, 0))
}

fn compare(common: &Common, manifold: &str, points: Option<usize>, max_degree: usize) -> Outcome {
    let start = Instant::now();
    let coeff = load_coefficients(&common.coeff)?;
    let w = OneManifold::parse_with_points(manifold, points)?;
    if w.components().len() != 1 || w.component(0).kind != ComponentKind::Circle {
        return Err(Exit::parse(format!("compare needs a single circle, got {w}")));
    }
    let c = &coeff.presentation;
    let n = w.component(0).points;
    let free = BoundaryCondition::free();
    let mut timings = Timings::default();
    timings.record("load", start);
    for model in [Model::Blob, Model::Hocolim] {
        guard::check(model, &w, c, max_degree + 1, &free, common.max_cells)?;
    }
    let mut columns = BTreeMap::new();
    for (name, model) in [("blob", Model::Blob), ("hocolim", Model::Hocolim)] {
        let start = Instant::now();
        columns.insert(name, model_homology(model, &w, c, max_degree, &free)?);
        timings.record(name, start);
    }
    let start = Instant::now();
    columns.insert("hochschild", hochschild_dims(c, max_degree)?.dims);
    timings.record("hochschild", start);
    let equal: BTreeMap<usize, bool> = (0..=max_degree)
        .map(|k| (k, columns.values().all(|d| d[k] == columns["blob"][k])))
        .collect();
    let mut report = Report::new("compare", &coeff.label, c, Some(&w), Some(n), max_degree);
    report.model = Some("blob,hocolim,hochschild".into());
    report.betti = Some(serde_json::to_value(columns.iter().map(|(k, d)| (*k, betti(d))).collect::<BTreeMap<_, _>>()).unwrap());
    report.equal = Some(equal.clone());
    report.warnings.extend(truncation_warning(max_degree, n));
    report.timings_ms = timings;
    let mismatched: Vec<String> = equal
        .iter()
        .filter(|(_, ok)| !**ok)
        .map(|(k, _)| {
            let values: Vec<String> = columns.iter().map(|(m, d)| format!("{m}={}", d[*k])).collect();
            format!("degree {k}: {}", values.join(" "))
        })
        .collect();
    if mismatched.is_empty() {
        Ok((report, 0))
    } else {
        report.diff = mismatched;
        Ok((report, 5))
    }
}

fn parse_range(s: &str) -> Result<Vec<usize>, Exit> {
    let bad = || Exit::parse(format!("expected LO..HI, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (usize, usize) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn sweep(common: &Common, points: &str, max_degree: usize, model: Model) -> Outcome {
    let start = Instant::now();
    let coeff = load_coefficients(&common.coeff)?;
    let c = &coeff.presentation;
    let range = parse_range(points)?;
    if *range.last().unwrap() < 3 {
        return Err(Exit::parse("a sweep needs at least 3 points at the top of its range"));
    }
    let mut timings = Timings::default();
    timings.record("load", start);
    for &n in &range {
        guard::check(model, &OneManifold::circle(n)?, c, max_degree + 1, &BoundaryCondition::free(), common.max_cells)?;
    }
    let start = Instant::now();
    let table = stabilization_sweep(&range, c, max_degree, model)?;
    timings.record("sweep", start);
    let start = Instant::now();
    let oracle = hochschild_dims(c, max_degree)?.dims;
    timings.record("hochschild", start);
    let mut report = Report::new("sweep", &coeff.label, c, None, range.last().copied(), max_degree);
    report.model = Some(format!("{model:?}").to_lowercase());
    report.betti = Some(serde_json::to_value(table.rows.iter().map(|r| (r.points, betti(&r.dims))).collect::<BTreeMap<_, _>>()).unwrap());
    report.converged = Some(table.converged.iter().copied().enumerate().collect());
    let verdict: BTreeMap<usize, report::Verdict> = (0..=max_degree)
        .map(|k| {
            (
                k,
                report::Verdict {
                    oracle: oracle[k],
                    last: table.last[k],
                    converged: table.converged[k],
                    monotone: table.monotone[k],
                    agrees: table.last[k] == oracle[k],
                },
            )
        })
        .collect();
    let failed = verdict.values().any(|v| v.converged && !v.agrees);
    for (k, v) in &verdict {
        if !v.converged {
            report.warnings.push(format!(
                "degree {k} has not converged by N = {} ({})",
                range.last().unwrap(),
                if v.monotone { "monotone trend" } else { "not monotone" }
            ));
        }
    }
    report.verdict = Some(verdict);
    report.timings_ms = timings;
    Ok((report, if failed { 5 } else { 0 }))
}

fn validate(path: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let c = from_json(&text)?;
    let mut report = Report::new("validate", &path.display().to_string(), &c, None, None, 0);
    report.max_degree = None;
    match c.validate() {
        Ok(()) => {
            report.valid = Some(true);
            Ok((report, 0))
        }
        Err(v) => {
            report.valid = Some(false);
            report.violations = v.violations.iter().map(|x| c.describe(x)).collect();
            report.total_violations = Some(v.total);
            Ok((report, 2))
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Exit> {
    let (report, code) = match &cli.command {
        Command::Validate { path } => validate(path)?,
        Command::Homology {
            common,
            manifold,
            points,
            model,
            max_degree,
            fix_boundary,
        } => homology(common, manifold, *points, *model, *max_degree, fix_boundary)?,
        Command::Compare {
            common,
            manifold,
            points,
            max_degree,
        } => compare(common, manifold, *points, *max_degree)?,
        Command::Sweep {
            common,
            points,
            max_degree,
            model,
        } => sweep(common, points, *max_degree, (*model).into())?,
        Command::Algebra {
            action: AlgebraAction::Builtin { name },
        } => return Ok(Output::Raw(to_json(&builtin(name)?))),
    };
    Ok(Output::Report(report, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Output::Raw(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(report, code)) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if cli.pretty {
                print!("{}", report.pretty());
            } else {
                println!("{}", report.json());
            }
            if code == 5 {
                for line in &report.diff {
                    eprintln!("mismatch: {line}");
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
