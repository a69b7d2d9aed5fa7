//! Batch command-line front end.
//!
//! Every subcommand prints one machine-readable document (JSON or CSV).
//! Exit status: 0 on success, 1 on usage errors, 2 when a computation hits
//! a limit or cannot produce a result.

use std::f64::consts::FRAC_PI_4;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{BellError, Result};
use crate::families::{catalog, gen_as, gen_d, CATALOG_NAMES};
use crate::format::{
    format_sig, inequality_from_str, inequality_to_json, rational_to_json, round_sig,
};
use crate::inequality::{AnyInequality, CorrelationInequality, LocalBound};
use crate::local::{facet_check, local_bound_correlation, local_bound_probability, PolytopeSpace};
use crate::optimizer::{
    detection_threshold, detection_value, optimized_detection_value, seesaw_value,
    visibility_threshold, DetectionModel, EfficiencyShape, OptimizerConfig,
};
use crate::shb::{
    shb_correlation_form, shb_inequality, shb_local_formula, shb_local_oracle, shb_quantum_score,
};

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "BELLKIT_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bellkit",
    version,
    about = "Local bounds, facets, quantum values and thresholds of bipartite Bell inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub run: RunArgs,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Seed for the optimizer's random starts (default: $BELLKIT_SEED or 0)
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of see-saw restarts (default: 32 up to ten inputs, 128 beyond)
    #[arg(long, global = true)]
    pub restarts: Option<usize>,

    /// Stop when an iteration improves the value by less than this
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_iters: usize,

    /// Output format (default depends on the subcommand)
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Significant digits of printed reals (1..=15)
    #[arg(long, global = true, default_value_t = 6,
          value_parser = clap::value_parser!(u8).range(1..=15))]
    pub precision: u8,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    As,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum PlotKind {
    VisibilityVsN,
    DetectionVsTheta,
    BellvalueVsEta,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Catalog name (CHSH, AS4, ..., S3x4)
    #[arg(long, conflicts_with = "file")]
    pub name: Option<String>,

    /// Inequality JSON file
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in inequalities, or print one
    Catalog {
        #[arg(long)]
        name: Option<String>,
    },
    /// Generate an AS_n or D inequality
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Inputs per side (AS)
        #[arg(long)]
        n: Option<usize>,
        /// First row, comma separated (D)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        row: Vec<i64>,
    },
    /// Exact local bound by enumeration
    Bound {
        #[command(flatten)]
        source: Source,
    },
    /// Facet certification by exact affine rank
    Facet {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "full")]
        space: PolytopeSpace,
    },
    /// Quantum value by see-saw over unit vectors
    Qvalue {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Include the per-iteration trace and per-restart values
        #[arg(long)]
        verbose: bool,
    },
    /// Critical visibility S_lhv / Q
    Visibility {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        family: Option<Family>,
        /// Comma-separated AS sizes
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Detection-efficiency threshold
    Detection {
        #[command(flatten)]
        source: Source,
        /// Entanglement angle in radians, or `max`
        #[arg(long, default_value = "max")]
        theta: String,
        /// Equal efficiencies on both sides (default unless --eta-b is given)
        #[arg(long, conflicts_with = "eta_b")]
        symmetric: bool,
        /// Fix Bob's efficiency and scan Alice's
        #[arg(long)]
        eta_b: Option<f64>,
    },
    /// The guessing game: local bounds, oracle, quantum score
    Shb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Also run the brute-force oracle over all strategies
        #[arg(long)]
        oracle: bool,
        /// Emit the 3x4 correlation form (n=3, m=2 only)
        #[arg(long)]
        correlation_form: bool,
    },
    /// Tables for external plotting
    Plot {
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        theta: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        eta: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

/// Resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: Option<usize>,
    pub tol: f64,
    pub max_iters: usize,
    pub format: Option<OutputFormat>,
    pub precision: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let seed = match args.seed {
            Some(s) => s,
            None => match std::env::var(SEED_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| {
                    BellError::Parse(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))
                })?,
                Err(_) => 0,
            },
        };
        Ok(Self {
            seed,
            restarts: args.restarts,
            tol: args.tol,
            max_iters: args.max_iters,
            format: args.format,
            precision: args.precision as usize,
            output: args.output.clone(),
        })
    }

    fn optimizer(&self, ineq: &CorrelationInequality) -> OptimizerConfig {
        let base = OptimizerConfig::for_inequality(ineq);
        OptimizerConfig {
            restarts: self.restarts.unwrap_or(base.restarts),
            tol: self.tol,
            max_iters: self.max_iters,
            seed: self.seed,
        }
    }

    fn num(&self, x: f64) -> Value {
        json!(round_sig(x, self.precision))
    }

    fn text(&self, x: f64) -> String {
        format_sig(x, self.precision)
    }
}

/// A rendered result.
enum Output {
    Json(Value),
    Csv {
        header: Vec<String>,
        rows: Vec<Vec<String>>,
    },
}

impl Output {
    fn csv(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Output::Csv {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    fn render(&self) -> String {
        match self {
            Output::Json(v) => format!("{v}\n"),
            Output::Csv { header, rows } => {
                let mut out = header.join(",");
                out.push('\n');
                for r in rows {
                    out.push_str(&r.join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Parse `argv` (program name first), run, and write to the given streams.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = RunConfig::from_args(&cli.run).and_then(|cfg| {
        let out = execute(&cli.command, &cfg)?;
        let text = out.render();
        match &cfg.output {
            Some(path) => std::fs::write(path, text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Process entry point.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn exit_code(e: &BellError) -> i32 {
    match e {
        BellError::TooLarge(_) | BellError::NoViolation(_) | BellError::Io(_) => EXIT_COMPUTATION,
        _ => EXIT_USAGE,
    }
}

fn load(source: &Source) -> Result<AnyInequality> {
    match (&source.name, &source.file) {
        (Some(name), _) => Ok(catalog(name)?.into()),
        (None, Some(path)) => inequality_from_str(&std::fs::read_to_string(path)?),
        (None, None) => Err(BellError::Invalid("give --name or --file".into())),
    }
}

/// A correlation inequality with a bound, enumerating one if the file lacks it.
fn load_correlation(source: &Source) -> Result<CorrelationInequality> {
    let ineq = load(source)?.as_correlation()?.clone();
    if ineq.bound().is_some() {
        return Ok(ineq);
    }
    let bound = local_bound_correlation(&ineq)?;
    Ok(ineq.with_bound(LocalBound::exact(bound)))
}

fn parse_theta(s: &str) -> Result<f64> {
    let theta = match s.trim() {
        "max" => FRAC_PI_4,
        t => t
            .parse::<f64>()
            .map_err(|_| BellError::Parse(format!("`{t}` is not an angle (radians or `max`)")))?,
    };
    if !(0.0..=FRAC_PI_4 + 1e-12).contains(&theta) {
        return Err(BellError::Invalid(format!(
            "theta {theta} outside [0, π/4]"
        )));
    }
    Ok(theta.min(FRAC_PI_4))
}

fn wants_csv(cfg: &RunConfig, default: OutputFormat) -> bool {
    cfg.format.unwrap_or(default) == OutputFormat::Csv
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Command::Catalog { name } => cmd_catalog(name.as_deref(), cfg),
        Command::Gen { family, n, row } => {
            let ineq = match family {
                Family::As => {
                    gen_as(n.ok_or_else(|| BellError::Invalid("--family as needs --n".into()))?)?
                }
                Family::D => gen_d(row)?,
            };
            single_json(cfg, inequality_to_json(&ineq.into()))
        }
        Command::Bound { source } => cmd_bound(source, cfg),
        Command::Facet { source, space } => {
            let ineq = match load(source)? {
                AnyInequality::Correlation(c) if c.bound().is_none() => {
                    let b = local_bound_correlation(&c)?;
                    c.with_bound(LocalBound::exact(b)).into()
                }
                AnyInequality::Probability(p) if p.bound().is_none() => {
                    let b = local_bound_probability(&p)?;
                    p.with_bound(LocalBound::exact(b)).into()
                }
                other => other,
            };
            let report = facet_check(&ineq, *space)?;
            if wants_csv(cfg, OutputFormat::Json) {
                return Ok(Output::csv(
                    &[
                        "name",
                        "is_facet",
                        "polytope_dim",
                        "saturating_vertices",
                        "affine_rank",
                        "space",
                    ],
                    vec![vec![
                        ineq.name().to_string(),
                        report.is_facet.to_string(),
                        report.polytope_dim.to_string(),
                        report.saturating_vertex_count.to_string(),
                        report.affine_rank.to_string(),
                        format!("{:?}", report.space).to_lowercase(),
                    ]],
                ));
            }
            Ok(Output::Json(serde_json::to_value(report)?))
        }
        Command::Qvalue {
            source,
            dim,
            verbose,
        } => cmd_qvalue(source, *dim, *verbose, cfg),
        Command::Visibility {
            source,
            family,
            n,
            dim,
        } => cmd_visibility(source, *family, n, *dim, cfg),
        Command::Detection {
            source,
            theta,
            symmetric: _,
            eta_b,
        } => cmd_detection(source, theta, *eta_b, cfg),
        Command::Shb {
            n,
            m,
            oracle,
            correlation_form,
        } => cmd_shb(*n, *m, *oracle, *correlation_form, cfg),
        Command::Plot {
            kind,
            name,
            n,
            theta,
            eta,
            dim,
        } => emit_plot_data(*kind, name.as_deref(), n, theta, eta, *dim, cfg),
    }
}

fn single_json(cfg: &RunConfig, v: Value) -> Result<Output> {
    if wants_csv(cfg, OutputFormat::Json) {
        return Err(BellError::Invalid("this subcommand only emits JSON".into()));
    }
    Ok(Output::Json(v))
}

fn cmd_catalog(name: Option<&str>, cfg: &RunConfig) -> Result<Output> {
    if let Some(name) = name {
        return single_json(cfg, inequality_to_json(&catalog(name)?.into()));
    }
    let entries = CATALOG_NAMES
        .iter()
        .map(|&n| catalog(n))
        .collect::<Result<Vec<_>>>()?;
    if wants_csv(cfg, OutputFormat::Json) {
        return Ok(Output::csv(
            &["name", "mA", "mB", "bound"],
            entries
                .iter()
                .map(|c| {
                    vec![
                        c.name().to_string(),
                        c.m_a().to_string(),
                        c.m_b().to_string(),
                        c.bound().map(|b| b.value.to_string()).unwrap_or_default(),
                    ]
                })
                .collect(),
        ));
    }
    Ok(Output::Json(Value::Array(
        entries
            .iter()
            .map(|c| {
                json!({
                    "name": c.name(),
                    "mA": c.m_a(),
                    "mB": c.m_b(),
                    "bound": c.bound().map(|b| rational_to_json(b.value)),
                })
            })
            .collect(),
    )))
}

fn cmd_bound(source: &Source, cfg: &RunConfig) -> Result<Output> {
    let ineq = load(source)?;
    let bound = match &ineq {
        AnyInequality::Correlation(c) => local_bound_correlation(c)?,
        AnyInequality::Probability(p) => local_bound_probability(p)?,
    };
    if wants_csv(cfg, OutputFormat::Json) {
        return Ok(Output::csv(
            &["name", "bound"],
            vec![vec![ineq.name().to_string(), bound.to_string()]],
        ));
    }
    Ok(Output::Json(
        json!({"name": ineq.name(), "bound": rational_to_json(bound)}),
    ))
}

fn cmd_qvalue(source: &Source, dim: usize, verbose: bool, cfg: &RunConfig) -> Result<Output> {
    let ineq = load_correlation(source)?;
    let out = seesaw_value(&ineq, dim, &cfg.optimizer(&ineq))?;
    if wants_csv(cfg, OutputFormat::Json) {
        return Ok(Output::csv(
            &["name", "dim", "value"],
            vec![vec![
                ineq.name().to_string(),
                dim.to_string(),
                cfg.text(out.value),
            ]],
        ));
    }
    let vectors = |vs: &[Vec<f64>]| -> Value {
        Value::Array(
            vs.iter()
                .map(|v| Value::Array(v.iter().map(|&c| cfg.num(c)).collect()))
                .collect(),
        )
    };
    let mut map = Map::new();
    map.insert("name".into(), json!(ineq.name()));
    map.insert("dim".into(), json!(dim));
    map.insert("value".into(), cfg.num(out.value));
    map.insert(
        "strategy".into(),
        json!({
            "dim": out.strategy.dim,
            "a": vectors(&out.strategy.a_vectors),
            "b": vectors(&out.strategy.b_vectors),
            "visibility": cfg.num(out.strategy.visibility),
        }),
    );
    if verbose {
        map.insert(
            "trace".into(),
            Value::Array(out.trace.iter().map(|&v| cfg.num(v)).collect()),
        );
        map.insert(
            "restart_values".into(),
            Value::Array(out.restart_values.iter().map(|&v| cfg.num(v)).collect()),
        );
    }
    Ok(Output::Json(Value::Object(map)))
}

struct VisibilityRow {
    label: String,
    n: Option<usize>,
    visibility: f64,
    quantum_value: f64,
    bound: f64,
    conjectured: bool,
}

fn visibility_rows(
    source: &Source,
    family: Option<Family>,
    sizes: &[usize],
    dim: usize,
    cfg: &RunConfig,
) -> Result<Vec<VisibilityRow>> {
    let targets: Vec<(Option<usize>, CorrelationInequality)> = match family {
        Some(Family::As) => {
            if sizes.is_empty() {
                return Err(BellError::Invalid("--family as needs --n".into()));
            }
            sizes
                .iter()
                .map(|&n| Ok((Some(n), gen_as(n)?)))
                .collect::<Result<_>>()?
        }
        Some(Family::D) => {
            return Err(BellError::Invalid(
                "visibility scans over --n are defined for the AS family".into(),
            ))
        }
        None => vec![(None, load_correlation(source)?)],
    };
    targets
        .into_iter()
        .map(|(n, ineq)| {
            let v = visibility_threshold(&ineq, dim, &cfg.optimizer(&ineq))?;
            Ok(VisibilityRow {
                label: ineq.name().to_string(),
                n,
                visibility: v.visibility,
                quantum_value: v.quantum_value,
                bound: v.local_bound,
                conjectured: v.conjectured,
            })
        })
        .collect()
}

fn cmd_visibility(
    source: &Source,
    family: Option<Family>,
    sizes: &[usize],
    dim: usize,
    cfg: &RunConfig,
) -> Result<Output> {
    let rows = visibility_rows(source, family, sizes, dim, cfg)?;
    if wants_csv(cfg, OutputFormat::Csv) {
        return Ok(Output::csv(
            &[
                "n",
                "visibility",
                "quantum_value",
                "local_bound",
                "conjectured",
            ],
            rows.iter()
                .map(|r| {
                    vec![
                        r.n.map_or_else(|| r.label.clone(), |n| n.to_string()),
                        cfg.text(r.visibility),
                        cfg.text(r.quantum_value),
                        cfg.text(r.bound),
                        r.conjectured.to_string(),
                    ]
                })
                .collect(),
        ));
    }
    Ok(Output::Json(Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "name": r.label,
                    "n": r.n,
                    "visibility": cfg.num(r.visibility),
                    "quantum_value": cfg.num(r.quantum_value),
                    "local_bound": cfg.num(r.bound),
                    "conjectured": r.conjectured,
                })
            })
            .collect(),
    )))
}

fn cmd_detection(
    source: &Source,
    theta: &str,
    eta_b: Option<f64>,
    cfg: &RunConfig,
) -> Result<Output> {
    let ineq = load_correlation(source)?;
    let theta = parse_theta(theta)?;
    let shape = match eta_b {
        Some(e) => EfficiencyShape::FixedBob(e),
        None => EfficiencyShape::Symmetric,
    };
    let r = detection_threshold(&ineq, theta, shape, &cfg.optimizer(&ineq))?;
    if wants_csv(cfg, OutputFormat::Json) {
        return Ok(Output::csv(
            &["name", "theta", "eta_star"],
            vec![vec![
                ineq.name().to_string(),
                cfg.text(theta),
                cfg.text(r.eta_star),
            ]],
        ));
    }
    Ok(Output::Json(json!({
        "name": ineq.name(),
        "theta": cfg.num(theta),
        "shape": match shape {
            EfficiencyShape::Symmetric => "symmetric",
            EfficiencyShape::FixedBob(_) => "fixed_eta_b",
        },
        "eta_b": eta_b.map(|e| cfg.num(e)),
        "eta_star": cfg.num(r.eta_star),
        "alice_angles": r.alice_angles.iter().map(|&a| cfg.num(a)).collect::<Vec<_>>(),
        "bob_angles": r.bob_angles.iter().map(|&b| cfg.num(b)).collect::<Vec<_>>(),
    })))
}

fn cmd_shb(
    n: usize,
    m: usize,
    oracle: bool,
    correlation_form: bool,
    cfg: &RunConfig,
) -> Result<Output> {
    if correlation_form {
        if (n, m) != (3, 2) {
            return Err(BellError::Invalid(
                "--correlation-form is defined for n=3, m=2".into(),
            ));
        }
        return single_json(cfg, inequality_to_json(&shb_correlation_form()?.into()));
    }
    let ineq = shb_inequality(n, m)?;
    let mut map = Map::new();
    map.insert("n".into(), json!(n));
    map.insert("m".into(), json!(m));
    map.insert(
        "local_bound".into(),
        ineq.bound()
            .map_or(Value::Null, |b| rational_to_json(b.value)),
    );
    map.insert("formula".into(), json!(shb_local_formula(n) as u64));
    if oracle {
        map.insert("oracle".into(), json!(shb_local_oracle(n, m)?));
    }
    if n == 2 {
        map.insert("quantum_score".into(), cfg.num(shb_quantum_score(m)?.score));
    }
    if wants_csv(cfg, OutputFormat::Json) {
        let keys: Vec<&str> = map.keys().map(String::as_str).collect();
        let row = map
            .values()
            .map(|v| match v {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        return Ok(Output::csv(&keys, vec![row]));
    }
    Ok(Output::Json(Value::Object(map)))
}

/// Build one of the plotting tables. Rows are deterministic for a fixed seed.
fn emit_plot_data(
    kind: PlotKind,
    name: Option<&str>,
    sizes: &[usize],
    thetas: &[String],
    etas: &[f64],
    dim: usize,
    cfg: &RunConfig,
) -> Result<Output> {
    if cfg.format == Some(OutputFormat::Json) {
        return Err(BellError::Invalid("plot tables are emitted as CSV".into()));
    }
    let ineq_or_chsh = || -> Result<CorrelationInequality> { catalog(name.unwrap_or("CHSH")) };
    match kind {
        PlotKind::VisibilityVsN => {
            let sizes = if sizes.is_empty() {
                vec![2, 4, 6, 8, 10]
            } else {
                sizes.to_vec()
            };
            let rows = visibility_rows(
                &Source {
                    name: None,
                    file: None,
                },
                Some(Family::As),
                &sizes,
                dim,
                cfg,
            )?;
            Ok(Output::csv(
                &["n", "visibility", "conjectured"],
                rows.iter()
                    .map(|r| {
                        vec![
                            r.n.unwrap_or_default().to_string(),
                            cfg.text(r.visibility),
                            r.conjectured.to_string(),
                        ]
                    })
                    .collect(),
            ))
        }
        PlotKind::DetectionVsTheta => {
            let ineq = ineq_or_chsh()?;
            let thetas: Vec<f64> = if thetas.is_empty() {
                vec![FRAC_PI_4, 0.5, 0.3, 0.1]
            } else {
                thetas
                    .iter()
                    .map(|t| parse_theta(t))
                    .collect::<Result<_>>()?
            };
            let opt = cfg.optimizer(&ineq);
            let rows = thetas
                .iter()
                .map(|&t| {
                    let r = detection_threshold(&ineq, t, EfficiencyShape::Symmetric, &opt)?;
                    Ok(vec![cfg.text(t), cfg.text(r.eta_star)])
                })
                .collect::<Result<_>>()?;
            Ok(Output::csv(&["theta", "eta_star"], rows))
        }
        PlotKind::BellvalueVsEta => {
            let ineq = ineq_or_chsh()?;
            let theta = match thetas {
                [] => FRAC_PI_4,
                [t] => parse_theta(t)?,
                _ => return Err(BellError::Invalid("give a single --theta".into())),
            };
            let etas = if etas.is_empty() {
                vec![1.0, 0.9, 0.8284, 0.7]
            } else {
                etas.to_vec()
            };
            // settings fixed at their ideal-detector optimum
            let perfect = DetectionModel::symmetric(1.0)?;
            let (_, alice, bob) =
                optimized_detection_value(&ineq, theta, &perfect, &cfg.optimizer(&ineq))?;
            let rows = etas
                .iter()
                .map(|&eta| {
                    let model = DetectionModel::symmetric(eta)?;
                    let v = detection_value(&ineq, theta, &alice, &bob, &model)?;
                    Ok(vec![cfg.text(eta), cfg.text(v)])
                })
                .collect::<Result<_>>()?;
            Ok(Output::csv(&["eta", "value"], rows))
        }
    }
}
