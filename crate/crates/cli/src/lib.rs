//! Command-line front end.
//!
//! [`run`] parses an argument vector, writes tables or certificates to the
//! given sink (or to `--output`), and returns the process exit code:
//! `0` on success, `1` on invalid input, `2` when a computed result
//! contradicts a proven identity.
//!
//! Numeric CSV columns carry a bracketed tag in the header: `exact` for
//! integer or rational data, `tol=<x>` for an absolute tolerance, `tol=grid`
//! for a quadrature value on the stated grid, `tol=certified` for a rigorous
//! bound, and `tol=<column>` when a per-row error estimate is reported in
//! that column.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use spectrunc::approximation::DefectCertifier;
use spectrunc::distance::{connes_distance, convergence_sweep, geodesic_distance, point_state, SolverOptions};
use spectrunc::io::SCHEMA_VERSION;
use spectrunc::kernels::{gamma_with_error, tail_mass, total_mass, TorusGrid};
use spectrunc::lattice::{norm_sq, sub, LatticeSet, Point};
use spectrunc::propagation::{extreme_points, propagation_number};
use spectrunc::random::{doubled_support, sample_rng, self_adjoint_operator, self_adjoint_poly};
use spectrunc::symbols::w_table;
use spectrunc::{Error, Radius, Rational, Shape, SymbolTable, Truncation};

/// Environment variable naming the directory for relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "SPECTRUNC_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "spectrunc", version, about = "Spectral truncations of the d-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice sets of a truncation: ball (or box), lense, sumset, hull vertices.
    Lattice(LatticeArgs),
    /// The symbol m = N_L/N_B or the antiderivative symbols w^mu.
    Symbol(SymbolArgs),
    /// Mass, tail mass and convergence rate of the spectral Fejer kernel.
    Kernel(KernelArgs),
    /// Defect ratios of random functions and operators against gamma.
    Defect(DefectArgs),
    /// Connes distance between two point states.
    Distance(DistanceArgs),
    /// Matrix-unit decompositions and the propagation certificate (JSON).
    Propagation(PropagationArgs),
    /// Distance brackets along a sequence of truncations.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct TruncArgs {
    /// Torus dimension d.
    #[arg(long)]
    dim: usize,
    /// Squared radius as an exact rational `a/b` (or an integer).
    #[arg(long, value_parser = parse_radius, required_unless_present = "half_width", conflicts_with = "half_width")]
    lambda_sq: Option<Radius>,
    /// Use the box [-N, N]^d instead of a ball.
    #[arg(long)]
    half_width: Option<u32>,
}

impl TruncArgs {
    fn truncation(&self) -> Result<Truncation, Error> {
        match (self.lambda_sq, self.half_width) {
            (Some(r), None) => Truncation::ball(self.dim, r),
            (None, Some(n)) => Truncation::cube(self.dim, n),
            _ => Err(Error::InvalidArgument("give exactly one of --lambda-sq and --half-width".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetChoice {
    Ball,
    Lense,
    Sumset,
    Hull,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, value_enum, default_value_t = SetChoice::Ball)]
    set: SetChoice,
    /// Shift n of the lense B ∩ (B + n), comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    shift: Vec<i64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SymbolKind {
    M,
    W,
}

#[derive(Args, Debug)]
struct SymbolArgs {
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, value_enum, default_value_t = SymbolKind::M)]
    kind: SymbolKind,
    /// Component of w^mu, from 1 to d.
    #[arg(long, default_value_t = 1)]
    mu: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct KernelArgs {
    #[command(flatten)]
    trunc: TruncArgs,
    /// Radius of the excluded neighbourhood for the tail mass.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Grid points per axis (default 4⌈Λ⌉+9).
    #[arg(long)]
    resolution: Option<usize>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ObjectChoice {
    Function,
    Operator,
    Both,
}

#[derive(Args, Debug)]
struct DefectArgs {
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, default_value_t = 50)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ObjectChoice::Both)]
    object: ObjectChoice,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// Point x on the torus, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    x: Vec<f64>,
    /// Point y on the torus, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    y: Vec<f64>,
    /// Newton step budget.
    #[arg(long, default_value_t = 400)]
    iters: usize,
    /// Seeds the solver's starting point.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { iters: self.iters, seed: self.seed, ..SolverOptions::default() }
    }
}

#[derive(Args, Debug)]
struct DistanceArgs {
    #[command(flatten)]
    trunc: TruncArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct PropagationArgs {
    #[command(flatten)]
    trunc: TruncArgs,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Torus dimension d.
    #[arg(long)]
    dim: usize,
    /// Radii Λ (integers or `a/b`), comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_lambda, required_unless_present = "lambda_sqs")]
    lambdas: Vec<Radius>,
    /// Squared radii Λ² (integers or `a/b`), comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_radius, conflicts_with = "lambdas")]
    lambda_sqs: Vec<Radius>,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutputArgs,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    let r: Radius = s.parse().map_err(|e: Error| e.to_string())?;
    Ok(r.lambda_sq())
}

fn parse_radius(s: &str) -> Result<Radius, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_lambda(s: &str) -> Result<Radius, String> {
    let l = parse_rational(s)?;
    Radius::from_squared(l * l).map_err(|e| e.to_string())
}

/// A table whose header names carry tolerance tags.
struct Table {
    columns: Vec<(&'static str, &'static str)>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: Vec<(&'static str, &'static str)>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut s = self
            .columns
            .iter()
            .map(|(name, tag)| if tag.is_empty() { name.to_string() } else { format!("{name}[{tag}]") })
            .collect::<Vec<_>>()
            .join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(cell).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn json(&self, command: &str) -> Value {
        let tolerances: Map<String, Value> = self
            .columns
            .iter()
            .filter(|(_, tag)| !tag.is_empty())
            .map(|(n, t)| (n.to_string(), json!(t)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|((n, _), v)| (n.to_string(), v.clone())).collect()))
            .collect();
        json!({ "schema_version": SCHEMA_VERSION, "command": command, "tolerances": tolerances, "rows": rows })
    }

    fn render(&self, command: &str, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => pretty(&self.json(command)),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn lambda_sq_label(t: &Truncation) -> String {
    match t.shape() {
        Shape::Ball(r) => r.to_string(),
        Shape::Cube(_) => String::new(),
    }
}

/// Result of a subcommand: the rendered document and whether its checks held.
struct Rendered {
    text: String,
    consistent: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered { text, consistent: true }
    }
}

fn point_columns(d: usize) -> Vec<(&'static str, &'static str)> {
    const NAMES: [&str; 8] = ["n1", "n2", "n3", "n4", "n5", "n6", "n7", "n8"];
    NAMES.iter().take(d).map(|n| (*n, "exact")).collect()
}

fn lattice(args: &LatticeArgs) -> Result<Rendered, Error> {
    let t = args.trunc.truncation()?;
    let d = t.dim();
    let points: Vec<Point> = match args.set {
        SetChoice::Ball => t.points().points().to_vec(),
        SetChoice::Sumset => t.sumset().points().to_vec(),
        SetChoice::Hull => extreme_points(&t)?,
        SetChoice::Lense => {
            if args.shift.len() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: args.shift.len() });
            }
            t.points().iter().filter(|n| t.points().contains(&sub(n, &args.shift))).cloned().collect()
        }
    };
    if d > 8 {
        return Err(Error::InvalidArgument("tables support at most 8 coordinates".into()));
    }
    let text = match args.out.format {
        Format::Json => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "dim": d,
            "truncation": t.shape().to_string(),
            "set": format!("{:?}", args.set).to_lowercase(),
            "count": points.len(),
            "points": points,
        })),
        Format::Csv => {
            let mut cols = point_columns(d);
            cols.push(("norm_sq", "exact"));
            let mut table = Table::new(cols);
            for p in &points {
                let mut row: Vec<Value> = p.iter().map(|&x| json!(x)).collect();
                row.push(json!(norm_sq(p)));
                table.push(row);
            }
            table.csv()
        }
    };
    Ok(Rendered::ok(text))
}

fn symbol(args: &SymbolArgs) -> Result<Rendered, Error> {
    let t = args.trunc.truncation()?;
    let d = t.dim();
    if d > 8 {
        return Err(Error::InvalidArgument("tables support at most 8 coordinates".into()));
    }
    let table: SymbolTable = match args.kind {
        SymbolKind::M => t.symbol(),
        SymbolKind::W => w_table(&t, args.mu)?,
    };
    let name = match args.kind {
        SymbolKind::M => "m".to_string(),
        SymbolKind::W => format!("w{}", args.mu),
    };
    let text = match args.out.format {
        Format::Json => pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "dim": d,
            "truncation": t.shape().to_string(),
            "symbol": name,
            "support": table.support().points(),
            "values": table.values().iter().map(rational).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut cols = point_columns(d);
            cols.push(("value", "exact"));
            cols.push(("value_f64", "tol=1e-15"));
            let mut out = Table::new(cols);
            for (n, v) in table.iter() {
                let mut row: Vec<Value> = n.iter().map(|&x| json!(x)).collect();
                row.push(json!(rational(v)));
                row.push(json!(*v.numer() as f64 / *v.denom() as f64));
                out.push(row);
            }
            out.csv()
        }
    };
    Ok(Rendered::ok(text))
}

fn kernel(args: &KernelArgs) -> Result<Rendered, Error> {
    let t = args.trunc.truncation()?;
    let grid = match args.resolution {
        Some(m) => TorusGrid::new(t.dim(), m)?,
        None => TorusGrid::default_for(&t),
    };
    let mass = total_mass(&t, &grid)?;
    let tail = tail_mass(&t, args.delta, &grid)?;
    let (gamma, err) = gamma_with_error(&t)?;
    let mut table = Table::new(vec![
        ("dim", "exact"),
        ("truncation", ""),
        ("lambda_sq", "exact"),
        ("delta", "exact"),
        ("resolution", "exact"),
        ("total_mass", "tol=1e-10"),
        ("tail_mass", "tol=grid"),
        ("gamma", "tol=gamma_err"),
        ("gamma_err", "tol=heuristic"),
    ]);
    table.push(vec![
        json!(t.dim()),
        json!(t.shape().to_string()),
        json!(lambda_sq_label(&t)),
        json!(args.delta),
        json!(grid.resolution()),
        json!(mass),
        json!(tail),
        json!(gamma),
        json!(err),
    ]);
    Ok(Rendered { text: table.render("kernel", args.out.format), consistent: (mass - 1.0).abs() <= 1e-10 })
}

fn defect(args: &DefectArgs) -> Result<Rendered, Error> {
    let t = args.trunc.truncation()?;
    let cert = DefectCertifier::new(&t)?;
    let support: LatticeSet = doubled_support(&t)?;
    let mut table = Table::new(vec![
        ("index", "exact"),
        ("object", ""),
        ("defect_norm", "tol=grid"),
        ("lipschitz", "tol=grid"),
        ("ratio", "tol=grid"),
        ("gamma", "tol=1e-6"),
        ("holds", "tol=1e-6"),
    ]);
    let mut consistent = true;
    for i in 0..args.samples {
        let mut reports = Vec::new();
        if args.object != ObjectChoice::Operator {
            let f = self_adjoint_poly(&support, 1.0, &mut sample_rng(args.seed, 2 * i));
            reports.push(cert.function_defect(&f)?);
        }
        if args.object != ObjectChoice::Function {
            let op = self_adjoint_operator(&t, &mut sample_rng(args.seed, 2 * i + 1));
            reports.push(cert.operator_defect(&op)?);
        }
        for r in reports {
            let holds = r.holds(1e-6);
            consistent &= holds;
            table.push(vec![
                json!(i),
                json!(r.object),
                json!(r.defect_norm),
                json!(r.lipschitz),
                json!(r.ratio),
                json!(r.gamma_bound),
                json!(holds),
            ]);
        }
    }
    Ok(Rendered { text: table.render("defect", args.out.format), consistent })
}

fn distance(args: &DistanceArgs) -> Result<Rendered, Error> {
    let t = args.trunc.truncation()?;
    let (x, y) = (&args.solver.x, &args.solver.y);
    let r = connes_distance(&point_state(x, &t)?, &point_state(y, &t)?, &args.solver.options())?;
    let geodesic = geodesic_distance(x, y)?;
    let mut table = Table::new(vec![
        ("truncation", ""),
        ("lower", "tol=certified"),
        ("upper", "tol=certified"),
        ("dual_upper", "tol=certified"),
        ("geodesic", "tol=1e-15"),
        ("iterations", "exact"),
        ("converged", ""),
    ]);
    table.push(vec![
        json!(t.shape().to_string()),
        json!(r.lower),
        json!(r.upper),
        json!(r.dual_upper),
        json!(geodesic),
        json!(r.iterations),
        json!(r.converged),
    ]);
    let consistent = r.lower <= r.upper + 1e-9 && r.upper <= geodesic + 1e-6;
    Ok(Rendered { text: table.render("distance", args.out.format), consistent })
}

fn propagation(args: &PropagationArgs) -> Result<Rendered, Error> {
    let t = args.trunc.truncation()?;
    let cert = propagation_number(&t)?;
    let mut doc = serde_json::to_value(&cert)?;
    if let Value::Object(m) = &mut doc {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("holds".into(), json!(cert.holds()));
    }
    Ok(Rendered { text: pretty(&doc), consistent: cert.holds() })
}

fn sweep(args: &SweepArgs) -> Result<Rendered, Error> {
    let radii = if args.lambdas.is_empty() { &args.lambda_sqs } else { &args.lambdas };
    let truncs: Vec<Truncation> = radii.iter().map(|&r| Truncation::ball(args.dim, r)).collect::<Result<_, _>>()?;
    let rows = convergence_sweep(&args.solver.x, &args.solver.y, &truncs, &args.solver.options())?;
    let mut table = Table::new(vec![
        ("lambda_sq", "exact"),
        ("lower", "tol=certified"),
        ("upper", "tol=certified"),
        ("geodesic", "tol=1e-15"),
        ("gamma", "tol=1e-6"),
        ("bracket_width", "tol=1e-6"),
        ("converged", ""),
        ("bracket_ok", "tol=1e-6"),
    ]);
    let mut consistent = true;
    for (t, r) in truncs.iter().zip(&rows) {
        consistent &= r.bracket_ok;
        table.push(vec![
            json!(lambda_sq_label(t)),
            json!(r.lower),
            json!(r.upper),
            json!(r.geodesic),
            json!(r.gamma),
            json!(2.0 * r.gamma),
            json!(r.converged),
            json!(r.bracket_ok),
        ]);
    }
    Ok(Rendered { text: table.render("sweep", args.out.format), consistent })
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => {
            let p = resolve(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(p, text)?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<bool, Error> {
    let (rendered, path) = match cmd {
        Command::Lattice(a) => (lattice(a)?, a.out.output.as_ref()),
        Command::Symbol(a) => (symbol(a)?, a.out.output.as_ref()),
        Command::Kernel(a) => (kernel(a)?, a.out.output.as_ref()),
        Command::Defect(a) => (defect(a)?, a.out.output.as_ref()),
        Command::Distance(a) => (distance(a)?, a.out.output.as_ref()),
        Command::Propagation(a) => (propagation(a)?, a.output.as_ref()),
        Command::Sweep(a) => (sweep(a)?, a.out.output.as_ref()),
    };
    emit(out, path, &rendered.text)?;
    Ok(rendered.consistent)
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(&cli.command, out) {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(err, "error: computed results violate a proven bound (see output)");
            2
        }
        Err(e @ Error::Internal(_)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
