//! Command-line front end. The binary only forwards its arguments to [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::base_metrics::{j_metric, j_star, rho_disk, rho_exterior};
use crate::capacity::{cap_lower_bound, delta_ef_detailed, BoundarySet, DEFAULT_SAMPLES};
use crate::contour::{
    evaluate_field, extract_levels, field_csv, level_range, levels_csv, levels_svg, write_file, FieldMetric,
};
use crate::domain::Domain;
use crate::error::MetricError;
use crate::geometry::{pt, ExtendedPoint, PlanePoint};
use crate::moebius::{conjecture_scan, delta_annulus, delta_metric, delta_punctured};
use crate::oracle::OracleConfig;
use crate::tri_ratio::s_metric;
use crate::verify::{self, Suite, VerifyConfig};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "ringmetrics", version, about = "Intrinsic metrics of the annulus r < |z| < 1 and related domains")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for every random choice of test points.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two points.
    Dist(DistArgs),
    /// Metric circles around a centre, written as SVG or CSV.
    Circle(CircleArgs),
    /// Run property suites on random samples.
    Verify(VerifyArgs),
    /// Lower bound for the capacity of the ring between two sets.
    Capacity(CapacityArgs),
    /// Scan the cross supremum along a midpoint rotation for monotonicity.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Annulus,
    Disk,
    Punctured,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistMetric {
    S,
    Jstar,
    J,
    Delta,
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircleMetric {
    S,
    Jstar,
    /// Plotted as th(delta / 2).
    Delta,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    #[arg(long, value_enum, default_value_t = DomainKind::Annulus)]
    pub domain: DomainKind,
    /// Inner radius, for the annulus and the exterior disk.
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, value_enum)]
    pub metric: DistMetric,
    /// First point as `a,b`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: PlanePoint,
    /// Second point as `c,d`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub y: PlanePoint,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, value_enum, default_value_t = CircleMetric::S)]
    pub metric: CircleMetric,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0.75,0")]
    pub center: PlanePoint,
    /// Levels as `lo:hi:step`.
    #[arg(long, default_value = "0.2:0.9:0.1")]
    pub levels: String,
    /// Grid nodes per side of the square [-1, 1]^2.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// Contours to `*.svg` or `*.csv` (columns level,poly_id,x,y).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid values to a CSV file (columns x,y,value).
    #[arg(long)]
    pub field_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Random cases per property and domain.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Inner radii of the annuli to test.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.8")]
    pub r_list: Vec<f64>,
    /// Slack for metric axioms and inequality chains.
    #[arg(long, default_value_t = 1e-10)]
    pub slack: f64,
    /// Slack for the midpoint-rotation sandwiches.
    #[arg(long, default_value_t = 1e-12)]
    pub emr_slack: f64,
    /// Agreement of closed forms with the general solvers.
    #[arg(long, default_value_t = 1e-9)]
    pub closed_form_tol: f64,
    /// Agreement of s with its oracle.
    #[arg(long, default_value_t = 1e-6)]
    pub s_oracle_tol: f64,
    /// Allowed gap between delta and its oracle.
    #[arg(long, default_value_t = 1e-3)]
    pub delta_oracle_gap: f64,
    /// Tolerance for Möbius invariance of delta.
    #[arg(long, default_value_t = 1e-6)]
    pub invariance_tol: f64,
    /// Cap on oracle cases per domain.
    #[arg(long, default_value_t = 200)]
    pub oracle_samples: usize,
    /// Oracle boundary samples per circle.
    #[arg(long, default_value_t = 4096)]
    pub oracle_circle_samples: usize,
    /// Cap on starlikeness probes per level.
    #[arg(long, default_value_t = 1000)]
    pub starlike_probes: usize,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// First set: `segment:ax,ay:bx,by`, `circle:cx,cy:r`, `ray:sx,sy:dx,dy`
    /// or `polyline:x1,y1;x2,y2;...`.
    #[arg(long, allow_hyphen_values = true)]
    pub set_e: String,
    /// Second set, same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub set_f: String,
    /// Space dimension for the constant c_n.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Samples per curve.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub r: f64,
    /// Distance of the midpoint from the origin.
    #[arg(long)]
    pub k: f64,
    /// Half the distance between the points.
    #[arg(long)]
    pub q: f64,
    /// Grid points on [0, pi/2].
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

fn parse_point(s: &str) -> std::result::Result<PlanePoint, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok(pt(num(a)?, num(b)?))
}

/// What a command printed and how it should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    /// 0 success, 1 property failure, 2 usage or precondition error.
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn precondition(msg: impl std::fmt::Display) -> Self {
        Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 2 }
    }
}

/// Parse and execute a command line (the first item is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let result = match &cli.command {
        Command::Dist(a) => dist(&cli, a),
        Command::Circle(a) => circle(&cli, a),
        Command::Verify(a) => verify_cmd(&cli, a),
        Command::Capacity(a) => capacity(&cli, a),
        Command::Conjecture(a) => conjecture(&cli, a),
    };
    result.unwrap_or_else(|e| match e {
        CmdError::Metric(e) => Outcome::precondition(e),
        CmdError::Io(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    })
}

#[derive(Debug)]
enum CmdError {
    Metric(MetricError),
    Io(std::io::Error),
}

impl From<MetricError> for CmdError {
    fn from(e: MetricError) -> Self {
        CmdError::Metric(e)
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e)
    }
}

type CmdResult = std::result::Result<Outcome, CmdError>;

fn envelope(command: &str, inputs: Value, key: &str, value: Value, trace: Value) -> String {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), command.into());
    map.insert("inputs".into(), inputs);
    map.insert(key.into(), value);
    map.insert("trace".into(), trace);
    map.insert("version".into(), VERSION.into());
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize");
    s.push('\n');
    s
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn point_str(p: PlanePoint) -> String {
    format!("{},{}", p.re, p.im)
}

fn build_domain(a: &DomainArgs) -> std::result::Result<Domain, MetricError> {
    let need_r = |what: &str| {
        a.r.ok_or_else(|| MetricError::ParameterOutOfRange(format!("the {what} needs --r")))
    };
    match a.domain {
        DomainKind::Annulus => Domain::annulus(need_r("annulus")?),
        DomainKind::Exterior => Domain::exterior(need_r("exterior disk")?),
        DomainKind::Disk => Ok(Domain::UnitDisk),
        DomainKind::Punctured => Ok(Domain::PuncturedDisk),
    }
}

fn dist(cli: &Cli, a: &DistArgs) -> CmdResult {
    let d = build_domain(&a.domain)?;
    let (x, y) = (a.x, a.y);
    let metric = a.metric.to_possible_value().expect("no skipped variants").get_name().to_string();
    let (value, trace) = match a.metric {
        DistMetric::S => {
            let res = s_metric(&d, x, y)?;
            (res.value, json!({ "active_branch": res.active_branch, "witnesses": to_json(&res.witnesses) }))
        }
        DistMetric::Jstar => (j_star(&d, x, y)?, json!({})),
        DistMetric::J => (j_metric(&d, x, y)?, json!({})),
        DistMetric::Delta => match d {
            Domain::Annulus { r } => {
                let t = delta_annulus(x, y, r)?;
                (t.value, to_json(&t))
            }
            Domain::PuncturedDisk => {
                let res = delta_punctured(x, y)?;
                (res.value, json!({ "active_branch": res.active_branch }))
            }
            _ => (delta_metric(&d, x, y)?, json!({ "active_branch": "hyperbolic" })),
        },
        DistMetric::Rho => match d {
            Domain::UnitDisk => (rho_disk(x, y)?, json!({})),
            Domain::ExteriorDisk { r } => (rho_exterior(x, y, r)?, json!({})),
            _ => {
                return Err(MetricError::ParameterOutOfRange(format!(
                    "the hyperbolic metric is only available in the disk and the exterior disk, not the {d}"
                ))
                .into())
            }
        },
    };
    let out = match cli.format {
        Format::Json => {
            let inputs = json!({ "domain": to_json(&d), "metric": metric, "x": [x.re, x.im], "y": [y.re, y.im] });
            envelope("dist", inputs, "value", to_json(&value), trace)
        }
        Format::Csv => format!("metric,x,y,value\n{metric},\"{}\",\"{}\",{value}\n", point_str(x), point_str(y)),
        Format::Human => {
            let mut s = format!("{metric}({}, {}) in the {d} = {value}\n", ExtendedPoint::from(x), ExtendedPoint::from(y));
            if let Value::Object(m) = &trace {
                for (k, v) in m {
                    let _ = writeln!(s, "  {k}: {v}");
                }
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn circle(cli: &Cli, a: &CircleArgs) -> CmdResult {
    let d = build_domain(&a.domain)?;
    let metric = match a.metric {
        CircleMetric::S => FieldMetric::S,
        CircleMetric::Jstar => FieldMetric::JStar,
        CircleMetric::Delta => FieldMetric::ThDeltaHalf,
    };
    let parts: Vec<&str> = a.levels.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(MetricError::ParameterOutOfRange(format!("levels must be lo:hi:step, got `{}`", a.levels)).into());
    };
    let num = |t: &str| {
        t.parse::<f64>().map_err(|_| MetricError::ParameterOutOfRange(format!("bad level bound `{t}`")))
    };
    let levels = level_range(num(lo)?, num(hi)?, num(step)?)?;
    if let Some(&l) = levels.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        return Err(MetricError::ParameterOutOfRange(format!("levels must lie in (0, 1), got {l}")).into());
    }
    let field = evaluate_field(&d, a.center, metric, a.grid)?;
    let sets = extract_levels(&field, &levels);
    if let Some(path) = &a.out {
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let body = match ext {
            "svg" => levels_svg(&sets, &d),
            "csv" => levels_csv(&sets),
            _ => {
                return Err(MetricError::ParameterOutOfRange(format!(
                    "output file must end in .svg or .csv, got `{}`",
                    path.display()
                ))
                .into())
            }
        };
        write_file(path, &body)?;
    }
    if let Some(path) = &a.field_out {
        write_file(path, &field_csv(&field))?;
    }

    let rows: Vec<Value> = sets
        .iter()
        .map(|s| {
            json!({
                "level": s.level,
                "polylines": s.polylines.len(),
                "closed": s.polylines.iter().filter(|p| p.closed).count(),
                "vertices": s.polylines.iter().map(|p| p.points.len()).sum::<usize>(),
            })
        })
        .collect();
    let out = match cli.format {
        Format::Json => {
            let inputs = json!({
                "domain": to_json(&d), "metric": metric.name(), "center": [a.center.re, a.center.im],
                "levels": levels, "grid": a.grid,
                "out": a.out.as_ref().map(|p| p.display().to_string()),
                "field_out": a.field_out.as_ref().map(|p| p.display().to_string()),
            });
            let defined = field.values.iter().filter(|v| !v.is_nan()).count();
            envelope("circle", inputs, "values", Value::Array(rows), json!({ "defined_nodes": defined }))
        }
        Format::Csv => {
            let mut s = String::from("level,polylines,closed,vertices\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", r["level"], r["polylines"], r["closed"], r["vertices"]);
            }
            s
        }
        Format::Human => {
            let mut s = format!(
                "{} circles around {} in the {d}, grid {}x{}\n",
                metric.name(),
                ExtendedPoint::from(a.center),
                a.grid,
                a.grid
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "  level {:<5} {} polylines ({} closed), {} vertices",
                    r["level"], r["polylines"], r["closed"], r["vertices"]
                );
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let suite: Suite = a.suite.parse()?;
    let cfg = VerifyConfig {
        samples: a.samples,
        seed: cli.seed,
        r_list: a.r_list.clone(),
        slack: a.slack,
        emr_slack: a.emr_slack,
        closed_form_tol: a.closed_form_tol,
        s_oracle_tol: a.s_oracle_tol,
        delta_oracle_gap: a.delta_oracle_gap,
        invariance_tol: a.invariance_tol,
        oracle_samples: a.oracle_samples,
        oracle: OracleConfig { samples_per_circle: a.oracle_circle_samples, seed: cli.seed, ..OracleConfig::default() },
        starlike_probes: a.starlike_probes,
    };
    let rep = verify::run(suite, &cfg)?;
    let code = if rep.passed() { 0 } else { 1 };
    let out = match cli.format {
        Format::Json => envelope(
            "verify",
            to_json(&rep.config),
            "values",
            to_json(&rep.properties),
            json!({ "suite": suite.name(), "passed": rep.passed(), "hard_failures": rep.hard_failures().count() }),
        ),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "hard", "passed", "cases", "worst", "tolerance", "witness", "note"])
                .expect("in-memory write");
            for p in &rep.properties {
                w.write_record([
                    p.name.clone(),
                    p.hard.to_string(),
                    p.passed.to_string(),
                    p.cases.to_string(),
                    p.worst.to_string(),
                    p.tolerance.to_string(),
                    p.witness.clone().unwrap_or_default(),
                    p.note.clone().unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
        }
        Format::Human => {
            let c = &rep.config;
            let mut s = format!(
                "suite {suite}, {} samples, seed {}, r in {:?}\n\
                 tolerances: slack {:e}, emr slack {:e}, closed forms {:e}, s oracle {:e}, delta oracle gap {:e}, invariance {:e}\n\
                 oracle: {} samples per circle, at most {} cases per domain\n",
                c.samples,
                c.seed,
                c.r_list,
                c.slack,
                c.emr_slack,
                c.closed_form_tol,
                c.s_oracle_tol,
                c.delta_oracle_gap,
                c.invariance_tol,
                c.oracle.samples_per_circle,
                c.oracle_samples,
            );
            for p in &rep.properties {
                let tag = match (p.hard, p.passed) {
                    (true, true) => "PASS",
                    (true, false) => "FAIL",
                    (false, true) => "info",
                    (false, false) => "NOTE",
                };
                let _ = write!(s, "{tag} {} worst={:e} tol={:e} cases={}", p.name, p.worst, p.tolerance, p.cases);
                if !p.passed {
                    if let Some(w) = &p.witness {
                        let _ = write!(s, " witness={w}");
                    }
                }
                if let Some(n) = &p.note {
                    let _ = write!(s, " ({n})");
                }
                s.push('\n');
            }
            let fails = rep.hard_failures().count();
            let _ = writeln!(s, "{}", if fails == 0 { "all hard properties hold".to_string() } else { format!("{fails} hard failures") });
            s
        }
    };
    Ok(Outcome { stdout: out, stderr: String::new(), code })
}

fn capacity(cli: &Cli, a: &CapacityArgs) -> CmdResult {
    let e = BoundarySet::parse(&a.set_e, a.samples)?;
    let f = BoundarySet::parse(&a.set_f, a.samples)?;
    let bound = cap_lower_bound(&e, &f, a.n)?;
    let detail = delta_ef_detailed(&e, &f)?;
    let out = match cli.format {
        Format::Json => {
            let inputs = json!({ "set_e": a.set_e, "set_f": a.set_f, "n": a.n, "samples": a.samples });
            envelope("capacity", inputs, "values", to_json(&bound), to_json(&detail))
        }
        Format::Csv => format!(
            "delta_ef,c_n,bound,n,converged\n{},{},{},{},{}\n",
            bound.delta_ef, bound.c_n, bound.bound, bound.n, bound.converged
        ),
        Format::Human => {
            let mut s = format!(
                "E = {}\nF = {}\ndelta(E, F) = {}\nc_{} = {}\ncapacity >= {}\n",
                e.shape, f.shape, bound.delta_ef, bound.n, bound.c_n, bound.bound
            );
            let _ = writeln!(s, "  sampled value {} at x={} y={} a={} b={}", detail.sampled, detail.x, detail.y, detail.a, detail.b);
            if !bound.converged {
                s.push_str("  refinement did not converge; the sets may nearly touch\n");
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}

fn conjecture(cli: &Cli, a: &ConjectureArgs) -> CmdResult {
    let rep = conjecture_scan(a.r, a.k, a.q, a.steps)?;
    let monotone = rep.is_monotone(1e-9);
    let out = match cli.format {
        Format::Json => {
            let inputs = json!({ "r": a.r, "k": a.k, "q": a.q, "steps": a.steps });
            let values = json!({ "mu": rep.mu, "supremum": rep.supremum });
            let trace = json!({ "max_increment": rep.max_increment, "violation_at": rep.violation_at, "monotone": monotone });
            envelope("conjecture", inputs, "values", values, trace)
        }
        Format::Csv => {
            let mut s = String::from("mu,supremum\n");
            for (m, v) in rep.mu.iter().zip(&rep.supremum) {
                let _ = writeln!(s, "{m},{v}");
            }
            s
        }
        Format::Human => {
            let n = rep.mu.len();
            let mut s = format!(
                "cross supremum along the rotation r={} k={} q={}, {} angles\n  mu=0: {}\n  mu=pi/2: {}\n  max increment: {:e}\n",
                a.r, a.k, a.q, n, rep.supremum[0], rep.supremum[n - 1], rep.max_increment
            );
            match rep.violation_at {
                Some(i) if !monotone => {
                    let _ = writeln!(s, "  NOT decreasing: rises between mu={} and mu={}", rep.mu[i], rep.mu[i + 1]);
                }
                _ => s.push_str("  decreasing on the grid\n"),
            }
            s
        }
    };
    Ok(Outcome::ok(out))
}
