//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error, 3 finding
//! (failed certificate, missing sharpness transition, falsified inequality,
//! catalog inconsistency).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::par::{map_indexed, Execution};
use crate::polyroots::CertifiedRoot;
use crate::radii::{
    cross_check_t32, figure_certificates, solve_radius, thm_h_verbatim, FigureCertificate, Params, RadiiError,
    RadiusProblem, T32Report, TheoremId,
};
use crate::witnesses::{falsify, sharpness_probe, CampaignReport, CampaignSettings, SharpnessReport, WitnessError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_K_GRID: [f64; 8] = [1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0, 100.0];
pub const DEFAULT_ALPHA_GRID: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];
pub const DEFAULT_MU_GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

pub const CSV_HEADER: &str = "theorem,K,alpha,mu,N,radius,lo,hi,cert";

#[derive(Debug, Parser)]
#[command(name = "bohrlab", version, about = "Certified Bohr-type radii for quasiconformal harmonic mappings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified radius for one theorem and parameter set
    Radius(RadiusArgs),
    /// Radii over a parameter grid
    Sweep(SweepArgs),
    /// Sturm and grid certificates behind the figure claims
    Certify(OutputArgs),
    /// Witness functional just below and above the radius
    Sharpness(SharpnessArgs),
    /// Randomized search for counterexamples below the radius
    Falsify(FalsifyArgs),
    /// Bundle of radii, certificates, cross-checks, probes and campaigns
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub theorem: TheoremId,
    #[arg(long = "K", default_value_t = 1.0)]
    pub big_k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long = "N", default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 0.0)]
    pub a0: f64,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params {
            big_k: self.big_k,
            alpha: self.alpha,
            mu: self.mu,
            n: self.n,
            a0: self.a0,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TolArg {
    #[arg(long, env = "BOHRLAB_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub output: OutputArgs,
    /// use the formula exactly as printed (ThmH only; refused)
    #[arg(long)]
    pub verbatim: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub theorem: TheoremId,
    #[arg(long = "K-grid", value_delimiter = ',')]
    pub k_grid: Option<Vec<f64>>,
    #[arg(long = "alpha-grid", value_delimiter = ',')]
    pub alpha_grid: Option<Vec<f64>>,
    #[arg(long = "mu-grid", value_delimiter = ',')]
    pub mu_grid: Option<Vec<f64>>,
    #[arg(long = "N", default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 0.0)]
    pub a0: f64,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CampaignArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.99)]
    pub r_fraction: f64,
    /// truncation order of sampled pairs
    #[arg(long, default_value_t = crate::series::DEFAULT_ORDER)]
    pub order: usize,
    /// run trials on one thread
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FalsifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub campaign: CampaignArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// trials per falsification campaign
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[command(flatten)]
    pub campaign: CampaignArgs,
    #[command(flatten)]
    pub tol: TolArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn computation(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_COMPUTATION,
            message: m.into(),
        }
    }
}

impl From<RadiiError> for CliError {
    fn from(e: RadiiError) -> Self {
        let code = match e {
            RadiiError::ParameterDomain { .. } | RadiiError::Refused(_) => EXIT_USAGE,
            RadiiError::CatalogInconsistency(_) => EXIT_FINDING,
            _ => EXIT_COMPUTATION,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Radii(r) => r.into(),
            WitnessError::NotAvailable(_) | WitnessError::Parameter(_) | WitnessError::ProbeRange { .. } => {
                Self::usage(e.to_string())
            }
            WitnessError::SamplerBug(_) => Self {
                code: EXIT_COMPUTATION,
                message: e.to_string(),
            },
            _ => Self::computation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::computation(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::computation(format!("serialization error: {e}"))
    }
}

/// Rendered output plus the exit status it implies.
struct Outcome {
    body: String,
    code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, code: EXIT_OK }
    }

    fn finding_if(body: String, finding: bool) -> Self {
        Self {
            body,
            code: if finding { EXIT_FINDING } else { EXIT_OK },
        }
    }
}

/// Parses `args` (program name first) and runs the command. Text goes to
/// `stdout` unless `--out` is given; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let (result, out) = match &cli.command {
        Command::Radius(a) => (cmd_radius(a), &a.output),
        Command::Sweep(a) => (cmd_sweep(a), &a.output),
        Command::Certify(a) => (cmd_certify(a), a),
        Command::Sharpness(a) => (cmd_sharpness(a), &a.output),
        Command::Falsify(a) => (cmd_falsify(a), &a.output),
        Command::Report(a) => (cmd_report(a), &a.output),
    };
    match result.and_then(|o| emit(&o, out, stdout).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn emit(o: &Outcome, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &out.out {
        Some(path) => std::fs::write(path, o.body.as_bytes())?,
        None => stdout.write_all(o.body.as_bytes())?,
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol < 0.1 {
        Ok(())
    } else {
        Err(CliError::usage(format!("--tol {tol} outside (0, 0.1)")))
    }
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    CliError::usage(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// `x` with 15 significant digits in plain decimal notation.
pub fn sig15(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&exp) {
        return format!("{x:.14e}");
    }
    let decimals = (14 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Canonical certified radius record, the JSON certificate schema.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusRecord {
    pub theorem: TheoremId,
    pub params: Params,
    #[serde(flatten)]
    pub root: CertifiedRoot,
}

fn param_summary(theorem: TheoremId, p: &Params) -> String {
    let mut parts = Vec::new();
    if theorem.uses_k() {
        parts.push(format!("K={}", p.big_k));
    }
    if theorem.uses_alpha() {
        parts.push(format!("alpha={}", p.alpha));
    }
    if theorem.uses_mu() {
        parts.push(format!("mu={}", p.mu));
    }
    if theorem.uses_n() {
        parts.push(format!("N={}", p.n));
    }
    if theorem.uses_a0() {
        parts.push(format!("a0={}", p.a0));
    }
    parts.join(" ")
}

/// Renders a header and rows with the `csv` writer.
pub fn csv_table(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header.split(','))
        .map_err(|e| CliError::computation(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| CliError::computation(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::computation(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::computation(e.to_string()))
}

fn param_fields(theorem: TheoremId, p: &Params) -> Vec<String> {
    vec![
        theorem.to_string(),
        p.big_k.to_string(),
        p.alpha.to_string(),
        p.mu.to_string(),
        p.n.to_string(),
    ]
}

fn csv_row(rec: &RadiusRecord) -> Vec<String> {
    let mut row = param_fields(rec.theorem, &rec.params);
    row.extend([
        sig15(rec.root.estimate),
        sig15(rec.root.lo_f64()),
        sig15(rec.root.hi_f64()),
        serde_json::to_value(rec.root.certificate)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default(),
    ]);
    row
}

fn radius_text(rec: &RadiusRecord) -> String {
    let mut s = String::new();
    let r = &rec.root;
    let _ = writeln!(s, "{}", format!("{} {}", rec.theorem, param_summary(rec.theorem, &rec.params)).trim_end());
    let _ = writeln!(s, "  radius       {}", sig15(r.estimate));
    let _ = writeln!(s, "  interval     [{}, {}]", sig15(r.lo_f64()), sig15(r.hi_f64()));
    let _ = writeln!(s, "  certificate  {}", serde_json::to_value(r.certificate).unwrap_or_default().as_str().unwrap_or(""));
    let _ = writeln!(s, "  residual     {:e}", r.residual);
    if let Some(p) = &r.polynomial {
        let _ = writeln!(s, "  equation     {p} = 0");
    }
    s
}

pub fn compute_radius(theorem: TheoremId, params: Params, tol: f64) -> Result<RadiusRecord, CliError> {
    let problem = RadiusProblem::new(theorem, params)?;
    let root = solve_radius(&problem, tol)?;
    Ok(RadiusRecord {
        theorem,
        params: problem.params,
        root,
    })
}

fn cmd_radius(a: &RadiusArgs) -> Result<Outcome, CliError> {
    check_tol(a.tol.tol)?;
    let theorem = a.params.theorem;
    if a.verbatim {
        if theorem != TheoremId::ThmH {
            return Err(CliError::usage("--verbatim only applies to ThmH"));
        }
        let problem = RadiusProblem::new(theorem, a.params.params())?;
        thm_h_verbatim(problem.params.alpha)?;
    }
    let rec = compute_radius(theorem, a.params.params(), a.tol.tol)?;
    let body = match a.output.format {
        Format::Text => radius_text(&rec),
        Format::Json => to_json(&rec)?,
        Format::Csv => csv_table(CSV_HEADER, [csv_row(&rec)])?,
        Format::Svg => return Err(unsupported("radius", Format::Svg)),
    };
    Ok(Outcome::ok(body))
}

/// One sweep row: a certified radius or the error that stopped it.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum SweepRow {
    Ok(RadiusRecord),
    Failed {
        theorem: TheoremId,
        params: Params,
        error: String,
    },
}

/// Canonical grid points for `theorem`: unused axes collapse to defaults and
/// duplicates are dropped, keeping first-seen order.
pub fn sweep_grid(
    theorem: TheoremId,
    k_grid: &[f64],
    alpha_grid: &[f64],
    mu_grid: &[f64],
    n: u32,
    a0: f64,
) -> Vec<Params> {
    let d = Params::default();
    let ks: &[f64] = if theorem.uses_k() { k_grid } else { &[d.big_k] };
    let alphas: &[f64] = if theorem.uses_alpha() { alpha_grid } else { &[d.alpha] };
    let mus: &[f64] = if theorem.uses_mu() { mu_grid } else { &[d.mu] };
    let mut out: Vec<Params> = Vec::new();
    for &big_k in ks {
        for &alpha in alphas {
            for &mu in mus {
                let p = Params {
                    big_k,
                    alpha,
                    mu,
                    n: if theorem.uses_n() { n } else { d.n },
                    a0: if theorem.uses_a0() { a0 } else { d.a0 },
                };
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    check_tol(a.tol.tol)?;
    let grid_or = |g: &Option<Vec<f64>>, default: &[f64], name: &str| -> Result<Vec<f64>, CliError> {
        match g {
            Some(v) if v.is_empty() => Err(CliError::usage(format!("--{name}-grid is empty"))),
            Some(v) => Ok(v.clone()),
            None => Ok(default.to_vec()),
        }
    };
    let ks = grid_or(&a.k_grid, &DEFAULT_K_GRID, "K")?;
    let alphas = grid_or(&a.alpha_grid, &DEFAULT_ALPHA_GRID, "alpha")?;
    let mus = grid_or(&a.mu_grid, &DEFAULT_MU_GRID, "mu")?;
    let theorem = a.theorem;
    let grid = sweep_grid(theorem, &ks, &alphas, &mus, a.n, a.a0);
    let valid = grid.iter().filter(|p| RadiusProblem::new(theorem, **p).is_ok()).count();
    if valid == 0 {
        return Err(CliError::usage(format!("no grid point is a valid parameter set for {theorem}")));
    }
    let tol = a.tol.tol;
    let rows: Vec<SweepRow> = map_indexed(grid.len(), Execution::Parallel, |i| {
        match compute_radius(theorem, grid[i], tol) {
            Ok(rec) => SweepRow::Ok(rec),
            Err(e) => SweepRow::Failed {
                theorem,
                params: grid[i],
                error: e.message,
            },
        }
    });
    let failed = rows.iter().any(|r| matches!(r, SweepRow::Failed { .. }));
    let body = match a.output.format {
        Format::Json => to_json(&rows)?,
        Format::Csv => sweep_csv(&rows)?,
        Format::Text => sweep_text(theorem, &rows),
        Format::Svg => sweep_svg(theorem, &rows),
    };
    Ok(Outcome {
        body,
        code: if failed { EXIT_COMPUTATION } else { EXIT_OK },
    })
}

fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    csv_table(
        CSV_HEADER,
        rows.iter().map(|row| match row {
            SweepRow::Ok(rec) => csv_row(rec),
            SweepRow::Failed { theorem, params, .. } => {
                let mut r = param_fields(*theorem, params);
                r.extend(["NaN", "NaN", "NaN", "error"].map(String::from));
                r
            }
        }),
    )
}

fn sweep_text(theorem: TheoremId, rows: &[SweepRow]) -> String {
    let mut s = String::new();
    for row in rows {
        match row {
            SweepRow::Ok(rec) => {
                let _ = writeln!(
                    s,
                    "{:<28} {}  width {:.1e}",
                    format!("{} {}", theorem, param_summary(theorem, &rec.params)),
                    sig15(rec.root.estimate),
                    rec.root.width()
                );
            }
            SweepRow::Failed { params, error, .. } => {
                let _ = writeln!(
                    s,
                    "{:<28} FAILED: {error}",
                    format!("{} {}", theorem, param_summary(theorem, params))
                );
            }
        }
    }
    s
}

/// Static polyline plot of radius against the first swept axis; one line per
/// combination of the remaining parameters.
fn sweep_svg(theorem: TheoremId, rows: &[SweepRow]) -> String {
    let recs: Vec<&RadiusRecord> = rows
        .iter()
        .filter_map(|r| match r {
            SweepRow::Ok(rec) => Some(rec),
            SweepRow::Failed { .. } => None,
        })
        .collect();
    let (axis, log_x): (&str, bool) = if theorem.uses_k() {
        ("K", true)
    } else if theorem.uses_alpha() {
        ("alpha", false)
    } else if theorem.uses_mu() {
        ("mu", false)
    } else {
        ("K", true)
    };
    let x_of = |p: &Params| -> f64 {
        let v = match axis {
            "alpha" => p.alpha,
            "mu" => p.mu,
            _ => p.big_k,
        };
        if log_x {
            v.ln()
        } else {
            v
        }
    };
    let key_of = |p: &Params| -> String {
        match axis {
            "K" => format!("alpha={} mu={}", p.alpha, p.mu),
            "alpha" => format!("mu={}", p.mu),
            _ => String::new(),
        }
    };
    let mut groups: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for rec in &recs {
        let key = key_of(&rec.params);
        let pt = (x_of(&rec.params), rec.root.estimate);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push(pt),
            None => groups.push((key, vec![pt])),
        }
    }
    let (w, h, m) = (640.0, 400.0, 50.0);
    let xs = recs.iter().map(|r| x_of(&r.params));
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let ys = recs.iter().map(|r| r.root.estimate);
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
    let px = |x: f64| m + (x - x0) / span(x0, x1) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / span(y0, y1) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} V{} H{}" fill="none" stroke="black"/>"#,
        h - m,
        w - m
    );
    let xlabel = if log_x { format!("log {axis}") } else { axis.to_string() };
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{xlabel}</text>"#, w / 2.0, h - 12.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="14" transform="rotate(-90 14 {})">{} radius</text>"#,
        h / 2.0,
        h / 2.0,
        theorem
    );
    let _ = writeln!(s, r#"<text x="{m}" y="{}" font-size="11">{}</text>"#, h - m + 16.0, sig15(x0));
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, w - m, h - m + 16.0, sig15(x1));
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, m - 4.0, h - m, sig15(y0));
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, m - 4.0, m + 4.0, sig15(y1));
    for (key, pts) in &groups {
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"><title>{key}</title></polyline>"#,
            path.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

fn figures_text(certs: &[FigureCertificate]) -> String {
    let mut s = String::new();
    for c in certs {
        let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.claim);
        let _ = writeln!(s, "     method: {}", c.method);
        if let Some(n) = c.sturm_count {
            let _ = writeln!(s, "     sturm count: {n}");
        }
        if c.grid_points > 0 {
            let _ = writeln!(
                s,
                "     grid: {} points, {} failures, min margin {}",
                c.grid_points,
                c.grid_failures.len(),
                c.min_margin.map(|m| format!("{m:e}")).unwrap_or_else(|| "-".into())
            );
        }
        for n in &c.notes {
            let _ = writeln!(s, "     note: {n}");
        }
    }
    s
}

fn cmd_certify(out: &OutputArgs) -> Result<Outcome, CliError> {
    let certs = figure_certificates()?;
    let failed = certs.iter().any(|c| !c.passed);
    let body = match out.format {
        Format::Text => figures_text(&certs),
        Format::Json => to_json(&certs)?,
        f => return Err(unsupported("certify", f)),
    };
    Ok(Outcome::finding_if(body, failed))
}

fn probe_text(r: &SharpnessReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", format!("{} {}", r.theorem, param_summary(r.theorem, &r.params)).trim_end());
    let _ = writeln!(s, "  r0           {}", sig15(r.r0));
    for (label, o) in [("below", &r.below), ("above", &r.above)] {
        let _ = writeln!(
            s,
            "  {label}  r={}  {:?}  value={} tail={:e} bound={}",
            sig15(o.r),
            o.verdict,
            sig15(o.value),
            o.tail_error,
            sig15(o.bound)
        );
    }
    let status = match (r.sharp_claimed, r.transition) {
        (true, true) => "transition confirmed",
        (true, false) => "MISSING transition",
        (false, _) if r.passed => "holds below (no sharpness claim)",
        (false, _) => "FAILS below the radius",
    };
    let _ = writeln!(s, "  {status}");
    s
}

fn cmd_sharpness(a: &SharpnessArgs) -> Result<Outcome, CliError> {
    let rep = sharpness_probe(a.params.theorem, a.params.params(), a.delta)?;
    let body = match a.output.format {
        Format::Text => probe_text(&rep),
        Format::Json => to_json(&rep)?,
        f => return Err(unsupported("sharpness", f)),
    };
    Ok(Outcome::finding_if(body, !rep.passed))
}

fn settings(c: &CampaignArgs, trials: usize) -> CampaignSettings {
    CampaignSettings {
        trials,
        r_fraction: c.r_fraction,
        seed: c.seed,
        order: c.order,
        execution: if c.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    }
}

pub const CAMPAIGN_CSV_HEADER: &str = "theorem,K,alpha,mu,N,seed,trials,r,holds,fails,inconclusive,max_ratio";

fn campaign_csv_row(r: &CampaignReport) -> Vec<String> {
    let mut row = param_fields(r.theorem, &r.params);
    row.extend([
        r.seed.to_string(),
        r.trials.to_string(),
        sig15(r.r),
        r.holds.to_string(),
        r.fails.to_string(),
        r.inconclusive.to_string(),
        sig15(r.max_ratio),
    ]);
    row
}

fn campaign_text(r: &CampaignReport) -> String {
    format!(
        "{} {}  seed={} trials={} r={} (= {} r0)\n  holds={} fails={} inconclusive={} max ratio={}\n",
        r.theorem,
        param_summary(r.theorem, &r.params),
        r.seed,
        r.trials,
        sig15(r.r),
        r.r_fraction,
        r.holds,
        r.fails,
        r.inconclusive,
        sig15(r.max_ratio)
    )
}

fn cmd_falsify(a: &FalsifyArgs) -> Result<Outcome, CliError> {
    if a.trials == 0 {
        return Err(CliError::usage("--trials must be positive"));
    }
    let rep = falsify(a.params.theorem, a.params.params(), &settings(&a.campaign, a.trials))?;
    let body = match a.output.format {
        Format::Text => campaign_text(&rep),
        Format::Json => to_json(&rep)?,
        Format::Csv => csv_table(CAMPAIGN_CSV_HEADER, [campaign_csv_row(&rep)])?,
        Format::Svg => return Err(unsupported("falsify", Format::Svg)),
    };
    Ok(Outcome::finding_if(body, rep.has_finding()))
}

/// Campaign without per-trial records.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub theorem: TheoremId,
    pub params: Params,
    pub seed: u64,
    pub trials: usize,
    pub r0: f64,
    pub r: f64,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub max_ratio: f64,
}

impl From<&CampaignReport> for CampaignSummary {
    fn from(r: &CampaignReport) -> Self {
        Self {
            theorem: r.theorem,
            params: r.params,
            seed: r.seed,
            trials: r.trials,
            r0: r.r0,
            r: r.r,
            holds: r.holds,
            fails: r.fails,
            inconclusive: r.inconclusive,
            max_ratio: r.max_ratio,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub radii: Vec<RadiusRecord>,
    pub figures: Vec<FigureCertificate>,
    pub t32: Vec<T32Report>,
    pub sharpness: Vec<SharpnessReport>,
    pub campaigns: Vec<CampaignSummary>,
}

impl Report {
    pub fn has_finding(&self) -> bool {
        self.figures.iter().any(|f| !f.passed)
            || self.sharpness.iter().any(|s| !s.passed)
            || self.campaigns.iter().any(|c| c.fails > 0)
    }
}

/// Parameter sets probed for sharpness in the report.
pub fn probe_catalog() -> Vec<(TheoremId, Params)> {
    use TheoremId::*;
    vec![
        (ThmD, Params::with_k(1.0)),
        (ThmD, Params::with_k(2.0)),
        (T41, Params::with_k_mu(1.0, 0.0)),
        (T41, Params::with_k_mu(1.0, 1.0)),
        (T42, Params::with_k_mu(1.0, 0.0)),
        (T42, Params::with_k_mu(1.0, 1.0)),
        (T43, Params::with_k(1.0)),
        (T44, Params::with_k(1.0)),
        (T51, Params::with_k_alpha(1.0, 1.0)),
        (T51, Params::with_k_alpha(1.0, 2.0)),
        (T51, Params::with_k_alpha(2.0, 1.0)),
        (T51, Params::with_k_alpha(2.0, 2.0)),
        (T52, Params::with_k_alpha(1.0, 1.0)),
    ]
}

/// Radius entries of the report: every theorem at the defaults, plus a few
/// quasiconformal and parameter variants.
pub fn radius_catalog() -> Vec<(TheoremId, Params)> {
    use TheoremId::*;
    let mut v: Vec<(TheoremId, Params)> = TheoremId::ALL.iter().map(|&t| (t, Params::default())).collect();
    for big_k in [2.0, 5.0, 10.0] {
        for t in [ThmD, ThmE, T31, T32, T41, T42, T43, T44, T51, T52] {
            v.push((t, Params::with_k(big_k)));
        }
    }
    for n in [2, 3, 5] {
        v.push((ThmA, Params { n, ..Params::default() }));
        v.push((ThmI, Params { n, ..Params::default() }));
    }
    for alpha in [1.5, 2.0] {
        v.push((ThmH, Params::with_k_alpha(1.0, alpha)));
        v.push((T51, Params::with_k_alpha(1.0, alpha)));
        v.push((T52, Params::with_k_alpha(1.0, alpha)));
    }
    v.push((ThmB, Params { a0: 0.5, ..Params::default() }));
    v.push((T41, Params::with_k_mu(1.0, 1.0)));
    v.push((T42, Params::with_k_mu(1.0, 1.0)));
    v
}

pub fn build_report(tol: f64, campaign: &CampaignSettings) -> Result<Report, CliError> {
    let cat = radius_catalog();
    let radii = map_indexed(cat.len(), campaign.execution, |i| compute_radius(cat[i].0, cat[i].1, tol))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let figures = figure_certificates()?;
    let t32 = [1.0, 3.0]
        .iter()
        .map(|&k| cross_check_t32(k, tol.min(1e-10)))
        .collect::<Result<Vec<_>, _>>()?;
    let probes = probe_catalog();
    let sharpness = probes
        .iter()
        .map(|&(t, p)| sharpness_probe(t, p, 1e-3))
        .collect::<Result<Vec<_>, _>>()?;
    let campaigns = [
        (TheoremId::ThmD, Params::default()),
        (TheoremId::T31, Params::with_k(2.0)),
        (TheoremId::T51, Params::with_k_alpha(2.0, 1.5)),
    ]
    .iter()
    .map(|&(t, p)| falsify(t, p, campaign).map(|r| CampaignSummary::from(&r)))
    .collect::<Result<Vec<_>, _>>()?;
    Ok(Report {
        radii,
        figures,
        t32,
        sharpness,
        campaigns,
    })
}

fn report_text(r: &Report) -> String {
    let mut s = String::from("radii\n");
    for rec in &r.radii {
        let _ = writeln!(
            s,
            "  {:<32} {}",
            format!("{} {}", rec.theorem, param_summary(rec.theorem, &rec.params)),
            sig15(rec.root.estimate)
        );
    }
    s.push_str("figure certificates\n");
    for f in &r.figures {
        let _ = writeln!(s, "  {} {}", if f.passed { "PASS" } else { "FAIL" }, f.id);
    }
    s.push_str("univalent refined equation cross-check\n");
    for t in &r.t32 {
        for v in &t.variants {
            let _ = writeln!(
                s,
                "  K={} {:?}: {} root(s), root {}",
                t.big_k,
                v.variant,
                v.sturm_count,
                v.root.map(sig15).unwrap_or_else(|| "-".into())
            );
        }
    }
    s.push_str("sharpness\n");
    for p in &r.sharpness {
        let _ = writeln!(
            s,
            "  {} {:<28} r0={} {}",
            if p.passed { "PASS" } else { "FAIL" },
            format!("{} {}", p.theorem, param_summary(p.theorem, &p.params)),
            sig15(p.r0),
            if p.transition { "transition" } else { "one-sided" }
        );
    }
    s.push_str("falsification\n");
    for c in &r.campaigns {
        let _ = writeln!(
            s,
            "  {} {}: holds={} fails={} inconclusive={}",
            c.theorem,
            param_summary(c.theorem, &c.params),
            c.holds,
            c.fails,
            c.inconclusive
        );
    }
    s
}

fn report_csv(r: &Report) -> Result<String, CliError> {
    csv_table(CSV_HEADER, r.radii.iter().map(csv_row))
}

fn cmd_report(a: &ReportArgs) -> Result<Outcome, CliError> {
    check_tol(a.tol.tol)?;
    if a.trials == 0 {
        return Err(CliError::usage("--trials must be positive"));
    }
    let rep = build_report(a.tol.tol, &settings(&a.campaign, a.trials))?;
    let body = match a.output.format {
        Format::Text => report_text(&rep),
        Format::Json => to_json(&rep)?,
        Format::Csv => report_csv(&rep)?,
        Format::Svg => return Err(unsupported("report", Format::Svg)),
    };
    Ok(Outcome::finding_if(body, rep.has_finding()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bohrlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sig15_formatting() {
        assert_eq!(sig15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(sig15(100.0), "100.000000000000");
        assert_eq!(sig15(0.0), "0");
    }

    #[test]
    fn radius_commands() {
        let (code, out, _) = run_capture(&["radius", "--theorem", "ThmF"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.2468298") && out.contains("sturm_count_one"));
        let (code, out, _) = run_capture(&["radius", "--theorem", "ThmD", "--K", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("0.333333333333333"));
        let (code, out, _) = run_capture(&["radius", "--theorem", "T52", "--alpha", "1", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["estimate"].as_f64().unwrap() - 0.2).abs() < 1e-12);
        for key in ["theorem", "params", "interval", "certificate", "residual"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["radius", "--theorem", "Thm9"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["radius"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["radius", "--theorem", "ThmD", "--K", "0.5"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["radius", "--theorem", "ThmH", "--verbatim"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["radius", "--theorem", "ThmD", "--tol", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["sweep", "--theorem", "ThmH", "--alpha-grid", "3,4"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn sweep_csv_rows() {
        let (code, out, _) = run_capture(&["sweep", "--theorem", "ThmD", "--K-grid", "1,2,5,10", "--format", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        let radii: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
        for (r, want) in radii.iter().zip([1.0 / 3.0, 3.0 / 11.0, 3.0 / 13.0, 11.0 / 51.0]) {
            assert!((r - want).abs() < 1e-8);
        }
        let (_, svg, _) = run_capture(&["sweep", "--theorem", "ThmD", "--format", "svg"]);
        assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    }

    #[test]
    fn grid_collapses_unused_axes() {
        let g = sweep_grid(TheoremId::ThmC, &DEFAULT_K_GRID, &DEFAULT_ALPHA_GRID, &DEFAULT_MU_GRID, 1, 0.0);
        assert_eq!(g.len(), 1);
        let g = sweep_grid(TheoremId::T41, &DEFAULT_K_GRID, &DEFAULT_ALPHA_GRID, &DEFAULT_MU_GRID, 1, 0.0);
        assert_eq!(g.len(), DEFAULT_K_GRID.len() * DEFAULT_MU_GRID.len());
    }

    #[test]
    fn sharpness_and_falsify_commands() {
        let (code, out, _) = run_capture(&["sharpness", "--theorem", "T42", "--K", "1", "--mu", "1", "--format", "json"]);
        assert_eq!(code, 0, "{out}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["r0"].as_f64().unwrap() - (7f64.sqrt() - 2.0) / 3.0).abs() < 1e-10);
        let (code, out, _) = run_capture(&["sharpness", "--theorem", "ThmH", "--alpha", "1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("0.333333333333333"));
        let (code, out, _) = run_capture(&["falsify", "--theorem", "ThmD", "--trials", "50", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.lines().nth(1).unwrap().contains(",50,0,0,"), "{out}");
    }

    #[test]
    fn env_tolerance() {
        let parsed = Cli::try_parse_from(["bohrlab", "radius", "--theorem", "ThmD", "--tol", "1e-6"]).unwrap();
        match parsed.command {
            Command::Radius(a) => assert_eq!(a.tol.tol, 1e-6),
            _ => unreachable!(),
        }
    }
}
