//! Command-line front end: `spectrum`, `nf`, `commutator`, `verify`, `wconst`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

use crate::fock::{build_rep, closed_form_level, spectrum, FockError};
use crate::identities::constants::{central_charge, central_term, structure_n, structure_phi, NReading, PhiReading, PHI_CAP};
use crate::identities::{run_suite, IdentityError, Report, RunConfig, Suite};
use crate::normal_order::{parse, NormalOrderError, NormalOrderer, OperatorExpr, ParseError};
use crate::params::{AlgebraParams, ParamsError, ParamsFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    NormalOrder(#[from] NormalOrderError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "clambda", version, about = "Verification toolkit for C_lambda-extended oscillator algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of H0 against the closed-form levels.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write the generator matrices as JSON to this path.
        #[arg(long, value_name = "PATH")]
        dump_matrices: Option<PathBuf>,
    },
    /// Normal form of an operator expression.
    Nf {
        expr: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Normal form of `[X, Y]`.
    Commutator {
        x: String,
        y: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        json: bool,
    },
    /// Run identity suites and emit the JSON report.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated suites, or `all`.
        #[arg(long)]
        suite: Option<String>,
        /// Report path; the summary then goes to stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Treat discrepancies as failures.
        #[arg(long)]
        strict_paper: bool,
        #[arg(long, value_enum)]
        phi_reading: Option<PhiReading>,
        #[arg(long = "N-reading", value_enum)]
        n_reading: Option<NReading>,
        #[arg(long, value_name = "PATH")]
        dump_matrices: Option<PathBuf>,
    },
    /// Structure constants and central terms of the abstract W-infinity algebra.
    Wconst {
        #[arg(long, default_value_t = 0)]
        i: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_enum, default_value = "literal")]
        phi_reading: PhiReading,
        #[arg(long = "N-reading", value_enum, default_value = "literal")]
        n_reading: NReading,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Parameter flags shared by the operator subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Order of the Klein group, at least 2
    #[arg(long)]
    pub lambda: Option<usize>,
    /// `a0,a1,...`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "kappa")]
    pub alpha: Option<String>,
    /// `re:im,...` or `re,...` for `kappa_1..kappa_{lambda-1}`.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    /// Truncation dimension D.
    #[arg(long)]
    pub dim: Option<usize>,
    /// JSON config: parameter fields plus run fields. Flags win.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// On-disk run configuration.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda: Option<usize>,
    pub alpha: Option<Vec<f64>>,
    pub kappa: Option<Vec<[f64; 2]>>,
    pub dim: Option<usize>,
    pub suites: Option<String>,
    pub strict_paper: Option<bool>,
    pub phi_reading: Option<PhiReading>,
    pub n_reading: Option<NReading>,
    pub tolerance: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

const DEFAULT_DIM: usize = 64;

fn parse_floats(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number {s:?}"))))
        .collect()
}

fn parse_complex_list(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    text.split(',')
        .map(|part| {
            let bad = || CliError::Usage(format!("bad complex number {part:?}"));
            let mut it = part.trim().splitn(2, ':');
            let re = it.next().unwrap_or("").parse::<f64>().map_err(|_| bad())?;
            let im = match it.next() {
                Some(s) => s.parse::<f64>().map_err(|_| bad())?,
                None => 0.0,
            };
            Ok([re, im])
        })
        .collect()
}

impl ParamArgs {
    fn config_file(&self) -> Result<ConfigFile, CliError> {
        match &self.config {
            Some(path) => ConfigFile::load(path),
            None => Ok(ConfigFile::default()),
        }
    }

    /// Parameters from flags, falling back to the config file, then to `α = 0`.
    pub fn resolve(&self, file: &ConfigFile) -> Result<AlgebraParams, CliError> {
        let lambda = self
            .lambda
            .or(file.lambda)
            .ok_or_else(|| CliError::Usage("--lambda is required (flag or config file)".into()))?;
        let mut source = ParamsFile { lambda, alpha: None, kappa: None };
        if let Some(a) = &self.alpha {
            source.alpha = Some(parse_floats(a)?);
        } else if let Some(k) = &self.kappa {
            source.kappa = Some(parse_complex_list(k)?);
        } else if file.alpha.is_some() || file.kappa.is_some() {
            source.alpha = file.alpha.clone();
            source.kappa = file.kappa.clone();
        } else {
            return Ok(AlgebraParams::undeformed(lambda)?);
        }
        Ok(source.into_params()?)
    }

    fn dim(&self, file: &ConfigFile) -> usize {
        self.dim.or(file.dim).unwrap_or(DEFAULT_DIM)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

/// One row of the spectrum table.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
    pub closed_form: f64,
    pub diff: f64,
}

pub fn spectrum_table(params: &AlgebraParams, dim: usize) -> Result<Vec<Level>, FockError> {
    let rep = build_rep(params, dim)?;
    Ok(spectrum(&rep)
        .into_iter()
        .enumerate()
        .map(|(n, energy)| {
            let closed_form = closed_form_level(params, n);
            Level { n, energy, closed_form, diff: (energy - closed_form).abs() }
        })
        .collect())
}

fn cmd_spectrum(
    params: &ParamArgs,
    format: Format,
    dump: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = params.config_file()?;
    let p = params.resolve(&file)?;
    let dim = params.dim(&file);
    let table = spectrum_table(&p, dim)?;
    if let Some(path) = dump {
        let rep = build_rep(&p, dim)?;
        write_file(path, &serde_json::to_string_pretty(&rep.dump_matrices()).expect("valid JSON"))?;
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&table).expect("valid JSON") + "\n",
        Format::Text => {
            let mut s = format!("{:>4}  {:>22}  {:>22}  {:>10}\n", "n", "E_n", "closed form", "|diff|");
            for l in &table {
                s += &format!("{:>4}  {:>22.15}  {:>22.15}  {:>10.3e}\n", l.n, l.energy, l.closed_form, l.diff);
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_nf(params: &ParamArgs, expr: OperatorExpr, json: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = params.config_file()?;
    let p = params.resolve(&file)?;
    let nf = NormalOrderer::new(&p).normal_form(&expr)?;
    let text = if json {
        serde_json::to_string_pretty(&nf.to_json()).expect("valid JSON") + "\n"
    } else {
        nf.to_string()
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

/// Exit code for a finished report.
pub fn report_exit_code(report: &Report, strict_paper: bool) -> i32 {
    if report.summary.fail > 0 || (strict_paper && report.summary.discrepancy > 0) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn report_text(report: &Report) -> String {
    let num = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "-".into());
    let mut s = String::new();
    for c in &report.checks {
        let status = serde_json::to_value(c.status).expect("status serializes");
        s += &format!(
            "{:<15} {:<40} {:>10} {:>10}\n",
            status.as_str().unwrap_or(""),
            c.id,
            num(c.residual_claim),
            num(c.residual_best)
        );
    }
    s + &format!("{}\n", report.summary)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    params: &ParamArgs,
    suite: Option<&str>,
    out_path: Option<&Path>,
    format: Option<Format>,
    strict_paper: bool,
    phi_reading: Option<PhiReading>,
    n_reading: Option<NReading>,
    dump: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = params.config_file()?;
    let p = params.resolve(&file)?;
    let mut config = RunConfig::new(p);
    config.dim = params.dim(&file);
    if let Some(list) = suite.map(str::to_string).or_else(|| file.suites.clone()) {
        config.suites = Suite::parse_list(&list).map_err(CliError::Usage)?;
    }
    if let Some(r) = phi_reading.or(file.phi_reading) {
        config.phi_reading = r;
    }
    if let Some(r) = n_reading.or(file.n_reading) {
        config.n_reading = r;
    }
    if let Some(t) = file.tolerance {
        config.tol = t;
    }
    let strict = strict_paper || file.strict_paper.unwrap_or(false);
    if let Some(path) = dump {
        let rep = build_rep(&config.params, config.dim)?;
        write_file(path, &serde_json::to_string_pretty(&rep.dump_matrices()).expect("valid JSON"))?;
    }
    let report = run_suite(&config)?;
    let json = report.to_json() + "\n";
    let summary = format!("{}\n", report.summary);
    match out_path {
        Some(path) => {
            write_file(path, &json)?;
            emit(out, &summary)?;
        }
        None => {
            match format.unwrap_or(Format::Json) {
                Format::Json => emit(out, &json)?,
                Format::Text => emit(out, &report_text(&report))?,
            }
            emit(err, &summary)?;
        }
    }
    Ok(report_exit_code(&report, strict))
}

fn rational_text(x: &num_rational::BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn reading_label(literal: bool) -> &'static str {
    if literal {
        "literal"
    } else {
        "alt"
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_wconst(
    i: u32,
    j: u32,
    l: u32,
    m: i64,
    n: i64,
    phi_reading: PhiReading,
    n_reading: NReading,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let c = central_charge(i);
    let c_text = rational_text(&c);
    let c_m = central_term(i, m);
    let c_m_text = rational_text(&c_m);
    let c_m_value = num_traits::ToPrimitive::to_f64(&c_m).unwrap_or(f64::NAN);
    let n_values: Vec<(NReading, f64)> =
        [NReading::Literal, NReading::Alt].into_iter().map(|r| (r, structure_n(i, j, l, m, n, r))).collect();
    let mut phi_values = Vec::new();
    let mut warnings = Vec::new();
    for r in [PhiReading::Literal, PhiReading::Alt] {
        match structure_phi(i, j, l, r, PHI_CAP) {
            Ok(s) => phi_values.push((r, Some(s))),
            Err(e) => {
                warnings.push(format!("phi[{}]: {e}", reading_label(r == PhiReading::Literal)));
                phi_values.push((r, None));
            }
        }
    }
    let mut g_values = Vec::new();
    for (nr, nv) in &n_values {
        for (pr, phi) in &phi_values {
            let g = phi.map(|s| s.value * nv / (2.0 * (l as f64 + 1.0)));
            g_values.push((*nr, *pr, g));
        }
    }
    let text = match format {
        Format::Json => {
            let n_json: serde_json::Map<_, _> =
                n_values.iter().map(|(r, v)| (reading_label(*r == NReading::Literal).to_string(), json!(v))).collect();
            let phi_json: serde_json::Map<_, _> = phi_values
                .iter()
                .map(|(r, s)| {
                    let v = s.map(|s| json!({"value": s.value, "terms": s.terms, "terminated": s.terminated}));
                    (reading_label(*r == PhiReading::Literal).to_string(), v.unwrap_or(serde_json::Value::Null))
                })
                .collect();
            let g_json: serde_json::Map<_, _> = g_values
                .iter()
                .map(|(nr, pr, g)| {
                    let key = format!(
                        "n_{}.phi_{}",
                        reading_label(*nr == NReading::Literal),
                        reading_label(*pr == PhiReading::Literal)
                    );
                    (key, json!(g))
                })
                .collect();
            let selected = g_values.iter().find(|(nr, pr, _)| *nr == n_reading && *pr == phi_reading).and_then(|x| x.2);
            let value = json!({
                "i": i, "j": j, "l": l, "m": m, "n": n,
                "c_i": c_text,
                "c_i_m": c_m_value,
                "c_i_m_exact": c_m_text,
                "N": n_json,
                "phi": phi_json,
                "g": g_json,
                "n_reading": n_reading,
                "phi_reading": phi_reading,
                "g_selected": selected,
                "warnings": warnings,
            });
            serde_json::to_string_pretty(&value).expect("valid JSON") + "\n"
        }
        Format::Text => {
            let mut s = format!("i = {i}, j = {j}, l = {l}, m = {m}, n = {n}\n");
            s += &format!("c_{i} = {c_text}\n");
            s += &format!("c_{i}({m}) = {c_m_text}\n");
            for (r, v) in &n_values {
                s += &format!("N[{}] = {v}\n", reading_label(*r == NReading::Literal));
            }
            for (r, v) in &phi_values {
                if let Some(v) = v {
                    s += &format!("phi[{}] = {} ({} terms)\n", reading_label(*r == PhiReading::Literal), v.value, v.terms);
                }
            }
            for (nr, pr, g) in &g_values {
                if let Some(g) = g {
                    let mark = if *nr == n_reading && *pr == phi_reading { "  (selected)" } else { "" };
                    s += &format!(
                        "g[N {}, phi {}] = {g}{mark}\n",
                        reading_label(*nr == NReading::Literal),
                        reading_label(*pr == PhiReading::Literal)
                    );
                }
            }
            for w in &warnings {
                s += &format!("warning: {w}\n");
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Spectrum { params, format, dump_matrices } => {
            cmd_spectrum(&params, format, dump_matrices.as_deref(), out)
        }
        Command::Nf { expr, params, format, json } => cmd_nf(&params, parse(&expr)?, json || format == Format::Json, out),
        Command::Commutator { x, y, params, format, json } => {
            let expr = OperatorExpr::commutator(parse(&x)?, parse(&y)?);
            cmd_nf(&params, expr, json || format == Format::Json, out)
        }
        Command::Verify { params, suite, out: path, format, strict_paper, phi_reading, n_reading, dump_matrices } => {
            cmd_verify(
                &params,
                suite.as_deref(),
                path.as_deref(),
                format,
                strict_paper,
                phi_reading,
                n_reading,
                dump_matrices.as_deref(),
                out,
                err,
            )
        }
        Command::Wconst { i, j, l, m, n, phi_reading, n_reading, format } => {
            cmd_wconst(i, j, l, m, n, phi_reading, n_reading, format, out)
        }
    }
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Complex parsing helper shared with examples: `"re:im"` or `"re"`.
pub fn parse_kappa(text: &str) -> Result<Vec<Complex64>, CliError> {
    Ok(parse_complex_list(text)?.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}
