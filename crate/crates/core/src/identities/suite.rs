//! Suite selection, index grids and report assembly.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::constants::{central_charge, central_term_vanishes, winf_structure, NReading, PhiReading};
use super::oscillator::{check_basic, check_beta_closed_form, check_beta_oracle, check_general, check_single_mode};
use super::virasoro::{check_klein_virasoro, check_lambda2, check_virasoro, fit_sigma};
use super::winf::{check_casimir, check_jacobi, check_klein_winf, check_sp2, check_winf};
use super::{guard, Ctx, IdentityCheck, IdentityError, Status, DEFAULT_TOL};
use crate::fock::build_rep;
use crate::params::AlgebraParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Basic,
    Single,
    General,
    Virasoro,
    Lambda2,
    Winf,
    Sp2,
    Casimir,
    Wconst,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Basic,
        Suite::Single,
        Suite::General,
        Suite::Virasoro,
        Suite::Lambda2,
        Suite::Winf,
        Suite::Sp2,
        Suite::Casimir,
        Suite::Wconst,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Basic => "basic",
            Suite::Single => "single",
            Suite::General => "general",
            Suite::Virasoro => "virasoro",
            Suite::Lambda2 => "lambda2",
            Suite::Winf => "winf",
            Suite::Sp2 => "sp2",
            Suite::Casimir => "casimir",
            Suite::Wconst => "wconst",
        }
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(text: &str) -> Result<Vec<Suite>, String> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err("empty suite selection".into());
        }
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Index ranges swept by each suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grids {
    pub single_m: Vec<u32>,
    pub general_n: Vec<u32>,
    pub general_m: Vec<u32>,
    pub beta_closed_form_n: Vec<u32>,
    pub virasoro: Vec<i64>,
    pub klein_virasoro: Vec<i64>,
    pub lambda2: Vec<i64>,
    pub winf: Vec<u32>,
    pub klein_winf: Vec<u32>,
    pub jacobi_triples: usize,
    pub wconst_ijl: Vec<u32>,
    pub wconst_mn: Vec<i64>,
    pub wconst_c_max: u32,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            single_m: (1..=8).collect(),
            general_n: (1..=4).collect(),
            general_m: (1..=8).collect(),
            beta_closed_form_n: (1..=6).collect(),
            virasoro: (-1..=3).collect(),
            klein_virasoro: (-1..=5).collect(),
            lambda2: (0..=2).collect(),
            winf: (0..=3).collect(),
            klein_winf: (0..=4).collect(),
            jacobi_triples: 24,
            wconst_ijl: (0..=3).collect(),
            wconst_mn: vec![-1, 1],
            wconst_c_max: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: AlgebraParams,
    pub dim: usize,
    pub suites: Vec<Suite>,
    pub grids: Grids,
    pub phi_reading: PhiReading,
    pub n_reading: NReading,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(params: AlgebraParams) -> Self {
        RunConfig {
            params,
            dim: 64,
            suites: Suite::ALL.to_vec(),
            grids: Grids::default(),
            phi_reading: PhiReading::Literal,
            n_reading: NReading::Literal,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub discrepancy: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub report_only: usize,
}

impl Summary {
    pub fn from_checks(checks: &[IdentityCheck]) -> Self {
        let mut s = Summary::default();
        for c in checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Discrepancy => s.discrepancy += 1,
                Status::Fail => s.fail += 1,
                Status::NotApplicable => s.not_applicable += 1,
                Status::ReportOnly => s.report_only += 1,
            }
        }
        s
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pass: {}, discrepancy: {}, fail: {}, not-applicable: {}, report-only: {}",
            self.pass, self.discrepancy, self.fail, self.not_applicable, self.report_only
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: Value,
    pub checks: Vec<IdentityCheck>,
    pub summary: Summary,
}

impl Report {
    pub fn check(&self, id: &str) -> Option<&IdentityCheck> {
        self.checks.binary_search_by(|c| c.id.as_str().cmp(id)).ok().map(|i| &self.checks[i])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Conventions in force, recorded in every report.
pub const CONVENTIONS: [&str; 6] = [
    "Klein operator K|n> = exp(2 pi i n / lambda)|n>; x = exp(-2 pi i / lambda)",
    "alpha_mu = sum_r kappa_r exp(+2 pi i mu r / lambda), kappa_0 = 0; the e^{-} sign would pair with I + sum kappa_r K^{-r}",
    "projectors P_mu = (1/lambda) sum_nu exp(-2 pi i mu nu / lambda) K^nu (1/lambda normalization)",
    "normal order ad^p a^q K^r; fitted Klein coefficients are quoted with K placed on the left",
    "residual = max |L - R| over safe-window columns / max(1, max |L|, max |R|, max |terms|), where |terms| replaces every sign and phase by its modulus",
    "Virasoro-type brackets (m - n) l_{m+n} are compared after applying the fitted global sign sigma",
];

enum Job {
    Basic,
    Single(u32),
    General(u32, u32),
    BetaOracle(u32, u32),
    BetaClosed(u32, u32),
    Virasoro(i64, i64),
    KleinVirasoro(i64),
    Lambda2,
    Winf(u32, u32, u32, u32),
    KleinWinf(u32, u32),
    Jacobi,
    Sp2,
    Casimir,
    CentralCharge(u32),
    Structure(u32, u32, u32, i64, i64),
}

fn jobs(config: &RunConfig) -> Vec<Job> {
    let g = &config.grids;
    let mut out = Vec::new();
    for suite in &config.suites {
        match suite {
            Suite::Basic => out.push(Job::Basic),
            Suite::Single => out.extend(g.single_m.iter().map(|&m| Job::Single(m))),
            Suite::General => {
                for &n in &g.general_n {
                    for &m in &g.general_m {
                        out.push(Job::General(n, m));
                        if n < m {
                            out.push(Job::BetaOracle(n, m));
                        }
                    }
                }
                for &n in &g.beta_closed_form_n {
                    for &m in &g.general_m {
                        if n < m {
                            out.push(Job::BetaClosed(n, m));
                        }
                    }
                }
            }
            Suite::Virasoro => {
                for &m in &g.virasoro {
                    out.extend(g.virasoro.iter().map(|&n| Job::Virasoro(m, n)));
                }
                out.extend(g.klein_virasoro.iter().map(|&m| Job::KleinVirasoro(m)));
            }
            Suite::Lambda2 => out.push(Job::Lambda2),
            Suite::Winf => {
                for &s in &g.winf {
                    for &m in &g.winf {
                        for &t in &g.winf {
                            out.extend(g.winf.iter().map(|&n| Job::Winf(s, m, t, n)));
                        }
                    }
                }
                for &s in &g.klein_winf {
                    out.extend(g.klein_winf.iter().map(|&m| Job::KleinWinf(s, m)));
                }
                out.push(Job::Jacobi);
            }
            Suite::Sp2 => out.push(Job::Sp2),
            Suite::Casimir => out.push(Job::Casimir),
            Suite::Wconst => {
                out.extend((0..=g.wconst_c_max).map(Job::CentralCharge));
                for &i in &g.wconst_ijl {
                    for &j in &g.wconst_ijl {
                        for &l in &g.wconst_ijl {
                            for &m in &g.wconst_mn {
                                out.extend(g.wconst_mn.iter().map(|&n| Job::Structure(i, j, l, m, n)));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn central_charge_check(i: u32) -> IdentityCheck {
    let c = central_charge(i);
    let positive = c > num_rational::BigRational::from_integer(0.into());
    let window = (-(i as i64 + 1)..=(i as i64 + 1)).all(|m| central_term_vanishes(i, m));
    let mut check = IdentityCheck::not_applicable(format!("wconst.c{i}"), "");
    check.fitted.clear();
    check.claim = "c_i > 0 and c_i(m) = 0 for |m| <= i+1".into();
    check.fitted.insert("c_i".into(), json!(format!("{}/{}", c.numer(), c.denom())));
    check.fitted.insert("positive".into(), json!(positive));
    check.fitted.insert("vanishing_window".into(), json!(window));
    check.status = if positive && window { Status::Pass } else { Status::Fail };
    check
}

fn structure_check(i: u32, j: u32, l: u32, m: i64, n: i64, config: &RunConfig) -> IdentityCheck {
    let id = format!("wconst.g.i{i}.j{j}.l{l}.m{m}.n{n}");
    let mut check = IdentityCheck::not_applicable(id, "");
    check.fitted.clear();
    check.status = Status::ReportOnly;
    for nr in [NReading::Literal, NReading::Alt] {
        for pr in [PhiReading::Literal, PhiReading::Alt] {
            let key = format!("n_{}.phi_{}", reading_name(nr == NReading::Literal), reading_name(pr == PhiReading::Literal));
            let value = match winf_structure(i, j, l, m, n, nr, pr) {
                Ok(w) => json!({"N": w.value_n, "phi": w.value_phi, "g": w.value_g, "phi_terms": w.phi_terms}),
                Err(e) => json!({"warning": e.to_string()}),
            };
            if nr == config.n_reading && pr == config.phi_reading {
                check.fitted.insert("selected".into(), value.clone());
            }
            check.fitted.insert(key, value);
        }
    }
    check
}

fn reading_name(literal: bool) -> &'static str {
    if literal {
        "literal"
    } else {
        "alt"
    }
}

/// Runs the selected suites. Per-check errors become failed entries; only
/// an invalid Fock truncation aborts the run.
pub fn run_suite(config: &RunConfig) -> Result<Report, IdentityError> {
    let rep = build_rep(&config.params, config.dim)?;
    let ctx = Ctx::with_tol(&rep, config.tol);
    let lambda = config.params.lambda();
    let sigma = fit_sigma(lambda, &config.grids.virasoro)?;
    let s = sigma.sigma;
    let mut checks: Vec<IdentityCheck> = jobs(config)
        .par_iter()
        .flat_map_iter(|job| -> Vec<IdentityCheck> {
            match *job {
                Job::Basic => check_basic(&ctx),
                Job::Single(m) => {
                    if (m as usize) > config.dim / 2 {
                        vec![IdentityCheck::not_applicable(format!("single_mode.m{m}"), "m exceeds D/2")]
                    } else {
                        vec![guard(format!("single_mode.m{m}"), |_| check_single_mode(&ctx, m))]
                    }
                }
                Job::General(n, m) => vec![guard(format!("general.n{n}.m{m}"), |_| check_general(&ctx, n, m))],
                Job::BetaOracle(n, m) => {
                    vec![guard(format!("beta_oracle.n{n}.m{m}"), |_| check_beta_oracle(&ctx, n, m))]
                }
                Job::BetaClosed(n, m) => {
                    vec![guard(format!("beta_closed_form.n{n}.m{m}"), |_| check_beta_closed_form(&ctx, n, m))]
                }
                Job::Virasoro(m, n) => vec![guard(format!("virasoro.m{m}.n{n}"), |_| check_virasoro(&ctx, m, n, s))],
                Job::KleinVirasoro(m) => {
                    vec![guard(format!("klein_virasoro.m{m}"), |_| check_klein_virasoro(&ctx, m))]
                }
                Job::Lambda2 => match check_lambda2(&ctx, s, &config.grids.lambda2) {
                    Ok(v) => v,
                    Err(IdentityError::WrongLambda { .. }) => {
                        vec![IdentityCheck::not_applicable("lambda2", "requires lambda = 2")]
                    }
                    Err(e) => vec![IdentityCheck::failed("lambda2", &e)],
                },
                Job::Winf(s_, m, t, n) => {
                    vec![guard(format!("winf.s{s_}.m{m}.t{t}.n{n}"), |_| check_winf(&ctx, s_, m, t, n))]
                }
                Job::KleinWinf(s_, m) => vec![guard(format!("klein_winf.s{s_}.m{m}"), |_| check_klein_winf(&ctx, s_, m))],
                Job::Jacobi => check_jacobi(&ctx, config.grids.jacobi_triples),
                Job::Sp2 => check_sp2(&ctx),
                Job::Casimir => check_casimir(&ctx),
                Job::CentralCharge(i) => vec![central_charge_check(i)],
                Job::Structure(i, j, l, m, n) => vec![structure_check(i, j, l, m, n, config)],
            }
        })
        .collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    let summary = Summary::from_checks(&checks);
    let p = &config.params;
    let config_json = json!({
        "lambda": lambda,
        "alpha": p.alpha(),
        "kappa": p.kappa().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
        "beta": p.beta(),
        "gamma": p.gamma(),
        "dim": config.dim,
        "suites": config.suites,
        "grids": config.grids,
        "tolerance": config.tol,
        "phi_reading": config.phi_reading,
        "n_reading": config.n_reading,
        "sigma": sigma,
        "conventions": CONVENTIONS,
    });
    Ok(Report { config: config_json, checks, summary })
}
