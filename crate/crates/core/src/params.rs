//! Defining parameters of a C_λ-extended oscillator algebra.
//!
//! The algebra is fixed by the cyclic order `λ ≥ 2` and either the real
//! vector `α₀..α_{λ−1}` (coefficients of the projectors in `[a, a†]`) or the
//! complex vector `κ₁..κ_{λ−1}` (coefficients of the Klein-operator powers).
//! The two are related by a length-`λ` discrete Fourier transform with the
//! slot `κ₀` pinned to zero.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance on `Σα = 0` and on the conjugate symmetry of `κ`.
pub const CONSTRAINT_TOL: f64 = 1e-12;
/// Largest imaginary residue tolerated when transforming `κ` into `α`.
pub const REALITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("lambda must be at least 2, got {0}")]
    BadLambda(usize),
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("alpha does not sum to zero (sum = {0:e})")]
    SumNotZero(f64),
    #[error("partial sum beta_{index} = {value} violates beta > -1")]
    UnitarityBound { index: usize, value: f64 },
    #[error("kappa_{r} and kappa_{conj} are not complex conjugates")]
    NotHermitian { r: usize, conj: usize },
    #[error("alpha_{index} has imaginary part {imag:e}")]
    NotReal { index: usize, imag: f64 },
    #[error("non-finite parameter value")]
    NonFinite,
    #[error("parameter file must contain exactly one of `alpha` or `kappa`")]
    AmbiguousSource,
}

/// `e^{2πik/λ}`, with the quarter-turn values snapped to exact `±1, ±i`.
pub fn root_of_unity(k: i64, lambda: usize) -> Complex64 {
    let l = lambda as i64;
    let k = k.rem_euclid(l);
    if (4 * k) % l == 0 {
        return match 4 * k / l {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / lambda as f64)
}

/// Validated, immutable parameter set with the derived partial sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraParams {
    lambda: usize,
    alpha: Vec<f64>,
    kappa: Vec<Complex64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    root: Complex64,
}

impl AlgebraParams {
    /// The undeformed oscillator with a `λ`-fold Klein operator attached.
    pub fn undeformed(lambda: usize) -> Result<Self, ParamsError> {
        validate_alpha(lambda, &vec![0.0; lambda.max(1)])
    }

    /// Builds the parameters from `κ₁..κ_{λ−1}`; the given `κ` are kept verbatim.
    pub fn from_kappa(lambda: usize, kappa: &[Complex64]) -> Result<Self, ParamsError> {
        let alpha = alpha_from_kappa(lambda, kappa)?;
        let mut params = validate_alpha(lambda, &alpha)?;
        params.kappa = kappa.to_vec();
        Ok(params)
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// `κ₁..κ_{λ−1}`.
    pub fn kappa(&self) -> &[Complex64] {
        &self.kappa
    }

    /// `κ_r` for `r` taken mod `λ`, with `κ₀ = 0`.
    pub fn kappa_at(&self, r: usize) -> Complex64 {
        match r % self.lambda {
            0 => Complex64::new(0.0, 0.0),
            r => self.kappa[r - 1],
        }
    }

    /// `β₀..β_λ`; `β₀ = β_λ = 0`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// The phase `x = e^{−2πi/λ}` picked up when `K` is moved past `a†`.
    pub fn root(&self) -> Complex64 {
        self.root
    }

    /// `x^k` computed from the snapped root table.
    pub fn root_pow(&self, k: i64) -> Complex64 {
        root_of_unity(-k, self.lambda)
    }

    /// `ω^k` with `ω = e^{2πi/λ}`, the eigenvalue phase of `K` on `|1⟩`.
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        root_of_unity(k, self.lambda)
    }

    pub fn is_undeformed(&self) -> bool {
        self.alpha.iter().all(|a| *a == 0.0)
    }

    /// Copy with every `κ_r` (and hence every `α_μ`) multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, ParamsError> {
        let kappa: Vec<Complex64> = self.kappa.iter().map(|k| k * factor).collect();
        AlgebraParams::from_kappa(self.lambda, &kappa)
    }
}

/// Checks `α` and derives `β`, `γ` and `κ`.
pub fn validate_alpha(lambda: usize, alpha: &[f64]) -> Result<AlgebraParams, ParamsError> {
    if lambda < 2 {
        return Err(ParamsError::BadLambda(lambda));
    }
    if alpha.len() != lambda {
        return Err(ParamsError::BadLength { expected: lambda, got: alpha.len() });
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(ParamsError::NonFinite);
    }
    let sum: f64 = alpha.iter().sum();
    if sum.abs() > CONSTRAINT_TOL {
        return Err(ParamsError::SumNotZero(sum));
    }

    let mut beta = Vec::with_capacity(lambda + 1);
    let mut acc = 0.0;
    beta.push(0.0);
    for (mu, a) in alpha.iter().enumerate().take(lambda - 1) {
        acc += a;
        if acc <= -1.0 {
            return Err(ParamsError::UnitarityBound { index: mu + 1, value: acc });
        }
        beta.push(acc);
    }
    beta.push(0.0);

    let gamma = (0..lambda).map(|mu| 0.5 * (beta[mu] + beta[mu + 1])).collect();
    let mut params = AlgebraParams {
        lambda,
        alpha: alpha.to_vec(),
        kappa: Vec::new(),
        beta,
        gamma,
        root: root_of_unity(-1, lambda),
    };
    params.kappa = kappa_from_alpha(&params);
    Ok(params)
}

/// `α_μ = Σ_r κ_r ω^{μr}` with `κ₀ = 0`.
///
/// The phase sign is the one compatible with `K = diag(ω^n)` and
/// `[a, a†] = I + Σ κ_r K^r`; for `λ = 2` both signs coincide.
pub fn alpha_from_kappa(lambda: usize, kappa: &[Complex64]) -> Result<Vec<f64>, ParamsError> {
    if lambda < 2 {
        return Err(ParamsError::BadLambda(lambda));
    }
    if kappa.len() != lambda - 1 {
        return Err(ParamsError::BadLength { expected: lambda - 1, got: kappa.len() });
    }
    if kappa.iter().any(|k| !k.re.is_finite() || !k.im.is_finite()) {
        return Err(ParamsError::NonFinite);
    }
    for r in 1..lambda {
        let conj = lambda - r;
        if (kappa[r - 1].conj() - kappa[conj - 1]).norm() > CONSTRAINT_TOL {
            return Err(ParamsError::NotHermitian { r, conj });
        }
    }
    (0..lambda)
        .map(|mu| {
            let value: Complex64 = (1..lambda)
                .map(|r| kappa[r - 1] * root_of_unity((mu * r) as i64, lambda))
                .sum();
            if value.im.abs() > REALITY_TOL {
                Err(ParamsError::NotReal { index: mu, imag: value.im })
            } else {
                Ok(value.re)
            }
        })
        .collect()
}

/// Inverse transform: `κ_r = (1/λ) Σ_μ α_μ ω^{−μr}` for `r = 1..λ−1`.
pub fn kappa_from_alpha(params: &AlgebraParams) -> Vec<Complex64> {
    let lambda = params.lambda;
    (1..lambda)
        .map(|r| {
            let sum: Complex64 = params
                .alpha
                .iter()
                .enumerate()
                .map(|(mu, a)| root_of_unity(-((mu * r) as i64), lambda) * *a)
                .sum();
            sum / lambda as f64
        })
        .collect()
}

/// On-disk parameter description: `{"lambda": 2, "alpha": [..]}` or
/// `{"lambda": 2, "kappa": [[re, im], ..]}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub lambda: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<[f64; 2]>>,
}

impl ParamsFile {
    pub fn into_params(&self) -> Result<AlgebraParams, ParamsError> {
        match (&self.alpha, &self.kappa) {
            (Some(alpha), None) => validate_alpha(self.lambda, alpha),
            (None, Some(kappa)) => {
                let kappa: Vec<Complex64> =
                    kappa.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                AlgebraParams::from_kappa(self.lambda, &kappa)
            }
            _ => Err(ParamsError::AmbiguousSource),
        }
    }
}

impl From<&AlgebraParams> for ParamsFile {
    fn from(params: &AlgebraParams) -> Self {
        ParamsFile { lambda: params.lambda, alpha: Some(params.alpha.clone()), kappa: None }
    }
}
