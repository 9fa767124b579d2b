//! Truncated Fock-space realization `|0⟩..|D−1⟩` of the generators.
//!
//! `a|n⟩ = √F(n)|n−1⟩`, `a†|n⟩ = √F(n+1)|n+1⟩`, `K|n⟩ = ω^n|n⟩` with
//! `ω = e^{2πi/λ}` and `F(n) = n + β_{n mod λ}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::normal_order::OperatorExpr;
use crate::params::{root_of_unity, AlgebraParams};

/// Default upper bound on the truncation dimension.
pub const DEFAULT_DIM_CAP: usize = 256;
/// Tolerance for build-time invariant checks.
pub const INVARIANT_TOL: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("dimension {dim} too small, need at least {min}")]
    DimTooSmall { dim: usize, min: usize },
    #[error("dimension {dim} exceeds the cap {cap}")]
    DimTooLarge { dim: usize, cap: usize },
    #[error("structure function F({n}) = {value} is not positive")]
    NonPositiveF { n: usize, value: f64 },
    #[error("negative level {0}")]
    NegativeLevel(i64),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("empty safe window: {depth} creation factors on dimension {dim}")]
    EmptyWindow { depth: u32, dim: usize },
}

/// `F(n) = n + β_{n mod λ}`.
pub fn structure_function(params: &AlgebraParams, n: i64) -> Result<f64, FockError> {
    if n < 0 {
        return Err(FockError::NegativeLevel(n));
    }
    Ok(n as f64 + params.beta()[n as usize % params.lambda()])
}

/// Closed-form level `E_n = n + γ_{n mod λ} + ½`.
pub fn closed_form_level(params: &AlgebraParams, n: usize) -> f64 {
    n as f64 + params.gamma()[n % params.lambda()] + 0.5
}

/// Columns `lo..=hi` on which word evaluations are truncation-exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SafeWindow {
    pub lo: usize,
    pub hi: usize,
}

impl SafeWindow {
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn columns(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

/// Nonzero entries `(row, col, value)` of a generator.
type Sparse = Vec<(usize, usize, Complex64)>;

#[derive(Debug, Clone)]
pub struct FockRep {
    dim: usize,
    params: AlgebraParams,
    a: CMatrix,
    ad: CMatrix,
    n: CMatrix,
    k: CMatrix,
    p: Vec<CMatrix>,
    h0: CMatrix,
    sparse_a: Sparse,
    sparse_ad: Sparse,
    diag_n: Vec<f64>,
    diag_k: Vec<Complex64>,
}

pub fn build_rep(params: &AlgebraParams, dim: usize) -> Result<FockRep, FockError> {
    build_rep_with_cap(params, dim, DEFAULT_DIM_CAP)
}

pub fn build_rep_with_cap(params: &AlgebraParams, dim: usize, cap: usize) -> Result<FockRep, FockError> {
    let lambda = params.lambda();
    if dim < lambda + 2 {
        return Err(FockError::DimTooSmall { dim, min: lambda + 2 });
    }
    if dim > cap {
        return Err(FockError::DimTooLarge { dim, cap });
    }
    let mut f = vec![0.0; dim];
    for (n, slot) in f.iter_mut().enumerate().skip(1) {
        let value = structure_function(params, n as i64)?;
        if value <= 0.0 {
            return Err(FockError::NonPositiveF { n, value });
        }
        *slot = value;
    }
    let zero = Complex64::new(0.0, 0.0);
    let sparse_a: Sparse = (1..dim).map(|n| (n - 1, n, Complex64::new(f[n].sqrt(), 0.0))).collect();
    let sparse_ad: Sparse = sparse_a.iter().map(|&(i, j, v)| (j, i, v.conj())).collect();
    let dense = |s: &Sparse| {
        let mut m = CMatrix::from_element(dim, dim, zero);
        for &(i, j, v) in s {
            m[(i, j)] = v;
        }
        m
    };
    let diag_n: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    let diag_k: Vec<Complex64> = (0..dim).map(|n| root_of_unity(n as i64, lambda)).collect();
    let diag = |d: &[Complex64]| CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d));
    let a = dense(&sparse_a);
    let ad = dense(&sparse_ad);
    let h0 = (&a * &ad + &ad * &a).scale(0.5);
    let p = (0..lambda)
        .map(|mu| {
            let d: Vec<Complex64> =
                (0..dim).map(|n| Complex64::new(if n % lambda == mu { 1.0 } else { 0.0 }, 0.0)).collect();
            diag(&d)
        })
        .collect();
    let rep = FockRep {
        dim,
        params: params.clone(),
        n: diag(&diag_n.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>()),
        k: diag(&diag_k),
        a,
        ad,
        p,
        h0,
        sparse_a,
        sparse_ad,
        diag_n,
        diag_k,
    };
    rep.check_invariants()?;
    Ok(rep)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl FockRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn mat_a(&self) -> &CMatrix {
        &self.a
    }

    pub fn mat_adag(&self) -> &CMatrix {
        &self.ad
    }

    pub fn mat_n(&self) -> &CMatrix {
        &self.n
    }

    pub fn mat_k(&self) -> &CMatrix {
        &self.k
    }

    pub fn mat_p(&self, mu: usize) -> Option<&CMatrix> {
        self.p.get(mu)
    }

    pub fn mat_h0(&self) -> &CMatrix {
        &self.h0
    }

    fn check_invariants(&self) -> Result<(), FockError> {
        let dim = self.dim;
        let lambda = self.params.lambda();
        let id = CMatrix::identity(dim, dim);
        let fail = |what: &str, err: f64| {
            if err < INVARIANT_TOL {
                Ok(())
            } else {
                Err(FockError::InvariantViolated(format!("{what}: deviation {err:e}")))
            }
        };
        fail("adag = a^dagger", max_abs(&(&self.ad - self.a.adjoint())))?;
        let all = self.apply_word(&OperatorExpr::K.pow(lambda as u32))?;
        fail("K^lambda = I", max_abs(&(all - &id)))?;
        let mut total = CMatrix::zeros(dim, dim);
        for mu in 0..lambda {
            for nu in 0..lambda {
                let prod = self.p[mu].component_mul(&self.p[nu]);
                let want = if mu == nu { self.p[mu].clone() } else { CMatrix::zeros(dim, dim) };
                fail("P_mu P_nu = delta P_nu", max_abs(&(prod - want)))?;
            }
            total += &self.p[mu];
            let via_k = self.apply_word(&OperatorExpr::P(mu))?;
            let from_k = self.k_power_projector(mu);
            fail("projector from K powers", max_abs(&(via_k - from_k)))?;
        }
        fail("sum of projectors", max_abs(&(total - &id)))?;
        let ada = self.apply_word(&OperatorExpr::Ad.mul(OperatorExpr::A))?;
        let aad = self.apply_word(&OperatorExpr::A.mul(OperatorExpr::Ad))?;
        let mut err_ada: f64 = 0.0;
        let mut err_aad: f64 = 0.0;
        let mut err_bracket: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let f_i = structure_function(&self.params, i as i64)?;
                let want = if i == j { f_i } else { 0.0 };
                err_ada = err_ada.max((ada[(i, j)] - want).norm());
                if i + 1 < dim && j + 1 < dim {
                    let f_next = structure_function(&self.params, i as i64 + 1)?;
                    let want = if i == j { f_next } else { 0.0 };
                    err_aad = err_aad.max((aad[(i, j)] - want).norm());
                    let mut bracket = aad[(i, j)] - ada[(i, j)];
                    if i == j {
                        bracket -= Complex64::new(1.0, 0.0);
                        for r in 1..lambda {
                            bracket -= self.params.kappa_at(r) * self.diag_k[i].powu(r as u32);
                        }
                    }
                    err_bracket = err_bracket.max(bracket.norm());
                }
            }
        }
        fail("a^dagger a = F(N)", err_ada)?;
        fail("a a^dagger = F(N+1)", err_aad)?;
        fail("[a, a^dagger] = I + sum kappa_r K^r", err_bracket)?;
        let x = self.params.root();
        let twist = &self.ad * &self.k - (&self.k * &self.ad) * x;
        fail("a^dagger K = x K a^dagger", max_abs(&twist))?;
        let twist = &self.a * &self.k - (&self.k * &self.a) * x.conj();
        fail("a K = x^-1 K a", max_abs(&twist))?;
        Ok(())
    }

    /// `(1/λ) Σ_ν ω^{−μν} K^ν` as a matrix.
    fn k_power_projector(&self, mu: usize) -> CMatrix {
        let lambda = self.params.lambda();
        let d: Vec<Complex64> = self
            .diag_k
            .iter()
            .map(|k| {
                (0..lambda)
                    .map(|nu| self.params.omega_pow(-((mu * nu) as i64)) * k.powu(nu as u32))
                    .sum::<Complex64>()
                    / lambda as f64
            })
            .collect();
        CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&d))
    }

    /// Literal `D × D` matrix of an expression.
    pub fn apply_word(&self, expr: &OperatorExpr) -> Result<CMatrix, FockError> {
        self.eval(expr, CMatrix::identity(self.dim, self.dim))
    }

    /// Columns `window.lo..=window.hi` of the expression's matrix.
    pub fn apply_on_window(&self, expr: &OperatorExpr, window: SafeWindow) -> Result<CMatrix, FockError> {
        let mut block = CMatrix::zeros(self.dim, window.len());
        for (j, col) in window.columns().enumerate() {
            block[(col, j)] = Complex64::new(1.0, 0.0);
        }
        self.eval(expr, block)
    }

    /// Largest entry of the window columns of `|expr|`: every scalar, `K`
    /// entry and sign replaced by its modulus, so differences become sums.
    /// Bounds the size of the terms that cancel in a floating-point evaluation.
    pub fn magnitude_on_window(&self, expr: &OperatorExpr, window: SafeWindow) -> Result<f64, FockError> {
        let mut block = CMatrix::zeros(self.dim, window.len());
        for (j, col) in window.columns().enumerate() {
            block[(col, j)] = Complex64::new(1.0, 0.0);
        }
        Ok(max_abs(&self.eval_mode(expr, block, true)?))
    }

    fn sparse_left(&self, entries: &Sparse, block: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(block.nrows(), block.ncols());
        for &(i, k, v) in entries {
            for j in 0..block.ncols() {
                out[(i, j)] += v * block[(k, j)];
            }
        }
        out
    }

    fn diag_left(&self, d: impl Fn(usize) -> Complex64, mut block: CMatrix) -> CMatrix {
        for i in 0..block.nrows() {
            let v = d(i);
            for j in 0..block.ncols() {
                block[(i, j)] *= v;
            }
        }
        block
    }

    /// `expr · block`, evaluated right to left without forming dense products.
    fn eval(&self, expr: &OperatorExpr, block: CMatrix) -> Result<CMatrix, FockError> {
        self.eval_mode(expr, block, false)
    }

    /// With `abs` set, evaluates `|expr|` as described in [`FockRep::magnitude_on_window`].
    fn eval_mode(&self, expr: &OperatorExpr, block: CMatrix, abs: bool) -> Result<CMatrix, FockError> {
        use OperatorExpr as E;
        let one = Complex64::new(1.0, 0.0);
        let lambda = self.params.lambda();
        Ok(match expr {
            E::A => self.sparse_left(&self.sparse_a, &block),
            E::Ad => self.sparse_left(&self.sparse_ad, &block),
            E::N => {
                let d = |i: usize| if abs { self.diag_n[i].abs() } else { self.diag_n[i] };
                self.diag_left(|i| Complex64::new(d(i), 0.0), block)
            }
            E::K => self.diag_left(|i| if abs { one } else { self.diag_k[i] }, block),
            E::P(mu) => {
                if *mu >= lambda {
                    return Err(FockError::UnknownSymbol(format!("P{mu}")));
                }
                self.diag_left(|i| Complex64::new(if i % lambda == *mu { 1.0 } else { 0.0 }, 0.0), block)
            }
            E::I => block,
            E::Scalar(c) => block * if abs { Complex64::new(c.norm(), 0.0) } else { *c },
            E::Neg(x) if abs => self.eval_mode(x, block, abs)?,
            E::Neg(x) => -self.eval_mode(x, block, abs)?,
            E::Sum(x, y) => self.eval_mode(x, block.clone(), abs)? + self.eval_mode(y, block, abs)?,
            E::Sub(x, y) if abs => self.eval_mode(x, block.clone(), abs)? + self.eval_mode(y, block, abs)?,
            E::Sub(x, y) => self.eval_mode(x, block.clone(), abs)? - self.eval_mode(y, block, abs)?,
            E::Product(x, y) => {
                let inner = self.eval_mode(y, block, abs)?;
                self.eval_mode(x, inner, abs)?
            }
            E::Power(x, k) => {
                let mut acc = block;
                for _ in 0..*k {
                    acc = self.eval_mode(x, acc, abs)?;
                }
                acc
            }
            E::Commutator(x, y) => {
                let xy = self.eval_mode(x, self.eval_mode(y, block.clone(), abs)?, abs)?;
                let yx = self.eval_mode(y, self.eval_mode(x, block, abs)?, abs)?;
                if abs {
                    xy + yx
                } else {
                    xy - yx
                }
            }
            E::Anticommutator(x, y) => {
                let xy = self.eval_mode(x, self.eval_mode(y, block.clone(), abs)?, abs)?;
                xy + self.eval_mode(y, self.eval_mode(x, block, abs)?, abs)?
            }
        })
    }

    /// Generators as `{name: {rows, cols, entries: [[i, j, re, im]...]}}`.
    pub fn dump_matrices(&self) -> serde_json::Value {
        let mut out = BTreeMap::new();
        let mut put = |name: String, m: &CMatrix| {
            let entries: Vec<[f64; 4]> = (0..m.nrows())
                .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
                .filter(|&(i, j)| m[(i, j)].norm() != 0.0)
                .map(|(i, j)| [i as f64, j as f64, m[(i, j)].re, m[(i, j)].im])
                .collect();
            out.insert(name, serde_json::json!({"rows": m.nrows(), "cols": m.ncols(), "entries": entries}));
        };
        put("a".into(), &self.a);
        put("ad".into(), &self.ad);
        put("N".into(), &self.n);
        put("K".into(), &self.k);
        for (mu, p) in self.p.iter().enumerate() {
            put(format!("P{mu}"), p);
        }
        put("H0".into(), &self.h0);
        serde_json::to_value(out).expect("matrix dump is valid JSON")
    }
}

/// Sorted eigenvalues of `H₀` on levels `0..D−2`.
pub fn spectrum(rep: &FockRep) -> Vec<f64> {
    let m = rep.dim - 1;
    let block = DMatrix::<f64>::from_fn(m, m, |i, j| rep.h0[(i, j)].re);
    let mut values: Vec<f64> = block.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Window `[0, D−1−W]` where `W` is the largest creation depth among `exprs`.
pub fn safe_window(rep: &FockRep, exprs: &[&OperatorExpr]) -> Result<SafeWindow, FockError> {
    safe_window_for_depth(rep.dim, exprs.iter().map(|e| e.creation_depth()).max().unwrap_or(0))
}

pub fn safe_window_for_depth(dim: usize, depth: u32) -> Result<SafeWindow, FockError> {
    if depth as usize >= dim {
        return Err(FockError::EmptyWindow { depth, dim });
    }
    Ok(SafeWindow { lo: 0, hi: dim - 1 - depth as usize })
}

/// Largest entry of `lhs − rhs`.
pub fn abs_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    max_abs(&(lhs - rhs))
}

/// `max|L − R| / max(1, max|L|, max|R|)`.
pub fn scaled_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    residual_with_scale(lhs, rhs, 0.0)
}

/// `max|L − R| / max(1, max|L|, max|R|, scale)`.
pub fn residual_with_scale(lhs: &CMatrix, rhs: &CMatrix, scale: f64) -> f64 {
    abs_residual(lhs, rhs) / 1f64.max(max_abs(lhs)).max(max_abs(rhs)).max(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_order::parse;
    use crate::params::validate_alpha;

    fn rep(lambda: usize, alpha: &[f64], dim: usize) -> FockRep {
        build_rep(&validate_alpha(lambda, alpha).unwrap(), dim).unwrap()
    }

    #[test]
    fn structure_function_values() {
        let p = validate_alpha(2, &[0.5, -0.5]).unwrap();
        assert_eq!(structure_function(&p, 3).unwrap(), 3.5);
        let p = validate_alpha(4, &[0.0; 4]).unwrap();
        assert_eq!(structure_function(&p, 7).unwrap(), 7.0);
        let p = validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap();
        assert!((structure_function(&p, 5).unwrap() - 5.5).abs() < 1e-15);
        assert_eq!(structure_function(&p, -1), Err(FockError::NegativeLevel(-1)));
    }

    #[test]
    fn annihilation_entries() {
        let r = rep(2, &[0.0, 0.0], 4);
        assert_eq!(r.mat_a()[(0, 1)], Complex64::new(1.0, 0.0));
        assert!((r.mat_a()[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        let r = rep(2, &[0.5, -0.5], 4);
        assert!((r.mat_a()[(0, 1)].re - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((r.mat_a()[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!((r.mat_a()[(2, 3)].re - 3.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn klein_twist_on_matrices() {
        for lambda in 2..6 {
            let r = rep(lambda, &vec![0.0; lambda], 12);
            let x = r.params().root();
            let lhs = r.mat_adag() * r.mat_k() - r.mat_k() * r.mat_adag() * x;
            assert!(max_abs(&lhs) < 1e-14);
        }
    }

    #[test]
    fn dimension_bounds() {
        let p = validate_alpha(3, &[0.0; 3]).unwrap();
        assert_eq!(build_rep(&p, 4).unwrap_err(), FockError::DimTooSmall { dim: 4, min: 5 });
        assert_eq!(build_rep(&p, 300).unwrap_err(), FockError::DimTooLarge { dim: 300, cap: 256 });
        assert!(build_rep(&p, 5).is_ok());
    }

    #[test]
    fn spectra() {
        let r = rep(2, &[0.5, -0.5], 16);
        let e = spectrum(&r);
        assert_eq!(e.len(), 15);
        for (n, v) in e.iter().enumerate() {
            assert!((v - (n as f64 + 0.75)).abs() < 1e-10);
        }
        let r = rep(3, &[0.3, 0.2, -0.5], 10);
        let e = spectrum(&r);
        for (n, want) in [0.65, 1.9, 2.75, 3.65].iter().enumerate() {
            assert!((e[n] - want).abs() < 1e-10, "level {n}: {}", e[n]);
        }
        let r = rep(4, &[0.0; 4], 9);
        for (n, v) in spectrum(&r).iter().enumerate() {
            assert!((v - (n as f64 + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn word_evaluation() {
        let r = rep(2, &[0.0, 0.0], 10);
        let w = safe_window(&r, &[&parse("a ad - ad a").unwrap()]).unwrap();
        let got = r.apply_on_window(&parse("a ad - ad a").unwrap(), w).unwrap();
        let want = r.apply_on_window(&OperatorExpr::I, w).unwrap();
        assert!(abs_residual(&got, &want) < 1e-14);
        let r = rep(3, &[0.3, 0.2, -0.5], 10);
        let k3 = r.apply_word(&parse("K^3").unwrap()).unwrap();
        assert!(abs_residual(&k3, &CMatrix::identity(10, 10)) < 1e-12);
        let r = rep(2, &[0.3, -0.3], 10);
        let p = r.apply_word(&parse("P0 + P1").unwrap()).unwrap();
        assert!(abs_residual(&p, &CMatrix::identity(10, 10)) < 1e-15);
        assert_eq!(r.apply_word(&OperatorExpr::P(2)).unwrap_err(), FockError::UnknownSymbol("P2".into()));
    }

    #[test]
    fn word_matches_dense_products() {
        let r = rep(3, &[0.3, 0.2, -0.5], 12);
        let got = r.apply_word(&parse("[a^2, ad K] + 0.5 {N, P1}").unwrap()).unwrap();
        let (a, ad, k, n, p1) = (r.mat_a(), r.mat_adag(), r.mat_k(), r.mat_n(), r.mat_p(1).unwrap());
        let a2 = a * a;
        let adk = ad * k;
        let want = &a2 * &adk - &adk * &a2 + (n * p1 + p1 * n) * Complex64::new(0.5, 0.0);
        assert!(abs_residual(&got, &want) < 1e-12);
    }

    #[test]
    fn windows() {
        let r = rep(2, &[0.0, 0.0], 16);
        let e = parse("[a, ad^3]").unwrap();
        assert_eq!(safe_window(&r, &[&e]).unwrap(), SafeWindow { lo: 0, hi: 12 });
        let r8 = rep(2, &[0.0, 0.0], 8);
        let deep = OperatorExpr::Ad.pow(10);
        assert_eq!(safe_window(&r8, &[&deep]).unwrap_err(), FockError::EmptyWindow { depth: 10, dim: 8 });
        let r32 = rep(2, &[0.0, 0.0], 32);
        let casimir = parse("(ad a)^2 - 0.5 {ad^2 a, a}").unwrap();
        assert_eq!(safe_window(&r32, &[&casimir]).unwrap(), SafeWindow { lo: 0, hi: 29 });
    }

    #[test]
    fn dump_shape() {
        let r = rep(2, &[0.0, 0.0], 4);
        let v = r.dump_matrices();
        assert_eq!(v["a"]["rows"], 4);
        assert_eq!(v["a"]["entries"].as_array().unwrap().len(), 3);
        assert!(v.get("P1").is_some() && v.get("H0").is_some());
    }
}
