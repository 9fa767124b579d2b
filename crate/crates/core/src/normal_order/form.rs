//! Canonical expansion over the monomials `(a†)^p a^q K^r`.
//!
//! Products are reduced by pushing generators through a normal monomial from
//! the left, which applies the rewrite rules
//!
//! ```text
//! a a†  -> a† a + I + Σ_r κ_r K^r
//! K a†  -> ω a† K          (ω = e^{2πi/λ})
//! K a   -> ω^{-1} a K
//! K^λ   -> I
//! ```
//!
//! until no `a` stands left of an `a†` and every `K` sits on the right.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::OperatorExpr;
use super::kpoly::KPoly;
use super::NormalOrderError;
use crate::params::AlgebraParams;

/// Coefficients below this modulus are dropped.
pub const PRUNE_TOL: f64 = 1e-13;

/// Exponents of `(a†)^p a^q K^r`; ordered by `(p, q, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl Monomial {
    pub const fn new(p: u32, q: u32, r: u32) -> Self {
        Monomial { p, q, r }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, k) in [("ad", self.p), ("a", self.q), ("K", self.r)] {
            match k {
                0 => {}
                1 => parts.push(name.to_string()),
                k => parts.push(format!("{name}^{k}")),
            }
        }
        if parts.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    lambda: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl NormalForm {
    pub fn zero(lambda: usize) -> Self {
        NormalForm { lambda, terms: BTreeMap::new() }
    }

    pub fn scalar(lambda: usize, c: Complex64) -> Self {
        NormalForm::term(lambda, Monomial::new(0, 0, 0), c)
    }

    pub fn term(lambda: usize, mono: Monomial, c: Complex64) -> Self {
        let mut nf = NormalForm::zero(lambda);
        nf.accumulate(Monomial { r: mono.r % lambda as u32, ..mono }, c);
        nf.prune();
        nf
    }

    /// `Σ_r c_r K^r`.
    pub fn from_kpoly(poly: &KPoly) -> Self {
        let mut nf = NormalForm::zero(poly.lambda());
        for (r, c) in poly.coeffs().iter().enumerate() {
            nf.accumulate(Monomial::new(0, 0, r as u32), *c);
        }
        nf.prune();
        nf
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: u32, q: u32, r: u32) -> Complex64 {
        self.terms.get(&Monomial::new(p, q, r)).copied().unwrap_or_default()
    }

    /// Largest `p` among the stored monomials.
    pub fn creation_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.p).max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn accumulate(&mut self, mono: Monomial, c: Complex64) {
        *self.terms.entry(mono).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    fn check_lambda(&self, other: &NormalForm) -> Result<(), NormalOrderError> {
        if self.lambda != other.lambda {
            return Err(NormalOrderError::LambdaMismatch(self.lambda, other.lambda));
        }
        Ok(())
    }

    pub fn add(&self, other: &NormalForm) -> Result<NormalForm, NormalOrderError> {
        self.check_lambda(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &NormalForm) -> Result<NormalForm, NormalOrderError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> NormalForm {
        let mut out = NormalForm {
            lambda: self.lambda,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        };
        out.prune();
        out
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_abs_diff(&self, other: &NormalForm) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|m| {
                let x = self.terms.get(m).copied().unwrap_or_default();
                let y = other.terms.get(m).copied().unwrap_or_default();
                (x - y).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Formal adjoint: `(c (a†)^p a^q K^r)† = c* K^{−r} (a†)^q a^p`, re-normalized.
    pub fn adjoint(&self, params: &AlgebraParams) -> NormalForm {
        let lambda = self.lambda as u32;
        let mut out = NormalForm::zero(self.lambda);
        for (m, c) in &self.terms {
            // K^{−r} (a†)^q a^p = ω^{−r(q−p)} (a†)^q a^p K^{−r}
            let phase = params.omega_pow(-(m.r as i64) * (m.q as i64 - m.p as i64));
            let r = (lambda - m.r % lambda) % lambda;
            out.accumulate(Monomial::new(m.q, m.p, r), c.conj() * phase);
        }
        out.prune();
        out
    }

    /// Rebuilds an expression `Σ c (a†)^p a^q K^r` for matrix evaluation.
    pub fn to_expr(&self) -> OperatorExpr {
        OperatorExpr::sum_of(self.terms.iter().map(|(m, c)| {
            let mut e = OperatorExpr::monomial(m.p, m.q);
            if m.r > 0 {
                let k = if m.r == 1 { OperatorExpr::K } else { OperatorExpr::K.pow(m.r) };
                e = e.mul(k);
            }
            e.scale(*c)
        }))
    }

    /// Coefficients of `K^r` (placed rightmost) for the slot `(p, q)`.
    pub fn kpoly_at(&self, p: u32, q: u32) -> KPoly {
        KPoly::from_coeffs((0..self.lambda as u32).map(|r| self.coeff(p, q, r)).collect())
    }

    /// Machine-readable form `{terms: [{p, q, r, re, im}]}`.
    pub fn to_json(&self) -> NormalFormJson {
        NormalFormJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { p: m.p, q: m.q, r: m.r, re: c.re, im: c.im })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormJson {
    pub terms: Vec<TermJson>,
}

/// One line per term, `(re,im)  ad^p a^q K^r`, sorted by `(p, q, r)`.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0 I");
        }
        for (m, c) in &self.terms {
            if c.im == 0.0 {
                writeln!(f, "{} {}", c.re, m)?;
            } else {
                writeln!(f, "({},{}) {}", c.re, c.im, m)?;
            }
        }
        Ok(())
    }
}

/// Reduction engine bound to one parameter set.
#[derive(Debug, Clone, Copy)]
pub struct NormalOrderer<'a> {
    params: &'a AlgebraParams,
}

impl<'a> NormalOrderer<'a> {
    pub fn new(params: &'a AlgebraParams) -> Self {
        NormalOrderer { params }
    }

    pub fn params(&self) -> &AlgebraParams {
        self.params
    }

    fn lambda(&self) -> usize {
        self.params.lambda()
    }

    /// `[a, (a†)^i] = (a†)^{i−1} G_i(K)` with `G_i(K) = i + Σ_r κ_r (Σ_{k<i} ω^{rk}) K^r`.
    fn reorder_kpoly(&self, i: u32) -> Vec<Complex64> {
        let lambda = self.lambda();
        let mut g = vec![Complex64::new(0.0, 0.0); lambda];
        g[0] = Complex64::new(i as f64, 0.0);
        for (r, slot) in g.iter_mut().enumerate().skip(1) {
            let kappa = self.params.kappa_at(r);
            if kappa.norm() == 0.0 {
                continue;
            }
            let geo: Complex64 = (0..i as i64).map(|k| self.params.omega_pow(r as i64 * k)).sum();
            *slot += kappa * geo;
        }
        g
    }

    /// `a · nf`.
    pub fn left_mul_a(&self, nf: &NormalForm) -> NormalForm {
        let lambda = self.lambda() as u32;
        let mut out = NormalForm::zero(nf.lambda);
        let mut cache: BTreeMap<u32, Vec<Complex64>> = BTreeMap::new();
        for (m, c) in &nf.terms {
            out.accumulate(Monomial::new(m.p, m.q + 1, m.r), *c);
            if m.p == 0 {
                continue;
            }
            let g = cache.entry(m.p).or_insert_with(|| self.reorder_kpoly(m.p));
            // (a†)^{p−1} G_p(K) a^q K^r, and K^t a^q = ω^{−tq} a^q K^t
            for (t, gt) in g.iter().enumerate() {
                if gt.norm() == 0.0 {
                    continue;
                }
                let phase = self.params.omega_pow(-(t as i64) * m.q as i64);
                let r = (m.r + t as u32) % lambda;
                out.accumulate(Monomial::new(m.p - 1, m.q, r), c * gt * phase);
            }
        }
        out.prune();
        out
    }

    /// `a† · nf`.
    pub fn left_mul_ad(&self, nf: &NormalForm) -> NormalForm {
        NormalForm {
            lambda: nf.lambda,
            terms: nf.terms.iter().map(|(m, c)| (Monomial::new(m.p + 1, m.q, m.r), *c)).collect(),
        }
    }

    /// `K^s · nf`.
    pub fn left_mul_k(&self, nf: &NormalForm, s: u32) -> NormalForm {
        let lambda = self.lambda() as u32;
        let mut out = NormalForm::zero(nf.lambda);
        for (m, c) in &nf.terms {
            let phase = self.params.omega_pow(s as i64 * (m.p as i64 - m.q as i64));
            out.accumulate(Monomial::new(m.p, m.q, (m.r + s) % lambda), c * phase);
        }
        out.prune();
        out
    }

    pub fn mul(&self, x: &NormalForm, y: &NormalForm) -> Result<NormalForm, NormalOrderError> {
        x.check_lambda(y)?;
        if x.lambda != self.lambda() {
            return Err(NormalOrderError::LambdaMismatch(x.lambda, self.lambda()));
        }
        let mut out = NormalForm::zero(x.lambda);
        for (m, c) in &x.terms {
            let mut z = self.left_mul_k(y, m.r);
            for _ in 0..m.q {
                z = self.left_mul_a(&z);
            }
            for _ in 0..m.p {
                z = self.left_mul_ad(&z);
            }
            for (mz, cz) in z.terms {
                out.accumulate(mz, c * cz);
            }
        }
        out.prune();
        Ok(out)
    }

    /// `(1/λ) Σ_ν ω^{−μν} K^ν`.
    fn projector(&self, mu: usize) -> KPoly {
        let lambda = self.lambda();
        KPoly::from_coeffs(
            (0..lambda)
                .map(|nu| self.params.omega_pow(-((mu * nu) as i64)) / lambda as f64)
                .collect(),
        )
    }

    pub fn normal_form(&self, expr: &OperatorExpr) -> Result<NormalForm, NormalOrderError> {
        use OperatorExpr as E;
        let lambda = self.lambda();
        let one = Complex64::new(1.0, 0.0);
        Ok(match expr {
            E::A => NormalForm::term(lambda, Monomial::new(0, 1, 0), one),
            E::Ad => NormalForm::term(lambda, Monomial::new(1, 0, 0), one),
            E::K => NormalForm::term(lambda, Monomial::new(0, 0, 1), one),
            E::I => NormalForm::scalar(lambda, one),
            E::Scalar(c) => NormalForm::scalar(lambda, *c),
            E::P(mu) => {
                if *mu >= lambda {
                    return Err(NormalOrderError::UnknownProjector { index: *mu, lambda });
                }
                NormalForm::from_kpoly(&self.projector(*mu))
            }
            E::N => {
                // N = a†a − Σ_μ β_μ P_μ
                let mut shift = KPoly::zero(lambda);
                for mu in 0..lambda {
                    let beta = self.params.beta()[mu];
                    if beta != 0.0 {
                        shift = &shift + &self.projector(mu).scale(Complex64::new(beta, 0.0));
                    }
                }
                NormalForm::term(lambda, Monomial::new(1, 1, 0), one)
                    .sub(&NormalForm::from_kpoly(&shift))?
            }
            E::Neg(x) => self.normal_form(x)?.scale(-one),
            E::Sum(x, y) => self.normal_form(x)?.add(&self.normal_form(y)?)?,
            E::Sub(x, y) => self.normal_form(x)?.sub(&self.normal_form(y)?)?,
            E::Product(x, y) => self.mul(&self.normal_form(x)?, &self.normal_form(y)?)?,
            E::Power(x, k) => {
                let base = self.normal_form(x)?;
                let mut acc = NormalForm::scalar(lambda, one);
                for _ in 0..*k {
                    acc = self.mul(&acc, &base)?;
                }
                acc
            }
            E::Commutator(x, y) => {
                let (x, y) = (self.normal_form(x)?, self.normal_form(y)?);
                self.mul(&x, &y)?.sub(&self.mul(&y, &x)?)?
            }
            E::Anticommutator(x, y) => {
                let (x, y) = (self.normal_form(x)?, self.normal_form(y)?);
                self.mul(&x, &y)?.add(&self.mul(&y, &x)?)?
            }
        })
    }
}

pub fn normal_form(expr: &OperatorExpr, params: &AlgebraParams) -> Result<NormalForm, NormalOrderError> {
    NormalOrderer::new(params).normal_form(expr)
}

pub fn nf_mul(
    x: &NormalForm,
    y: &NormalForm,
    params: &AlgebraParams,
) -> Result<NormalForm, NormalOrderError> {
    NormalOrderer::new(params).mul(x, y)
}

pub fn nf_add(x: &NormalForm, y: &NormalForm) -> Result<NormalForm, NormalOrderError> {
    x.add(y)
}

pub fn nf_scale(x: &NormalForm, c: Complex64) -> NormalForm {
    x.scale(c)
}
