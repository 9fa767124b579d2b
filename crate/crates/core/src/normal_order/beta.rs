//! Reordering coefficients of `a^n (a†)^{m−1}`.
//!
//! [`beta_oracle`] reads the coefficients off the normal-form engine.
//! [`beta_closed_form`] evaluates the printed closed-form tower term by term,
//! without any simplification, so that the two can be compared.

use num_complex::Complex64;

use super::expr::OperatorExpr;
use super::form::NormalOrderer;
use super::kpoly::KPoly;
use super::NormalOrderError;
use crate::params::{root_of_unity, AlgebraParams};

/// `Σ_{p=0}^{m−1} e^{sign·(−2πi r p/λ)}`.
pub fn geometric_f(r: usize, m: usize, lambda: usize, sign: i32) -> Complex64 {
    let sign = if sign < 0 { -1 } else { 1 };
    (0..m as i64).map(|p| root_of_unity(-sign * (r as i64) * p, lambda)).sum()
}

/// Coefficients `β_0..β_n` in `a^n (a†)^{m−1} = Σ_l β_l (a†)^{m−1−l} a^{n−l}`.
///
/// Each `β_l` is a Klein polynomial. In [`BetaTower::coeffs`] its `K` powers
/// sit to the right of the monomial (the canonical order);
/// [`BetaTower::left_placed`] moves them to the left.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaTower {
    pub n: u32,
    pub m: u32,
    pub coeffs: Vec<KPoly>,
}

impl BetaTower {
    /// `β_l` such that `a^n (a†)^{m−1} = Σ_l β_l(K) (a†)^{m−1−l} a^{n−l}`.
    pub fn left_placed(&self, params: &AlgebraParams) -> Vec<KPoly> {
        // X K^r = ω^{−r(P−Q)} K^r X for X = (a†)^P a^Q, and P − Q = m − 1 − n
        let grade = self.m as i64 - 1 - self.n as i64;
        self.coeffs.iter().map(|b| b.twist(|r| params.omega_pow(-(r as i64) * grade))).collect()
    }

    /// Expression `Σ_l (a†)^{m−1−l} a^{n−l} β_l(K)`.
    pub fn to_expr(&self) -> OperatorExpr {
        OperatorExpr::sum_of(self.coeffs.iter().enumerate().map(|(l, b)| {
            let l = l as u32;
            OperatorExpr::monomial(self.m - 1 - l, self.n - l).mul(OperatorExpr::klein_poly(b.coeffs()))
        }))
    }
}

/// Normal-orders `a^n (a†)^{m−1}` and reads off `β_l` for every `l ≤ n`.
pub fn beta_oracle(n: u32, m: u32, params: &AlgebraParams) -> Result<BetaTower, NormalOrderError> {
    if n < 1 || n > m.saturating_sub(1) {
        return Err(NormalOrderError::BadRange(format!("beta tower needs 1 <= n <= m-1, got n={n}, m={m}")));
    }
    let word = OperatorExpr::A.pow(n).mul(OperatorExpr::Ad.pow(m - 1));
    let nf = NormalOrderer::new(params).normal_form(&word)?;
    let mut coeffs: Vec<KPoly> = (0..=n).map(|_| KPoly::zero(params.lambda())).collect();
    for (mono, c) in nf.terms() {
        // grading: p − q = m − 1 − n, so l = n − q fixes p = m − 1 − l
        let l = n.checked_sub(mono.q).filter(|l| mono.p + l == m - 1).ok_or_else(|| {
            NormalOrderError::BadRange(format!("term {mono} outside the reordering grade"))
        })?;
        *coeffs[l as usize].coeff_mut(mono.r as usize) += c;
    }
    Ok(BetaTower { n, m, coeffs })
}

/// Which printed case produced a closed-form value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormCase {
    Zero,
    One,
    Two,
    Three,
    Top,
    BelowTop,
    General { k: u32 },
}

/// Literal evaluator of the printed tower. Every `x^j` is replaced by
/// `x^{j·x_scale}`; `F = Σ_r f_r κ_r K^r` with `f_1 = 1` and
/// `f_r = Σ_{p<m} x^{rp}` for `r ≥ 2`.
struct Tower<'a> {
    params: &'a AlgebraParams,
    n: i64,
    m: i64,
    x_scale: i64,
    f: KPoly,
}

impl<'a> Tower<'a> {
    fn new(params: &'a AlgebraParams, n: u32, m: u32, x_scale: i64) -> Self {
        Tower { params, n: n as i64, m: m as i64, x_scale, f: printed_f(params, m as usize) }
    }

    fn lambda(&self) -> usize {
        self.params.lambda()
    }

    fn c(&self, v: f64) -> KPoly {
        KPoly::constant(self.lambda(), Complex64::new(v, 0.0))
    }

    fn fx(&self, j: i64) -> KPoly {
        self.f.scale(self.params.root_pow(j * self.x_scale))
    }

    /// `(m − i) + F x^j`
    fn fac(&self, i: i64, j: i64) -> KPoly {
        &self.c((self.m - i) as f64) + &self.fx(j)
    }

    /// `∏_{i=lo}^{hi} ((m − i) + F x^{e(i)})`, empty product = 1.
    fn prod(&self, lo: i64, hi: i64, e: impl Fn(i64) -> i64) -> KPoly {
        (lo..=hi).fold(self.c(1.0), |acc, i| &acc * &self.fac(i, e(i)))
    }

    /// `v + Σ_{j=lo}^{hi} F x^j`
    fn lin(&self, v: i64, lo: i64, hi: i64) -> KPoly {
        (lo..=hi).fold(self.c(v as f64), |acc, j| &acc + &self.fx(j))
    }

    fn sum(&self, lo: i64, hi: i64, body: impl Fn(i64) -> KPoly) -> KPoly {
        (lo..=hi).fold(KPoly::zero(self.lambda()), |acc, v| &acc + &body(v))
    }

    fn beta1(&self) -> KPoly {
        let (n, m) = (self.n, self.m);
        self.lin(n * (m - 1), 0, n - 1)
    }

    fn beta2(&self) -> KPoly {
        let (n, m) = (self.n, self.m);
        let head = self.prod(1, 2, |i| n - i);
        let tail = self.sum(2, n - 1, |mu| &self.lin(mu * (m - 1), n - mu, n - 1) * &self.fac(2, n - mu - 1));
        &head + &tail
    }

    fn beta3(&self) -> KPoly {
        let (n, m) = (self.n, self.m);
        let t1 = self.prod(1, 3, |i| n - i);
        let t2 = &self.prod(1, 2, |i| n - i) * &self.lin((n - 3) * (m - 3), 0, n - 4);
        // the inner sum's lower limit is printed with an unbound index; read as μ
        let t3 = self.sum(2, n - 2, |mu| {
            let a = &self.lin(mu * (m - 1), n - mu, n - 1) * &self.fac(2, n - mu - 1);
            &a * &self.lin((n - mu - 1) * (m - 3), 0, n - mu - 2)
        });
        &(&t1 + &t2) + &t3
    }

    fn beta_top(&self) -> KPoly {
        let n = self.n;
        self.prod(1, n, |i| n - i)
    }

    fn beta_below_top(&self) -> KPoly {
        let (n, m) = (self.n, self.m);
        let t1 = self.prod(1, n - 1, |i| n - i);
        let t2 = self.sum(2, n - 2, |mu| {
            &self.prod(1, n - mu, |i| n - i) * &self.prod(n - (mu - 1), n - 1, |i| mu - i - 1)
        });
        let t3 = &self.lin(2 * (m - 1), n - 2, n - 1) * &self.prod(2, n - 1, |i| n - i - 1);
        &(&t1 + &t2) + &t3
    }

    fn beta_general(&self, k: i64) -> KPoly {
        let (n, m) = (self.n, self.m);
        let t1 = self.prod(1, n - k, |i| n - i);
        let t2 = &self.prod(1, n - k - 1, |i| n - i) * &self.lin(k * (m - (n - k)), 0, k - 1);
        let t3 = self.sum(k + 2, n - 2, |alpha| {
            let outer = self.prod(1, n - alpha, |i| n - i);
            let b1 = self.prod(n - alpha + 1, n - k, |i| n - i - 1);
            let b2 = self.sum(n - alpha + 1, n - k - 1, |mu| {
                &self.prod(n - alpha - 1, n - mu, |i| n - i - 1) * &self.prod(n - mu + 1, n - k, |i| mu - i - 2)
            });
            let b3 = self.sum(2, k, |l| {
                &self.lin(l * (m - (n - alpha + 1)), alpha - l - 1, n - 4)
                    * &self.prod(n - alpha + 2, n - l, |i| n - i - l)
            });
            &outer * &(&(&b1 + &b2) + &b3)
        });
        let t4 = self.sum(2, k, |l| {
            let head = self.lin(l * (m - 1), n - 2, n - 1);
            let b1 = self.prod(2, n - k, |i| n - i - 1);
            let b2 = self.sum(k + 1, n - 4, |mu| {
                &self.prod(2, n - mu, |i| n - i - 1) * &self.prod(n - mu + 1, n - k - 2, |i| mu - i - 2)
            });
            let b3 = &(&self.fac(2, n - 3) * &self.lin((k + 2 - l) * (m - 3), n - 5, n - 4))
                * &self.prod(n - k - 1, n - k, |i| n - i - k);
            &head * &(&(&b1 + &b2) + &b3)
        });
        let t5 = &self.lin((k + 1) * (m - 1), 2, n - 1) * &self.prod(2, n - 2, |i| n - i - 2);
        [t2, t3, t4, t5].iter().fold(t1, |acc, t| &acc + t)
    }
}

/// `F` coefficients as printed: `f_1 = 1`, `f_r = Σ_{p<m} x^{rp}` for `r ≥ 2`.
pub fn printed_f(params: &AlgebraParams, m: usize) -> KPoly {
    let lambda = params.lambda();
    let mut f = KPoly::zero(lambda);
    for r in 1..lambda {
        let fr = if r == 1 { Complex64::new(1.0, 0.0) } else { geometric_f(r, m, lambda, 1) };
        *f.coeff_mut(r) = fr * params.kappa_at(r);
    }
    f
}

/// Selects the printed case covering `β_l` of the `(n, m)` tower.
///
/// Explicit low-index cases (`l ≤ 3`) take precedence, then the top two
/// indices, then the general `k = n − l ∈ [2, n − 4]` formula.
pub fn closed_form_case(n: u32, l: u32) -> Result<ClosedFormCase, NormalOrderError> {
    if l > n {
        return Err(NormalOrderError::BadRange(format!("index {l} exceeds n = {n}")));
    }
    let k = n - l;
    Ok(match l {
        0 => ClosedFormCase::Zero,
        1 => ClosedFormCase::One,
        2 => ClosedFormCase::Two,
        3 => ClosedFormCase::Three,
        _ if k == 0 => ClosedFormCase::Top,
        _ if k == 1 => ClosedFormCase::BelowTop,
        _ if k >= 2 && n >= 4 && k <= n - 4 => ClosedFormCase::General { k },
        _ => return Err(NormalOrderError::FormulaGap { n, l }),
    })
}

/// Literal evaluation of the printed closed form for `β_l`, `K` powers placed
/// to the left of the monomial. `x_scale` multiplies every exponent of `x`.
pub fn beta_closed_form_scaled(
    n: u32,
    m: u32,
    l: u32,
    params: &AlgebraParams,
    x_scale: i64,
) -> Result<KPoly, NormalOrderError> {
    let tower = Tower::new(params, n, m, x_scale);
    Ok(match closed_form_case(n, l)? {
        ClosedFormCase::Zero => tower.c(1.0),
        ClosedFormCase::One => tower.beta1(),
        ClosedFormCase::Two => tower.beta2(),
        ClosedFormCase::Three => tower.beta3(),
        ClosedFormCase::Top => tower.beta_top(),
        ClosedFormCase::BelowTop => tower.beta_below_top(),
        ClosedFormCase::General { k } => tower.beta_general(k as i64),
    })
}

pub fn beta_closed_form(n: u32, m: u32, l: u32, params: &AlgebraParams) -> Result<KPoly, NormalOrderError> {
    beta_closed_form_scaled(n, m, l, params, 1)
}
