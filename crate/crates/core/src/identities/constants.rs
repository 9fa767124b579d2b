//! Structure constants and central terms of the abstract W∞ algebra.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default truncation of the `φ` series.
pub const PHI_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WConstError {
    #[error("pole in Pochhammer symbol {symbol} at k = {k}")]
    PoleInPochhammer { symbol: String, k: usize },
}

/// Which argument pattern to use in the second falling factorial of `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NReading {
    /// `[i+1+m]` in both slots, as printed.
    Literal,
    /// `[i+1−m]` in the second slot.
    Alt,
}

/// Reading of the partly illegible denominator of `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PhiReading {
    /// `(−i + ½)_k (−j + ½)_k`.
    Literal,
    /// `(−i − ½)_k (−j − ½)_k`.
    Alt,
}

/// Falling factorial `[x]_n = x (x−1) ⋯ (x−n+1)`, `[x]_0 = 1`.
pub fn falling(x: f64, n: u32) -> f64 {
    (0..n).map(|k| x - k as f64).product()
}

/// Rising factorial `(x)_n = x (x+1) ⋯ (x+n−1)`, `(x)_0 = 1`.
pub fn rising(x: f64, n: u32) -> f64 {
    (0..n).map(|k| x + k as f64).product()
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn double_factorial(n: u64) -> BigInt {
    (1..=n).rev().step_by(2).fold(BigInt::one(), |acc, k| acc * k)
}

/// `c_i = 2^{2i−3} i! (i+1)! / ((2i+1)!! (2i+3)!!)`.
pub fn central_charge(i: u32) -> BigRational {
    let i = i as u64;
    let num = factorial(i) * factorial(i + 1);
    let den = double_factorial(2 * i + 1) * double_factorial(2 * i + 3);
    let ratio = BigRational::new(num, den);
    let exp = 2 * i as i64 - 3;
    let two = BigRational::from_integer(BigInt::from(2));
    if exp >= 0 {
        ratio * num_traits::pow(two, exp as usize)
    } else {
        ratio / num_traits::pow(two, (-exp) as usize)
    }
}

/// `c_i(m) = m (m²−1)(m²−4) ⋯ (m²−(i+1)²) c_i`, exact.
pub fn central_term(i: u32, m: i64) -> BigRational {
    let m2 = BigInt::from(m) * BigInt::from(m);
    let poly = (1..=(i as i64 + 1)).fold(BigInt::from(m), |acc, k| acc * (&m2 - BigInt::from(k * k)));
    BigRational::from_integer(poly) * central_charge(i)
}

/// `N_l^{ij}(m, n) = Σ_k (−1)^k C(l+1, k) [i+1+m]_{l+1−k} [·]_k [j+1+n]_k [j+1−n]_{l+1−k}`.
pub fn structure_n(i: u32, j: u32, l: u32, m: i64, n: i64, reading: NReading) -> f64 {
    let (i, j) = (i as f64, j as f64);
    let (m, n) = (m as f64, n as f64);
    let second = match reading {
        NReading::Literal => i + 1.0 + m,
        NReading::Alt => i + 1.0 - m,
    };
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=l + 1 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign
            * binom
            * falling(i + 1.0 + m, l + 1 - k)
            * falling(second, k)
            * falling(j + 1.0 + n, k)
            * falling(j + 1.0 - n, l + 1 - k);
        binom = binom * (l + 1 - k) as f64 / (k + 1) as f64;
    }
    total
}

/// Value of the `φ` series and how it ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiSeries {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Whether a numerator factor vanished before the cap.
    pub terminated: bool,
}

/// `φ_l^{ij} = Σ_{k≥0} (−½)_k (3/2)_k (−l/2−½)_k (−l/2)_k / (k! (a)_k (b)_k (i+j−l+5/2)_k)`.
pub fn structure_phi(i: u32, j: u32, l: u32, reading: PhiReading, cap: usize) -> Result<PhiSeries, WConstError> {
    let (fi, fj, fl) = (i as f64, j as f64, l as f64);
    let num = [-0.5, 1.5, -fl / 2.0 - 0.5, -fl / 2.0];
    let shift = match reading {
        PhiReading::Literal => 0.5,
        PhiReading::Alt => -0.5,
    };
    let den = [-fi + shift, -fj + shift, fi + fj - fl + 2.5];
    let names = ["(-i)_k", "(-j)_k", "(i+j-l+5/2)_k"];
    let mut term = 1.0;
    let mut value = 0.0;
    for k in 0..cap {
        value += term;
        let kf = k as f64;
        if num.iter().any(|a| a + kf == 0.0) {
            return Ok(PhiSeries { value, terms: k + 1, terminated: true });
        }
        if let Some(pos) = den.iter().position(|b| b + kf == 0.0) {
            return Err(WConstError::PoleInPochhammer { symbol: names[pos].into(), k });
        }
        let ratio: f64 = num.iter().map(|a| a + kf).product::<f64>() / ((kf + 1.0) * den.iter().map(|b| b + kf).product::<f64>());
        term *= ratio;
    }
    Ok(PhiSeries { value, terms: cap, terminated: false })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WInfConstants {
    pub i: u32,
    pub j: u32,
    pub l: u32,
    pub m: i64,
    pub n: i64,
    pub n_reading: NReading,
    pub phi_reading: PhiReading,
    pub value_n: f64,
    pub value_phi: f64,
    pub value_g: f64,
    pub phi_terms: usize,
    pub phi_terminated: bool,
    /// Exact `c_i` as `p/q`.
    pub c_i: String,
    pub c_i_m: f64,
}

/// Literal evaluation of `N`, `φ`, `g = φN / (2(l+1))`, `c_i` and `c_i(m)`.
pub fn winf_structure(
    i: u32,
    j: u32,
    l: u32,
    m: i64,
    n: i64,
    n_reading: NReading,
    phi_reading: PhiReading,
) -> Result<WInfConstants, WConstError> {
    let value_n = structure_n(i, j, l, m, n, n_reading);
    let phi = structure_phi(i, j, l, phi_reading, PHI_CAP)?;
    let c = central_charge(i);
    let c_i_m = central_term(i, m);
    Ok(WInfConstants {
        i,
        j,
        l,
        m,
        n,
        n_reading,
        phi_reading,
        value_n,
        value_phi: phi.value,
        value_g: phi.value * value_n / (2.0 * (l as f64 + 1.0)),
        phi_terms: phi.terms,
        phi_terminated: phi.terminated,
        c_i: format!("{}/{}", c.numer(), c.denom()),
        c_i_m: c_i_m.to_f64().unwrap_or(f64::NAN),
    })
}

/// `true` when `c_i(m)` is exactly zero.
pub fn central_term_vanishes(i: u32, m: i64) -> bool {
    central_term(i, m).is_zero()
}
