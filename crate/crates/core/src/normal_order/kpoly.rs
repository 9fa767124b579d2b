use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Element of the group algebra of `C_λ`: `Σ_r c_r K^r`, `0 ≤ r < λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KPoly(Vec<Complex64>);

impl KPoly {
    pub fn zero(lambda: usize) -> Self {
        KPoly(vec![Complex64::new(0.0, 0.0); lambda])
    }

    pub fn constant(lambda: usize, c: Complex64) -> Self {
        let mut p = KPoly::zero(lambda);
        p.0[0] = c;
        p
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "K-polynomial needs lambda >= 1 slots");
        KPoly(coeffs)
    }

    pub fn lambda(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn coeff(&self, r: usize) -> Complex64 {
        self.0[r % self.0.len()]
    }

    pub fn coeff_mut(&mut self, r: usize) -> &mut Complex64 {
        let l = self.0.len();
        &mut self.0[r % l]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        KPoly(self.0.iter().map(|x| x * c).collect())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &KPoly) -> f64 {
        (self - other).max_abs()
    }

    /// Multiplies coefficient `r` by `phase(r)`.
    pub fn twist(&self, phase: impl Fn(usize) -> Complex64) -> Self {
        KPoly(self.0.iter().enumerate().map(|(r, c)| c * phase(r)).collect())
    }
}

impl Add for &KPoly {
    type Output = KPoly;
    fn add(self, rhs: &KPoly) -> KPoly {
        assert_eq!(self.lambda(), rhs.lambda());
        KPoly(self.0.iter().zip(&rhs.0).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &KPoly {
    type Output = KPoly;
    fn sub(self, rhs: &KPoly) -> KPoly {
        assert_eq!(self.lambda(), rhs.lambda());
        KPoly(self.0.iter().zip(&rhs.0).map(|(x, y)| x - y).collect())
    }
}

/// Cyclic convolution (`K^λ = I`).
impl Mul for &KPoly {
    type Output = KPoly;
    fn mul(self, rhs: &KPoly) -> KPoly {
        let l = self.lambda();
        assert_eq!(l, rhs.lambda());
        let mut out = KPoly::zero(l);
        for (i, x) in self.0.iter().enumerate() {
            if x.norm() == 0.0 {
                continue;
            }
            for (j, y) in rhs.0.iter().enumerate() {
                out.0[(i + j) % l] += x * y;
            }
        }
        out
    }
}
