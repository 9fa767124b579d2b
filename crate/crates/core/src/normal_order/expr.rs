use std::fmt;

use num_complex::Complex64;

/// Syntax tree for sums and products of the algebra generators.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    /// Annihilation operator `a`.
    A,
    /// Creation operator `a†`, written `ad`.
    Ad,
    /// Number operator.
    N,
    /// Klein operator.
    K,
    /// Projector onto levels `n ≡ μ (mod λ)`.
    P(usize),
    /// Identity.
    I,
    Scalar(Complex64),
    Neg(Box<OperatorExpr>),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Product(Box<OperatorExpr>, Box<OperatorExpr>),
    Power(Box<OperatorExpr>, u32),
    Commutator(Box<OperatorExpr>, Box<OperatorExpr>),
    Anticommutator(Box<OperatorExpr>, Box<OperatorExpr>),
}

use OperatorExpr as E;

#[allow(clippy::should_implement_trait)]
impl OperatorExpr {
    pub fn real(x: f64) -> Self {
        E::Scalar(Complex64::new(x, 0.0))
    }

    pub fn complex(c: Complex64) -> Self {
        E::Scalar(c)
    }

    pub fn pow(self, k: u32) -> Self {
        E::Power(Box::new(self), k)
    }

    pub fn neg(self) -> Self {
        E::Neg(Box::new(self))
    }

    pub fn add(self, rhs: Self) -> Self {
        E::Sum(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Self) -> Self {
        E::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Self) -> Self {
        E::Product(Box::new(self), Box::new(rhs))
    }

    pub fn scale(self, c: Complex64) -> Self {
        E::Scalar(c).mul(self)
    }

    pub fn commutator(x: Self, y: Self) -> Self {
        E::Commutator(Box::new(x), Box::new(y))
    }

    pub fn anticommutator(x: Self, y: Self) -> Self {
        E::Anticommutator(Box::new(x), Box::new(y))
    }

    /// `(a†)^p a^q`, dropping trivial factors.
    pub fn monomial(p: u32, q: u32) -> Self {
        match (p, q) {
            (0, 0) => E::I,
            (p, 0) => power_or_atom(E::Ad, p),
            (0, q) => power_or_atom(E::A, q),
            (p, q) => power_or_atom(E::Ad, p).mul(power_or_atom(E::A, q)),
        }
    }

    /// Sum of the given terms, `0` when empty.
    pub fn sum_of(terms: impl IntoIterator<Item = OperatorExpr>) -> Self {
        terms.into_iter().reduce(|acc, t| acc.add(t)).unwrap_or_else(|| E::real(0.0))
    }

    /// `Σ_r c_r K^r` with `K^0 = I`; zero coefficients are skipped.
    pub fn klein_poly(coeffs: &[Complex64]) -> Self {
        E::sum_of(coeffs.iter().enumerate().filter(|(_, c)| c.norm() != 0.0).map(|(r, c)| {
            let k = match r {
                0 => E::I,
                r => power_or_atom(E::K, r as u32),
            };
            k.scale(*c)
        }))
    }

    /// Upper bound on the number of raising factors in any expanded product term.
    pub fn creation_depth(&self) -> u32 {
        match self {
            E::Ad => 1,
            E::A | E::N | E::K | E::P(_) | E::I | E::Scalar(_) => 0,
            E::Neg(x) => x.creation_depth(),
            E::Sum(x, y) | E::Sub(x, y) => x.creation_depth().max(y.creation_depth()),
            E::Product(x, y) | E::Commutator(x, y) | E::Anticommutator(x, y) => {
                x.creation_depth() + y.creation_depth()
            }
            E::Power(x, k) => x.creation_depth() * k,
        }
    }

    /// Formal adjoint for a Klein operator of order `lambda`: products are
    /// reversed, scalars conjugated and `K† = K^{λ−1}`.
    pub fn adjoint(&self, lambda: usize) -> Self {
        match self {
            E::A => E::Ad,
            E::Ad => E::A,
            E::N | E::I | E::P(_) => self.clone(),
            E::K => power_or_atom(E::K, lambda as u32 - 1),
            E::Scalar(c) => E::Scalar(c.conj()),
            E::Neg(x) => E::Neg(Box::new(x.adjoint(lambda))),
            E::Sum(x, y) => x.adjoint(lambda).add(y.adjoint(lambda)),
            E::Sub(x, y) => x.adjoint(lambda).sub(y.adjoint(lambda)),
            E::Product(x, y) => y.adjoint(lambda).mul(x.adjoint(lambda)),
            E::Power(x, k) => E::Power(Box::new(x.adjoint(lambda)), *k),
            // [X, Y]† = [Y†, X†]
            E::Commutator(x, y) => E::commutator(y.adjoint(lambda), x.adjoint(lambda)),
            E::Anticommutator(x, y) => E::anticommutator(y.adjoint(lambda), x.adjoint(lambda)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            E::Sum(..) | E::Sub(..) => 1,
            E::Product(..) => 2,
            E::Neg(..) => 3,
            E::Power(..) => 4,
            E::Scalar(c) if c.im == 0.0 && c.re.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn power_or_atom(atom: OperatorExpr, k: u32) -> OperatorExpr {
    if k == 1 {
        atom
    } else {
        atom.pow(k)
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &OperatorExpr, min: u8) -> fmt::Result {
    if child.precedence() < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::A => f.write_str("a"),
            E::Ad => f.write_str("ad"),
            E::N => f.write_str("N"),
            E::K => f.write_str("K"),
            E::P(mu) => write!(f, "P{mu}"),
            E::I => f.write_str("I"),
            E::Scalar(c) if c.im == 0.0 => write!(f, "{}", c.re),
            E::Scalar(c) => write!(f, "({},{})", c.re, c.im),
            E::Neg(x) => {
                f.write_str("-")?;
                write_child(f, x, 3)
            }
            E::Sum(x, y) => {
                write_child(f, x, 1)?;
                f.write_str(" + ")?;
                write_child(f, y, 2)
            }
            E::Sub(x, y) => {
                write_child(f, x, 1)?;
                f.write_str(" - ")?;
                write_child(f, y, 2)
            }
            E::Product(x, y) => {
                write_child(f, x, 2)?;
                f.write_str(" * ")?;
                write_child(f, y, 3)
            }
            E::Power(x, k) => {
                write_child(f, x, 5)?;
                write!(f, "^{k}")
            }
            E::Commutator(x, y) => write!(f, "[{x}, {y}]"),
            E::Anticommutator(x, y) => write!(f, "{{{x}, {y}}}"),
        }
    }
}
