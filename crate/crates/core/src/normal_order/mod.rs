//! Symbolic normal ordering over `(a†)^p a^q K^r`.

pub mod beta;
pub mod expr;
pub mod form;
pub mod kpoly;
pub mod parse;

use thiserror::Error;

pub use beta::{beta_closed_form, beta_closed_form_scaled, beta_oracle, BetaTower};
pub use expr::OperatorExpr;
pub use form::{nf_add, nf_mul, nf_scale, normal_form, Monomial, NormalForm, NormalOrderer};
pub use kpoly::KPoly;
pub use parse::{parse, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalOrderError {
    #[error("lambda mismatch: {0} vs {1}")]
    LambdaMismatch(usize, usize),
    #[error("projector P{index} does not exist for lambda = {lambda}")]
    UnknownProjector { index: usize, lambda: usize },
    #[error("index out of range: {0}")]
    BadRange(String),
    #[error("no closed form covers beta_{l} for n = {n}")]
    FormulaGap { n: u32, l: u32 },
}
