#![allow(dead_code)]

use clambda::normal_order::OperatorExpr as E;
use clambda::params::{validate_alpha, AlgebraParams};
use proptest::prelude::*;
use rand::Rng;

/// `α` from partial sums `β_1..β_{λ−1}` drawn in `(−0.9, 1.5)`, so `β > −1` holds.
pub fn alpha_from_partial_sums(partial: &[f64]) -> Vec<f64> {
    let mut beta = vec![0.0];
    beta.extend_from_slice(partial);
    beta.push(0.0);
    beta.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn random_params(lambda: usize, rng: &mut impl Rng) -> AlgebraParams {
    let partial: Vec<f64> = (1..lambda).map(|_| rng.gen_range(-0.9..1.5)).collect();
    validate_alpha(lambda, &alpha_from_partial_sums(&partial)).expect("partial sums above -1")
}

pub fn params_strategy(lambdas: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = AlgebraParams> {
    lambdas.prop_flat_map(|lambda| {
        prop::collection::vec(-0.9f64..1.5, lambda - 1)
            .prop_map(move |partial| validate_alpha(lambda, &alpha_from_partial_sums(&partial)).unwrap())
    })
}

/// One letter of a random word; `P` is reduced mod `λ` when built.
#[derive(Debug, Clone, Copy)]
pub enum Letter {
    A,
    Ad,
    K,
    N,
    P(usize),
    Scalar(f64, f64),
}

pub fn letter_strategy() -> impl Strategy<Value = Letter> {
    prop_oneof![
        3 => Just(Letter::A),
        3 => Just(Letter::Ad),
        2 => Just(Letter::K),
        1 => Just(Letter::N),
        1 => (0usize..5).prop_map(Letter::P),
        1 => (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Letter::Scalar(re, im)),
    ]
}

pub fn letter_expr(letter: Letter, lambda: usize) -> E {
    match letter {
        Letter::A => E::A,
        Letter::Ad => E::Ad,
        Letter::K => E::K,
        Letter::N => E::N,
        Letter::P(mu) => E::P(mu % lambda),
        Letter::Scalar(re, im) => E::complex(num_complex::Complex64::new(re, im)),
    }
}

pub fn word(letters: &[Letter], lambda: usize) -> E {
    letters.iter().map(|l| letter_expr(*l, lambda)).reduce(E::mul).unwrap_or(E::I)
}

pub fn random_word(rng: &mut impl Rng, lambda: usize, max_len: usize) -> E {
    let len = rng.gen_range(1..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| match rng.gen_range(0..10) {
            0..=2 => Letter::A,
            3..=5 => Letter::Ad,
            6 | 7 => Letter::K,
            8 => Letter::N,
            _ => Letter::P(rng.gen_range(0..lambda)),
        })
        .collect();
    word(&letters, lambda)
}
