mod common;

use clambda::fock::{build_rep, residual_with_scale, safe_window};
use clambda::identities::virasoro::check_virasoro;
use clambda::identities::winf::{check_sp2, check_winf};
use clambda::identities::{ell, omega, Ctx};
use clambda::normal_order::{NormalOrderer, OperatorExpr as E};
use clambda::params::{alpha_from_kappa, kappa_from_alpha, AlgebraParams};
use common::{letter_strategy, params_strategy, word};
use num_complex::Complex64;
use proptest::prelude::*;

/// Scaled residual between a word's matrix and its normal form's matrix.
fn oracle_gap(params: &AlgebraParams, expr: &E, dim: usize) -> f64 {
    let rep = build_rep(params, dim).unwrap();
    let nf = NormalOrderer::new(params).normal_form(expr).unwrap().to_expr();
    let window = safe_window(&rep, &[expr, &nf]).unwrap();
    let l = rep.apply_on_window(expr, window).unwrap();
    let r = rep.apply_on_window(&nf, window).unwrap();
    let scale = rep.magnitude_on_window(expr, window).unwrap().max(rep.magnitude_on_window(&nf, window).unwrap());
    residual_with_scale(&l, &r, scale)
}

fn monomial_strategy(lambda: usize) -> impl Strategy<Value = (u32, u32, u32)> {
    (0u32..4, 0u32..4, 0..lambda as u32)
}

fn klein_monomial(p: u32, q: u32, r: u32) -> E {
    E::monomial(p, q).mul(E::K.pow(r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_roundtrip_lambda5(params in params_strategy(5..=5)) {
        let kappa = kappa_from_alpha(&params);
        prop_assert_eq!(kappa.len(), 4);
        prop_assert!(params.alpha().iter().sum::<f64>().abs() < 1e-12);
        let back = alpha_from_kappa(5, &kappa).unwrap();
        for (x, y) in back.iter().zip(params.alpha()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_form_matches_matrices(
        params in params_strategy(2..=5),
        letters in prop::collection::vec(letter_strategy(), 1..=6),
    ) {
        let expr = word(&letters, params.lambda());
        prop_assert!(oracle_gap(&params, &expr, 24) < 1e-8);
    }

    #[test]
    fn product_is_associative(
        params in params_strategy(2..=4),
        x in monomial_strategy(2),
        y in monomial_strategy(2),
        z in monomial_strategy(2),
    ) {
        let o = NormalOrderer::new(&params);
        let nf = |(p, q, r): (u32, u32, u32)| o.normal_form(&klein_monomial(p, q, r)).unwrap();
        let (x, y, z) = (nf(x), nf(y), nf(z));
        let left = o.mul(&o.mul(&x, &y).unwrap(), &z).unwrap();
        let right = o.mul(&x, &o.mul(&y, &z).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-9 * left.max_abs().max(1.0));
    }

    #[test]
    fn adjoint_commutes_with_normal_ordering(
        params in params_strategy(2..=5),
        letters in prop::collection::vec(letter_strategy(), 1..=5),
    ) {
        let lambda = params.lambda();
        let expr = word(&letters, lambda);
        let o = NormalOrderer::new(&params);
        let direct = o.normal_form(&expr.adjoint(lambda)).unwrap();
        let via = o.normal_form(&expr).unwrap().adjoint(&params);
        prop_assert!(direct.max_abs_diff(&via) < 1e-9 * direct.max_abs().max(1.0));
        let rep = build_rep(&params, 16).unwrap();
        let m = rep.apply_word(&expr).unwrap();
        let madj = rep.apply_word(&expr.adjoint(lambda)).unwrap();
        let gap = (m.adjoint() - &madj).iter().map(|c| c.norm()).fold(0.0, f64::max);
        let size = madj.iter().map(|c| c.norm()).fold(1.0, f64::max);
        prop_assert!(gap < 1e-10 * size);
    }

    #[test]
    fn brackets_respect_grading(
        params in params_strategy(2..=5),
        (s, m, t, n) in (0u32..4, 0u32..4, 0u32..4, 0u32..4),
    ) {
        let nf = NormalOrderer::new(&params).normal_form(&E::commutator(omega(s, m), omega(t, n))).unwrap();
        let grade = s as i64 - m as i64 + t as i64 - n as i64;
        for mono in nf.terms().keys() {
            prop_assert_eq!(mono.p as i64 - mono.q as i64, grade);
        }
    }

    #[test]
    fn brackets_are_antisymmetric(
        params in params_strategy(2..=5),
        x in prop::collection::vec(letter_strategy(), 1..=3),
        y in prop::collection::vec(letter_strategy(), 1..=3),
    ) {
        let lambda = params.lambda();
        let (x, y) = (word(&x, lambda), word(&y, lambda));
        let o = NormalOrderer::new(&params);
        let xy = o.normal_form(&E::commutator(x.clone(), y.clone())).unwrap();
        let yx = o.normal_form(&E::commutator(y, x)).unwrap();
        prop_assert!(xy.add(&yx).unwrap().max_abs() < 1e-12 * xy.max_abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The sp(2) brackets hold at `κ = 0`, so their residual shrinks with `κ`.
    #[test]
    fn sp2_residual_vanishes_with_kappa(params in params_strategy(2..=5)) {
        let mut last: Option<Vec<f64>> = None;
        for factor in [1.0, 0.5, 0.25, 0.0] {
            let scaled = params.scaled(factor).unwrap();
            let rep = build_rep(&scaled, 32).unwrap();
            let now: Vec<f64> = check_sp2(&Ctx::new(&rep)).iter().map(|c| c.residual_claim.unwrap()).collect();
            if let Some(prev) = &last {
                for (a, b) in prev.iter().zip(&now) {
                    prop_assert!(b <= a || *b < 1e-8, "{b} after {a}");
                }
            }
            last = Some(now);
        }
        prop_assert!(last.unwrap().iter().all(|r| *r < 1e-12));
    }

    /// The deformed Virasoro and w-infinity claims converge to their `κ = 0`
    /// forms, whose own residuals are nonzero (sign and reordering factors).
    #[test]
    fn deformed_claims_converge_to_undeformed_defects(
        params in params_strategy(2..=5),
        (m, n) in (-1i64..3, -1i64..3),
        (s, p, t, q) in (0u32..4, 0u32..4, 0u32..4, 0u32..4),
    ) {
        prop_assume!(m != n);
        let zero = params.scaled(0.0).unwrap();
        let rep0 = build_rep(&zero, 32).unwrap();
        let ctx0 = Ctx::new(&rep0);
        let literal = E::real((m - n) as f64).mul(ell(m + n));
        let vir0 = ctx0.residual(&E::commutator(ell(m), ell(n)), &literal).unwrap();
        let winf0 = check_winf(&ctx0, s, p, t, q).unwrap().residual_claim.unwrap();
        let mut gaps = Vec::new();
        for factor in [1.0, 0.5, 0.25, 1.0 / 64.0] {
            let rep = build_rep(&params.scaled(factor).unwrap(), 32).unwrap();
            let ctx = Ctx::new(&rep);
            let vir = check_virasoro(&ctx, m, n, -1.0).unwrap().residual_claim.unwrap();
            let winf = check_winf(&ctx, s, p, t, q).unwrap().residual_claim.unwrap();
            gaps.push(((vir - vir0).abs(), (winf - winf0).abs()));
        }
        let (first, last) = (gaps[0], gaps[gaps.len() - 1]);
        prop_assert!(last.0 <= first.0 / 8.0 + 1e-10, "{gaps:?}");
        prop_assert!(last.1 <= first.1 / 8.0 + 1e-10, "{gaps:?}");
    }
}

#[test]
fn kappa_zero_scaling_is_undeformed() {
    let p = AlgebraParams::from_kappa(3, &[Complex64::new(0.2, 0.1), Complex64::new(0.2, -0.1)]).unwrap();
    assert!(p.scaled(0.0).unwrap().is_undeformed());
}
