//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion.
//!
//! Criteria 5 and 7 cannot hold as stated: the printed coefficients they
//! adjudicate disagree with the operator algebra. For those the line reads
//! FAIL, and the run still succeeds only if the observed values match the
//! derived relations recorded next to each check.

mod common;

use std::time::{Duration, Instant};

use clambda::fock::{build_rep, closed_form_level, spectrum};
use clambda::identities::constants::{
    central_charge, central_term_vanishes, structure_n, structure_phi, NReading, PhiReading, PHI_CAP,
};
use clambda::identities::oscillator::{check_basic, check_beta_oracle, check_single_mode};
use clambda::identities::virasoro::{check_klein_virasoro, check_lambda2, check_virasoro, fit_sigma};
use clambda::identities::winf::{check_casimir, check_klein_winf};
use clambda::identities::{ell, run_suite, Ctx, RunConfig, Status};
use clambda::normal_order::beta::beta_oracle;
use clambda::normal_order::{NormalOrderer, OperatorExpr as E};
use clambda::params::{validate_alpha, AlgebraParams};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    detail: String,
    /// For criteria that cannot pass: whether the observed failure is the derived one.
    failure_explained: bool,
}

impl Outcome {
    fn pass_if(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, failure_explained: false }
    }

    fn known_failure(pass: bool, explained: bool, detail: String) -> Self {
        Outcome { pass, detail, failure_explained: explained }
    }
}

fn parameter_grid() -> Vec<AlgebraParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (2..=5).flat_map(|lambda| (0..3).map(|_| common::random_params(lambda, &mut rng)).collect::<Vec<_>>()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut all_pass = true;
    let mut count = 0;
    for p in parameter_grid() {
        let rep = build_rep(&p, 64).unwrap();
        for c in check_basic(&Ctx::new(&rep)) {
            worst = worst.max(c.residual_claim.unwrap_or(f64::INFINITY));
            all_pass &= c.status == Status::Pass;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = all_pass && worst < 1e-12 && elapsed < Duration::from_secs(5);
    Outcome::pass_if(ok, format!("{count} basic checks, max residual {worst:.2e}, {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut worst = 0f64;
    for p in parameter_grid() {
        let rep = build_rep(&p, 64).unwrap();
        for (n, e) in spectrum(&rep).iter().enumerate() {
            worst = worst.max((e - closed_form_level(&p, n)).abs());
        }
    }
    Outcome::pass_if(worst < 1e-10, format!("levels 0..62 on 12 parameter sets, max |E - closed form| {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0f64;
    for i in 0..100 {
        let lambda = 2 + i % 4;
        let p = common::random_params(lambda, &mut rng);
        let rep = build_rep(&p, 64).unwrap();
        let ctx = Ctx::new(&rep);
        let w = common::random_word(&mut rng, lambda, 6);
        let nf = ctx.nf(&w).unwrap().to_expr();
        worst = worst.max(ctx.residual(&w, &nf).unwrap());
    }
    Outcome::pass_if(worst < 1e-8, format!("100 random words, max NF-vs-matrix residual {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut grades_ok = true;
    let mut oracle_ok = true;
    let mut worst = 0f64;
    for p in [validate_alpha(2, &[0.5, -0.5]).unwrap(), validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap()] {
        let rep = build_rep(&p, 64).unwrap();
        let ctx = Ctx::new(&rep);
        for n in 1..=4u32 {
            for m in 1..=8u32 {
                let lhs = E::commutator(E::A.pow(n), E::Ad.pow(m));
                let nf = NormalOrderer::new(&p).normal_form(&lhs).unwrap();
                grades_ok &= nf
                    .terms()
                    .keys()
                    .all(|x| x.p as i64 - x.q as i64 == m as i64 - n as i64 && x.q < n && x.p < m);
                if n < m {
                    let c = check_beta_oracle(&ctx, n, m).unwrap();
                    oracle_ok &= c.status == Status::Pass;
                    worst = worst.max(c.residual_claim.unwrap());
                }
            }
        }
    }
    let tower = beta_oracle(2, 3, &AlgebraParams::undeformed(2).unwrap()).unwrap();
    let spot: Vec<f64> = tower.coeffs.iter().map(|k| k.coeff(0).re).collect();
    let spot_ok = spot == vec![1.0, 4.0, 2.0] && tower.coeffs.iter().all(|k| k.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
    Outcome::pass_if(
        grades_ok && oracle_ok && spot_ok,
        format!("grades on predicted monomials: {grades_ok}; beta tower max residual {worst:.2e}; a^2 ad^2 beta = {spot:?}"),
    )
}

fn criterion_5() -> Outcome {
    let p = validate_alpha(2, &[0.5, -0.5]).unwrap();
    let rep = build_rep(&p, 64).unwrap();
    let ctx = Ctx::new(&rep);
    let mut per_m = Vec::new();
    for m in 2..=5u32 {
        let c = check_single_mode(&ctx, m).unwrap();
        let matching: Vec<String> =
            c.fitted["matching"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        per_m.push((m, matching));
    }
    let exactly_one = per_m.iter().all(|(_, s)| s.len() == 1);
    let same = per_m.windows(2).all(|w| w[0].1 == w[1].1);
    // At λ = 2 the geometric sum (B) equals 1 for odd m, like A, and 0 for even
    // m, like the printed λ = 2 form C; only B matches at every m.
    let explained = per_m.iter().all(|(m, s)| {
        let expected = if m % 2 == 1 { ["A", "B"] } else { ["B", "C"] };
        s.iter().map(String::as_str).eq(expected)
    });
    let table: Vec<String> = per_m.iter().map(|(m, s)| format!("m={m}:{}", s.join("+"))).collect();
    Outcome::known_failure(
        exactly_one && same,
        explained,
        format!("matching candidates {}; B (geometric sum) is the only one matching every m", table.join(" ")),
    )
}

fn criterion_6() -> Outcome {
    let grid: Vec<i64> = (-1..=3).collect();
    let mut ok = true;
    let mut worst = 0f64;
    let mut sigma = 0.0;
    for lambda in 2..=5 {
        let fit = fit_sigma(lambda, &grid).unwrap();
        ok &= fit.consistent;
        sigma = fit.sigma;
        let p = AlgebraParams::undeformed(lambda).unwrap();
        let rep = build_rep(&p, 64).unwrap();
        let ctx = Ctx::new(&rep);
        for &m in &grid {
            for &n in &grid {
                let c = check_virasoro(&ctx, m, n, fit.sigma).unwrap();
                if c.status == Status::NotApplicable {
                    continue;
                }
                ok &= c.status == Status::Pass;
                worst = worst.max(c.residual_claim.unwrap());
            }
        }
        let r = ctx.residual(&E::commutator(ell(1), ell(-1)), &E::real(-2.0).mul(ell(0))).unwrap();
        ok &= r < 1e-12;
    }
    Outcome::pass_if(ok && worst < 1e-8, format!("sigma = {sigma} consistent for lambda 2..5, max residual {worst:.2e}, [l1, l-1] = -2 l0"))
}

fn criterion_7() -> Outcome {
    let mut claim_ok = true;
    let mut derived_ok = true;
    let mut bad_cells = 0;
    let mut cells = 0;
    for lambda in 2..=5usize {
        let p = AlgebraParams::undeformed(lambda).unwrap();
        let q = common::random_params(lambda, &mut ChaCha8Rng::seed_from_u64(lambda as u64));
        for params in [p, q] {
            let rep = build_rep(&params, 64).unwrap();
            let ctx = Ctx::new(&rep);
            for m in -1..=5i64 {
                let c = check_klein_virasoro(&ctx, m).unwrap();
                let commutes = c.fitted["commutes"].as_bool().unwrap();
                let holds = c.residual_claim.unwrap() < 1e-10 && c.fitted["predicted_commutes"].as_bool() == Some(commutes);
                claim_ok &= holds;
                bad_cells += usize::from(!holds);
                cells += 1;
                // [ℓ_m, K] = (1 − ω^m) ℓ_m K, zero exactly when λ | m
                derived_ok &= c.fitted["residual_derived_phase"].as_f64().unwrap() < 1e-10;
                derived_ok &= commutes == (m.rem_euclid(lambda as i64) == 0);
            }
            for s in 0..=4u32 {
                for m in 0..=4u32 {
                    let c = check_klein_winf(&ctx, s, m).unwrap();
                    let commutes = c.fitted["commutes"].as_bool().unwrap();
                    let holds = c.residual_claim.unwrap() < 1e-10 && c.fitted["predicted_commutes"].as_bool() == Some(commutes);
                    claim_ok &= holds;
                    bad_cells += usize::from(!holds);
                    cells += 1;
                    // [ω^s_m, K] = (x^{s−m} − 1) K ω^s_m, zero exactly when λ | s − m
                    derived_ok &= c.fitted["residual_derived_phase"].as_f64().unwrap() < 1e-10;
                    derived_ok &= commutes == ((s as i64 - m as i64).rem_euclid(lambda as i64) == 0);
                }
            }
        }
    }
    Outcome::known_failure(
        claim_ok,
        derived_ok,
        format!(
            "{bad_cells}/{cells} cells disagree with the printed phases; observed [l_m, K] = (1 - w^m) l_m K and [w^s_m, K] = (x^(s-m) - 1) K w^s_m hold everywhere"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut worst = 0f64;
    let mut literal_worst = 0f64;
    for kappa in [0.0, 0.3, 0.7] {
        let p = AlgebraParams::from_kappa(2, &[Complex64::new(kappa, 0.0)]).unwrap();
        let rep = build_rep(&p, 64).unwrap();
        let ctx = Ctx::new(&rep);
        for c in check_lambda2(&ctx, -1.0, &[0, 1, 2]).unwrap() {
            if c.id.contains("even_even") || c.id.contains("odd_odd") {
                ok &= c.status == Status::Pass;
                worst = worst.max(c.residual_claim.unwrap());
                literal_worst = literal_worst.max(c.fitted["residual_literal_sign"].as_f64().unwrap());
            }
        }
    }
    Outcome::pass_if(
        ok && worst < 1e-8,
        format!("even/even and odd/odd with sigma = -1: max residual {worst:.2e} (printed sign: {literal_worst:.2e})"),
    )
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut norm = 0f64;
    for lambda in 2..=5 {
        let rep = build_rep(&AlgebraParams::undeformed(lambda).unwrap(), 64).unwrap();
        let checks = check_casimir(&Ctx::new(&rep));
        let by_id = |id: &str| checks.iter().find(|c| c.id == id).unwrap();
        let value = by_id("casimir.value");
        norm = norm.max(value.fitted["abs_residual_paper"].as_f64().unwrap());
        ok &= value.status == Status::Pass && by_id("casimir.commutes_w11").status == Status::Pass;
        let deformed = common::random_params(lambda, &mut ChaCha8Rng::seed_from_u64(90 + lambda as u64));
        let rep = build_rep(&deformed, 64).unwrap();
        let checks = check_casimir(&Ctx::new(&rep));
        let bracket = checks.iter().find(|c| c.id == "casimir.bracket_w11").unwrap();
        ok &= bracket.status == Status::ReportOnly && bracket.residual_claim.is_some();
    }
    Outcome::pass_if(ok && norm < 1e-10, format!("kappa = 0: max |C| {norm:.2e}, [C, w11] = 0; deformed bracket emitted report-only"))
}

fn criterion_10() -> Outcome {
    let c0_ok = central_charge(0) == BigRational::new(BigInt::from(1), BigInt::from(24));
    let window_ok = (0..=6u32).all(|i| (-(i as i64 + 1)..=(i as i64 + 1)).all(|m| central_term_vanishes(i, m)));
    let positive_ok = (0..=10u32).all(|i| central_charge(i) > BigRational::from_integer(BigInt::from(0)));
    let mut emitted = 0;
    let mut finite = true;
    for i in 0..=3 {
        for j in 0..=3 {
            for l in 0..=3 {
                for (m, n) in [(-1, 1), (1, -1), (2, 0), (0, 3)] {
                    for r in [NReading::Literal, NReading::Alt] {
                        finite &= structure_n(i, j, l, m, n, r).is_finite();
                        emitted += 1;
                    }
                }
                for r in [PhiReading::Literal, PhiReading::Alt] {
                    if let Ok(s) = structure_phi(i, j, l, r, PHI_CAP) {
                        finite &= s.value.is_finite();
                    }
                    emitted += 1;
                }
            }
        }
    }
    Outcome::pass_if(
        c0_ok && window_ok && positive_ok && finite,
        format!("c0 = 1/24: {c0_ok}; vanishing window i <= 6: {window_ok}; c_i > 0 for i <= 10: {positive_ok}; {emitted} N/phi values"),
    )
}

fn verify_bytes() -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["clambda", "verify", "--lambda", "3", "--alpha", "0.3,0.2,-0.5", "--dim", "48"];
    let code = clambda::cli::run(args, &mut out, &mut err);
    (code, out)
}

fn criterion_11() -> Outcome {
    let (c1, a) = verify_bytes();
    let (c2, b) = verify_bytes();
    let parsed: Result<Value, _> = serde_json::from_slice(&a);
    Outcome::pass_if(
        c1 == 0 && c2 == 0 && a == b && parsed.is_ok(),
        format!("two verify runs, {} bytes each, identical: {}", a.len(), a == b),
    )
}

fn criterion_12() -> Outcome {
    let mut worst = Duration::ZERO;
    let mut counts = Vec::new();
    for p in [
        AlgebraParams::from_kappa(2, &[Complex64::new(0.5, 0.0)]).unwrap(),
        validate_alpha(5, &[0.2, 0.3, -0.1, 0.1, -0.5]).unwrap(),
    ] {
        let start = Instant::now();
        let report = run_suite(&RunConfig::new(p)).unwrap();
        worst = worst.max(start.elapsed());
        counts.push(report.checks.len());
    }
    Outcome::pass_if(
        worst < Duration::from_secs(60),
        format!("default suite at D = 64: {counts:?} checks, slowest {:.2} s", worst.as_secs_f64()),
    )
}

/// Number, check, and whether the criterion is attainable.
type Criterion = (u32, fn() -> Outcome, bool);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, criterion_1, true),
        (2, criterion_2, true),
        (3, criterion_3, true),
        (4, criterion_4, true),
        (5, criterion_5, false),
        (6, criterion_6, true),
        (7, criterion_7, false),
        (8, criterion_8, true),
        (9, criterion_9, true),
        (10, criterion_10, true),
        (11, criterion_11, true),
        (12, criterion_12, true),
    ];
    let mut unexpected = Vec::new();
    for (n, run, attainable) in criteria {
        let o = run();
        println!("{} criterion {n}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        let expected = if attainable { o.pass } else { !o.pass && o.failure_explained };
        if !expected {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
