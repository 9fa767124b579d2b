//! Brackets of `ω^s_m = (a†)^s a^m`, the sp(2) subalgebra and its Casimir.

use num_complex::Complex64;
use serde_json::json;

use super::{guard, klein_left, omega, Ctx, IdentityCheck, IdentityError};
use crate::normal_order::beta::{beta_closed_form_scaled, printed_f};
use crate::normal_order::{KPoly, OperatorExpr as E};
use crate::params::AlgebraParams;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `Σ_r κ_r c(r) K^r`.
fn kappa_poly(params: &AlgebraParams, c: impl Fn(i64) -> Complex64) -> KPoly {
    let mut p = KPoly::zero(params.lambda());
    for r in 1..params.lambda() {
        *p.coeff_mut(r) = params.kappa_at(r) * c(r as i64);
    }
    p
}

/// `Ξ_l^{(s,m)} = (m − l)(t + F x^{l+s}) β_l^{[s]}` for `l < m`, with `β_l`
/// from the tower of `a^m (a†)^t` and every `x^j` in it raised to `x^{js}`.
fn xi(params: &AlgebraParams, s: u32, m: u32, t: u32) -> Result<Vec<KPoly>, IdentityError> {
    let lambda = params.lambda();
    let f = printed_f(params, t as usize + 1);
    (0..m)
        .map(|l| {
            let beta = beta_closed_form_scaled(m, t + 1, l, params, s as i64)?;
            let factor = &KPoly::constant(lambda, Complex64::new(t as f64, 0.0))
                + &f.scale(params.root_pow((l + s) as i64));
            Ok((&factor * &beta).scale(Complex64::new((m - l) as f64, 0.0)))
        })
        .collect()
}

/// `[ω^s_m, ω^t_n]` against `Σ_l (Ξ_l^{(s,m)} − Ξ_l^{(t,n)}) ω^{s+t−l−1}_{m+n−l−1}`.
pub fn check_winf(ctx: &Ctx, s: u32, m: u32, t: u32, n: u32) -> Result<IdentityCheck, IdentityError> {
    let params = ctx.params();
    let lambda = params.lambda();
    let lhs = E::commutator(omega(s, m), omega(t, n));
    let left = xi(params, s, m, t)?;
    let right = xi(params, t, n, s)?;
    let zero = KPoly::zero(lambda);
    let mut terms = Vec::new();
    let mut skipped = Vec::new();
    for l in 0..m.max(n) as usize {
        let coeff = left.get(l).unwrap_or(&zero) - right.get(l).unwrap_or(&zero);
        let (sup, sub) = ((s + t) as i64 - l as i64 - 1, (m + n) as i64 - l as i64 - 1);
        if sup < 0 || sub < 0 {
            if coeff.max_abs() > 0.0 {
                skipped.push(l);
            }
            continue;
        }
        terms.push(klein_left(coeff.coeffs(), omega(sup as u32, sub as u32)));
    }
    let claim = E::sum_of(terms);
    let truth = ctx.nf(&lhs)?;
    let grade = (s as i64 - m as i64) + (t as i64 - n as i64);
    let grade_ok = truth.terms().keys().all(|x| x.p as i64 - x.q as i64 == grade);
    Ok(ctx
        .check(format!("winf.s{s}.m{m}.t{t}.n{n}"), &lhs, &claim)?
        .with("skipped_negative_index_terms", json!(skipped))
        .with("grade_ok", json!(grade_ok)))
}

/// `[ω^s_m, K]` against `(x^{s+m} − 1) K ω^s_m`.
pub fn check_klein_winf(ctx: &Ctx, s: u32, m: u32) -> Result<IdentityCheck, IdentityError> {
    let params = ctx.params();
    let lhs = E::commutator(omega(s, m), E::K);
    let claim = E::complex(params.root_pow((s + m) as i64) - one()).mul(E::K).mul(omega(s, m));
    let derived = E::complex(params.root_pow(s as i64 - m as i64) - one()).mul(E::K).mul(omega(s, m));
    let lambda = params.lambda() as u32;
    Ok(ctx
        .check_on_support(format!("klein_winf.s{s}.m{m}"), &lhs, &claim, &[(s, m)])?
        .with("commutes", json!(ctx.nf(&lhs)?.is_zero()))
        .with("predicted_commutes", json!((s + m).is_multiple_of(lambda)))
        .with("residual_derived_phase", json!(ctx.residual(&lhs, &derived)?)))
}

/// The three brackets among `ω⁰₁`, `ω¹₁`, `ω²₁` against their printed right sides.
pub fn check_sp2(ctx: &Ctx) -> Vec<IdentityCheck> {
    let params = ctx.params();
    let lambda = params.lambda();
    let x = params.root();
    let constant = |c: f64| KPoly::constant(lambda, Complex64::new(c, 0.0));
    let xr = |r: i64| params.root_pow(r);
    let cases = [
        (
            "sp2.w01_w11",
            E::commutator(omega(0, 1), omega(1, 1)),
            &kappa_poly(params, |_| one() - x) + &constant(1.0),
            omega(0, 1),
        ),
        (
            "sp2.w21_w11",
            E::commutator(omega(2, 1), omega(1, 1)),
            &kappa_poly(params, |r| (one() + xr(r)) * x * (x - one())) - &constant(1.0),
            omega(2, 1),
        ),
        (
            "sp2.w21_w01",
            E::commutator(omega(2, 1), omega(0, 1)),
            &kappa_poly(params, |r| (one() + xr(r)) * (x * x - one())) - &constant(2.0),
            omega(1, 1),
        ),
    ];
    cases
        .into_iter()
        .map(|(id, lhs, coeff, target)| guard(id.into(), |id| ctx.check(id, &lhs, &klein_left(coeff.coeffs(), target))))
        .collect()
}

/// `C = (ω¹₁)² − ½{ω²₁, ω⁰₁}`.
pub fn casimir() -> E {
    omega(1, 1).pow(2).sub(E::real(0.5).mul(E::anticommutator(omega(2, 1), omega(0, 1))))
}

/// Printed right side of `[C, ω¹₁]`.
pub fn casimir_bracket_claim(params: &AlgebraParams) -> E {
    let lambda = params.lambda();
    let x = params.root();
    let xr = |r: i64| params.root_pow(r);
    let half = Complex64::new(0.5, 0.0);
    let first = kappa_poly(params, |r| {
        (xr(3 * r) - (one() + xr(r)) * x - (xr(r) + xr(2 * r)) * x + one()) * (x - one())
    })
    .scale(half);
    let constant = |c: f64| KPoly::constant(lambda, Complex64::new(c, 0.0));
    let outer = &kappa_poly(params, |r| (xr(r) + xr(2 * r)) * x) - &constant(1.0);
    let inner = &constant(1.0) + &kappa_poly(params, |r| one() + xr(r)).scale(half);
    let second = (&outer * &inner).scale(-(x - one()));
    klein_left(first.coeffs(), omega(2, 2)).add(klein_left(second.coeffs(), omega(1, 1)))
}

/// Casimir value and its bracket with `ω¹₁`.
pub fn check_casimir(ctx: &Ctx) -> Vec<IdentityCheck> {
    let params = ctx.params();
    let undeformed = params.is_undeformed();
    let bracket = E::commutator(casimir(), omega(1, 1));
    let zero = E::real(0.0);
    vec![
        guard("casimir.value".into(), |id| {
            if undeformed {
                ctx.check(id, &casimir(), &zero)
            } else {
                ctx.report_only(id, &casimir(), &zero)
            }
        }),
        guard("casimir.commutes_w11".into(), |id| {
            if undeformed {
                ctx.check(id, &bracket, &zero)
            } else {
                ctx.report_only(id, &bracket, &zero)
            }
        }),
        guard("casimir.anticommutator_form".into(), |id| {
            let claim = E::real(-0.5)
                .mul(E::commutator(E::anticommutator(omega(2, 1), omega(0, 1)), omega(1, 1)));
            ctx.check(id, &bracket, &claim)
        }),
        guard("casimir.bracket_w11".into(), |id| ctx.report_only(id, &bracket, &casimir_bracket_claim(params))),
    ]
}

/// Fixed, evenly spread triples of `ω^s_m` with `s, m ≤ 3`.
pub fn jacobi_triples(count: usize) -> Vec<[(u32, u32); 3]> {
    let gens: Vec<(u32, u32)> = (0..4).flat_map(|s| (0..4).map(move |m| (s, m))).collect();
    let mut all = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            for k in j + 1..gens.len() {
                all.push([gens[i], gens[j], gens[k]]);
            }
        }
    }
    let stride = (all.len() / count.max(1)).max(1);
    all.into_iter().step_by(stride).take(count).collect()
}

/// Jacobi sum of matrix commutators for each triple.
pub fn check_jacobi(ctx: &Ctx, count: usize) -> Vec<IdentityCheck> {
    jacobi_triples(count)
        .into_iter()
        .map(|[(s1, m1), (s2, m2), (s3, m3)]| {
            let (x, y, z) = (omega(s1, m1), omega(s2, m2), omega(s3, m3));
            let id = format!("jacobi.w{s1}{m1}.w{s2}{m2}.w{s3}{m3}");
            guard(id, |id| {
                let lhs = E::commutator(x.clone(), E::commutator(y.clone(), z.clone()))
                    .add(E::commutator(y.clone(), E::commutator(z.clone(), x.clone())))
                    .add(E::commutator(z, E::commutator(x, y)));
                ctx.check(id, &lhs, &E::real(0.0))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_rep;
    use crate::identities::Status;
    use crate::params::validate_alpha;

    #[test]
    fn trivial_bracket() {
        let p = validate_alpha(2, &[0.3, -0.3]).unwrap();
        let rep = build_rep(&p, 16).unwrap();
        let c = check_winf(&Ctx::new(&rep), 0, 0, 0, 0).unwrap();
        assert_eq!(c.status, Status::Pass);
    }

    #[test]
    fn klein_winf_commutation() {
        let p = validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap();
        let rep = build_rep(&p, 16).unwrap();
        let ctx = Ctx::new(&rep);
        let c = check_klein_winf(&ctx, 2, 2).unwrap();
        assert_eq!(c.fitted["commutes"], json!(true));
        let c = check_klein_winf(&ctx, 2, 1).unwrap();
        assert_eq!(c.fitted["commutes"], json!(false));
        assert_eq!(c.fitted["predicted_commutes"], json!(true));
        assert!(c.fitted["residual_derived_phase"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn sp2_undeformed_passes() {
        let p = validate_alpha(2, &[0.0, 0.0]).unwrap();
        let rep = build_rep(&p, 16).unwrap();
        for c in check_sp2(&Ctx::new(&rep)) {
            assert_eq!(c.status, Status::Pass, "{}", c.id);
        }
    }

    #[test]
    fn casimir_vanishes_undeformed() {
        let p = validate_alpha(3, &[0.0; 3]).unwrap();
        let rep = build_rep(&p, 32).unwrap();
        let checks = check_casimir(&Ctx::new(&rep));
        assert_eq!(checks[0].status, Status::Pass);
        assert_eq!(checks[1].status, Status::Pass);
        assert_eq!(checks[2].status, Status::Pass);
        assert_eq!(checks[3].status, Status::ReportOnly);
    }

    #[test]
    fn jacobi_triples_are_distinct() {
        let t = jacobi_triples(24);
        assert_eq!(t.len(), 24);
        let p = validate_alpha(2, &[0.4, -0.4]).unwrap();
        let rep = build_rep(&p, 24).unwrap();
        for c in check_jacobi(&Ctx::new(&rep), 4) {
            assert_eq!(c.status, Status::Pass, "{}", c.id);
        }
    }
}
