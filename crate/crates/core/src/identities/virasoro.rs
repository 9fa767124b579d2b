//! Brackets of `ℓ_m = (a†)^{m+1} a` among themselves and with `K`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use super::{ell, guard, klein_left, left_coeffs, Ctx, IdentityCheck, IdentityError};
use crate::normal_order::{NormalOrderError, NormalOrderer, OperatorExpr as E};
use crate::params::AlgebraParams;

/// Global sign `σ` in `[ℓ_m, ℓ_n] = σ (m − n) ℓ_{m+n}` for the undeformed realization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaFit {
    pub sigma: f64,
    pub consistent: bool,
    /// `(m, n, coefficient / (m − n))` for every pair with `m ≠ n`.
    pub ratios: Vec<(i64, i64, f64)>,
}

/// Fits `σ` by projecting each undeformed bracket onto `ℓ_{m+n}`.
pub fn fit_sigma(lambda: usize, grid: &[i64]) -> Result<SigmaFit, NormalOrderError> {
    let params = AlgebraParams::undeformed(lambda).expect("lambda >= 2");
    let orderer = NormalOrderer::new(&params);
    let mut ratios = Vec::new();
    for &m in grid {
        for &n in grid {
            if m == n || m + n < -1 {
                continue;
            }
            let truth = orderer.normal_form(&E::commutator(ell(m), ell(n)))?;
            let c = left_coeffs(&truth, (m + n + 1) as u32, 1, &params)[0];
            ratios.push((m, n, c.re / (m - n) as f64));
        }
    }
    let mean = ratios.iter().map(|r| r.2).sum::<f64>() / ratios.len().max(1) as f64;
    let sigma = if mean < 0.0 { -1.0 } else { 1.0 };
    let consistent = ratios.iter().all(|r| (r.2 - sigma).abs() < 1e-9);
    Ok(SigmaFit { sigma, consistent, ratios })
}

fn check_realizable(m: i64, n: i64) -> Result<(), IdentityError> {
    if m < -1 || n < -1 || m + n < -1 {
        return Err(IdentityError::IndexOutOfRealization { m, n });
    }
    Ok(())
}

/// `[ℓ_m, ℓ_n]`. Undeformed parameters are compared with `σ (m − n) ℓ_{m+n}`,
/// deformed ones with the printed Klein-deformed bracket.
pub fn check_virasoro(ctx: &Ctx, m: i64, n: i64, sigma: f64) -> Result<IdentityCheck, IdentityError> {
    let id = format!("virasoro.m{m}.n{n}");
    if m == n && m + n < -1 {
        return Ok(IdentityCheck::not_applicable(id, "bracket of a generator with itself outside the realization"));
    }
    check_realizable(m, n)?;
    let params = ctx.params();
    let lambda = params.lambda();
    let lhs = E::commutator(ell(m), ell(n));
    let target = ell(m + n);
    let undeformed = E::real((m - n) as f64).mul(target.clone());
    if params.is_undeformed() {
        let claim = E::real(sigma * (m - n) as f64).mul(target);
        let literal = ctx.residual(&lhs, &undeformed)?;
        return Ok(ctx.check(id, &lhs, &claim)?.with("sigma", json!(sigma)).with("residual_literal_sign", json!(literal)));
    }
    let deformation: Vec<Complex64> = (0..lambda)
        .map(|r| {
            let r64 = r as i64;
            (params.omega_pow((n + 1) * r64) - params.omega_pow((m + 1) * r64)) * params.kappa_at(r)
        })
        .collect();
    let claim = undeformed.add(klein_left(&deformation, target.clone()));
    let adjusted = E::real(sigma * (m - n) as f64).mul(target.clone()).add(klein_left(&deformation, target));
    let adjusted = ctx.residual(&lhs, &adjusted)?;
    Ok(ctx.check(id, &lhs, &claim)?.with("sigma", json!(sigma)).with("residual_sigma_adjusted", json!(adjusted)))
}

/// `[ℓ_m, K]` against `(1 − e^{2πi(m+1)/λ}) ℓ_m K`.
pub fn check_klein_virasoro(ctx: &Ctx, m: i64) -> Result<IdentityCheck, IdentityError> {
    check_realizable(m, 0)?;
    let params = ctx.params();
    let lhs = E::commutator(ell(m), E::K);
    let g = Complex64::new(1.0, 0.0) - params.omega_pow(m + 1);
    let claim = E::complex(g).mul(ell(m)).mul(E::K);
    let derived = E::complex(Complex64::new(1.0, 0.0) - params.omega_pow(m)).mul(ell(m)).mul(E::K);
    let commutes = ctx.nf(&lhs)?.is_zero();
    let predicted = (m + 1).rem_euclid(params.lambda() as i64) == 0;
    Ok(ctx
        .check_on_support(format!("klein_virasoro.m{m}"), &lhs, &claim, &[((m + 1) as u32, 1)])?
        .with("commutes", json!(commutes))
        .with("predicted_commutes", json!(predicted))
        .with("residual_derived_phase", json!(ctx.residual(&lhs, &derived)?)))
}

/// Even/odd split of the bracket and the Klein relations at `λ = 2`.
pub fn check_lambda2(ctx: &Ctx, sigma: f64, range: &[i64]) -> Result<Vec<IdentityCheck>, IdentityError> {
    let lambda = ctx.params().lambda();
    if lambda != 2 {
        return Err(IdentityError::WrongLambda { expected: 2, got: lambda });
    }
    let kappa = ctx.params().kappa_at(1);
    let mut out = Vec::new();
    let signed = |id: String, lhs: E, coeff: i64, target: E| {
        guard(id, |id| {
            let literal = ctx.residual(&lhs, &E::real(coeff as f64).mul(target.clone()))?;
            let claim = E::real(sigma * coeff as f64).mul(target.clone());
            Ok(ctx.check(id, &lhs, &claim)?.with("sigma", json!(sigma)).with("residual_literal_sign", json!(literal)))
        })
    };
    for &k in range {
        for &l in range {
            out.push(signed(
                format!("lambda2.even_even.k{k}.l{l}"),
                E::commutator(ell(2 * k), ell(2 * l)),
                2 * k - 2 * l,
                ell(2 * k + 2 * l),
            ));
            out.push(signed(
                format!("lambda2.odd_odd.k{k}.l{l}"),
                E::commutator(ell(2 * k + 1), ell(2 * l + 1)),
                2 * k - 2 * l,
                ell(2 * k + 2 * l + 2),
            ));
            // [ℓ_{2n}, ℓ_{2m+1}] with n = k, m = l
            out.push(guard(format!("lambda2.even_odd.n{k}.m{l}"), |id| {
                let lhs = E::commutator(ell(2 * k), ell(2 * l + 1));
                let target = ell(2 * l + 2 * k + 1);
                let claim = E::real((2 * (l - k)) as f64)
                    .mul(target.clone())
                    .add(klein_left(&[Complex64::new(1.0, 0.0), -2.0 * kappa], target));
                ctx.check(id, &lhs, &claim)
            }));
        }
        out.push(guard(format!("lambda2.klein_even.k{k}"), |id| {
            let lhs = E::commutator(ell(2 * k), E::K);
            let claim = E::real(2.0).mul(ell(2 * k)).mul(E::K);
            ctx.check_on_support(id, &lhs, &claim, &[((2 * k + 1) as u32, 1)])
        }));
        out.push(guard(format!("lambda2.klein_odd.k{k}"), |id| {
            let lhs = E::commutator(ell(2 * k + 1), E::K);
            ctx.check_on_support(id, &lhs, &E::real(0.0), &[((2 * k + 2) as u32, 1)])
        }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_rep;
    use crate::identities::Status;
    use crate::params::validate_alpha;

    #[test]
    fn sigma_is_negative_and_consistent() {
        let fit = fit_sigma(2, &[-1, 0, 1, 2, 3]).unwrap();
        assert_eq!(fit.sigma, -1.0);
        assert!(fit.consistent);
    }

    #[test]
    fn ell_one_minus_one() {
        let p = validate_alpha(2, &[0.0, 0.0]).unwrap();
        let rep = build_rep(&p, 16).unwrap();
        let ctx = Ctx::new(&rep);
        let got = ctx.residual(&E::commutator(ell(1), ell(-1)), &E::real(-2.0).mul(ell(0))).unwrap();
        assert!(got < 1e-12);
        let c = check_virasoro(&ctx, 1, -1, -1.0).unwrap();
        assert_eq!(c.status, Status::Pass);
        let same = check_virasoro(&ctx, 2, 2, -1.0).unwrap();
        assert_eq!(same.status, Status::Pass);
    }

    #[test]
    fn index_outside_realization() {
        let p = validate_alpha(2, &[0.0, 0.0]).unwrap();
        let rep = build_rep(&p, 16).unwrap();
        let ctx = Ctx::new(&rep);
        assert_eq!(check_virasoro(&ctx, -1, -1, -1.0).unwrap().status, Status::NotApplicable);
        assert!(matches!(check_virasoro(&ctx, -2, 0, -1.0), Err(IdentityError::IndexOutOfRealization { .. })));
    }

    #[test]
    fn klein_commutation_tracks_grade() {
        let p = validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap();
        let rep = build_rep(&p, 20).unwrap();
        let ctx = Ctx::new(&rep);
        for m in -1..5 {
            let c = check_klein_virasoro(&ctx, m).unwrap();
            assert_eq!(c.fitted["commutes"], json!(m.rem_euclid(3) == 0), "m = {m}");
            assert!(c.fitted["residual_derived_phase"].as_f64().unwrap() < 1e-12);
        }
    }

    #[test]
    fn lambda2_needs_lambda2() {
        let p = validate_alpha(3, &[0.0; 3]).unwrap();
        let rep = build_rep(&p, 16).unwrap();
        assert!(matches!(
            check_lambda2(&Ctx::new(&rep), -1.0, &[0]),
            Err(IdentityError::WrongLambda { expected: 2, got: 3 })
        ));
    }
}
