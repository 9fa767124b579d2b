//! Bilinear Virasoro generators `ℓ_m` and their brackets.
//!
//! `ℓ_m = ¼ (a†)^{m+1} a + ...` closes as `[ℓ_m, ℓ_n] = σ (m − n) ℓ_{m+n}`
//! with a sign `σ` fitted from the undeformed algebra, plus Klein terms
//! once `κ ≠ 0`.
//!
//! ```bash
//! cargo run --example virasoro
//! ```

use clambda::fock::build_rep;
use clambda::identities::virasoro::{check_klein_virasoro, check_lambda2, check_virasoro, fit_sigma};
use clambda::identities::Ctx;
use clambda::params::AlgebraParams;
use num_complex::Complex64;

fn main() {
    let grid: Vec<i64> = (-1..=3).collect();
    let fit = fit_sigma(2, &grid).unwrap();
    println!("sigma = {} (consistent: {})", fit.sigma, fit.consistent);

    for kappa in [0.0, 0.5] {
        let params = AlgebraParams::from_kappa(2, &[Complex64::new(kappa, 0.0)]).unwrap();
        let rep = build_rep(&params, 64).unwrap();
        let ctx = Ctx::new(&rep);
        println!("kappa_1 = {kappa}");
        for (m, n) in [(1, -1), (2, 0), (2, 1), (3, 1)] {
            let c = check_virasoro(&ctx, m, n, fit.sigma).unwrap();
            println!("  [l{m}, l{n}]  residual {:.2e}  {:?}", c.residual_claim.unwrap_or(f64::NAN), c.status);
        }
        for m in 0..=3 {
            let c = check_klein_virasoro(&ctx, m).unwrap();
            println!(
                "  [l{m}, K] commutes: {}  derived-phase residual {:.1e}",
                c.fitted["commutes"],
                c.fitted["residual_derived_phase"].as_f64().unwrap()
            );
        }
        let split = check_lambda2(&ctx, fit.sigma, &[0, 1]).unwrap();
        for family in ["even_even", "odd_odd", "even_odd", "klein_even", "klein_odd"] {
            let worst = split
                .iter()
                .filter(|c| c.id.starts_with(&format!("lambda2.{family}.")))
                .filter_map(|c| c.residual_claim)
                .fold(0.0, f64::max);
            println!("  lambda2.{family:<10} worst residual {worst:.2e}");
        }
    }
}
