//! The `ω^s_m` generators, their brackets and the quadratic Casimir.
//!
//! Residuals of the deformed brackets shrink as `κ → 0` only to the residual
//! of the undeformed formula; the sp(2) subalgebra closes exactly.
//!
//! ```bash
//! cargo run --example winf_realization
//! ```

use clambda::fock::build_rep;
use clambda::identities::winf::{check_casimir, check_jacobi, check_sp2, check_winf};
use clambda::identities::Ctx;
use clambda::params::validate_alpha;

fn main() {
    let base = validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap();
    for factor in [1.0, 0.5, 0.1, 0.0] {
        let params = base.scaled(factor).unwrap();
        let rep = build_rep(&params, 48).unwrap();
        let ctx = Ctx::new(&rep);
        let sp2: Vec<String> =
            check_sp2(&ctx).iter().map(|c| format!("{:.1e}", c.residual_claim.unwrap_or(f64::NAN))).collect();
        let w = check_winf(&ctx, 2, 1, 1, 2).unwrap();
        println!(
            "kappa x {factor:<4} sp2 [{}]  [w2_1, w1_2] {:.2e}",
            sp2.join(", "),
            w.residual_claim.unwrap_or(f64::NAN)
        );
    }

    let rep = build_rep(&base.scaled(0.0).unwrap(), 48).unwrap();
    let ctx = Ctx::new(&rep);
    for c in check_casimir(&ctx) {
        println!("{:<28} {:?}", c.id, c.status);
    }
    let jacobi = check_jacobi(&ctx, 8);
    let worst = jacobi.iter().filter_map(|c| c.residual_claim).fold(0.0, f64::max);
    println!("Jacobi on {} triples: worst residual {worst:.1e}", jacobi.len());
}
