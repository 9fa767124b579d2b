//! Which Klein coefficients reproduce `[a, (a†)^m]`.
//!
//! The bracket is `Σ_r c_r K^r (a†)^{m−1}`. Three candidate forms for `c_r`
//! are compared with the coefficients read off the normal form.
//!
//! ```bash
//! cargo run --example single_mode_candidates
//! ```

use clambda::fock::build_rep;
use clambda::identities::oscillator::{candidate_label, check_single_mode, single_mode_candidates};
use clambda::identities::Ctx;
use clambda::params::{validate_alpha, AlgebraParams};
use num_complex::Complex64;

fn main() {
    let cases = [
        AlgebraParams::from_kappa(2, &[Complex64::new(0.5, 0.0)]).unwrap(),
        validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap(),
    ];
    for params in cases {
        let lambda = params.lambda();
        let rep = build_rep(&params, 48).unwrap();
        let ctx = Ctx::new(&rep);
        println!("lambda = {lambda}");
        for (name, _) in single_mode_candidates(&params, 1) {
            println!("  {name}: {}", candidate_label(name, lambda));
        }
        for m in 1..=6 {
            let check = check_single_mode(&ctx, m).unwrap();
            println!(
                "  m = {m}: matching {}  status {:?}",
                check.fitted["matching"],
                check.status
            );
        }
    }
}
