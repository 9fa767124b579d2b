//! Truncated Fock representation and the spectrum of `H_0 = ½{a, a†}`.
//!
//! The diagonal of `H_0` is compared with the closed form
//! `E_n = n + ½ + Σ_r κ_r ω^{nr}` level by level. The top level is dropped
//! because truncation breaks `[a, a†]` there.
//!
//! ```bash
//! cargo run --example fock_spectrum
//! ```

use clambda::fock::{build_rep, closed_form_level, spectrum, structure_function};
use clambda::params::validate_alpha;

fn main() {
    let params = validate_alpha(3, &[0.3, 0.2, -0.5]).unwrap();
    let rep = build_rep(&params, 16).unwrap();

    println!("{:>3} {:>10} {:>12} {:>12} {:>10}", "n", "F(n)", "E_n", "closed", "diff");
    for (n, e) in spectrum(&rep).iter().enumerate() {
        let f = structure_function(&params, n as i64).unwrap();
        let closed = closed_form_level(&params, n);
        println!("{n:>3} {f:>10.6} {e:>12.8} {closed:>12.8} {:>10.2e}", (e - closed).abs());
    }

    // level spacing alternates with the Klein sector
    let levels = spectrum(&rep);
    let gaps: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).take(6).collect();
    println!("first gaps: {gaps:.3?}");
}
