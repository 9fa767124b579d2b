//! Deformation parameters in both coordinate systems.
//!
//! A deformation is either a real vector `α` (one entry per Klein sector,
//! summing to zero) or its Fourier modes `κ_1..κ_{λ−1}`. This example builds
//! the same algebra both ways and prints the derived shifts `β_μ`.
//!
//! ```bash
//! cargo run --example parameters
//! ```

use clambda::params::{alpha_from_kappa, kappa_from_alpha, validate_alpha, AlgebraParams};
use num_complex::Complex64;

fn main() {
    let from_alpha = validate_alpha(3, &[0.3, 0.2, -0.5]).expect("alpha sums to zero");
    let kappa = kappa_from_alpha(&from_alpha);
    println!("lambda = 3, alpha = {:?}", from_alpha.alpha());
    for (r, k) in kappa.iter().enumerate() {
        println!("  kappa_{} = {:+.6} {:+.6}i", r + 1, k.re, k.im);
    }

    let from_kappa = AlgebraParams::from_kappa(3, &kappa).expect("conjugate-symmetric kappa");
    let back = alpha_from_kappa(3, &kappa).unwrap();
    println!("round trip alpha = {back:.6?}");
    println!("beta  = {:.6?}", from_kappa.beta());
    println!("gamma = {:.6?}", from_kappa.gamma());

    // κ must satisfy κ_{λ−r} = conj(κ_r) for α to be real
    let bad = AlgebraParams::from_kappa(3, &[Complex64::new(0.2, 0.1), Complex64::new(0.2, 0.1)]);
    println!("non-conjugate kappa: {}", bad.unwrap_err());

    // a Fock vacuum needs every partial sum of α to stay above −1
    let degenerate = validate_alpha(2, &[-1.5, 1.5]);
    println!("alpha = [-1.5, 1.5]: {}", degenerate.unwrap_err());

    let half = from_alpha.scaled(0.5).unwrap();
    println!("scaled by 1/2: alpha = {:.6?}", half.alpha());
}
