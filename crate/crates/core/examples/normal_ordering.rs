//! Normal ordering words in `a`, `a†` and `K`.
//!
//! Every word reduces to `Σ c (a†)^p a^q K^r`. The reduction is checked
//! against the matrices of the truncated Fock representation.
//!
//! ```bash
//! cargo run --example normal_ordering
//! ```

use clambda::fock::build_rep;
use clambda::identities::Ctx;
use clambda::normal_order::{parse, NormalOrderer, OperatorExpr as E};
use clambda::params::AlgebraParams;
use num_complex::Complex64;

fn main() {
    let params = AlgebraParams::from_kappa(2, &[Complex64::new(0.5, 0.0)]).unwrap();
    let orderer = NormalOrderer::new(&params);
    let rep = build_rep(&params, 48).unwrap();
    let ctx = Ctx::new(&rep);

    for text in ["[a, ad]", "a a ad", "[a^2, ad^3]", "K a K", "{a, ad}", "P0 ad P1"] {
        let expr = parse(text).unwrap();
        let nf = orderer.normal_form(&expr).unwrap();
        let residual = ctx.residual(&expr, &nf.to_expr()).unwrap();
        println!("{text}  (matrix residual {residual:.1e})");
        for line in nf.to_string().lines() {
            println!("    {line}");
        }
    }

    // the same expressions can be built directly
    let built = E::commutator(E::A.pow(2), E::Ad.pow(3));
    let nf = orderer.normal_form(&built).unwrap();
    println!("built [a^2, ad^3] has {} terms, creation degree {}", nf.len(), nf.creation_degree());
    println!("adjoint:\n{}", nf.adjoint(&params));
}
