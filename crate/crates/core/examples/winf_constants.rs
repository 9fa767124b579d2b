//! Structure constants of the w-infinity bracket.
//!
//! `c_i` is exact rational arithmetic. `N` and the hypergeometric `φ` are
//! evaluated under both readings of their ambiguous arguments.
//!
//! ```bash
//! cargo run --example winf_constants
//! ```

use clambda::identities::constants::{
    central_charge, central_term, central_term_vanishes, structure_phi, PhiSeries, PHI_CAP,
};
use clambda::identities::{winf_structure, NReading, PhiReading, WConstError};

fn main() {
    for i in 0..=5 {
        let vanishing: Vec<i64> = (-8..=8).filter(|&m| central_term_vanishes(i, m)).collect();
        println!("c_{i} = {}  c_{i}(3) = {}  zero at m in {vanishing:?}", central_charge(i), central_term(i, 3));
    }

    for l in 0..=4 {
        let lit = structure_phi(2, 2, l, PhiReading::Literal, PHI_CAP);
        let alt = structure_phi(2, 2, l, PhiReading::Alt, PHI_CAP);
        let show = |r: &Result<PhiSeries, WConstError>| match r {
            Ok(s) => format!("{:.6}", s.value),
            Err(e) => e.to_string(),
        };
        println!("phi_{l}^(2,2): literal {}  alt {}", show(&lit), show(&alt));
    }

    for (nr, pr) in [(NReading::Literal, PhiReading::Literal), (NReading::Alt, PhiReading::Alt)] {
        let w = winf_structure(1, 1, 0, 2, -1, nr, pr).unwrap();
        println!("{nr:?}/{pr:?}: N = {}  phi = {:.6}  g = {:.6}", w.value_n, w.value_phi, w.value_g);
    }
}
