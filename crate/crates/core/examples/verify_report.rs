//! Running the verification suites and reading the report.
//!
//! Each check compares an operator identity with its normal form and its
//! matrices, and lands in one of pass, discrepancy (the printed formula
//! differs from the algebra but a corrected one holds), fail, not
//! applicable or report-only.
//!
//! ```bash
//! cargo run --release --example verify_report
//! ```

use clambda::identities::{run_suite, RunConfig, Status, Suite};
use clambda::params::AlgebraParams;
use num_complex::Complex64;

fn main() {
    let params = AlgebraParams::from_kappa(2, &[Complex64::new(0.5, 0.0)]).unwrap();
    let mut config = RunConfig::new(params);
    config.suites = vec![Suite::Basic, Suite::Single, Suite::Virasoro, Suite::Sp2];
    let report = run_suite(&config).unwrap();

    let s = &report.summary;
    println!(
        "pass {}  discrepancy {}  fail {}  n/a {}  report-only {}",
        s.pass, s.discrepancy, s.fail, s.not_applicable, s.report_only
    );
    for c in report.checks.iter().filter(|c| c.status == Status::Discrepancy).take(8) {
        println!(
            "{:<32} printed {:.2e}  best {:.2e}",
            c.id,
            c.residual_claim.unwrap_or(f64::NAN),
            c.residual_best.unwrap_or(f64::NAN)
        );
    }
    if let Some(c) = report.check("basic.bracket") {
        println!("basic.bracket: {:?}", c.status);
    }
}
