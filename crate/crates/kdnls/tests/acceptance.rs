//! Acceptance gate: eleven end-to-end criteria covering the operator
//! algebra, solver convergence, the dissipation identity and its mass limit,
//! dispersive decay, modified scattering, the gauged equation, and the
//! norm-growth budget. One line is printed per criterion (run with
//! `--nocapture` to see them as they complete); the test fails if any
//! criterion fails.
//!
//! The criteria share simulation runs through an in-process cache, so they
//! execute sequentially inside a single test.

use kdnls::verify::{self, Check};
use kdnls::Result;

struct Criterion {
    label: &'static str,
    run: fn() -> Result<Vec<Check>>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        label: "01 operator identities",
        run: verify::check_operator_identities,
    },
    Criterion {
        label: "02 solver convergence order",
        run: verify::check_solver_order,
    },
    Criterion {
        label: "03 dissipation identity",
        run: verify::check_dissipation_identity,
    },
    Criterion {
        label: "04 mass monotonicity and limit",
        run: verify::check_mass_limit,
    },
    Criterion {
        label: "05 dispersive decay rate",
        run: verify::check_dispersive_decay,
    },
    Criterion {
        label: "06 modified scattering",
        run: verify::check_modified_scattering,
    },
    Criterion {
        label: "07 resonant remainder decay",
        run: verify::check_resonant_remainder,
    },
    Criterion {
        label: "08 asymptotic profile",
        run: verify::check_asymptotic_profile,
    },
    Criterion {
        label: "09 gauged equation residual",
        run: verify::check_gauge_residual,
    },
    Criterion {
        label: "10 norm growth budget",
        run: verify::check_apriori_trends,
    },
    Criterion {
        label: "11 weighted spectrum bounds",
        run: verify::check_weighted_fourier,
    },
];

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for c in CRITERIA {
        match (c.run)() {
            Ok(checks) => {
                let ok = checks.iter().all(|c| c.passed);
                println!("{} criterion {}", if ok { "PASS" } else { "FAIL" }, c.label);
                for ch in &checks {
                    println!(
                        "    {} {} — {}",
                        if ch.passed { "pass" } else { "FAIL" },
                        ch.name,
                        ch.details
                    );
                }
                if !ok {
                    failures.push(c.label);
                }
            }
            Err(e) => {
                println!("FAIL criterion {} — error: {e}", c.label);
                failures.push(c.label);
            }
        }
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
