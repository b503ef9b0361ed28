//! Acceptance criteria, one line each, backed by the registered checks.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use dualcurve::verify::{check_ids, run_check, CheckReport};

const SEED: u64 = 0;

const CRITERIA: [(u32, &str, &[&str]); 12] = [
    (1, "worked example: unit speed, κ = 1 (analytic and FD)", &[
        "exeq-unit-speed",
        "exeq-curvature",
        "exeq-fd-oracle",
        "exeq-reparametrization",
    ]),
    (2, "flat family: κ = 0, det(β′, β″) = −(c1² + 2c0c2)", &["eqcurva0-flat", "eqcurva0-flat-fd", "eqcurva0-beta-conic"]),
    (3, "pure-dual family: κ = 0 + εm", &["eqcurva01a-pure-dual"]),
    (4, "elliptic/hyperbolic: κ = r + 0ε, dual part forced to 0", &["eqcurva01b-forced-m", "eqcurva01c-forced-m"]),
    (5, "κκ system: flat reconstruction and constant-κ dual part", &["kk-system-flat", "kk-system-const"]),
    (6, "α → β linear maps and their determinants", &[
        "eqcurva02-elliptic-map",
        "eqcurva02-elliptic-det",
        "eqcurva02-hyperbolic-map",
        "eqcurva02-hyperbolic-det",
    ]),
    (7, "SL(2, D) invariance of equiaffine κ", &["sl2d-invariance"]),
    (8, "Lorentz Frenet frame and its printed formulas", &["ltnk-frame", "ltnk-formulas"]),
    (9, "constant Lorentz curvature: 1/|r| + ε·m", &["lclass-dual-part", "lclass-real-part"]),
    (10, "real curvature only: no dual part, admissible", &["lorentz-k-eq-k-curvature", "lorentz-k-eq-k-admissibility"]),
    (11, "straight-line criterion and lightlike constructions", &["straight-line-criterion", "lightlike-construction"]),
    (12, "Lorentz isometry invariance of κ and causal class", &["lorentz-isometry-invariance"]),
];

/// Checks that back several criteria at once.
const SUPPORTING: &[&str] = &[
    "eqrel-decomposition",
    "equiaffine-families-fd",
    "eqcurva02-conics",
    "frenet-odes",
    "lorentz-families-fd",
    "causal-swap",
];

fn line(reports: &[CheckReport]) -> String {
    reports
        .iter()
        .map(|r| match &r.failure {
            Some(f) => format!("{} failed ({f})", r.check),
            None => format!("{} {:.1e} <= {:.0e}", r.check, r.max_error, r.tolerance),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (n, what, ids) in CRITERIA {
        let reports: Vec<CheckReport> = ids.iter().map(|id| run_check(id, SEED, None).unwrap()).collect();
        let ok = reports.iter().all(|r| r.passed);
        println!("criterion {n:>2} {} {what}: {}", if ok { "PASS" } else { "FAIL" }, line(&reports));
        if !ok {
            failed.push(n);
        }
    }
    let reports: Vec<CheckReport> = SUPPORTING.iter().map(|id| run_check(id, SEED, None).unwrap()).collect();
    let ok = reports.iter().all(|r| r.passed);
    println!("supporting   {} {}", if ok { "PASS" } else { "FAIL" }, line(&reports));
    assert!(ok, "supporting checks failed");
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}

#[test]
fn every_check_is_mapped() {
    let mapped: Vec<&str> = CRITERIA.iter().flat_map(|c| c.2.iter().copied()).chain(SUPPORTING.iter().copied()).collect();
    for id in check_ids() {
        assert!(mapped.contains(&id), "{id} is not mapped to a criterion");
    }
    assert_eq!(mapped.len(), check_ids().len());
}
