//! Seeded checks of the closed-form families against independent
//! computations, and a finite-difference curvature oracle that reads only
//! curve points.

mod checks;
mod rng;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curve::{check_reach, fd, CurveJet, CurveSpec};
use crate::dual::DualScalar;
use crate::equiaffine::equiaffine_curvature_with_tol;
use crate::error::{Error, Result};
use crate::lorentz::frenet_with_tol;

pub use checks::{check_ids, default_tolerance};
pub use rng::{fnv1a, SplitMix64};

/// Default oracle step.
pub const ORACLE_STEP: f64 = 1e-3;

/// Precondition tolerance applied to finite-difference jets.
pub const ORACLE_PRECONDITION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Equiaffine,
    Lorentz,
}

impl Geometry {
    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::Equiaffine => "equiaffine",
            Geometry::Lorentz => "lorentz",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equiaffine" => Ok(Geometry::Equiaffine),
            "lorentz" => Ok(Geometry::Lorentz),
            _ => Err(Error::BadParams(format!("unknown geometry `{s}`"))),
        }
    }
}

/// Jet from point evaluations only: central stencils at `h` and `2h` with
/// one Richardson step. Attached derivatives are never consulted.
pub fn oracle_jet(spec: &CurveSpec, s: f64, h: f64) -> Result<CurveJet> {
    check_reach(spec, s, 4.0 * h)?;
    let curve = spec.curve();
    let d = fd::richardson_jet(&|u| curve.point(u), s, h);
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(f64::NAN));
    }
    Ok(CurveJet::new(s, d))
}

/// Curvature at `s` from [`oracle_jet`] and the geometry's formula:
/// `(γ″, γ‴)` or `|γ″|`.
pub fn fd_curvature_oracle(spec: &CurveSpec, s: f64, h: f64, geometry: Geometry) -> Result<DualScalar> {
    let j = oracle_jet(spec, s, h)?;
    match geometry {
        Geometry::Equiaffine => equiaffine_curvature_with_tol(&j, ORACLE_PRECONDITION_TOL),
        Geometry::Lorentz => frenet_with_tol(&j, ORACLE_PRECONDITION_TOL).map(|f| f.kappa),
    }
}

/// Worst error seen for one sampled parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckPoint {
    pub params: BTreeMap<String, f64>,
    pub max_error: f64,
    /// Grid value where the error peaked.
    pub at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check: String,
    pub seed: u64,
    pub tolerance: f64,
    pub max_error: f64,
    pub passed: bool,
    pub grid: Vec<f64>,
    pub points: Vec<CheckPoint>,
    /// Set when the suite stopped on an error instead of a measurement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Runs one named check. `tolerance` overrides the check's default.
pub fn run_check(check_id: &str, seed: u64, tolerance: Option<f64>) -> Result<CheckReport> {
    let (run, default_tol) = checks::lookup(check_id).ok_or_else(|| Error::UnknownCheck(check_id.to_string()))?;
    let tolerance = tolerance.unwrap_or(default_tol);
    let mut ctx = checks::Ctx::new(SplitMix64::for_check(seed, check_id));
    let failure = run(&mut ctx).err().map(|e| e.to_string());
    let max_error = if failure.is_some() { f64::INFINITY } else { ctx.max_error() };
    Ok(CheckReport {
        check: check_id.to_string(),
        seed,
        tolerance,
        max_error,
        // NaN fails.
        passed: max_error <= tolerance,
        grid: ctx.grid,
        points: ctx.points,
        failure,
    })
}

/// Runs every registered check with its default tolerance.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    check_ids()
        .iter()
        .map(|id| run_check(id, seed, None).expect("registered check"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{AnalyticCurve, Domain, ScalarFn};
    use crate::expr::Expr;
    use crate::lorentz::{make_lorentz_family, CausalClass, LorentzFamilyParams};
    use crate::dual::Vec2;

    fn worked_example() -> CurveSpec {
        CurveSpec::new(
            AnalyticCurve::from_sources(["sin(s)", "-cos(s)", "cos(s)", "sin(s)"]).unwrap(),
            Domain::new(-1.0, 7.0).unwrap(),
        )
    }

    #[test]
    fn oracle_on_worked_example() {
        for s in [0.0, 1.0, 3.0, 6.0] {
            let k = fd_curvature_oracle(&worked_example(), s, ORACLE_STEP, Geometry::Equiaffine).unwrap();
            assert!(k.close_to(DualScalar::ONE, 1e-5), "{s}: {k:?}");
        }
    }

    #[test]
    fn oracle_ignores_attached_derivatives() {
        let f = |src: &str| {
            let e = Expr::parse(src).unwrap();
            let g = e.clone();
            // Deliberately wrong derivatives.
            ScalarFn::with_derivatives(move |t| g.eval(t), |_| 7.0, |_| -3.0, |_| 11.0)
        };
        let wrong = CurveSpec::new(
            AnalyticCurve::new([f("sin(s)"), f("-cos(s)")], [f("cos(s)"), f("sin(s)")]),
            Domain::new(-1.0, 7.0).unwrap(),
        );
        for s in [0.5, 2.0] {
            let a = fd_curvature_oracle(&wrong, s, ORACLE_STEP, Geometry::Equiaffine).unwrap();
            let b = fd_curvature_oracle(&worked_example(), s, ORACLE_STEP, Geometry::Equiaffine).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn oracle_lorentz_dual_part() {
        let c = make_lorentz_family(
            &LorentzFamilyParams::ConstCurvature {
                r: 1.0,
                m: 3.0,
                n: 0.0,
                beta0: Vec2::zeros(),
                causal: CausalClass::Spacelike,
            },
            Domain::new(-1.0, 1.0).unwrap(),
        )
        .unwrap();
        let k = fd_curvature_oracle(&c, 0.3, ORACLE_STEP, Geometry::Lorentz).unwrap();
        assert!((k.du() - 3.0).abs() < 1e-5 && (k.re() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn oracle_propagates_straight_point() {
        let line = CurveSpec::new(
            AnalyticCurve::from_sources(["s", "0", "0", "2*s"]).unwrap(),
            Domain::new(-1.0, 1.0).unwrap(),
        );
        assert!(matches!(
            fd_curvature_oracle(&line, 0.0, ORACLE_STEP, Geometry::Lorentz),
            Err(Error::StraightPoint(_))
        ));
    }

    #[test]
    fn oracle_clipped_near_boundary() {
        assert!(matches!(
            fd_curvature_oracle(&worked_example(), 6.999, ORACLE_STEP, Geometry::Equiaffine),
            Err(Error::StencilClipped { .. })
        ));
    }

    #[test]
    fn unknown_check() {
        assert!(matches!(run_check("unknown-id", 0, None), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn every_check_passes_and_is_deterministic() {
        for id in check_ids() {
            let a = run_check(id, 0, None).unwrap();
            assert!(a.passed, "{id}: {} > {} ({:?})", a.max_error, a.tolerance, a.failure);
            let b = run_check(id, 0, None).unwrap();
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }

    #[test]
    fn seeds_change_parameters_not_verdicts() {
        let a = run_check("eqcurva01b-forced-m", 1, None).unwrap();
        let b = run_check("eqcurva01b-forced-m", 2, None).unwrap();
        assert!(a.passed && b.passed);
        assert_ne!(a.points[0].params, b.points[0].params);
        let c = run_check("eqcurva01b-forced-m", 7, None).unwrap();
        assert!(c.passed && c.max_error <= 1e-8);
    }

    #[test]
    fn tolerance_override_can_fail() {
        let r = run_check("exeq-fd-oracle", 0, Some(0.0)).unwrap();
        assert!(!r.passed);
        assert_eq!(r.tolerance, 0.0);
    }

    #[test]
    #[ignore]
    fn other_seeds() {
        for seed in 1..6 {
            for id in check_ids() {
                let a = run_check(id, seed, None).unwrap();
                assert!(a.passed, "{seed} {id}: {} > {} ({:?})", a.max_error, a.tolerance, a.failure);
            }
        }
    }
}
