//! Equiaffine invariants of curves in `D²` under `SL(2, D)` actions.
//!
//! For `γ = α + εβ` the determinant of the first two derivatives splits as
//! `(γ′, γ″) = (α′, α″) + ε[(α′, β″) + (β′, α″)]`. The real part is the
//! classical non-degeneracy quantity; the dual part must vanish for a real
//! equiaffine arc-length parameter to exist. At unit equiaffine speed the
//! curvature is `κ_γ = (γ″, γ‴)`.

mod conic;
mod families;
mod kk;
mod reparam;

use crate::curve::{jet, AffineImage, CurveJet, CurveSpec};
use crate::dual::{det2, det_real, DualScalar, DualVec2, Mat2D, DEFAULT_TOL};
use crate::error::{Error, Result};

pub use conic::{quadratic_form_check, real_conic_residual, ConicFit};
pub use families::{
    alpha_to_beta_map, make_family, normalized_map_params, EquiaffineCurve, EquiaffineFamilyId,
    EquiaffineFamilyParams,
};
pub use kk::{solve_kk_system, KkSolution};
pub use reparam::{equiaffine_arclength, reparametrize_equiaffine, ArcLengthReparam};

/// Unimodularity tolerance for [`apply_equiaffine`].
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Grid resolution used when a whole curve is screened for admissibility.
pub const SCREEN_POINTS: usize = 200;

/// `(α′, α″)` at the jet.
pub fn nondegeneracy(j: &CurveJet) -> f64 {
    det_real(&j.alpha(1), &j.alpha(2))
}

/// `(α′, β″) + (β′, α″)`, the dual part of `(γ′, γ″)`.
pub fn admissibility_residual(j: &CurveJet) -> f64 {
    det_real(&j.alpha(1), &j.beta(2)) + det_real(&j.beta(1), &j.alpha(2))
}

/// Admissibility threshold `1e-7·(1 + scale)`.
pub fn admissibility_tolerance(scale: f64) -> f64 {
    1e-7 * (1.0 + scale)
}

/// Invariants of one jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquiaffineReport {
    pub nondeg: f64,
    pub admissibility_residual: f64,
    /// `κ_α + ε[(α″, β‴) + (β″, α‴)]`, assembled from real determinants.
    pub kappa: DualScalar,
    pub kappa_alpha: f64,
}

impl EquiaffineReport {
    pub fn of(j: &CurveJet) -> Self {
        let kappa_alpha = det_real(&j.alpha(2), &j.alpha(3));
        let dual = det_real(&j.alpha(2), &j.beta(3)) + det_real(&j.beta(2), &j.alpha(3));
        Self {
            nondeg: nondegeneracy(j),
            admissibility_residual: admissibility_residual(j),
            kappa: DualScalar::raw(kappa_alpha, dual),
            kappa_alpha,
        }
    }
}

/// Equiaffine curvature `(γ″, γ‴)` of a jet taken at unit equiaffine speed.
pub fn equiaffine_curvature(j: &CurveJet) -> Result<DualScalar> {
    equiaffine_curvature_with_tol(j, DEFAULT_TOL)
}

/// [`equiaffine_curvature`] with an explicit unit-speed tolerance.
pub fn equiaffine_curvature_with_tol(j: &CurveJet, tol: f64) -> Result<DualScalar> {
    let speed = det2(&j.d1(), &j.d2());
    if !speed.close_to(DualScalar::ONE, tol) {
        return Err(Error::NotUnitSpeed {
            t: j.t,
            detail: format!("(γ′, γ″) = {speed}"),
        });
    }
    Ok(det2(&j.d2(), &j.d3()))
}

/// Largest `|admissibility_residual|` over a uniform grid of the domain,
/// with the curve scale seen on that grid.
pub fn max_admissibility_residual(spec: &CurveSpec) -> Result<(f64, f64, f64)> {
    let dom = screening_domain(spec)?;
    let mut worst = (0.0, dom.lo(), 0.0);
    for t in dom.grid(SCREEN_POINTS) {
        let j = jet(spec, t)?;
        let r = admissibility_residual(&j).abs();
        worst.2 = f64::max(worst.2, j.scale());
        if r > worst.0 {
            worst.0 = r;
            worst.1 = t;
        }
    }
    Ok(worst)
}

/// Domain on which jets can be taken everywhere: the full domain for curves
/// with closed-form jets, shrunk by the stencil reach otherwise.
pub(crate) fn screening_domain(spec: &CurveSpec) -> Result<crate::curve::Domain> {
    let dom = spec.domain();
    if spec.has_exact_jet() {
        Ok(dom)
    } else {
        let margin = crate::curve::Stencil::default_at(dom.lo().abs().max(dom.hi().abs())).reach();
        dom.shrink(margin * 1.01)
    }
}

/// `γ̃ = Aγ + b`; requires `det A = 1 + 0ε` within [`UNIMODULAR_TOL`].
pub fn apply_equiaffine(a: &Mat2D, b: &DualVec2, spec: &CurveSpec) -> Result<CurveSpec> {
    let det = a.det();
    if !det.close_to(DualScalar::ONE, UNIMODULAR_TOL) {
        return Err(Error::NotUnimodular {
            re: det.re(),
            du: det.du(),
        });
    }
    Ok(CurveSpec::new(
        AffineImage {
            matrix: *a,
            offset: *b,
            base: spec.clone(),
        },
        spec.domain(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{AnalyticCurve, Domain, ScalarFn};
    use crate::dual::Vec2;
    use crate::expr::Expr;

    pub(crate) fn analytic(c: [&str; 4], lo: f64, hi: f64) -> CurveSpec {
        let f = |s: &str| ScalarFn::from_expr(Expr::parse(s).unwrap()).unwrap();
        CurveSpec::new(
            AnalyticCurve::new([f(c[0]), f(c[1])], [f(c[2]), f(c[3])]),
            Domain::new(lo, hi).unwrap(),
        )
    }

    #[test]
    fn nondegeneracy_examples() {
        let parabola = analytic(["s", "s^2/2", "0", "0"], -3.0, 3.0);
        for s in [-2.0, 0.0, 1.5] {
            assert_eq!(nondegeneracy(&jet(&parabola, s).unwrap()), 1.0);
        }
        let half = analytic(["sin(t/2)", "-cos(t/2)", "0", "0"], -3.0, 3.0);
        for t in [-2.0, 0.0, 1.5] {
            assert!((nondegeneracy(&jet(&half, t).unwrap()) - 0.125).abs() < 1e-15);
        }
        let line = analytic(["t", "0", "0", "0"], -1.0, 1.0);
        assert_eq!(nondegeneracy(&jet(&line, 0.5).unwrap()), 0.0);
    }

    #[test]
    fn residual_examples() {
        let example = analytic(["sin(s)", "-cos(s)", "cos(s)", "sin(s)"], -4.0, 4.0);
        for s in [-3.0, 0.2, 2.9] {
            assert!(admissibility_residual(&jet(&example, s).unwrap()).abs() < 1e-15);
        }
        let cubic = analytic(["t", "t^2/2", "t^3", "0"], -2.0, 2.0);
        for t in [-1.5, 0.0, 0.7] {
            let r = admissibility_residual(&jet(&cubic, t).unwrap());
            assert!((r + 3.0 * t * t).abs() < 1e-13, "{t}: {r}");
        }
        let const_beta = analytic(["t", "t^2/2", "4", "-1"], -2.0, 2.0);
        assert_eq!(admissibility_residual(&jet(&const_beta, 0.3).unwrap()), 0.0);
    }

    #[test]
    fn worked_example_curvature() {
        let example = analytic(["sin(s)", "-cos(s)", "cos(s)", "sin(s)"], -4.0, 4.0);
        for s in [-3.0, 0.0, 1.0, 3.5] {
            let k = equiaffine_curvature(&jet(&example, s).unwrap()).unwrap();
            assert!(k.close_to(DualScalar::ONE, 1e-14));
        }
    }

    #[test]
    fn curvature_requires_unit_speed() {
        let half = analytic(["sin(t/2)", "-cos(t/2)", "cos(t/2)", "sin(t/2)"], -3.0, 3.0);
        assert!(matches!(
            equiaffine_curvature(&jet(&half, 0.0).unwrap()),
            Err(Error::NotUnitSpeed { .. })
        ));
    }

    #[test]
    fn report_decomposition_matches_dual_determinant() {
        let c = analytic(["sin(s) + s^3", "cosh(s)", "s^4 - s", "exp(s/3)"], -1.0, 1.0);
        for s in [-0.5, 0.1, 0.8] {
            let j = jet(&c, s).unwrap();
            let rep = EquiaffineReport::of(&j);
            assert!(rep.kappa.close_to(det2(&j.d2(), &j.d3()), 1e-12));
            assert_eq!(rep.kappa.re(), rep.kappa_alpha);
        }
    }

    #[test]
    fn apply_rejects_non_unimodular() {
        let c = analytic(["s", "s^2/2", "0", "0"], -1.0, 1.0);
        let a = Mat2D::from_real(&nalgebra::Matrix2::new(2.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(matches!(
            apply_equiaffine(&a, &DualVec2::ZERO, &c),
            Err(Error::NotUnimodular { .. })
        ));
        let shear_dual = Mat2D::new(
            DualScalar::ONE,
            DualScalar::ZERO,
            DualScalar::ZERO,
            DualScalar::new(1.0, 0.5).unwrap(),
        );
        assert!(apply_equiaffine(&shear_dual, &DualVec2::ZERO, &c).is_err());
    }

    #[test]
    fn apply_identity_is_same_curve() {
        let c = analytic(["sin(s)", "-cos(s)", "cos(s)", "sin(s)"], -1.0, 1.0);
        let img = apply_equiaffine(&Mat2D::IDENTITY, &DualVec2::ZERO, &c).unwrap();
        for s in [-0.9, 0.0, 0.6] {
            let (a, b) = (jet(&c, s).unwrap(), jet(&img, s).unwrap());
            assert_eq!(a.d, b.d);
        }
    }

    #[test]
    fn rotation_keeps_flat_curvature() {
        let flat = make_family(
            &EquiaffineFamilyParams::flat(0.3, -1.0, 0.5, Vec2::new(1.0, 2.0)),
            Domain::new(-2.0, 2.0).unwrap(),
        )
        .unwrap();
        let th: f64 = 0.7;
        let rot = Mat2D::from_real(&nalgebra::Matrix2::new(th.cos(), -th.sin(), th.sin(), th.cos())).unwrap();
        let b = DualVec2::from_parts(Vec2::new(1.0, -1.0), Vec2::new(0.5, 0.25)).unwrap();
        let img = apply_equiaffine(&rot, &b, &flat).unwrap();
        for s in [-1.5, 0.0, 1.2] {
            let k = equiaffine_curvature(&jet(&img, s).unwrap()).unwrap();
            assert!(k.close_to(DualScalar::ZERO, 1e-12));
        }
    }
}
