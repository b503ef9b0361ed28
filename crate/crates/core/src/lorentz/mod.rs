//! Curves in the dual Lorentz-Minkowski plane `D²₁` with the inner product
//! `⟨u, v⟩ = u₁v₁ − u₂v₂`.
//!
//! A curve `γ = α + εβ` with `α` unit speed has a dual arc-length parameter
//! exactly when `⟨α′, β′⟩ = 0`. Its Frenet frame `{T, N}` then satisfies
//! `T′ = κN`, `N′ = κT` with `κ = |γ″|` taken in `D`.

mod families;

use nalgebra::Matrix2;

use crate::curve::{jet, AffineImage, CurveJet, CurveSpec, Stencil};
use crate::dual::{lorentz_inner, lorentz_inner_real, DualScalar, DualVec2, Mat2D, DEFAULT_TOL};
use crate::error::{Error, Result};

pub use crate::curve::{CausalClass, LIGHTLIKE_BAND};
pub use families::{
    is_straight_line, make_lorentz_family, ConstCurvatureCurve, KappaRealOnlyCurve, LorentzFamilyId,
    LorentzFamilyParams, StraightLineCurve,
};

/// Tolerance on `AᵀMA = M`.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// `M = diag(1, −1)`.
pub fn metric() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

/// Causal character of a real vector.
pub fn causal_character(v: &crate::dual::Vec2) -> CausalClass {
    CausalClass::of(v)
}

/// `⟨α′, β′⟩`, which vanishes identically on curves admitting a dual arc
/// length.
pub fn lorentz_admissibility(j: &CurveJet) -> f64 {
    lorentz_inner_real(&j.alpha(1), &j.beta(1))
}

/// Frenet apparatus at one point of a unit-speed admissible curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetData {
    pub t: DualVec2,
    pub n: DualVec2,
    pub kappa: DualScalar,
    /// `⟨T_α, T_α⟩`, either `+1` or `−1`.
    pub delta: f64,
}

impl FrenetData {
    /// `T_α`, the real part of the tangent.
    pub fn t_alpha(&self) -> crate::dual::Vec2 {
        self.t.real_part()
    }

    /// `N_α`, the real part of the normal.
    pub fn n_alpha(&self) -> crate::dual::Vec2 {
        self.n.real_part()
    }
}

/// [`frenet_with_tol`] at [`DEFAULT_TOL`].
pub fn frenet(j: &CurveJet) -> Result<FrenetData> {
    frenet_with_tol(j, DEFAULT_TOL)
}

/// Frenet frame and curvature of a jet.
///
/// `tol` bounds `|⟨α′, α′⟩| − 1`, `⟨α′, β′⟩` and the size below which `α″`
/// or `β″` counts as zero.
pub fn frenet_with_tol(j: &CurveJet, tol: f64) -> Result<FrenetData> {
    let a1 = j.alpha(1);
    let speed = lorentz_inner_real(&a1, &a1);
    if (speed.abs() - 1.0).abs() > tol {
        return Err(Error::NotUnitSpeed {
            t: j.t,
            detail: format!("⟨α′, α′⟩ = {speed}"),
        });
    }
    let adm = lorentz_admissibility(j);
    if adm.abs() > tol * (1.0 + j.beta(1).amax()) {
        return Err(Error::NotAdmissible {
            t: j.t,
            residual: adm,
            tolerance: tol,
        });
    }
    let delta = speed.signum();
    let (a2, b2) = (j.alpha(2).amax(), j.beta(2).amax());
    if a2 <= tol {
        return Err(if b2 <= tol {
            Error::StraightPoint(j.t)
        } else {
            Error::CurvatureUndefined(j.t)
        });
    }
    let g2 = j.d2();
    let kappa = lorentz_inner(&g2, &g2)
        .abs_by_real_sign()
        .sqrt()
        .map_err(|_| Error::CurvatureUndefined(j.t))?;
    let inv = kappa.recip()?;
    Ok(FrenetData {
        t: j.d1(),
        n: g2.scale(inv),
        kappa,
        delta,
    })
}

/// `F(p) = Ap + b` with `A` real and `AᵀMA = M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIsometry {
    a: Matrix2<f64>,
    b: DualVec2,
}

impl LorentzIsometry {
    pub fn new(a: Matrix2<f64>, b: DualVec2) -> Result<Self> {
        let err = isometry_defect(&a);
        if !(err <= ISOMETRY_TOL) {
            return Err(Error::NotIsometry(err));
        }
        Ok(Self { a, b })
    }

    pub fn identity() -> Self {
        Self {
            a: Matrix2::identity(),
            b: DualVec2::ZERO,
        }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        self.a
    }

    pub fn offset(&self) -> DualVec2 {
        self.b
    }

    pub fn apply_vector(&self, v: &DualVec2) -> DualVec2 {
        Mat2D::from_real_raw(&self.a).apply(v)
    }
}

/// `max |AᵀMA − M|` entrywise.
pub fn isometry_defect(a: &Matrix2<f64>) -> f64 {
    (a.transpose() * metric() * a - metric()).amax()
}

/// `A = diag(±1, ±1)·boost(φ)` with the boost
/// `[[cosh φ, sinh φ], [sinh φ, cosh φ]]`. `reflect_x` negates the first
/// coordinate, `reflect_y` the second.
pub fn generate_isometry(phi: f64, reflect_x: bool, reflect_y: bool, b: DualVec2) -> LorentzIsometry {
    let (ch, sh) = (phi.cosh(), phi.sinh());
    let sx = if reflect_x { -1.0 } else { 1.0 };
    let sy = if reflect_y { -1.0 } else { 1.0 };
    LorentzIsometry {
        a: Matrix2::new(sx * ch, sx * sh, sy * sh, sy * ch),
        b,
    }
}

/// `γ̃ = Aγ + b`.
pub fn apply_lorentz_isometry(f: &LorentzIsometry, spec: &CurveSpec) -> Result<CurveSpec> {
    let err = isometry_defect(&f.a);
    if !(err <= ISOMETRY_TOL) {
        return Err(Error::NotIsometry(err));
    }
    Ok(CurveSpec::new(
        AffineImage {
            matrix: Mat2D::from_real_raw(&f.a),
            offset: f.b,
            base: spec.clone(),
        },
        spec.domain(),
    ))
}

/// Frenet data at `t` from [`jet`], with the stencil-aware tolerance used
/// for curves without closed-form jets.
pub fn frenet_at(spec: &CurveSpec, t: f64) -> Result<FrenetData> {
    let tol = if spec.has_exact_jet() {
        DEFAULT_TOL
    } else {
        let h = Stencil::default_at(t).h;
        DEFAULT_TOL.max(1e3 * h * h)
    };
    frenet_with_tol(&jet(spec, t)?, tol)
}
