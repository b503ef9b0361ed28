use std::any::Any;
use std::fmt;
use std::sync::Arc;

use super::numeric::integrate_anchored;
use super::{CausalClass, Curve, CurveKind, CurveSpec, Domain};
use crate::dual::{DualVec2, Vec2};
use crate::error::{Error, Result};
use crate::expr::Expr;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real function of one variable with optional first three derivatives.
#[derive(Clone)]
pub struct ScalarFn {
    f: RealFn,
    derivs: Option<[RealFn; 3]>,
    expr: Option<Expr>,
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.expr {
            Some(e) => write!(f, "ScalarFn({e})"),
            None => write!(f, "ScalarFn(<closure>, exact = {})", self.derivs.is_some()),
        }
    }
}

impl ScalarFn {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            derivs: None,
            expr: None,
        }
    }

    pub fn with_derivatives<F, D1, D2, D3>(f: F, d1: D1, d2: D2, d3: D3) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
        D3: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            f: Arc::new(f),
            derivs: Some([Arc::new(d1), Arc::new(d2), Arc::new(d3)]),
            expr: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::with_derivatives(move |_| c, |_| 0.0, |_| 0.0, |_| 0.0)
    }

    /// Expression with symbolically derived first three derivatives.
    pub fn from_expr(expr: Expr) -> Result<Self> {
        let d1 = expr.derivative()?;
        let d2 = d1.derivative()?;
        let d3 = d2.derivative()?;
        let eval = |e: Expr| -> RealFn { Arc::new(move |t| e.eval(t)) };
        Ok(Self {
            f: eval(expr.clone()),
            derivs: Some([eval(d1), eval(d2), eval(d3)]),
            expr: Some(expr),
        })
    }

    /// Expression evaluated pointwise only; jets fall back to finite
    /// differences.
    pub fn from_expr_without_derivatives(expr: Expr) -> Self {
        let e = expr.clone();
        Self {
            f: Arc::new(move |t| e.eval(t)),
            derivs: None,
            expr: Some(expr),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    /// `[f, f′, f″, f‴]` at `t` if derivatives are attached.
    pub fn jet(&self, t: f64) -> Option<[f64; 4]> {
        self.derivs
            .as_ref()
            .map(|d| [(self.f)(t), d[0](t), d[1](t), d[2](t)])
    }

    pub fn has_derivatives(&self) -> bool {
        self.derivs.is_some()
    }

    pub fn expr(&self) -> Option<&Expr> {
        self.expr.as_ref()
    }
}

/// Curve given by four real component functions `α = (α₁, α₂)`,
/// `β = (β₁, β₂)`.
#[derive(Debug, Clone)]
pub struct AnalyticCurve {
    pub alpha: [ScalarFn; 2],
    pub beta: [ScalarFn; 2],
}

impl AnalyticCurve {
    pub fn new(alpha: [ScalarFn; 2], beta: [ScalarFn; 2]) -> Self {
        Self { alpha, beta }
    }

    /// Curve with zero dual part.
    pub fn real(alpha: [ScalarFn; 2]) -> Self {
        Self::new(alpha, [ScalarFn::constant(0.0), ScalarFn::constant(0.0)])
    }

    /// Parses `[α₁, α₂, β₁, β₂]` and attaches symbolic derivatives.
    pub fn from_sources(src: [&str; 4]) -> Result<Self> {
        let f = |s: &str| ScalarFn::from_expr(Expr::parse(s)?);
        Ok(Self::new([f(src[0])?, f(src[1])?], [f(src[2])?, f(src[3])?]))
    }
}

impl Curve for AnalyticCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Analytic
    }

    fn point(&self, t: f64) -> DualVec2 {
        DualVec2::from_parts_raw(
            Vec2::new(self.alpha[0].eval(t), self.alpha[1].eval(t)),
            Vec2::new(self.beta[0].eval(t), self.beta[1].eval(t)),
        )
    }

    fn exact_jet(&self, t: f64) -> Option<[DualVec2; 4]> {
        let ax = self.alpha[0].jet(t)?;
        let ay = self.alpha[1].jet(t)?;
        let bx = self.beta[0].jet(t)?;
        let by = self.beta[1].jet(t)?;
        Some(std::array::from_fn(|k| {
            DualVec2::from_parts_raw(Vec2::new(ax[k], ay[k]), Vec2::new(bx[k], by[k]))
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Real polynomial `c₀ + c₁x + c₂x² + …`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    /// `[p, p′, p″, p‴]` at `x`.
    pub fn jet(&self, x: f64) -> [f64; 4] {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        [self.eval(x), d1.eval(x), d2.eval(x), d3.eval(x)]
    }
}

/// Turning function `θ(s)` of a unit-speed Lorentzian curve.
#[derive(Debug, Clone)]
pub enum ThetaSpec {
    /// Closed-form `θ` as a polynomial in `s`.
    Polynomial(Polynomial),
    /// `θ(s) = ∫_origin^s κ(u) du` for a real curvature function `κ`.
    CurvatureIntegral { curvature: ScalarFn, origin: f64 },
}

impl ThetaSpec {
    /// `[θ, θ′, θ″]` at `s`.
    pub fn eval(&self, s: f64) -> Result<[f64; 3]> {
        match self {
            ThetaSpec::Polynomial(p) => {
                let j = p.jet(s);
                Ok([j[0], j[1], j[2]])
            }
            ThetaSpec::CurvatureIntegral { curvature, origin } => {
                let theta = integrate_anchored(|u| curvature.eval(u), *origin, s)?;
                let dk = match curvature.jet(s) {
                    Some(j) => j[1],
                    None => super::fd::richardson_d1(&|u| curvature.eval(u), s, 1e-3),
                };
                Ok([theta, curvature.eval(s), dk])
            }
        }
    }
}

/// Lightlike curve `γ(t) = p + t·v + εβ(t)`; the dual part `β` is the real
/// part of a nested curve.
#[derive(Debug, Clone)]
pub struct LightlikeCurve {
    p: Vec2,
    v: Vec2,
    beta: CurveSpec,
}

impl LightlikeCurve {
    /// Requires `v ≠ 0` lightlike and the nested `β` curve to be defined on
    /// the whole `domain`.
    pub fn new(p: Vec2, v: Vec2, beta: CurveSpec, domain: &Domain) -> Result<Self> {
        if CausalClass::of(&v) != CausalClass::Lightlike {
            return Err(Error::BadParams(format!(
                "lightlike curve needs a nonzero null direction, got v = ({}, {})",
                v.x, v.y
            )));
        }
        if !beta.domain().contains_domain(domain) {
            return Err(Error::BadParams(
                "dual-part curve is not defined on the whole domain".into(),
            ));
        }
        Ok(Self { p, v, beta })
    }

    pub fn p(&self) -> Vec2 {
        self.p
    }

    pub fn v(&self) -> Vec2 {
        self.v
    }

    pub fn beta(&self) -> &CurveSpec {
        &self.beta
    }
}

impl Curve for LightlikeCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Lightlike
    }

    fn point(&self, t: f64) -> DualVec2 {
        let b = self.beta.curve().point(t).real_part();
        DualVec2::from_parts_raw(self.p + self.v * t, b)
    }

    fn exact_jet(&self, t: f64) -> Option<[DualVec2; 4]> {
        let b = self.beta.curve().exact_jet(t)?;
        let real = [self.p + self.v * t, self.v, Vec2::zeros(), Vec2::zeros()];
        Some(std::array::from_fn(|k| {
            DualVec2::from_parts_raw(real[k], b[k].real_part())
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
