//! Parametrized curves `t ↦ γ(t) = α(t) + εβ(t)` in `D²` over a real interval.
//!
//! A [`CurveSpec`] pairs a [`Curve`] evaluator with its [`Domain`]. Curves are
//! evaluated lazily. [`jet`] returns the value and the first three
//! derivatives, taken from the closed form when the curve provides one and
//! from central finite differences otherwise.

mod analytic;
pub mod fd;
pub mod numeric;

use std::any::Any;
use std::fmt;
use std::sync::Arc;

use crate::dual::{lorentz_inner_real, DualVec2, Mat2D, Vec2};
use crate::error::{Error, Result};

pub use analytic::{AnalyticCurve, LightlikeCurve, Polynomial, ScalarFn, ThetaSpec};
pub use numeric::{integrate, invert_monotone, solve_linear_ode3, OdeSolution};

/// Closed, finite, nonempty parameter interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    lo: f64,
    hi: f64,
}

impl Domain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::BadDomain(lo, hi))
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    fn slack(&self) -> f64 {
        1e-12 * (1.0 + self.lo.abs().max(self.hi.abs()))
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo - self.slack() && t <= self.hi + self.slack()
    }

    pub fn contains_domain(&self, other: &Domain) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    /// `n + 1` evenly spaced points from `lo` to `hi`.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(self.lo, self.hi, n)
    }

    /// Sub-interval shrunk by `margin` at both ends.
    pub fn shrink(&self, margin: f64) -> Result<Domain> {
        Domain::new(self.lo + margin, self.hi - margin)
    }
}

/// `n + 1` evenly spaced points from `a` to `b` (both included).
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![a];
    }
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

/// Value and derivatives of orders 1..3 at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub t: f64,
    pub d: [DualVec2; 4],
}

impl CurveJet {
    pub fn new(t: f64, d: [DualVec2; 4]) -> Self {
        Self { t, d }
    }

    pub fn d0(&self) -> DualVec2 {
        self.d[0]
    }

    pub fn d1(&self) -> DualVec2 {
        self.d[1]
    }

    pub fn d2(&self) -> DualVec2 {
        self.d[2]
    }

    pub fn d3(&self) -> DualVec2 {
        self.d[3]
    }

    /// `α⁽ᵏ⁾(t)`.
    pub fn alpha(&self, k: usize) -> Vec2 {
        self.d[k].real_part()
    }

    /// `β⁽ᵏ⁾(t)`.
    pub fn beta(&self, k: usize) -> Vec2 {
        self.d[k].dual_part()
    }

    /// Largest absolute derivative component (orders 1 and 2), used as a
    /// scale for tolerances.
    pub fn scale(&self) -> f64 {
        self.d[1].max_abs().max(self.d[2].max_abs())
    }
}

/// Tag describing how a curve was specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Closed-form member of one of the constant-curvature families.
    Catalog,
    /// User-supplied component functions.
    Analytic,
    /// `p + t·v + εβ(t)` with `v` lightlike.
    Lightlike,
    /// Image of another curve under a group action.
    Transformed,
    /// Another curve in a new parameter.
    Reparametrized,
}

/// Pointwise evaluator of a curve in `D²`.
pub trait Curve: Any + Send + Sync + fmt::Debug {
    fn kind(&self) -> CurveKind;

    /// `γ(t)`. May be non-finite outside the natural domain; callers check.
    fn point(&self, t: f64) -> DualVec2;

    /// Closed-form `[γ, γ′, γ″, γ‴]` at `t`, when available.
    fn exact_jet(&self, _t: f64) -> Option<[DualVec2; 4]> {
        None
    }

    fn as_any(&self) -> &dyn Any;
}

/// Image `Aγ + b` of a curve under a dual linear map and a dual
/// translation.
#[derive(Debug, Clone)]
pub struct AffineImage {
    pub matrix: Mat2D,
    pub offset: DualVec2,
    pub base: CurveSpec,
}

impl Curve for AffineImage {
    fn kind(&self) -> CurveKind {
        CurveKind::Transformed
    }

    fn point(&self, t: f64) -> DualVec2 {
        self.matrix.apply(&self.base.curve().point(t)) + self.offset
    }

    fn exact_jet(&self, t: f64) -> Option<[DualVec2; 4]> {
        let d = self.base.curve().exact_jet(t)?;
        Some(std::array::from_fn(|k| {
            let v = self.matrix.apply(&d[k]);
            if k == 0 {
                v + self.offset
            } else {
                v
            }
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// A curve together with its parameter domain.
#[derive(Clone)]
pub struct CurveSpec {
    curve: Arc<dyn Curve>,
    domain: Domain,
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveSpec")
            .field("curve", &self.curve)
            .field("domain", &self.domain)
            .finish()
    }
}

impl CurveSpec {
    pub fn new<C: Curve>(curve: C, domain: Domain) -> Self {
        Self {
            curve: Arc::new(curve),
            domain,
        }
    }

    pub fn from_arc(curve: Arc<dyn Curve>, domain: Domain) -> Self {
        Self { curve, domain }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        Self {
            curve: Arc::clone(&self.curve),
            domain,
        }
    }

    pub fn kind(&self) -> CurveKind {
        self.curve.kind()
    }

    pub fn curve(&self) -> &dyn Curve {
        self.curve.as_ref()
    }

    pub fn downcast_ref<T: Curve>(&self) -> Option<&T> {
        self.curve.as_any().downcast_ref::<T>()
    }

    pub fn has_exact_jet(&self) -> bool {
        self.curve.exact_jet(self.domain.lo).is_some()
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if self.domain.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                lo: self.domain.lo,
                hi: self.domain.hi,
            })
        }
    }

    /// `γ(t)` for `t` in the domain.
    pub fn point(&self, t: f64) -> Result<DualVec2> {
        self.check_domain(t)?;
        checked(self.curve.point(t))
    }
}

fn checked(v: DualVec2) -> Result<DualVec2> {
    if v.is_finite() {
        Ok(v)
    } else {
        let bad = [v.x.re(), v.x.du(), v.y.re(), v.y.du()]
            .into_iter()
            .find(|c| !c.is_finite())
            .unwrap_or(f64::NAN);
        Err(Error::NonFinite(bad))
    }
}

/// Finite-difference steps: `h` for the first two derivatives, `h3` for the
/// third.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stencil {
    pub h: f64,
    pub h3: f64,
}

impl Stencil {
    /// Same step for every order.
    pub fn uniform(h: f64) -> Self {
        Self { h, h3: h }
    }

    /// `h = 1e-4·(1 + |t|)` for orders 1–2 and `10h` for order 3, where the
    /// 5-point stencil's `h⁻³` roundoff amplification dominates.
    pub fn default_at(t: f64) -> Self {
        let h = 1e-4 * (1.0 + t.abs());
        Self { h, h3: 10.0 * h }
    }

    /// Farthest evaluation offset from the centre point.
    pub fn reach(&self) -> f64 {
        self.h.max(2.0 * self.h3)
    }
}

/// `γ` and its derivatives of orders 1..3 at `t`.
///
/// Uses the curve's closed-form jet when it has one, otherwise central
/// finite differences with [`Stencil::default_at`].
pub fn jet(spec: &CurveSpec, t: f64) -> Result<CurveJet> {
    spec.check_domain(t)?;
    match spec.curve.exact_jet(t) {
        Some(d) => {
            for v in &d {
                checked(*v)?;
            }
            Ok(CurveJet::new(t, d))
        }
        None => fd_jet(spec, t, Stencil::default_at(t)),
    }
}

/// Finite-difference jet that ignores any closed-form derivatives.
pub fn fd_jet(spec: &CurveSpec, t: f64, stencil: Stencil) -> Result<CurveJet> {
    spec.check_domain(t)?;
    check_reach(spec, t, stencil.reach())?;
    let d = fd::central_jet(&|u| spec.curve.point(u), t, stencil.h, stencil.h3);
    for v in &d {
        checked(*v)?;
    }
    Ok(CurveJet::new(t, d))
}

pub(crate) fn check_reach(spec: &CurveSpec, t: f64, reach: f64) -> Result<()> {
    let dom = spec.domain;
    if t - reach < dom.lo - dom.slack() || t + reach > dom.hi + dom.slack() {
        Err(Error::StencilClipped {
            t,
            lo: dom.lo,
            hi: dom.hi,
        })
    } else {
        Ok(())
    }
}

/// Lorentzian causal character of a real vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
    /// The zero vector; counts as spacelike.
    NullVectorZero,
}

/// Absolute band on `x² − y²` inside which a nonzero vector is lightlike.
pub const LIGHTLIKE_BAND: f64 = 1e-12;

impl CausalClass {
    pub fn of(v: &Vec2) -> Self {
        if v.x == 0.0 && v.y == 0.0 {
            return CausalClass::NullVectorZero;
        }
        let q = lorentz_inner_real(v, v);
        if q.abs() <= LIGHTLIKE_BAND {
            CausalClass::Lightlike
        } else if q > 0.0 {
            CausalClass::Spacelike
        } else {
            CausalClass::Timelike
        }
    }

    pub fn is_spacelike(self) -> bool {
        matches!(self, CausalClass::Spacelike | CausalClass::NullVectorZero)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CausalClass::Spacelike => "spacelike",
            CausalClass::Timelike => "timelike",
            CausalClass::Lightlike => "lightlike",
            CausalClass::NullVectorZero => "zero",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;

    fn analytic(ax: &str, ay: &str, bx: &str, by: &str, lo: f64, hi: f64, exact: bool) -> CurveSpec {
        let f = |s: &str| {
            let e = Expr::parse(s).unwrap();
            if exact {
                ScalarFn::from_expr(e).unwrap()
            } else {
                ScalarFn::from_expr_without_derivatives(e)
            }
        };
        CurveSpec::new(
            AnalyticCurve::new([f(ax), f(ay)], [f(bx), f(by)]),
            Domain::new(lo, hi).unwrap(),
        )
    }

    #[test]
    fn domain_validation() {
        assert!(Domain::new(1.0, 0.0).is_err());
        assert!(Domain::new(0.0, 0.0).is_err());
        assert!(Domain::new(0.0, f64::INFINITY).is_err());
        let d = Domain::new(0.0, 1.0).unwrap();
        assert_eq!(d.grid(4), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn parabola_jet() {
        let spec = analytic("t", "t^2/2", "0", "0", -2.0, 2.0, true);
        let j = jet(&spec, 1.0).unwrap();
        assert_eq!(j.alpha(1), Vec2::new(1.0, 1.0));
        assert_eq!(j.alpha(2), Vec2::new(0.0, 1.0));
        assert_eq!(j.alpha(3), Vec2::new(0.0, 0.0));
    }

    #[test]
    fn worked_example_velocity() {
        let spec = analytic("sin(t)", "-cos(t)", "cos(t)", "sin(t)", -1.0, 1.0, true);
        let j = jet(&spec, 0.0).unwrap();
        assert_eq!(j.alpha(1), Vec2::new(1.0, 0.0));
        assert_eq!(j.beta(1), Vec2::new(0.0, 1.0));
    }

    #[test]
    fn fd_third_derivative_of_cubic() {
        let spec = analytic("t^3", "0", "0", "0", 0.0, 2.0, false);
        let j = fd_jet(&spec, 1.0, Stencil::uniform(1e-3)).unwrap();
        assert!((j.alpha(3).x - 6.0).abs() <= 1e-5);
    }

    #[test]
    fn out_of_domain_and_clipping() {
        let spec = analytic("t", "t^2", "0", "0", 0.0, 1.0, false);
        assert!(matches!(jet(&spec, 1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(jet(&spec, 0.0), Err(Error::StencilClipped { .. })));
        assert!(jet(&spec, 0.5).is_ok());
    }

    #[test]
    fn fd_jet_converges_at_second_order() {
        // Smooth curve; compare analytic and FD second derivatives for two steps.
        let exact = analytic("sin(2*t)", "exp(t/2)", "cosh(t)", "t^4", -1.0, 2.0, true);
        let t = 0.7;
        let aj = jet(&exact, t).unwrap();
        let err = |h: f64| {
            let fj = fd_jet(&exact, t, Stencil::uniform(h)).unwrap();
            (1..4).map(|k| fj.d[k].dist(&aj.d[k])).fold(0.0, f64::max)
        };
        let (h1, h2) = (2e-2, 1e-2);
        let slope = (err(h1) / err(h2)).ln() / (h1 / h2).ln();
        assert!(slope >= 1.9, "slope {slope}");
    }

    #[test]
    fn causal_classes() {
        assert_eq!(CausalClass::of(&Vec2::new(1.0, 0.0)), CausalClass::Spacelike);
        assert_eq!(CausalClass::of(&Vec2::new(0.0, 1.0)), CausalClass::Timelike);
        assert_eq!(CausalClass::of(&Vec2::new(1.0, 1.0)), CausalClass::Lightlike);
        assert_eq!(CausalClass::of(&Vec2::zeros()), CausalClass::NullVectorZero);
        assert!(CausalClass::NullVectorZero.is_spacelike());
    }
}
