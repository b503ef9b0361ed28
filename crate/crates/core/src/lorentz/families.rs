//! Closed-form Lorentzian curves: constant curvature, real curvature only,
//! lightlike and straight lines.

use std::any::Any;

use crate::curve::numeric::integrate_anchored;
use crate::curve::{
    jet, CausalClass, Curve, CurveKind, CurveSpec, Domain, LightlikeCurve, Polynomial, ScalarFn, ThetaSpec,
};
use crate::dual::{DualScalar, DualVec2, Vec2};
use crate::error::{Error, Result};

/// Grid used by [`is_straight_line`].
const STRAIGHT_GRID: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LorentzFamilyId {
    ConstCurvature,
    KappaRealOnly,
    Lightlike,
    StraightLine,
}

impl LorentzFamilyId {
    pub fn as_str(self) -> &'static str {
        match self {
            LorentzFamilyId::ConstCurvature => "lorentz-const",
            LorentzFamilyId::KappaRealOnly => "kappa-real-only",
            LorentzFamilyId::Lightlike => "lightlike",
            LorentzFamilyId::StraightLine => "straight-line",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "lorentz-const" => LorentzFamilyId::ConstCurvature,
            "kappa-real-only" => LorentzFamilyId::KappaRealOnly,
            "lightlike" => LorentzFamilyId::Lightlike,
            "straight-line" => LorentzFamilyId::StraightLine,
            _ => return None,
        })
    }
}

/// Parameters of a Lorentzian family member.
#[derive(Debug, Clone)]
pub enum LorentzFamilyParams {
    /// `α = r(sinh(s/r), cosh(s/r))` (spacelike) or `r(cosh(s/r), sinh(s/r))`
    /// (timelike), with `β′ = (ms + n)N_α`-type dual part.
    ConstCurvature {
        r: f64,
        m: f64,
        n: f64,
        beta0: Vec2,
        causal: CausalClass,
    },
    /// `α = (∫cosh θ, ∫sinh θ)`, `β = m(∫sinh θ, ∫cosh θ) + β0`; coordinates
    /// swapped for timelike curves. Requires `m > 0`.
    KappaRealOnly {
        theta: ThetaSpec,
        m: f64,
        beta0: Vec2,
        causal: CausalClass,
    },
    /// `p + t·v + εβ(t)` with `v` lightlike.
    Lightlike { p: Vec2, v: Vec2, beta: CurveSpec },
    /// `p + εq + s·v + εf(s)·w`.
    StraightLine {
        p: Vec2,
        q: Vec2,
        v: Vec2,
        w: Vec2,
        f: ScalarFn,
    },
}

impl LorentzFamilyParams {
    pub fn family(&self) -> LorentzFamilyId {
        match self {
            LorentzFamilyParams::ConstCurvature { .. } => LorentzFamilyId::ConstCurvature,
            LorentzFamilyParams::KappaRealOnly { .. } => LorentzFamilyId::KappaRealOnly,
            LorentzFamilyParams::Lightlike { .. } => LorentzFamilyId::Lightlike,
            LorentzFamilyParams::StraightLine { .. } => LorentzFamilyId::StraightLine,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: &Vec2| v.iter().all(|c| c.is_finite());
        let causal_ok = |c: &CausalClass| matches!(c, CausalClass::Spacelike | CausalClass::Timelike);
        match self {
            LorentzFamilyParams::ConstCurvature { r, m, n, beta0, causal } => {
                if !(r.is_finite() && *r != 0.0) {
                    return Err(Error::BadParams(format!("r must be finite and nonzero, got {r}")));
                }
                if !(m.is_finite() && n.is_finite() && finite(beta0)) {
                    return Err(Error::BadParams("m, n and beta0 must be finite".into()));
                }
                if !causal_ok(causal) {
                    return Err(Error::BadParams("causal must be spacelike or timelike".into()));
                }
            }
            LorentzFamilyParams::KappaRealOnly { m, beta0, causal, .. } => {
                if !(m.is_finite() && *m > 0.0) {
                    return Err(Error::BadParams(format!("m must be positive, got {m}")));
                }
                if !finite(beta0) {
                    return Err(Error::BadParams("beta0 must be finite".into()));
                }
                if !causal_ok(causal) {
                    return Err(Error::BadParams("causal must be spacelike or timelike".into()));
                }
            }
            LorentzFamilyParams::Lightlike { p, v, .. } => {
                if !finite(p) {
                    return Err(Error::BadParams("p must be finite".into()));
                }
                if CausalClass::of(v) != CausalClass::Lightlike {
                    return Err(Error::BadParams(format!("v = ({}, {}) is not lightlike", v.x, v.y)));
                }
            }
            LorentzFamilyParams::StraightLine { p, q, v, w, .. } => {
                if ![p, q, v, w].into_iter().all(finite) {
                    return Err(Error::BadParams("p, q, v and w must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

/// `p(s)·cosh(ws) + q(s)·sinh(ws)`.
#[derive(Debug, Clone, PartialEq)]
struct HypTerm {
    w: f64,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl HypTerm {
    fn new(w: f64, p: &[f64], q: &[f64]) -> Self {
        Self { w, p: p.to_vec(), q: q.to_vec() }
    }

    fn jet(&self, s: f64) -> [f64; 4] {
        let (ch, sh) = ((self.w * s).cosh(), (self.w * s).sinh());
        let (mut p, mut q) = (Polynomial::new(self.p.clone()), Polynomial::new(self.q.clone()));
        std::array::from_fn(|_| {
            let v = p.eval(s) * ch + q.eval(s) * sh;
            // (p cosh + q sinh)′ = (p′ + wq) cosh + (q′ + wp) sinh
            let np = add_scaled(p.derivative().coeffs(), q.coeffs(), self.w);
            let nq = add_scaled(q.derivative().coeffs(), p.coeffs(), self.w);
            p = Polynomial::new(np);
            q = Polynomial::new(nq);
            v
        })
    }
}

fn add_scaled(a: &[f64], b: &[f64], k: f64) -> Vec<f64> {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).copied().unwrap_or(0.0) + k * b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// Constant-curvature Lorentzian curve.
#[derive(Debug, Clone)]
pub struct ConstCurvatureCurve {
    r: f64,
    m: f64,
    n: f64,
    beta0: Vec2,
    causal: CausalClass,
    alpha: [HypTerm; 2],
    beta: [HypTerm; 2],
}

impl ConstCurvatureCurve {
    pub fn new(r: f64, m: f64, n: f64, beta0: Vec2, causal: CausalClass) -> Result<Self> {
        LorentzFamilyParams::ConstCurvature { r, m, n, beta0, causal }.validate()?;
        let w = 1.0 / r;
        let h = |p: &[f64], q: &[f64]| HypTerm::new(w, p, q);
        // (ms + n)·r and −m·r² as polynomial coefficients.
        let lin = [n * r, m * r];
        let cst = [-m * r * r];
        let (alpha, beta) = if causal == CausalClass::Spacelike {
            ([h(&[], &[r]), h(&[r], &[])], [h(&lin, &cst), h(&cst, &lin)])
        } else {
            ([h(&[r], &[]), h(&[], &[r])], [h(&cst, &lin), h(&lin, &cst)])
        };
        Ok(Self { r, m, n, beta0, causal, alpha, beta })
    }

    pub fn causal(&self) -> CausalClass {
        self.causal
    }

    /// Curvature of this parametrization: `1/|r| + ε·m·sign(r)`.
    pub fn expected_curvature(&self) -> DualScalar {
        DualScalar::raw(1.0 / self.r.abs(), self.m * self.r.signum())
    }

    /// The constant `r + εm` the family is labelled with. It agrees with
    /// [`Self::expected_curvature`] only for `r = 1`.
    pub fn nominal_curvature(&self) -> DualScalar {
        DualScalar::raw(self.r, self.m)
    }

    pub fn params(&self) -> (f64, f64, f64, Vec2) {
        (self.r, self.m, self.n, self.beta0)
    }
}

impl Curve for ConstCurvatureCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Catalog
    }

    fn point(&self, t: f64) -> DualVec2 {
        self.exact_jet(t).map(|d| d[0]).unwrap_or(DualVec2::ZERO)
    }

    fn exact_jet(&self, s: f64) -> Option<[DualVec2; 4]> {
        let (ax, ay) = (self.alpha[0].jet(s), self.alpha[1].jet(s));
        let (bx, by) = (self.beta[0].jet(s), self.beta[1].jet(s));
        Some(std::array::from_fn(|k| {
            let shift = if k == 0 { self.beta0 } else { Vec2::zeros() };
            DualVec2::from_parts_raw(Vec2::new(ax[k], ay[k]), Vec2::new(bx[k], by[k]) + shift)
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Curve with `κ_γ = κ_α = |θ′|`, built from a turning function.
#[derive(Debug, Clone)]
pub struct KappaRealOnlyCurve {
    theta: ThetaSpec,
    m: f64,
    beta0: Vec2,
    causal: CausalClass,
}

impl KappaRealOnlyCurve {
    pub fn new(theta: ThetaSpec, m: f64, beta0: Vec2, causal: CausalClass) -> Result<Self> {
        let p = LorentzFamilyParams::KappaRealOnly {
            theta,
            m,
            beta0,
            causal,
        };
        p.validate()?;
        let LorentzFamilyParams::KappaRealOnly { theta, .. } = p else {
            unreachable!()
        };
        Ok(Self { theta, m, beta0, causal })
    }

    pub fn theta(&self) -> &ThetaSpec {
        &self.theta
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `[(∫cosh θ, ∫sinh θ)^{(k)}]` for `k = 0..3`, integrals from 0.
    fn base_jet(&self, s: f64) -> Result<[Vec2; 4]> {
        let th = |u: f64| self.theta.eval(u).map(|v| v[0]).unwrap_or(f64::NAN);
        let c = integrate_anchored(|u| th(u).cosh(), 0.0, s)?;
        let sn = integrate_anchored(|u| th(u).sinh(), 0.0, s)?;
        let [t0, t1, t2] = self.theta.eval(s)?;
        let (ch, sh) = (t0.cosh(), t0.sinh());
        Ok([
            Vec2::new(c, sn),
            Vec2::new(ch, sh),
            Vec2::new(sh, ch) * t1,
            Vec2::new(sh, ch) * t2 + Vec2::new(ch, sh) * (t1 * t1),
        ])
    }
}

impl Curve for KappaRealOnlyCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Catalog
    }

    fn point(&self, t: f64) -> DualVec2 {
        self.exact_jet(t)
            .map(|d| d[0])
            .unwrap_or_else(|| DualVec2::from_parts_raw(Vec2::repeat(f64::NAN), Vec2::repeat(f64::NAN)))
    }

    fn exact_jet(&self, s: f64) -> Option<[DualVec2; 4]> {
        let b = self.base_jet(s).ok()?;
        let swap = |v: Vec2| Vec2::new(v.y, v.x);
        Some(std::array::from_fn(|k| {
            let (alpha, beta) = if self.causal == CausalClass::Spacelike {
                (b[k], swap(b[k]) * self.m)
            } else {
                (swap(b[k]), b[k] * self.m)
            };
            let shift = if k == 0 { self.beta0 } else { Vec2::zeros() };
            DualVec2::from_parts_raw(alpha, beta + shift)
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// `p + εq + s·v + εf(s)·w`; straight exactly when `f″ = 0`.
#[derive(Debug, Clone)]
pub struct StraightLineCurve {
    pub p: Vec2,
    pub q: Vec2,
    pub v: Vec2,
    pub w: Vec2,
    pub f: ScalarFn,
}

impl StraightLineCurve {
    /// `f″(s)`, from attached derivatives or a central difference.
    pub fn profile_d2(&self, s: f64) -> f64 {
        match self.f.jet(s) {
            Some(j) => j[2],
            None => {
                let h = 1e-4 * (1.0 + s.abs());
                (self.f.eval(s + h) - 2.0 * self.f.eval(s) + self.f.eval(s - h)) / (h * h)
            }
        }
    }
}

impl Curve for StraightLineCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Catalog
    }

    fn point(&self, s: f64) -> DualVec2 {
        DualVec2::from_parts_raw(self.p + self.v * s, self.q + self.w * self.f.eval(s))
    }

    fn exact_jet(&self, s: f64) -> Option<[DualVec2; 4]> {
        let f = self.f.jet(s)?;
        let real = [self.p + self.v * s, self.v, Vec2::zeros(), Vec2::zeros()];
        Some(std::array::from_fn(|k| {
            let shift = if k == 0 { self.q } else { Vec2::zeros() };
            DualVec2::from_parts_raw(real[k], self.w * f[k] + shift)
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Closed-form curve of the selected family on `domain`.
pub fn make_lorentz_family(p: &LorentzFamilyParams, domain: Domain) -> Result<CurveSpec> {
    p.validate()?;
    Ok(match p.clone() {
        LorentzFamilyParams::ConstCurvature { r, m, n, beta0, causal } => {
            CurveSpec::new(ConstCurvatureCurve::new(r, m, n, beta0, causal)?, domain)
        }
        LorentzFamilyParams::KappaRealOnly { theta, m, beta0, causal } => {
            CurveSpec::new(KappaRealOnlyCurve::new(theta, m, beta0, causal)?, domain)
        }
        LorentzFamilyParams::Lightlike { p, v, beta } => {
            CurveSpec::new(LightlikeCurve::new(p, v, beta, &domain)?, domain)
        }
        LorentzFamilyParams::StraightLine { p, q, v, w, f } => {
            CurveSpec::new(StraightLineCurve { p, q, v, w, f }, domain)
        }
    })
}

/// Whether `γ″` vanishes on the domain. Profile curves test `|f″|`; other
/// curves test every component of `γ″` on a grid, with a looser threshold
/// when the jets come from finite differences.
pub fn is_straight_line(spec: &CurveSpec) -> Result<bool> {
    if let Some(c) = spec.downcast_ref::<StraightLineCurve>() {
        let tol = if c.f.has_derivatives() { 1e-9 } else { 1e-5 };
        let bent = spec.domain().grid(STRAIGHT_GRID).into_iter().any(|s| c.profile_d2(s).abs() > tol);
        return Ok(!bent);
    }
    let tol = if spec.has_exact_jet() { 1e-9 } else { 1e-5 };
    let dom = crate::equiaffine::screening_domain(spec)?;
    for s in dom.grid(STRAIGHT_GRID) {
        if jet(spec, s)?.d2().max_abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::AnalyticCurve;
    use crate::dual::{lorentz_inner, lorentz_inner_real};
    use crate::expr::Expr;
    use crate::lorentz::{frenet, lorentz_admissibility};

    fn dom(lo: f64, hi: f64) -> Domain {
        Domain::new(lo, hi).unwrap()
    }

    fn expr_fn(s: &str) -> ScalarFn {
        ScalarFn::from_expr(Expr::parse(s).unwrap()).unwrap()
    }

    fn const_curve(r: f64, m: f64, n: f64, causal: CausalClass) -> CurveSpec {
        make_lorentz_family(
            &LorentzFamilyParams::ConstCurvature {
                r,
                m,
                n,
                beta0: Vec2::new(0.3, -0.2),
                causal,
            },
            dom(-1.0, 1.0),
        )
        .unwrap()
    }

    #[test]
    fn hyp_term_derivatives() {
        // (1 + 2s)cosh(3s) − sinh(3s)
        let h = HypTerm::new(3.0, &[1.0, 2.0], &[-1.0]);
        let f = |s: f64| (1.0 + 2.0 * s) * (3.0 * s).cosh() - (3.0 * s).sinh();
        let s = 0.4;
        let j = h.jet(s);
        assert!((j[0] - f(s)).abs() < 1e-14);
        let d1 = crate::curve::fd::richardson_d1(&f, s, 1e-3);
        assert!((j[1] - d1).abs() < 1e-9);
    }

    #[test]
    fn zeroed_constants_give_hyperbola() {
        let c = make_lorentz_family(
            &LorentzFamilyParams::ConstCurvature {
                r: 1.0,
                m: 0.0,
                n: 0.0,
                beta0: Vec2::zeros(),
                causal: CausalClass::Spacelike,
            },
            dom(-1.0, 1.0),
        )
        .unwrap();
        let s: f64 = 0.6;
        let j = jet(&c, s).unwrap();
        assert!((j.alpha(0) - Vec2::new(s.sinh(), s.cosh())).norm() < 1e-15);
        assert_eq!(j.beta(0), Vec2::zeros());
    }

    #[test]
    fn const_curvature_frenet() {
        let c = const_curve(1.0, 0.0, 1.0, CausalClass::Spacelike);
        for s in [-0.5f64, 0.0, 0.8] {
            let fr = frenet(&jet(&c, s).unwrap()).unwrap();
            assert!(fr.kappa.close_to(DualScalar::ONE, 1e-13));
            let t = DualVec2::from_parts_raw(Vec2::new(s.cosh(), s.sinh()), fr.n_alpha());
            assert!(fr.t.dist(&t) < 1e-13);
        }
        for (r, m, n, causal) in [
            (2.0, 0.7, -0.3, CausalClass::Spacelike),
            (-0.5, 1.3, 0.4, CausalClass::Spacelike),
            (0.8, -1.1, 2.0, CausalClass::Timelike),
            (-3.0, 0.4, 0.0, CausalClass::Timelike),
        ] {
            let c = const_curve(r, m, n, causal);
            let expected = c.downcast_ref::<ConstCurvatureCurve>().unwrap().expected_curvature();
            for s in [-0.9, 0.1, 0.7] {
                let j = jet(&c, s).unwrap();
                assert!(lorentz_admissibility(&j).abs() < 1e-12);
                let fr = frenet(&j).unwrap();
                assert_eq!(fr.delta, if causal == CausalClass::Spacelike { 1.0 } else { -1.0 });
                assert!(fr.kappa.close_to(expected, 1e-10), "{r} {m} {causal:?}: {:?}", fr.kappa);
                assert!(lorentz_inner(&fr.n, &fr.n).close_to(DualScalar::raw(-fr.delta, 0.0), 1e-10));
            }
        }
    }

    #[test]
    fn kappa_real_only_example() {
        let p = LorentzFamilyParams::KappaRealOnly {
            theta: ThetaSpec::Polynomial(Polynomial::new(vec![0.0, 1.0])),
            m: 1.0,
            beta0: Vec2::zeros(),
            causal: CausalClass::Spacelike,
        };
        let c = make_lorentz_family(&p, dom(-1.0, 1.5)).unwrap();
        for s in [-0.8f64, 0.0, 1.2] {
            let j = jet(&c, s).unwrap();
            assert!((j.alpha(0) - Vec2::new(s.sinh(), s.cosh() - 1.0)).norm() < 1e-12);
            assert!((j.beta(0) - Vec2::new(s.cosh() - 1.0, s.sinh())).norm() < 1e-12);
            let fr = frenet(&j).unwrap();
            assert!(fr.kappa.close_to(DualScalar::ONE, 1e-12));
        }
    }

    #[test]
    fn kappa_real_only_requires_positive_m() {
        let p = LorentzFamilyParams::KappaRealOnly {
            theta: ThetaSpec::Polynomial(Polynomial::new(vec![0.0, 1.0])),
            m: 0.0,
            beta0: Vec2::zeros(),
            causal: CausalClass::Timelike,
        };
        assert!(matches!(make_lorentz_family(&p, dom(0.0, 1.0)), Err(Error::BadParams(_))));
    }

    #[test]
    fn timelike_kappa_real_only() {
        let theta = ThetaSpec::Polynomial(Polynomial::new(vec![0.2, 1.5, 0.05, -0.03]));
        let p = LorentzFamilyParams::KappaRealOnly {
            theta: theta.clone(),
            m: 0.7,
            beta0: Vec2::new(1.0, 1.0),
            causal: CausalClass::Timelike,
        };
        let c = make_lorentz_family(&p, dom(0.0, 1.0)).unwrap();
        for s in [0.1, 0.5, 0.9] {
            let j = jet(&c, s).unwrap();
            assert_eq!(CausalClass::of(&j.alpha(1)), CausalClass::Timelike);
            assert_eq!(CausalClass::of(&j.beta(1)), CausalClass::Spacelike);
            let fr = frenet(&j).unwrap();
            assert!((fr.kappa.re() - theta.eval(s).unwrap()[1]).abs() < 1e-12);
            assert!(fr.kappa.du().abs() < 1e-12);
        }
    }

    #[test]
    fn lightlike_family() {
        let beta = CurveSpec::new(AnalyticCurve::real([expr_fn("t^2"), expr_fn("0")]), dom(-2.0, 2.0));
        let p = LorentzFamilyParams::Lightlike {
            p: Vec2::zeros(),
            v: Vec2::new(1.0, 1.0),
            beta,
        };
        let c = make_lorentz_family(&p, dom(-1.0, 1.0)).unwrap();
        for t in [-0.5, 0.0, 0.9] {
            let a1 = jet(&c, t).unwrap().alpha(1);
            assert_eq!(lorentz_inner_real(&a1, &a1), 0.0);
        }
        let bad = LorentzFamilyParams::Lightlike {
            p: Vec2::zeros(),
            v: Vec2::new(1.0, 0.5),
            beta: CurveSpec::new(AnalyticCurve::real([expr_fn("0"), expr_fn("0")]), dom(-2.0, 2.0)),
        };
        assert!(make_lorentz_family(&bad, dom(-1.0, 1.0)).is_err());
    }

    #[test]
    fn straight_line_criterion() {
        let line = |f: &str| {
            make_lorentz_family(
                &LorentzFamilyParams::StraightLine {
                    p: Vec2::new(1.0, 2.0),
                    q: Vec2::new(0.5, 0.0),
                    v: Vec2::new(2.0, 1.0),
                    w: Vec2::new(0.0, 1.0),
                    f: expr_fn(f),
                },
                dom(-1.0, 1.0),
            )
            .unwrap()
        };
        assert!(is_straight_line(&line("3*s + 1")).unwrap());
        assert!(!is_straight_line(&line("s^2")).unwrap());
        let general = CurveSpec::new(
            AnalyticCurve::new([expr_fn("2*s"), expr_fn("1 - s")], [expr_fn("s"), expr_fn("4")]),
            dom(-1.0, 1.0),
        );
        assert!(is_straight_line(&general).unwrap());
        let bent = CurveSpec::new(
            AnalyticCurve::new([expr_fn("2*s"), expr_fn("1 - s")], [expr_fn("s^3"), expr_fn("4")]),
            dom(-1.0, 1.0),
        );
        assert!(!is_straight_line(&bent).unwrap());
    }

    #[test]
    fn family_ids_round_trip() {
        for id in [
            LorentzFamilyId::ConstCurvature,
            LorentzFamilyId::KappaRealOnly,
            LorentzFamilyId::Lightlike,
            LorentzFamilyId::StraightLine,
        ] {
            assert_eq!(LorentzFamilyId::parse(id.as_str()), Some(id));
        }
    }
}
