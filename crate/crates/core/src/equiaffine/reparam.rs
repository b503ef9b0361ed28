//! Equiaffine arc length and reparametrization.

use std::any::Any;

use super::{admissibility_tolerance, max_admissibility_residual, nondegeneracy, screening_domain, SCREEN_POINTS};
use crate::curve::numeric::{default_panels, integrate};
use crate::curve::{fd, invert_monotone, jet, Curve, CurveKind, CurveSpec, Domain, Stencil};
use crate::dual::{det2, det_real, DualScalar, DualVec2};
use crate::error::{Error, Result};

/// `ŝ = ∫_{t0}^{t} (γ′, γ″)^{1/3} du`, evaluated in `D` by composite
/// Simpson. The real part is the classical equiaffine arc length of `α`; the
/// dual part is `(1/3)∫[(α′, β″) + (β′, α″)]/(α′, α″)^{2/3}`.
///
/// `t0 > t` gives the negated integral. Fails with `DegeneratePoint` where
/// `(α′, α″)` vanishes.
pub fn equiaffine_arclength(spec: &CurveSpec, t0: f64, t: f64) -> Result<DualScalar> {
    let (a, b, sign) = if t0 <= t { (t0, t, 1.0) } else { (t, t0, -1.0) };
    if a == b {
        return Ok(DualScalar::ZERO);
    }
    let n = default_panels(b - a);
    let h = (b - a) / n as f64;
    let mut acc = DualScalar::ZERO;
    for i in 0..=n {
        let u = if i == n { b } else { a + h * i as f64 };
        let j = jet(spec, u)?;
        let speed = det2(&j.d1(), &j.d2());
        let root = speed.cbrt().map_err(|_| Error::DegeneratePoint(u))?;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += root * w;
    }
    Ok(acc * (sign * h / 3.0))
}

/// Knot spacing of the cached arc-length table.
const KNOT_SPACING: f64 = 0.125;

/// A curve re-expressed in equiaffine arc length `s`.
///
/// `t(s)` is recovered by bisection on the real arc-length function. The
/// function is stored as its values at knots every [`KNOT_SPACING`] so each
/// evaluation integrates over one knot interval only.
#[derive(Debug, Clone)]
pub struct ArcLengthReparam {
    base: CurveSpec,
    /// `+1` when `(α′, α″) > 0`, `−1` when negative (parameter reversed).
    orientation: f64,
    /// Base parameter where `s = 0`.
    origin: f64,
    knots: Vec<f64>,
    /// `S(knot)`, increasing along the knots.
    knot_values: Vec<f64>,
    exact: bool,
}

impl ArcLengthReparam {
    pub fn base(&self) -> &CurveSpec {
        &self.base
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// `D(t) = (α′, α″)` and `D′(t) = (α′, α‴)`.
    fn speed_terms(&self, t: f64) -> (f64, f64) {
        let d = self.raw_jet(t);
        let (a1, a2, a3) = (d[1].real_part(), d[2].real_part(), d[3].real_part());
        (det_real(&a1, &a2), det_real(&a1, &a3))
    }

    fn raw_jet(&self, t: f64) -> [DualVec2; 4] {
        let curve = self.base.curve();
        curve
            .exact_jet(t)
            .unwrap_or_else(|| {
                let st = Stencil::default_at(t);
                fd::central_jet(&|u| curve.point(u), t, st.h, st.h3)
            })
    }

    /// `σ(t) = (o·D(t))^{1/3}`.
    fn sigma(&self, t: f64) -> f64 {
        (self.orientation * self.speed_terms(t).0).cbrt()
    }

    /// Oriented arc length `S(t) = o∫_origin^t σ`; increasing in `o·t`.
    fn arc(&self, t: f64) -> Result<f64> {
        let u = self.orientation * t;
        let idx = match self
            .knots
            .binary_search_by(|k| (self.orientation * k).total_cmp(&u))
        {
            Ok(i) => return Ok(self.knot_values[i]),
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let idx = idx.min(self.knots.len() - 1);
        let piece = signed_simpson(|x| self.sigma(x), self.knots[idx], t)?;
        Ok(self.knot_values[idx] + self.orientation * piece)
    }

    /// Base parameter `t(s)`.
    fn parameter(&self, s: f64) -> Result<f64> {
        let dom = self.base.domain();
        let (lo, hi) = if self.orientation > 0.0 {
            (dom.lo(), dom.hi())
        } else {
            (-dom.hi(), -dom.lo())
        };
        let g = |u: f64| self.arc(self.orientation * u).unwrap_or(f64::NAN);
        let tol = 1e-14 * (1.0 + s.abs());
        // Endpoints may miss the table values by rounding.
        let (g_lo, g_hi) = (g(lo), g(hi));
        let slack = 1e-12 * (1.0 + s.abs());
        let s = if s < g_lo && s >= g_lo - slack {
            g_lo
        } else if s > g_hi && s <= g_hi + slack {
            g_hi
        } else {
            s
        };
        let u = invert_monotone(g, s, [lo, hi], tol)?;
        Ok(self.orientation * u)
    }
}

fn signed_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let n = default_panels(b - a).max(8);
    if a < b {
        integrate(f, a, b, n)
    } else {
        integrate(f, b, a, n).map(|v| -v)
    }
}

impl Curve for ArcLengthReparam {
    fn kind(&self) -> CurveKind {
        CurveKind::Reparametrized
    }

    fn point(&self, s: f64) -> DualVec2 {
        match self.parameter(s) {
            Ok(t) => self.base.curve().point(t),
            Err(_) => DualVec2::from_parts_raw(
                crate::dual::Vec2::repeat(f64::NAN),
                crate::dual::Vec2::repeat(f64::NAN),
            ),
        }
    }

    fn exact_jet(&self, s: f64) -> Option<[DualVec2; 4]> {
        if !self.exact {
            return None;
        }
        let t = self.parameter(s).ok()?;
        let d = self.base.curve().exact_jet(t)?;
        let o = self.orientation;
        let (dd, dd_t) = self.speed_terms(t);
        let sigma = (o * dd).cbrt();
        let sigma_t = o * dd_t / (3.0 * sigma * sigma);
        let sigma_t_of = |u: f64| {
            let (a, b) = self.speed_terms(u);
            let sg = (o * a).cbrt();
            o * b / (3.0 * sg * sg)
        };
        let sigma_tt = fd::richardson_d1(&sigma_t_of, t, 1e-3 * (1.0 + t.abs()));
        // t′ = o/σ, t″ = −σ_t/σ³, t‴ = −t′(σ_tt/σ³ − 3σ_t²/σ⁴)
        let t1 = o / sigma;
        let t2 = -sigma_t / sigma.powi(3);
        let t3 = -t1 * (sigma_tt / sigma.powi(3) - 3.0 * sigma_t * sigma_t / sigma.powi(4));
        Some([
            d[0],
            d[1] * t1,
            d[2] * (t1 * t1) + d[1] * t2,
            d[3] * (t1 * t1 * t1) + d[2] * (3.0 * t1 * t2) + d[1] * t3,
        ])
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Reparametrizes a non-degenerate, admissible curve by equiaffine arc
/// length, so that `(γ′(s), γ″(s)) = 1 + 0ε`.
///
/// `s = 0` sits at `t = 0` when the domain contains it, otherwise at the
/// domain end where the oriented arc length starts. Curves with
/// `(α′, α″) < 0` are traversed in reverse (`t ↦ −t`), which keeps every map
/// inside `SL(2)`.
pub fn reparametrize_equiaffine(spec: &CurveSpec) -> Result<CurveSpec> {
    let screen = screening_domain(spec)?;
    let grid = screen.grid(SCREEN_POINTS);
    let mut sign = 0.0;
    for &t in &grid {
        let nd = nondegeneracy(&jet(spec, t)?);
        let sg = if nd > 0.0 { 1.0 } else if nd < 0.0 { -1.0 } else { 0.0 };
        if sg == 0.0 || (sign != 0.0 && sg != sign) {
            return Err(Error::DegeneratePoint(t));
        }
        sign = sg;
    }
    let (residual, t_bad, scale) = max_admissibility_residual(spec)?;
    let tolerance = admissibility_tolerance(scale);
    if residual > tolerance {
        return Err(Error::NotAdmissible {
            t: t_bad,
            residual,
            tolerance,
        });
    }

    let dom = spec.domain();
    let origin = if dom.contains(0.0) {
        0.0
    } else if sign > 0.0 {
        dom.lo()
    } else {
        dom.hi()
    };
    let mut rp = ArcLengthReparam {
        base: spec.clone(),
        orientation: sign,
        origin,
        knots: Vec::new(),
        knot_values: Vec::new(),
        exact: spec.has_exact_jet(),
    };

    // Knots in increasing o·t order, starting at the oriented domain start.
    let (start, end) = if sign > 0.0 { (dom.lo(), dom.hi()) } else { (dom.hi(), dom.lo()) };
    let count = ((end - start).abs() / KNOT_SPACING).ceil().max(1.0) as usize;
    let knots: Vec<f64> = (0..=count)
        .map(|i| if i == count { end } else { start + (end - start) * i as f64 / count as f64 })
        .collect();
    let mut values = Vec::with_capacity(knots.len());
    let mut acc = 0.0;
    for (i, &k) in knots.iter().enumerate() {
        if i > 0 {
            acc += sign * signed_simpson(|x| rp.sigma(x), knots[i - 1], k)?;
        }
        values.push(acc);
    }
    // Shift so the origin maps to s = 0.
    rp.knots = knots;
    rp.knot_values = values;
    let at_origin = rp.arc(origin)?;
    for v in &mut rp.knot_values {
        *v -= at_origin;
    }
    rp.origin = origin;

    let s_start = rp.arc(start)?;
    let s_end = rp.arc(end)?;
    let new_dom = Domain::new(s_start.min(s_end), s_start.max(s_end))?;
    Ok(CurveSpec::new(rp, new_dom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Vec2;
    use crate::equiaffine::tests::analytic;
    use crate::equiaffine::{admissibility_residual, equiaffine_curvature, make_family, EquiaffineFamilyParams};

    #[test]
    fn arclength_of_half_speed_example() {
        let c = analytic(["sin(t/2)", "-cos(t/2)", "cos(t/2)", "sin(t/2)"], -1.0, 7.0);
        for t in [0.5, 2.0, 6.0] {
            let s = equiaffine_arclength(&c, 0.0, t).unwrap();
            assert!(s.close_to(DualScalar::raw(t / 2.0, 0.0), 1e-12), "{t}: {s:?}");
        }
    }

    #[test]
    fn arclength_of_parabola() {
        let c = analytic(["t", "t^2/2", "0", "0"], -1.0, 3.0);
        let s = equiaffine_arclength(&c, 0.0, 2.5).unwrap();
        assert!(s.close_to(DualScalar::raw(2.5, 0.0), 1e-13));
        let back = equiaffine_arclength(&c, 2.5, 0.0).unwrap();
        assert!(back.close_to(DualScalar::raw(-2.5, 0.0), 1e-13));
    }

    #[test]
    fn arclength_dual_part_integrates_residual() {
        // Integrand 1 + ε(−3u²)/3, so ŝ(1) = 1 − ε/3.
        let c = analytic(["t", "t^2/2", "t^3", "0"], -1.0, 2.0);
        let s = equiaffine_arclength(&c, 0.0, 1.0).unwrap();
        assert!(s.close_to(DualScalar::raw(1.0, -1.0 / 3.0), 1e-13), "{s:?}");
    }

    #[test]
    fn arclength_degenerate() {
        let c = analytic(["t", "t^3", "0", "0"], -1.0, 1.0);
        assert!(matches!(equiaffine_arclength(&c, -0.5, 0.5), Err(Error::DegeneratePoint(_))));
    }

    #[test]
    fn reparametrizes_worked_example() {
        let c = analytic(["sin(t/2)", "-cos(t/2)", "cos(t/2)", "sin(t/2)"], -1.0, 7.0);
        let r = reparametrize_equiaffine(&c).unwrap();
        assert!((r.domain().lo() + 0.5).abs() < 1e-12);
        assert!((r.domain().hi() - 3.5).abs() < 1e-12);
        for s in [-0.4, 0.0, 1.0, 2.5, 3.4] {
            let j = jet(&r, s).unwrap();
            let expect = Vec2::new(s.sin(), -s.cos());
            assert!((j.alpha(0) - expect).norm() < 1e-12, "{s}");
            assert!((j.beta(0) - Vec2::new(s.cos(), s.sin())).norm() < 1e-12);
            let speed = det2(&j.d1(), &j.d2());
            assert!(speed.close_to(DualScalar::ONE, 1e-12));
            let k = equiaffine_curvature(&j).unwrap();
            assert!(k.close_to(DualScalar::ONE, 1e-9), "{s}: {k:?}");
        }
    }

    #[test]
    fn unit_parabola_is_identity() {
        let c = analytic(["t", "t^2/2", "0", "0"], -2.0, 2.0);
        let r = reparametrize_equiaffine(&c).unwrap();
        assert!((r.domain().lo() + 2.0).abs() < 1e-12 && (r.domain().hi() - 2.0).abs() < 1e-12);
        for s in [-1.5, 0.0, 0.7] {
            assert!((jet(&r, s).unwrap().alpha(0) - Vec2::new(s, s * s / 2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_inadmissible_curve() {
        let c = analytic(["t", "t^2/2", "t^3", "0"], -1.0, 1.0);
        assert!(matches!(reparametrize_equiaffine(&c), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn rejects_degenerate_curve() {
        let c = analytic(["t", "t^3", "0", "0"], -1.0, 1.0);
        assert!(matches!(reparametrize_equiaffine(&c), Err(Error::DegeneratePoint(_))));
    }

    #[test]
    fn reversed_orientation() {
        // (α′, α″) = −8 < 0 for the clockwise ellipse.
        let c = analytic(["2*cos(t)", "-2*sin(t)", "0", "0"], 0.5, 2.0);
        let r = reparametrize_equiaffine(&c).unwrap();
        for s in r.domain().grid(6) {
            let j = jet(&r, s).unwrap();
            assert!(det2(&j.d1(), &j.d2()).close_to(DualScalar::ONE, 1e-12));
            let k = equiaffine_curvature(&j).unwrap();
            // Ellipse of area-radius 2: κ = 2^(-4/3)... checked against the
            // classical value (ab)^(-2/3) with a = b = 2.
            assert!((k.re() - 4f64.powf(-2.0 / 3.0)).abs() < 1e-8, "{k:?}");
        }
    }

    #[test]
    fn family_is_its_own_reparametrization() {
        let fam = make_family(
            &EquiaffineFamilyParams::elliptic(2.0, 0.5, -0.3, Vec2::new(1.0, 0.0)),
            Domain::new(-1.0, 1.0).unwrap(),
        )
        .unwrap();
        let r = reparametrize_equiaffine(&fam).unwrap();
        for s in [-0.8, 0.1, 0.9] {
            let (a, b) = (jet(&fam, s).unwrap(), jet(&r, s).unwrap());
            for k in 0..4 {
                assert!(a.d[k].dist(&b.d[k]) < 1e-8, "order {k} at {s}");
            }
            assert!(admissibility_residual(&b).abs() < 1e-10);
        }
    }
}
