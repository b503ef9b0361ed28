//! Dual parts with prescribed curvature `κ_γ = κ_α`.
//!
//! Writing `β′ = xα′ + yα″` for a unit-speed `α`, the dual part of `κ_γ`
//! vanishes and `γ` stays admissible exactly when `x = −y′/2` and
//! `y‴ + 4κ_α y′ + 2κ_α′ y = 0`.

use std::any::Any;

use crate::curve::fd::richardson_d1;
use crate::curve::numeric::rk4_step;
use crate::curve::{jet, solve_linear_ode3, Curve, CurveKind, CurveSpec, ScalarFn};
use crate::dual::{DualVec2, Vec2};
use crate::error::{Error, Result};

/// `κ` and `κ′` at `s`, from attached derivatives when available.
fn kappa_pair(k: &ScalarFn, s: f64) -> (f64, f64) {
    match k.jet(s) {
        Some(j) => (j[0], j[1]),
        None => (k.eval(s), richardson_d1(&|u| k.eval(u), s, 1e-3 * (1.0 + s.abs()))),
    }
}

/// Solution `y` of the κκ system on a uniform grid, with `x = −y′/2`.
#[derive(Debug, Clone)]
pub struct KkSolution {
    kappa: ScalarFn,
    s: Vec<f64>,
    /// `[y, y′, y″]` at each grid node.
    state: Vec<[f64; 3]>,
}

impl KkSolution {
    pub fn grid(&self) -> &[f64] {
        &self.s
    }

    pub fn states(&self) -> &[[f64; 3]] {
        &self.state
    }

    pub fn y(&self) -> Vec<f64> {
        self.state.iter().map(|v| v[0]).collect()
    }

    pub fn x(&self) -> Vec<f64> {
        self.state.iter().map(|v| -0.5 * v[1]).collect()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.s[0], *self.s.last().expect("non-empty grid"))
    }

    /// `[y, y′, y″]` at any `s` in the interval, by one RK4 step from the
    /// nearest node.
    pub fn state_at(&self, s: f64) -> Result<[f64; 3]> {
        let (lo, hi) = self.interval();
        if !(lo - 1e-12..=hi + 1e-12).contains(&s) {
            return Err(Error::OutOfDomain { t: s, lo, hi });
        }
        let h = (hi - lo) / (self.s.len() - 1) as f64;
        let i = (((s - lo) / h).round() as usize).min(self.s.len() - 1);
        let dt = s - self.s[i];
        if dt == 0.0 {
            return Ok(self.state[i]);
        }
        Ok(rk4_step(&|u, y: &[f64; 3]| self.rhs(u, y), self.s[i], &self.state[i], dt))
    }

    fn rhs(&self, s: f64, y: &[f64; 3]) -> [f64; 3] {
        let (k, k1) = kappa_pair(&self.kappa, s);
        [y[1], y[2], -4.0 * k * y[1] - 2.0 * k1 * y[0]]
    }

    /// Coefficients `(x, x′, x″)` and `(y, y′, y″)` at `s`.
    fn coefficients(&self, s: f64, st: [f64; 3]) -> ([f64; 3], [f64; 3]) {
        let (k, k1) = kappa_pair(&self.kappa, s);
        let [y, y1, y2] = st;
        // x″ = −y‴/2 = 2κy′ + κ′y
        ([-0.5 * y1, -0.5 * y2, 2.0 * k * y1 + k1 * y], [y, y1, y2])
    }

    /// The curve `γ = α + εβ` with `β′ = xα′ + yα″` and `β(s0) = beta0`.
    ///
    /// `alpha` must be parametrized by equiaffine arc length with curvature
    /// equal to the `κ_α` the system was solved for, and its domain must
    /// cover the solution interval.
    pub fn reconstruct(&self, alpha: &CurveSpec, beta0: Vec2) -> Result<CurveSpec> {
        let (lo, hi) = self.interval();
        let dom = crate::curve::Domain::new(lo, hi)?;
        if !alpha.domain().contains_domain(&dom) {
            return Err(Error::BadInterval(format!(
                "α domain {:?} does not cover [{lo}, {hi}]",
                (alpha.domain().lo(), alpha.domain().hi())
            )));
        }
        let mut curve = KkCurve {
            solution: self.clone(),
            alpha: alpha.clone(),
            beta_nodes: Vec::with_capacity(self.s.len()),
        };
        let mut b = beta0;
        curve.beta_nodes.push(b);
        let mut prev = curve.beta_derivs(self.s[0], self.state[0])?;
        for i in 1..self.s.len() {
            let next = curve.beta_derivs(self.s[i], self.state[i])?;
            b += hermite_trapezoid(&prev, &next, self.s[i] - self.s[i - 1]);
            curve.beta_nodes.push(b);
            prev = next;
        }
        Ok(CurveSpec::new(curve, dom))
    }
}

/// `∫ f` over one step from `f` and `f′` at both ends; exact for cubics.
fn hermite_trapezoid(a: &[Vec2; 4], b: &[Vec2; 4], h: f64) -> Vec2 {
    (a[1] + b[1]) * (0.5 * h) + (a[2] - b[2]) * (h * h / 12.0)
}

/// Integrates the κκ system from `interval[0]` with `init = [y, y′, y″]`
/// using RK4 with step at most `h`.
pub fn solve_kk_system(kappa: &ScalarFn, init: [f64; 3], interval: [f64; 2], h: f64) -> Result<KkSolution> {
    let sol = solve_linear_ode3(
        |_| 0.0,
        |s| 4.0 * kappa_pair(kappa, s).0,
        |s| 2.0 * kappa_pair(kappa, s).1,
        init,
        interval[0],
        interval[1],
        h,
    )?;
    Ok(KkSolution {
        kappa: kappa.clone(),
        s: sol.s,
        state: sol.state,
    })
}

/// Curve rebuilt from a [`KkSolution`] and its real part.
#[derive(Debug, Clone)]
struct KkCurve {
    solution: KkSolution,
    alpha: CurveSpec,
    beta_nodes: Vec<Vec2>,
}

impl KkCurve {
    /// `[β, β′, β″, β‴]` at `s` with `β` left as zero.
    fn beta_derivs(&self, s: f64, st: [f64; 3]) -> Result<[Vec2; 4]> {
        let a = jet(&self.alpha, s)?;
        let (a1, a2, a3) = (a.alpha(1), a.alpha(2), a.alpha(3));
        let (k, k1) = kappa_pair(&self.solution.kappa, s);
        let a4 = -a1 * k1 - a2 * k;
        let (x, y) = self.solution.coefficients(s, st);
        Ok([
            Vec2::zeros(),
            a1 * x[0] + a2 * y[0],
            a1 * x[1] + a2 * (x[0] + y[1]) + a3 * y[0],
            a1 * x[2] + a2 * (2.0 * x[1] + y[2]) + a3 * (x[0] + 2.0 * y[1]) + a4 * y[0],
        ])
    }

    fn jet_at(&self, s: f64) -> Result<[DualVec2; 4]> {
        let sol = &self.solution;
        let (lo, hi) = sol.interval();
        let h = (hi - lo) / (sol.s.len() - 1) as f64;
        let i = (((s - lo) / h).round().max(0.0) as usize).min(sol.s.len() - 1);
        let mut b = self.beta_derivs(s, sol.state_at(s)?)?;
        b[0] = self.beta_nodes[i];
        if s != sol.s[i] {
            let node = self.beta_derivs(sol.s[i], sol.state[i])?;
            b[0] += hermite_trapezoid(&node, &b, s - sol.s[i]);
        }
        let a = jet(&self.alpha, s)?;
        Ok(std::array::from_fn(|k| DualVec2::from_parts_raw(a.alpha(k), b[k])))
    }
}

impl Curve for KkCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Analytic
    }

    fn point(&self, t: f64) -> DualVec2 {
        self.jet_at(t)
            .map(|d| d[0])
            .unwrap_or_else(|_| DualVec2::from_parts_raw(Vec2::repeat(f64::NAN), Vec2::repeat(f64::NAN)))
    }

    fn exact_jet(&self, t: f64) -> Option<[DualVec2; 4]> {
        self.jet_at(t).ok()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
