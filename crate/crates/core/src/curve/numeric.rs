//! Quadrature, a fixed-step RK4 integrator and monotone inversion.

use crate::error::{Error, Result};

/// Panels per unit length used when callers do not choose a panel count.
pub const PANELS_PER_UNIT: f64 = 512.0;

/// Default RK4 step.
pub const DEFAULT_ODE_STEP: f64 = 1e-3;

/// Even panel count for an interval of the given length at
/// [`PANELS_PER_UNIT`].
pub fn default_panels(length: f64) -> usize {
    let n = (PANELS_PER_UNIT * length.abs()).ceil() as usize;
    let n = n.max(2);
    n + n % 2
}

/// Composite Simpson rule on `[a, b]` with `n` panels (`n` even, `n >= 2`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> Result<f64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::BadPanelCount(n));
    }
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::BadInterval(format!("[{a}, {b}]")));
    }
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = a + h * i as f64;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    Ok(h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b)))
}

/// `∫ₐᵇ f` for either ordering of the limits, with the default panel density.
pub fn integrate_signed<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    let n = default_panels(b - a);
    if a <= b {
        integrate(f, a, b, n)
    } else {
        integrate(f, b, a, n).map(|v| -v)
    }
}

/// `∫_a^t f` on Simpson cells of width `1/64` (8 panels each) anchored at
/// `a`, with one partial cell at the end.
///
/// Unlike [`integrate_signed`], whose panel width changes with `t`, the
/// quadrature error here varies smoothly with `t`, so the result can be
/// differenced numerically.
pub fn integrate_anchored<F: Fn(f64) -> f64>(f: F, a: f64, t: f64) -> Result<f64> {
    const CELL: f64 = 1.0 / 64.0;
    const PANELS: usize = 8;
    if !a.is_finite() || !t.is_finite() {
        return Err(Error::BadInterval(format!("[{a}, {t}]")));
    }
    let dir = if t >= a { 1.0 } else { -1.0 };
    let len = (t - a).abs();
    let whole = (len / CELL).floor() as usize;
    let mut acc = 0.0;
    for k in 0..whole {
        let (x0, x1) = (a + dir * CELL * k as f64, a + dir * CELL * (k + 1) as f64);
        acc += integrate(&f, x0.min(x1), x0.max(x1), PANELS)?;
    }
    let x0 = a + dir * CELL * whole as f64;
    acc += integrate(&f, x0.min(t), x0.max(t), PANELS)?;
    Ok(dir * acc)
}

/// One classical RK4 step for `y' = f(s, y)`.
pub fn rk4_step<const N: usize, F>(f: &F, s: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let axpy = |y: &[f64; N], k: &[f64; N], c: f64| {
        let mut out = *y;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += c * ki;
        }
        out
    };
    let k1 = f(s, y);
    let k2 = f(s + h / 2.0, &axpy(y, &k1, h / 2.0));
    let k3 = f(s + h / 2.0, &axpy(y, &k2, h / 2.0));
    let k4 = f(s + h, &axpy(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Sampled solution of a third-order scalar ODE: grid and `(y, y′, y″)` at
/// every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub s: Vec<f64>,
    pub state: Vec<[f64; 3]>,
}

impl OdeSolution {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Uniform step actually used.
    pub fn step(&self) -> f64 {
        if self.s.len() < 2 {
            0.0
        } else {
            self.s[1] - self.s[0]
        }
    }

    pub fn last(&self) -> [f64; 3] {
        *self.state.last().expect("solution has at least one sample")
    }
}

/// Integrates `y‴ + p2·y″ + p1·y′ + p0·y = 0` from `s0` to `s1` with RK4.
///
/// The step is shrunk to `(s1 − s0)/ceil((s1 − s0)/h)` so that `s1` is a grid
/// point.
pub fn solve_linear_ode3<P2, P1, P0>(
    p2: P2,
    p1: P1,
    p0: P0,
    init: [f64; 3],
    s0: f64,
    s1: f64,
    h: f64,
) -> Result<OdeSolution>
where
    P2: Fn(f64) -> f64,
    P1: Fn(f64) -> f64,
    P0: Fn(f64) -> f64,
{
    if !(h > 0.0) || !(s0 < s1) || !s0.is_finite() || !s1.is_finite() {
        return Err(Error::BadInterval(format!("s0 = {s0}, s1 = {s1}, h = {h}")));
    }
    let steps = ((s1 - s0) / h).ceil().max(1.0) as usize;
    let h = (s1 - s0) / steps as f64;
    let rhs = |s: f64, y: &[f64; 3]| [y[1], y[2], -p2(s) * y[2] - p1(s) * y[1] - p0(s) * y[0]];

    let mut grid = Vec::with_capacity(steps + 1);
    let mut state = Vec::with_capacity(steps + 1);
    let mut y = init;
    grid.push(s0);
    state.push(y);
    for i in 0..steps {
        let s = s0 + h * i as f64;
        y = rk4_step(&rhs, s, &y, h);
        let s_next = if i + 1 == steps { s1 } else { s0 + h * (i + 1) as f64 };
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonfiniteState(s_next));
        }
        grid.push(s_next);
        state.push(y);
    }
    Ok(OdeSolution { s: grid, state })
}

/// Bisection for `g(t) = target` on a bracket where `g` is increasing.
pub fn invert_monotone<G: Fn(f64) -> f64>(g: G, target: f64, bracket: [f64; 2], tol: f64) -> Result<f64> {
    let [mut lo, mut hi] = bracket;
    let (g_lo, g_hi) = (g(lo), g(hi));
    if !(lo <= hi) || !(g_lo <= target && target <= g_hi) {
        return Err(Error::BracketInvalid { target, g_lo, g_hi });
    }
    if (g_lo - target).abs() <= tol {
        return Ok(lo);
    }
    if (g_hi - target).abs() <= tol {
        return Ok(hi);
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if (gm - target).abs() <= tol || mid <= lo || mid >= hi {
            break;
        }
        if gm < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_examples() {
        assert_eq!(integrate(|_| 1.0, 0.0, 1.0, 2).unwrap(), 1.0);
        assert_eq!(integrate(|u| (0.0 * u).cosh(), 0.0, 2.0, 4).unwrap(), 2.0);
        assert!((integrate(|u| u * u, 0.0, 1.0, 2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn simpson_rejects_bad_panels() {
        assert_eq!(integrate(|u| u, 0.0, 1.0, 3), Err(Error::BadPanelCount(3)));
        assert_eq!(integrate(|u| u, 0.0, 1.0, 0), Err(Error::BadPanelCount(0)));
        assert!(integrate(|u| u, 1.0, 0.0, 2).is_err());
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let exact = |a: f64, b: f64| {
            let prim = |x: f64| 0.25 * x.powi(4) - x.powi(3) / 3.0 + 0.5 * x * x + 2.0 * x;
            prim(b) - prim(a)
        };
        for &(a, b, n) in &[(0.0, 1.0, 2), (-1.0, 2.0, 6), (0.5, 0.75, 10)] {
            let v = integrate(|x| x.powi(3) - x * x + x + 2.0, a, b, n).unwrap();
            assert!((v - exact(a, b)).abs() <= 1e-14, "{a} {b} {n}");
        }
    }

    #[test]
    fn ode_polynomial_exact() {
        let sol = solve_linear_ode3(|_| 0.0, |_| 0.0, |_| 0.0, [0.0, 1.0, 0.0], 0.0, 1.0, 0.1).unwrap();
        for (s, y) in sol.s.iter().zip(&sol.state) {
            assert!((y[0] - s).abs() < 1e-15);
        }
    }

    #[test]
    fn ode_constant_coefficient() {
        let sol = solve_linear_ode3(|_| 0.0, |_| 4.0, |_| 0.0, [0.0, 2.0, 0.0], 0.0, 1.0, 1e-3).unwrap();
        assert_eq!(sol.s.len(), 1001);
        assert!((sol.last()[0] - 2f64.sin()).abs() <= 1e-8);
    }

    #[test]
    fn ode_fourth_order_convergence() {
        let err = |h: f64| {
            let sol = solve_linear_ode3(|_| 0.0, |_| 4.0, |_| 0.0, [0.0, 2.0, 0.0], 0.0, 1.0, h).unwrap();
            (sol.last()[0] - 2f64.sin()).abs()
        };
        let ratio = err(0.05) / err(0.025);
        assert!(ratio >= 14.0, "ratio {ratio}");
    }

    #[test]
    fn ode_rejects_bad_step() {
        assert!(solve_linear_ode3(|_| 0.0, |_| 0.0, |_| 0.0, [0.0; 3], 0.0, 1.0, 0.0).is_err());
        assert!(solve_linear_ode3(|_| 0.0, |_| 0.0, |_| 0.0, [0.0; 3], 1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn ode_detects_blowup() {
        let r = solve_linear_ode3(|_| 0.0, |_| 0.0, |_| -1e200, [1.0, 0.0, 0.0], 0.0, 100.0, 0.5);
        assert!(matches!(r, Err(Error::NonfiniteState(_))));
    }

    #[test]
    fn inversion_examples() {
        assert!((invert_monotone(|t| t, 0.5, [0.0, 1.0], 1e-14).unwrap() - 0.5).abs() < 1e-14);
        assert!((invert_monotone(|t| t / 2.0, 1.0, [0.0, 4.0], 1e-14).unwrap() - 2.0).abs() < 1e-13);
        let t = invert_monotone(|t| t * t * t, 1.0, [0.0, 2.0], 1e-12).unwrap();
        assert!((t * t * t - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn inversion_rejects_unbracketed() {
        assert!(matches!(
            invert_monotone(|t| t, 2.0, [0.0, 1.0], 1e-12),
            Err(Error::BracketInvalid { .. })
        ));
    }
}
