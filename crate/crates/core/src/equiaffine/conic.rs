//! Conic fits for the real and dual parts of the constant-curvature families.

use nalgebra::{DMatrix, DVector};

use crate::dual::Vec2;
use crate::error::{Error, Result};

/// Fit of `(x − x0)² + r(y − y0)² = a²` to sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFit {
    pub a: f64,
    pub x0: f64,
    pub y0: f64,
    /// `max |((x − x0)² + r(y − y0)²)/a² − 1|` over the samples.
    pub max_residual: f64,
}

/// Least-squares fit of `(x − x0)²/a² + r(y − y0)²/a² = 1`.
///
/// Expanding gives `x² + ry² = 2x0·x + 2r·y0·y + K` with
/// `K = a² − x0² − r·y0²`, which is linear in `(x0, y0, K)`.
pub fn quadratic_form_check(samples: &[Vec2], r_alpha: f64) -> Result<ConicFit> {
    if samples.len() < 5 {
        return Err(Error::BadParams(format!("need at least 5 samples, got {}", samples.len())));
    }
    if r_alpha == 0.0 || !r_alpha.is_finite() {
        return Err(Error::BadParams(format!("r_alpha must be finite and nonzero, got {r_alpha}")));
    }
    let n = samples.len();
    let m = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => 2.0 * samples[i].x,
        1 => 2.0 * r_alpha * samples[i].y,
        _ => 1.0,
    });
    let rhs = DVector::from_fn(n, |i, _| samples[i].x.powi(2) + r_alpha * samples[i].y.powi(2));
    let svd = m.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    if !(smax > 0.0) || sv.min() <= 1e-10 * smax {
        return Err(Error::SingularFit("sample points do not determine a conic".into()));
    }
    let p = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::SingularFit(e.to_string()))?;
    let (x0, y0, k) = (p[0], p[1], p[2]);
    let a2 = k + x0 * x0 + r_alpha * y0 * y0;
    if !(a2 > 0.0) {
        return Err(Error::SingularFit(format!("fitted a² = {a2} is not positive")));
    }
    let max_residual = samples
        .iter()
        .map(|v| (((v.x - x0).powi(2) + r_alpha * (v.y - y0).powi(2)) / a2 - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(ConicFit {
        a: a2.sqrt(),
        x0,
        y0,
        max_residual,
    })
}

/// `max |r x² + r² y² − 1|` over the samples, the centred conic carrying the
/// real part of the elliptic and hyperbolic families.
pub fn real_conic_residual(samples: &[Vec2], r_alpha: f64) -> f64 {
    samples
        .iter()
        .map(|v| (r_alpha * v.x * v.x + r_alpha * r_alpha * v.y * v.y - 1.0).abs())
        .fold(0.0, f64::max)
}
