//! Central finite-difference stencils for `D²`-valued curves.

use crate::dual::DualVec2;

/// Plain central stencils: 3-point for the first two derivatives with step
/// `h`, 5-point for the third derivative with step `h3`.
pub fn central_jet<F: Fn(f64) -> DualVec2>(f: &F, t: f64, h: f64, h3: f64) -> [DualVec2; 4] {
    let f0 = f(t);
    let (fp, fm) = (f(t + h), f(t - h));
    [f0, d1(fp, fm, h), d2(fp, f0, fm, h), d3(f, t, h3)]
}

/// Central stencils at steps `h` and `2h` combined by one Richardson step,
/// which cancels the leading `h²` error term of each stencil.
///
/// The widest evaluation is at `t ± 4h`.
pub fn richardson_jet<F: Fn(f64) -> DualVec2>(f: &F, t: f64, h: f64) -> [DualVec2; 4] {
    let f0 = f(t);
    let (fp1, fm1) = (f(t + h), f(t - h));
    let (fp2, fm2) = (f(t + 2.0 * h), f(t - 2.0 * h));
    let extrapolate = |fine: DualVec2, coarse: DualVec2| (fine * 4.0 - coarse) * (1.0 / 3.0);
    [
        f0,
        extrapolate(d1(fp1, fm1, h), d1(fp2, fm2, 2.0 * h)),
        extrapolate(d2(fp1, f0, fm1, h), d2(fp2, f0, fm2, 2.0 * h)),
        extrapolate(d3(f, t, h), d3(f, t, 2.0 * h)),
    ]
}

fn d1(fp: DualVec2, fm: DualVec2, h: f64) -> DualVec2 {
    (fp - fm) * (0.5 / h)
}

fn d2(fp: DualVec2, f0: DualVec2, fm: DualVec2, h: f64) -> DualVec2 {
    (fp - f0 * 2.0 + fm) * (1.0 / (h * h))
}

fn d3<F: Fn(f64) -> DualVec2>(f: &F, t: f64, h: f64) -> DualVec2 {
    let (p1, p2) = (f(t + h), f(t + 2.0 * h));
    let (m1, m2) = (f(t - h), f(t - 2.0 * h));
    (p2 - p1 * 2.0 + m1 * 2.0 - m2) * (0.5 / (h * h * h))
}

/// Central first derivative of a real function with one Richardson step.
pub fn richardson_d1<F: Fn(f64) -> f64>(f: &F, t: f64, h: f64) -> f64 {
    let fine = (f(t + h) - f(t - h)) / (2.0 * h);
    let coarse = (f(t + 2.0 * h) - f(t - 2.0 * h)) / (4.0 * h);
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::Vec2;

    fn curve(t: f64) -> DualVec2 {
        DualVec2::from_parts_raw(Vec2::new(t.sin(), t.exp()), Vec2::new(t * t * t, t.cosh()))
    }

    #[test]
    fn richardson_beats_plain_stencil() {
        let t: f64 = 0.4;
        let exact3 = DualVec2::from_parts_raw(
            Vec2::new(-t.cos(), t.exp()),
            Vec2::new(6.0, t.sinh()),
        );
        let plain = central_jet(&curve, t, 1e-3, 1e-3);
        let rich = richardson_jet(&curve, t, 1e-3);
        assert!(rich[3].dist(&exact3) < 1e-6);
        assert!(rich[3].dist(&exact3) < plain[3].dist(&exact3));
        let exact1 = DualVec2::from_parts_raw(Vec2::new(t.cos(), t.exp()), Vec2::new(3.0 * t * t, t.sinh()));
        assert!(rich[1].dist(&exact1) < 1e-11);
    }

    #[test]
    fn scalar_richardson() {
        let d = richardson_d1(&|x: f64| x.sin(), 1.0, 1e-3);
        assert!((d - 1f64.cos()).abs() < 1e-12);
    }
}
