//! Closed-form curves of constant equiaffine curvature.
//!
//! | family       | real part `α`                          | `κ_γ`     |
//! |--------------|----------------------------------------|-----------|
//! | `Flat`       | `(s, s²/2)`                            | `0`       |
//! | `PureDual`   | `(s, s²/2)`                            | `εm`      |
//! | `Elliptic`   | `(sin(ws)/w, −cos(ws)/r)`, `w = √r`    | `r`       |
//! | `Hyperbolic` | `(sinh(ws)/w, −cosh(ws)/r)`, `w = √−r` | `r`       |
//!
//! The dual parts carry the integration constants `c0, c1, c2` and the
//! translation `β0`.

use std::any::Any;

use nalgebra::Matrix2;

use crate::curve::{Curve, CurveKind, CurveSpec, Domain, Polynomial};
use crate::dual::{DualScalar, DualVec2, Vec2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquiaffineFamilyId {
    Flat,
    PureDual,
    Elliptic,
    Hyperbolic,
}

impl EquiaffineFamilyId {
    pub fn as_str(self) -> &'static str {
        match self {
            EquiaffineFamilyId::Flat => "flat",
            EquiaffineFamilyId::PureDual => "pure-dual",
            EquiaffineFamilyId::Elliptic => "elliptic",
            EquiaffineFamilyId::Hyperbolic => "hyperbolic",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "flat" => EquiaffineFamilyId::Flat,
            "pure-dual" => EquiaffineFamilyId::PureDual,
            "elliptic" => EquiaffineFamilyId::Elliptic,
            "hyperbolic" => EquiaffineFamilyId::Hyperbolic,
            _ => return None,
        })
    }
}

/// Parameters of an equiaffine family.
///
/// `Flat` reads `c0, c1, c2`; `PureDual` additionally reads `m`; `Elliptic`
/// and `Hyperbolic` read `r_alpha, c0, c1`. Every family reads `beta0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquiaffineFamilyParams {
    pub family: EquiaffineFamilyId,
    pub r_alpha: f64,
    pub m: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub beta0: Vec2,
}

impl EquiaffineFamilyParams {
    pub fn flat(c0: f64, c1: f64, c2: f64, beta0: Vec2) -> Self {
        Self {
            family: EquiaffineFamilyId::Flat,
            r_alpha: 0.0,
            m: 0.0,
            c0,
            c1,
            c2,
            beta0,
        }
    }

    pub fn pure_dual(m: f64, c0: f64, c1: f64, c2: f64, beta0: Vec2) -> Self {
        Self {
            family: EquiaffineFamilyId::PureDual,
            m,
            ..Self::flat(c0, c1, c2, beta0)
        }
    }

    pub fn elliptic(r_alpha: f64, c0: f64, c1: f64, beta0: Vec2) -> Self {
        Self {
            family: EquiaffineFamilyId::Elliptic,
            r_alpha,
            ..Self::flat(c0, c1, 0.0, beta0)
        }
    }

    pub fn hyperbolic(r_alpha: f64, c0: f64, c1: f64, beta0: Vec2) -> Self {
        Self {
            family: EquiaffineFamilyId::Hyperbolic,
            ..Self::elliptic(r_alpha, c0, c1, beta0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.r_alpha, self.m, self.c0, self.c1, self.c2, self.beta0.x, self.beta0.y];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParams("non-finite family parameter".into()));
        }
        match self.family {
            EquiaffineFamilyId::Elliptic if !(self.r_alpha > 0.0) => Err(Error::BadParams(format!(
                "elliptic family needs r > 0, got {}",
                self.r_alpha
            ))),
            EquiaffineFamilyId::Hyperbolic if !(self.r_alpha < 0.0) => Err(Error::BadParams(
                format!("hyperbolic family needs r < 0, got {}", self.r_alpha),
            )),
            EquiaffineFamilyId::PureDual if self.m == 0.0 => {
                Err(Error::BadParams("pure-dual family needs m != 0".into()))
            }
            _ => Ok(()),
        }
    }

    /// The constant equiaffine curvature the family carries.
    pub fn expected_curvature(&self) -> DualScalar {
        match self.family {
            EquiaffineFamilyId::Flat => DualScalar::ZERO,
            EquiaffineFamilyId::PureDual => DualScalar::raw(0.0, self.m),
            EquiaffineFamilyId::Elliptic | EquiaffineFamilyId::Hyperbolic => {
                DualScalar::raw(self.r_alpha, 0.0)
            }
        }
    }
}

/// Scalar component: polynomial, or `a·cos(ws) + b·sin(ws)`, or
/// `a·cosh(ws) + b·sinh(ws)`.
#[derive(Debug, Clone, PartialEq)]
enum Component {
    Poly(Polynomial),
    Trig { w: f64, a: f64, b: f64 },
    Hyp { w: f64, a: f64, b: f64 },
}

impl Component {
    fn jet(&self, s: f64) -> [f64; 4] {
        match self {
            Component::Poly(p) => p.jet(s),
            Component::Trig { w, a, b } => {
                let (sn, cs) = (w * s).sin_cos();
                // d/ds (a, b) in the (cos, sin) basis is (w·b, −w·a).
                let mut coef = (*a, *b);
                std::array::from_fn(|_| {
                    let v = coef.0 * cs + coef.1 * sn;
                    coef = (w * coef.1, -w * coef.0);
                    v
                })
            }
            Component::Hyp { w, a, b } => {
                let (sh, ch) = ((w * s).sinh(), (w * s).cosh());
                // d/ds (a, b) in the (cosh, sinh) basis is (w·b, w·a).
                let mut coef = (*a, *b);
                std::array::from_fn(|_| {
                    let v = coef.0 * ch + coef.1 * sh;
                    coef = (w * coef.1, w * coef.0);
                    v
                })
            }
        }
    }
}

/// A member of one of the equiaffine families, with closed-form jets.
#[derive(Debug, Clone)]
pub struct EquiaffineCurve {
    params: EquiaffineFamilyParams,
    alpha: [Component; 2],
    beta: [Component; 2],
}

impl EquiaffineCurve {
    pub fn new(params: EquiaffineFamilyParams) -> Result<Self> {
        params.validate()?;
        let EquiaffineFamilyParams { r_alpha: r, m, c0, c1, c2, .. } = params;
        let poly = |c: &[f64]| Component::Poly(Polynomial::new(c.to_vec()));
        let parabola = [poly(&[0.0, 1.0]), poly(&[0.0, 0.0, 0.5])];
        let (alpha, beta) = match params.family {
            EquiaffineFamilyId::Flat => (parabola, [poly(&[0.0, c1, c0]), poly(&[0.0, c2, -c1 / 2.0])]),
            EquiaffineFamilyId::PureDual => (
                parabola,
                [
                    poly(&[0.0, c1, c0, -m / 6.0]),
                    poly(&[0.0, c2, -c1 / 2.0, 0.0, -m / 24.0]),
                ],
            ),
            EquiaffineFamilyId::Elliptic => {
                let w = r.sqrt();
                (
                    [
                        Component::Trig { w, a: 0.0, b: 1.0 / w },
                        Component::Trig { w, a: -1.0 / r, b: 0.0 },
                    ],
                    [
                        Component::Trig { w, a: c0, b: c1 },
                        Component::Trig { w, a: c1 / w, b: -c0 / w },
                    ],
                )
            }
            EquiaffineFamilyId::Hyperbolic => {
                let w = (-r).sqrt();
                (
                    [
                        Component::Hyp { w, a: 0.0, b: 1.0 / w },
                        Component::Hyp { w, a: -1.0 / r, b: 0.0 },
                    ],
                    [
                        Component::Hyp { w, a: c0, b: c1 },
                        Component::Hyp { w, a: -c1 / w, b: -c0 / w },
                    ],
                )
            }
        };
        Ok(Self { params, alpha, beta })
    }

    pub fn params(&self) -> &EquiaffineFamilyParams {
        &self.params
    }
}

impl Curve for EquiaffineCurve {
    fn kind(&self) -> CurveKind {
        CurveKind::Catalog
    }

    fn point(&self, t: f64) -> DualVec2 {
        self.exact_jet(t).map(|d| d[0]).unwrap_or(DualVec2::ZERO)
    }

    fn exact_jet(&self, s: f64) -> Option<[DualVec2; 4]> {
        let ax = self.alpha[0].jet(s);
        let ay = self.alpha[1].jet(s);
        let bx = self.beta[0].jet(s);
        let by = self.beta[1].jet(s);
        Some(std::array::from_fn(|k| {
            let shift = if k == 0 { self.params.beta0 } else { Vec2::zeros() };
            DualVec2::from_parts_raw(Vec2::new(ax[k], ay[k]), Vec2::new(bx[k], by[k]) + shift)
        }))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Closed-form curve of the selected family on `domain`.
pub fn make_family(p: &EquiaffineFamilyParams, domain: Domain) -> Result<CurveSpec> {
    Ok(CurveSpec::new(EquiaffineCurve::new(*p)?, domain))
}

/// Linear map `A = [[c1·w, −c0·r], [−c0, −c1·w]]` with `β = Aα + β0` for the
/// elliptic (`w = √r`) and hyperbolic (`w = √−r`) families. `det A` equals
/// `−r(c0² + c1²)` and `−r(c0² − c1²)` respectively.
pub fn alpha_to_beta_map(p: &EquiaffineFamilyParams) -> Option<Matrix2<f64>> {
    let w = match p.family {
        EquiaffineFamilyId::Elliptic => p.r_alpha.sqrt(),
        EquiaffineFamilyId::Hyperbolic => (-p.r_alpha).sqrt(),
        _ => return None,
    };
    Some(Matrix2::new(p.c1 * w, -p.c0 * p.r_alpha, -p.c0, -p.c1 * w))
}

/// Rescales `(c0, c1)` so the map of [`alpha_to_beta_map`] is area
/// preserving: `r(c0² + c1²) = 1` (elliptic, `det A = −1`) or
/// `|r|(c0² − c1²) = 1` with `|c0| > |c1|` (hyperbolic, `det A = +1`).
pub fn normalized_map_params(p: &EquiaffineFamilyParams) -> Result<EquiaffineFamilyParams> {
    p.validate()?;
    let norm = match p.family {
        EquiaffineFamilyId::Elliptic => p.r_alpha * (p.c0 * p.c0 + p.c1 * p.c1),
        EquiaffineFamilyId::Hyperbolic => {
            if !(p.c0.abs() > p.c1.abs()) {
                return Err(Error::BadParams("hyperbolic map needs |c0| > |c1|".into()));
            }
            -p.r_alpha * (p.c0 * p.c0 - p.c1 * p.c1)
        }
        _ => return Err(Error::BadParams("map exists only for elliptic and hyperbolic families".into())),
    };
    if !(norm > 0.0) {
        return Err(Error::BadParams("c0 and c1 cannot both vanish".into()));
    }
    let k = norm.sqrt().recip();
    Ok(EquiaffineFamilyParams {
        c0: p.c0 * k,
        c1: p.c1 * k,
        ..*p
    })
}
