//! JSON curve documents: `{"kind", "family", "params", "domain"}`.
//!
//! Kinds and their `params`:
//!
//! * `catalog` with `family` one of `flat`, `pure-dual`, `elliptic`,
//!   `hyperbolic` (keys `r`, `m`, `c0`, `c1`, `c2`, `beta0`) or
//!   `lorentz-const` (`r`, `m`, `n`, `beta0`, `causal`), `kappa-real-only`
//!   (`theta`, `m`, `beta0`, `causal`), `straight-line` (`p`, `q`, `v`, `w`,
//!   `f`).
//! * `analytic`: `alpha` and optionally `beta`, each a pair of expressions.
//! * `lightlike`: `p`, `v` and `beta`, the latter a pair of expressions or a
//!   nested document.
//! * `transformed`: `transform` (see [`TransformDoc`]) and `base`, a nested
//!   document. The domain must equal the base domain.
//!
//! Missing numeric keys default to zero, vectors to `[0, 0]`, `causal` to
//! `spacelike`. Unknown keys are rejected.

use nalgebra::Matrix2;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::curve::{AnalyticCurve, CausalClass, CurveSpec, Domain, LightlikeCurve, Polynomial, ScalarFn, ThetaSpec};
use crate::dual::{DualScalar, DualVec2, Mat2D, Vec2};
use crate::equiaffine::{apply_equiaffine, make_family, EquiaffineFamilyId, EquiaffineFamilyParams};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::lorentz::{
    apply_lorentz_isometry, generate_isometry, make_lorentz_family, LorentzFamilyId, LorentzFamilyParams,
    LorentzIsometry,
};
use crate::verify::Geometry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Catalog,
    Analytic,
    Lightlike,
    Transformed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub kind: DocKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub domain: [f64; 2],
}

/// Group action applied by a `transformed` document.
///
/// Equiaffine: `matrix` (real part), `matrix_dual`, `offset`, `offset_dual`;
/// the dual determinant must be `1 + 0ε`. Lorentz: either `matrix` or
/// `boost` with `reflect_x`/`reflect_y`, plus the offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformDoc {
    pub kind: Geometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_dual: Option<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boost: Option<f64>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub reflect_x: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub reflect_y: bool,
    #[serde(default)]
    pub offset: [f64; 2],
    #[serde(default)]
    pub offset_dual: [f64; 2],
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn doc_err(e: impl std::fmt::Display) -> Error {
    Error::Document(e.to_string())
}

fn vec2(v: [f64; 2]) -> Vec2 {
    Vec2::new(v[0], v[1])
}

fn mat(m: [[f64; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

fn expr_fn(src: &str) -> Result<ScalarFn> {
    ScalarFn::from_expr(Expr::parse(src)?)
}

fn causal(name: &str) -> Result<CausalClass> {
    match name {
        "spacelike" => Ok(CausalClass::Spacelike),
        "timelike" => Ok(CausalClass::Timelike),
        _ => Err(Error::BadParams(format!("causal must be spacelike or timelike, got `{name}`"))),
    }
}

fn spacelike() -> String {
    "spacelike".into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquiaffineParams {
    #[serde(default, alias = "r_alpha")]
    r: f64,
    #[serde(default)]
    m: f64,
    #[serde(default)]
    c0: f64,
    #[serde(default)]
    c1: f64,
    #[serde(default)]
    c2: f64,
    #[serde(default)]
    beta0: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstParams {
    #[serde(default)]
    r: f64,
    #[serde(default)]
    m: f64,
    #[serde(default)]
    n: f64,
    #[serde(default)]
    beta0: [f64; 2],
    #[serde(default = "spacelike")]
    causal: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ThetaDoc {
    Coeffs(Vec<f64>),
    Curvature {
        curvature: String,
        #[serde(default)]
        origin: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RealOnlyParams {
    theta: ThetaDoc,
    #[serde(default)]
    m: f64,
    #[serde(default)]
    beta0: [f64; 2],
    #[serde(default = "spacelike")]
    causal: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StraightParams {
    #[serde(default)]
    p: [f64; 2],
    #[serde(default)]
    q: [f64; 2],
    v: [f64; 2],
    #[serde(default)]
    w: [f64; 2],
    f: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyticParams {
    alpha: [String; 2],
    #[serde(default)]
    beta: Option<[String; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BetaDoc {
    Exprs([String; 2]),
    Doc(Box<CurveDoc>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LightlikeParams {
    #[serde(default)]
    p: [f64; 2],
    v: [f64; 2],
    beta: BetaDoc,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformedParams {
    transform: TransformDoc,
    base: Box<CurveDoc>,
}

impl CurveDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(doc_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn catalog(family: &str, params: Map<String, Value>, domain: [f64; 2]) -> Self {
        Self {
            kind: DocKind::Catalog,
            family: Some(family.to_string()),
            params,
            domain,
        }
    }

    /// `transform` applied to `self`.
    pub fn transformed(&self, transform: &TransformDoc) -> Self {
        let mut params = Map::new();
        params.insert("transform".into(), serde_json::to_value(transform).expect("serializable"));
        params.insert("base".into(), serde_json::to_value(self).expect("serializable"));
        Self {
            kind: DocKind::Transformed,
            family: None,
            params,
            domain: self.domain,
        }
    }

    fn params<T: DeserializeOwned>(&self) -> Result<T> {
        let what = self.family.as_deref().unwrap_or(match self.kind {
            DocKind::Catalog => "catalog",
            DocKind::Analytic => "analytic",
            DocKind::Lightlike => "lightlike",
            DocKind::Transformed => "transformed",
        });
        serde_json::from_value(Value::Object(self.params.clone())).map_err(|e| doc_err(format!("{what} params: {e}")))
    }

    /// Geometry the curve naturally belongs to, if the document fixes one.
    pub fn geometry(&self) -> Option<Geometry> {
        match self.kind {
            DocKind::Catalog => {
                let f = self.family.as_deref()?;
                if EquiaffineFamilyId::parse(f).is_some() {
                    Some(Geometry::Equiaffine)
                } else {
                    LorentzFamilyId::parse(f).map(|_| Geometry::Lorentz)
                }
            }
            DocKind::Analytic => None,
            DocKind::Lightlike => Some(Geometry::Lorentz),
            DocKind::Transformed => self.params::<TransformedParams>().ok().map(|p| p.transform.kind),
        }
    }

    pub fn build(&self) -> Result<CurveSpec> {
        let domain = Domain::new(self.domain[0], self.domain[1])?;
        match self.kind {
            DocKind::Catalog => self.build_catalog(domain),
            DocKind::Analytic => {
                let p: AnalyticParams = self.params()?;
                let beta = p.beta.unwrap_or_else(|| ["0".into(), "0".into()]);
                let curve = AnalyticCurve::new(
                    [expr_fn(&p.alpha[0])?, expr_fn(&p.alpha[1])?],
                    [expr_fn(&beta[0])?, expr_fn(&beta[1])?],
                );
                Ok(CurveSpec::new(curve, domain))
            }
            DocKind::Lightlike => {
                let p: LightlikeParams = self.params()?;
                let beta = match p.beta {
                    BetaDoc::Exprs(e) => CurveSpec::new(
                        AnalyticCurve::real([expr_fn(&e[0])?, expr_fn(&e[1])?]),
                        domain,
                    ),
                    BetaDoc::Doc(d) => d.build()?,
                };
                Ok(CurveSpec::new(LightlikeCurve::new(vec2(p.p), vec2(p.v), beta, &domain)?, domain))
            }
            DocKind::Transformed => {
                let p: TransformedParams = self.params()?;
                if p.base.domain != self.domain {
                    return Err(doc_err("transformed domain must equal the base domain"));
                }
                p.transform.apply(&p.base.build()?)
            }
        }
    }

    fn build_catalog(&self, domain: Domain) -> Result<CurveSpec> {
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| doc_err("catalog document needs a family"))?;
        if let Some(id) = EquiaffineFamilyId::parse(family) {
            let p: EquiaffineParams = self.params()?;
            let b0 = vec2(p.beta0);
            let params = match id {
                EquiaffineFamilyId::Flat => EquiaffineFamilyParams::flat(p.c0, p.c1, p.c2, b0),
                EquiaffineFamilyId::PureDual => EquiaffineFamilyParams::pure_dual(p.m, p.c0, p.c1, p.c2, b0),
                EquiaffineFamilyId::Elliptic => EquiaffineFamilyParams::elliptic(p.r, p.c0, p.c1, b0),
                EquiaffineFamilyId::Hyperbolic => EquiaffineFamilyParams::hyperbolic(p.r, p.c0, p.c1, b0),
            };
            return make_family(&params, domain);
        }
        let params = match LorentzFamilyId::parse(family) {
            Some(LorentzFamilyId::ConstCurvature) => {
                let p: ConstParams = self.params()?;
                LorentzFamilyParams::ConstCurvature {
                    r: p.r,
                    m: p.m,
                    n: p.n,
                    beta0: vec2(p.beta0),
                    causal: causal(&p.causal)?,
                }
            }
            Some(LorentzFamilyId::KappaRealOnly) => {
                let p: RealOnlyParams = self.params()?;
                let theta = match p.theta {
                    ThetaDoc::Coeffs(c) => ThetaSpec::Polynomial(Polynomial::new(c)),
                    ThetaDoc::Curvature { curvature, origin } => ThetaSpec::CurvatureIntegral {
                        curvature: expr_fn(&curvature)?,
                        origin,
                    },
                };
                LorentzFamilyParams::KappaRealOnly {
                    theta,
                    m: p.m,
                    beta0: vec2(p.beta0),
                    causal: causal(&p.causal)?,
                }
            }
            Some(LorentzFamilyId::StraightLine) => {
                let p: StraightParams = self.params()?;
                LorentzFamilyParams::StraightLine {
                    p: vec2(p.p),
                    q: vec2(p.q),
                    v: vec2(p.v),
                    w: vec2(p.w),
                    f: expr_fn(&p.f)?,
                }
            }
            Some(LorentzFamilyId::Lightlike) => {
                return Err(doc_err("lightlike curves use kind \"lightlike\""));
            }
            None => return Err(doc_err(format!("unknown family `{family}`"))),
        };
        make_lorentz_family(&params, domain)
    }
}

impl TransformDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(doc_err)
    }

    fn offset_vec(&self) -> DualVec2 {
        DualVec2::new(
            DualScalar::raw(self.offset[0], self.offset_dual[0]),
            DualScalar::raw(self.offset[1], self.offset_dual[1]),
        )
    }

    pub fn apply(&self, spec: &CurveSpec) -> Result<CurveSpec> {
        let b = self.offset_vec();
        if b.real_part().iter().chain(b.dual_part().iter()).any(|v| !v.is_finite()) {
            return Err(Error::BadParams("non-finite offset".into()));
        }
        match self.kind {
            Geometry::Equiaffine => {
                if self.boost.is_some() || self.reflect_x || self.reflect_y {
                    return Err(doc_err("boost and reflections apply to lorentz transforms only"));
                }
                let re = self.matrix.ok_or_else(|| doc_err("equiaffine transform needs a matrix"))?;
                let du = self.matrix_dual.unwrap_or([[0.0; 2]; 2]);
                let d = |i: usize, j: usize| DualScalar::new(re[i][j], du[i][j]);
                let a = Mat2D::new(d(0, 0)?, d(0, 1)?, d(1, 0)?, d(1, 1)?);
                apply_equiaffine(&a, &b, spec)
            }
            Geometry::Lorentz => {
                if self.matrix_dual.is_some() {
                    return Err(doc_err("lorentz transforms have a real matrix"));
                }
                let iso = match (self.matrix, self.boost) {
                    (Some(_), Some(_)) => return Err(doc_err("give either matrix or boost, not both")),
                    (Some(m), None) => {
                        if self.reflect_x || self.reflect_y {
                            return Err(doc_err("reflections combine with boost, not matrix"));
                        }
                        LorentzIsometry::new(mat(m), b)?
                    }
                    (None, phi) => {
                        let phi = phi.unwrap_or(0.0);
                        if !phi.is_finite() {
                            return Err(Error::BadParams("non-finite boost".into()));
                        }
                        generate_isometry(phi, self.reflect_x, self.reflect_y, b)
                    }
                };
                apply_lorentz_isometry(&iso, spec)
            }
        }
    }
}
