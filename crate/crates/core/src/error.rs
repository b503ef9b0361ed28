use thiserror::Error;

/// Errors raised by the dual-curve library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value {0} rejected")]
    NonFinite(f64),

    #[error("division by a dual number with zero real part")]
    ZeroRealPart,

    #[error("square root of a dual number with non-positive real part {0}")]
    NonpositiveRealPart(f64),

    #[error("parameter {t} outside domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("finite-difference stencil at {t} reaches outside domain [{lo}, {hi}]")]
    StencilClipped { t: f64, lo: f64, hi: f64 },

    #[error("invalid domain [{0}, {1}]")]
    BadDomain(f64, f64),

    #[error("panel count {0} must be even and at least 2")]
    BadPanelCount(usize),

    #[error("invalid integration interval or step: {0}")]
    BadInterval(String),

    #[error("integrator state became non-finite at s = {0}")]
    NonfiniteState(f64),

    #[error("target {target} not bracketed by [{g_lo}, {g_hi}]")]
    BracketInvalid { target: f64, g_lo: f64, g_hi: f64 },

    #[error("degenerate point at t = {0}: (α′, α″) vanishes")]
    DegeneratePoint(f64),

    #[error("curve does not admit an arc-length reparametrization: residual {residual} at t = {t} exceeds {tolerance}")]
    NotAdmissible { t: f64, residual: f64, tolerance: f64 },

    #[error("jet at t = {t} is not unit speed: {detail}")]
    NotUnitSpeed { t: f64, detail: String },

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("singular least-squares fit: {0}")]
    SingularFit(String),

    #[error("matrix is not unimodular: det = {re} + {du}ε")]
    NotUnimodular { re: f64, du: f64 },

    #[error("matrix is not a Lorentzian isometry: |AᵀMA − M| = {0}")]
    NotIsometry(f64),

    #[error("curvature undefined at t = {0}: α″ = 0 while γ″ ≠ 0")]
    CurvatureUndefined(f64),

    #[error("straight point at t = {0}: γ″ = 0")]
    StraightPoint(f64),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("expression error: {0}")]
    Expr(String),

    #[error("curve document error: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
