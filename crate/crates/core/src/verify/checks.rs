//! The check registry. Each suite draws its parameters from its own
//! [`SplitMix64`] stream and records, per parameter set, the worst error
//! over its grid.

use std::collections::BTreeMap;

use super::{fd_curvature_oracle, oracle_jet, CheckPoint, Geometry, SplitMix64, ORACLE_STEP};
use crate::curve::{fd, jet, uniform_grid, AnalyticCurve, CausalClass, CurveSpec, Domain, Polynomial, ScalarFn, ThetaSpec};
use crate::dual::{det2, det_real, lorentz_inner, lorentz_inner_real, DualScalar, DualVec2, Mat2D, Vec2};
use crate::equiaffine::{
    admissibility_residual, alpha_to_beta_map, apply_equiaffine, equiaffine_curvature, make_family,
    normalized_map_params, quadratic_form_check, real_conic_residual, reparametrize_equiaffine, solve_kk_system,
    EquiaffineFamilyId, EquiaffineFamilyParams,
};
use crate::error::Result;
use crate::lorentz::{
    apply_lorentz_isometry, frenet, generate_isometry, is_straight_line, lorentz_admissibility, make_lorentz_family,
    ConstCurvatureCurve, LorentzFamilyParams,
};

pub(crate) type CheckFn = fn(&mut Ctx) -> Result<()>;

pub(crate) struct Ctx {
    pub rng: SplitMix64,
    pub grid: Vec<f64>,
    pub points: Vec<CheckPoint>,
}

impl Ctx {
    pub fn new(rng: SplitMix64) -> Self {
        Self {
            rng,
            grid: Vec::new(),
            points: Vec::new(),
        }
    }

    /// Largest recorded error; NaN wins so that it fails the check.
    pub fn max_error(&self) -> f64 {
        self.points.iter().map(|p| p.max_error).fold(0.0, nan_max)
    }

    /// Evaluates `err` on the grid and records the worst value.
    fn sweep<F: FnMut(f64) -> Result<f64>>(&mut self, params: &[(&str, f64)], mut err: F) -> Result<()> {
        let mut worst = (0.0, self.grid.first().copied().unwrap_or(0.0));
        for &s in &self.grid {
            let e = err(s)?;
            if e.is_nan() || e > worst.0 {
                worst = (e, s);
            }
            if worst.0.is_nan() {
                break;
            }
        }
        self.record(params, worst.0, worst.1);
        Ok(())
    }

    fn record(&mut self, params: &[(&str, f64)], max_error: f64, at: f64) {
        self.points.push(CheckPoint {
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
            max_error,
            at,
        });
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

const CHECKS: &[(&str, f64, CheckFn)] = &[
    ("exeq-unit-speed", 1e-10, exeq_unit_speed),
    ("exeq-curvature", 1e-10, exeq_curvature),
    ("exeq-fd-oracle", 1e-5, exeq_fd_oracle),
    ("exeq-reparametrization", 1e-8, exeq_reparametrization),
    ("eqcurva0-flat", 1e-10, flat_curvature),
    ("eqcurva0-flat-fd", 1e-5, flat_curvature_fd),
    ("eqcurva0-beta-conic", 1e-10, flat_beta_conic),
    ("eqcurva01a-pure-dual", 1e-8, pure_dual),
    ("eqcurva01b-forced-m", 1e-8, elliptic_forced_m),
    ("eqcurva01c-forced-m", 1e-8, hyperbolic_forced_m),
    ("equiaffine-families-fd", 1e-5, equiaffine_families_fd),
    ("kk-system-flat", 1e-9, kk_flat),
    ("kk-system-const", 1e-6, kk_const),
    ("eqcurva02-elliptic-map", 1e-10, elliptic_map),
    ("eqcurva02-elliptic-det", 1e-12, elliptic_det),
    ("eqcurva02-hyperbolic-map", 1e-10, hyperbolic_map),
    ("eqcurva02-hyperbolic-det", 1e-12, hyperbolic_det),
    ("eqcurva02-conics", 1e-9, conics),
    ("sl2d-invariance", 1e-8, sl2d_invariance),
    ("eqrel-decomposition", 1e-10, eqrel_decomposition),
    ("ltnk-frame", 1e-9, ltnk_frame),
    ("ltnk-formulas", 1e-8, ltnk_formulas),
    ("frenet-odes", 1e-7, frenet_odes),
    ("lclass-dual-part", 1e-8, lclass_dual_part),
    ("lclass-real-part", 1e-8, lclass_real_part),
    ("lorentz-families-fd", 1e-5, lorentz_families_fd),
    ("lorentz-k-eq-k-curvature", 1e-8, kk_lorentz_curvature),
    ("lorentz-k-eq-k-admissibility", 1e-10, kk_lorentz_admissibility),
    ("straight-line-criterion", 0.0, straight_line_criterion),
    ("lightlike-construction", 1e-12, lightlike_construction),
    ("causal-swap", 0.0, causal_swap),
    ("lorentz-isometry-invariance", 1e-8, lorentz_isometry_invariance),
];

/// Registered check ids, in run order.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

/// Default tolerance of a registered check.
pub fn default_tolerance(id: &str) -> Option<f64> {
    lookup(id).map(|c| c.1)
}

pub(crate) fn lookup(id: &str) -> Option<(CheckFn, f64)> {
    CHECKS.iter().find(|c| c.0 == id).map(|c| (c.2, c.1))
}

fn dom(lo: f64, hi: f64) -> Domain {
    Domain::new(lo, hi).expect("static domain")
}

const TAU: f64 = std::f64::consts::TAU;

/// `α = (sin s, −cos s)`, `β = (cos s, sin s)`, unit speed with `κ = 1`.
fn worked_example() -> Result<CurveSpec> {
    Ok(CurveSpec::new(
        AnalyticCurve::from_sources(["sin(s)", "-cos(s)", "cos(s)", "sin(s)"])?,
        dom(-1.0, TAU + 1.0),
    ))
}

fn exeq_unit_speed(ctx: &mut Ctx) -> Result<()> {
    let c = worked_example()?;
    ctx.grid = uniform_grid(0.0, TAU, 99);
    ctx.sweep(&[], |s| {
        let j = jet(&c, s)?;
        Ok(det2(&j.d1(), &j.d2()).dist(DualScalar::ONE))
    })
}

fn exeq_curvature(ctx: &mut Ctx) -> Result<()> {
    let c = worked_example()?;
    ctx.grid = uniform_grid(0.0, TAU, 99);
    ctx.sweep(&[], |s| Ok(equiaffine_curvature(&jet(&c, s)?)?.dist(DualScalar::ONE)))
}

fn exeq_fd_oracle(ctx: &mut Ctx) -> Result<()> {
    let c = worked_example()?;
    ctx.grid = uniform_grid(0.0, TAU, 99);
    ctx.sweep(&[], |s| {
        let j = oracle_jet(&c, s, ORACLE_STEP)?;
        let speed = det2(&j.d1(), &j.d2()).dist(DualScalar::ONE);
        let k = fd_curvature_oracle(&c, s, ORACLE_STEP, Geometry::Equiaffine)?;
        Ok(speed.max(k.dist(DualScalar::ONE)))
    })
}

/// Reparametrizes the half-speed version of the worked example and compares
/// with the unit-speed curve.
fn exeq_reparametrization(ctx: &mut Ctx) -> Result<()> {
    let half = CurveSpec::new(
        AnalyticCurve::from_sources(["sin(t/2)", "-cos(t/2)", "cos(t/2)", "sin(t/2)"])?,
        dom(-1.0, 2.0 * TAU + 1.0),
    );
    let r = reparametrize_equiaffine(&half)?;
    let target = worked_example()?;
    ctx.grid = uniform_grid(0.0, TAU, 99);
    ctx.sweep(&[], |s| {
        let j = jet(&r, s)?;
        let speed = det2(&j.d1(), &j.d2()).dist(DualScalar::ONE);
        let k = equiaffine_curvature(&j)?.dist(DualScalar::ONE);
        let p = j.d0().dist(&jet(&target, s)?.d0());
        Ok(speed.max(k).max(p))
    })
}

fn random_flat(rng: &mut SplitMix64) -> EquiaffineFamilyParams {
    let (c0, c1, c2) = (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    EquiaffineFamilyParams::flat(c0, c1, c2, random_vec(rng, 1.0))
}

fn random_vec(rng: &mut SplitMix64, half_width: f64) -> Vec2 {
    Vec2::new(rng.uniform(-half_width, half_width), rng.uniform(-half_width, half_width))
}

fn eq_params(p: &EquiaffineFamilyParams) -> Vec<(&'static str, f64)> {
    let mut v = vec![("c0", p.c0), ("c1", p.c1)];
    match p.family {
        EquiaffineFamilyId::Flat => v.push(("c2", p.c2)),
        EquiaffineFamilyId::PureDual => v.extend([("c2", p.c2), ("m", p.m)]),
        _ => v.push(("r", p.r_alpha)),
    }
    v.extend([("beta0_x", p.beta0.x), ("beta0_y", p.beta0.y)]);
    v
}

/// Runs `f` on `n` random family members over a fixed grid.
fn family_sweep<P, F>(ctx: &mut Ctx, n: usize, grid: Vec<f64>, mut draw: P, mut f: F) -> Result<()>
where
    P: FnMut(&mut SplitMix64) -> EquiaffineFamilyParams,
    F: FnMut(&EquiaffineFamilyParams, f64) -> Result<f64>,
{
    ctx.grid = grid;
    for _ in 0..n {
        let p = draw(&mut ctx.rng);
        ctx.sweep(&eq_params(&p), |s| f(&p, s))?;
    }
    Ok(())
}

fn curvature_error(p: &EquiaffineFamilyParams, domain: Domain, s: f64) -> Result<f64> {
    let c = make_family(p, domain)?;
    Ok(equiaffine_curvature(&jet(&c, s)?)?.dist(p.expected_curvature()))
}

fn flat_curvature(ctx: &mut Ctx) -> Result<()> {
    family_sweep(ctx, 20, uniform_grid(-2.0, 2.0, 99), random_flat, |p, s| {
        curvature_error(p, dom(-2.0, 2.0), s)
    })
}

fn flat_curvature_fd(ctx: &mut Ctx) -> Result<()> {
    family_sweep(ctx, 20, uniform_grid(-1.0, 1.0, 99), random_flat, |p, s| {
        let c = make_family(p, dom(-2.0, 2.0))?;
        Ok(fd_curvature_oracle(&c, s, ORACLE_STEP, Geometry::Equiaffine)?.dist(DualScalar::ZERO))
    })
}

fn flat_beta_conic(ctx: &mut Ctx) -> Result<()> {
    family_sweep(ctx, 20, uniform_grid(-2.0, 2.0, 99), random_flat, |p, s| {
        let j = jet(&make_family(p, dom(-2.0, 2.0))?, s)?;
        let expected = -(p.c1 * p.c1 + 2.0 * p.c0 * p.c2);
        Ok((det_real(&j.beta(1), &j.beta(2)) - expected).abs())
    })
}

fn random_pure_dual(rng: &mut SplitMix64) -> EquiaffineFamilyParams {
    let m = rng.signed(0.05, 2.0);
    let (c0, c1, c2) = (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    EquiaffineFamilyParams::pure_dual(m, c0, c1, c2, random_vec(rng, 1.0))
}

fn random_elliptic(rng: &mut SplitMix64) -> EquiaffineFamilyParams {
    let r = rng.uniform(0.25, 4.0);
    EquiaffineFamilyParams::elliptic(r, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), random_vec(rng, 1.0))
}

fn random_hyperbolic(rng: &mut SplitMix64) -> EquiaffineFamilyParams {
    let r = -rng.uniform(0.25, 4.0);
    EquiaffineFamilyParams::hyperbolic(r, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), random_vec(rng, 1.0))
}

/// Hyperbolic parameters with `|c0| > |c1|`, rescaled to `det A = 1`.
fn random_hyperbolic_map(rng: &mut SplitMix64) -> Result<EquiaffineFamilyParams> {
    let r = -rng.uniform(0.25, 4.0);
    let c0 = rng.signed(0.5, 2.0);
    let c1 = c0 * rng.uniform(-0.9, 0.9);
    normalized_map_params(&EquiaffineFamilyParams::hyperbolic(r, c0, c1, random_vec(rng, 1.0)))
}

fn pure_dual(ctx: &mut Ctx) -> Result<()> {
    family_sweep(ctx, 20, uniform_grid(-2.0, 2.0, 99), random_pure_dual, |p, s| {
        curvature_error(p, dom(-2.0, 2.0), s)
    })
}

fn elliptic_forced_m(ctx: &mut Ctx) -> Result<()> {
    family_sweep(ctx, 20, uniform_grid(-2.0, 2.0, 99), random_elliptic, |p, s| {
        curvature_error(p, dom(-2.0, 2.0), s)
    })
}

fn hyperbolic_forced_m(ctx: &mut Ctx) -> Result<()> {
    family_sweep(ctx, 20, uniform_grid(-2.0, 2.0, 99), random_hyperbolic, |p, s| {
        curvature_error(p, dom(-2.0, 2.0), s)
    })
}

fn random_family(rng: &mut SplitMix64, i: usize) -> EquiaffineFamilyParams {
    match i % 4 {
        0 => random_flat(rng),
        1 => random_pure_dual(rng),
        2 => random_elliptic(rng),
        _ => random_hyperbolic(rng),
    }
}

fn equiaffine_families_fd(ctx: &mut Ctx) -> Result<()> {
    let mut i = 0;
    family_sweep(
        ctx,
        20,
        uniform_grid(-0.5, 0.5, 20),
        |rng| {
            i += 1;
            random_family(rng, i - 1)
        },
        |p, s| {
            let c = make_family(p, dom(-1.0, 1.0))?;
            Ok(fd_curvature_oracle(&c, s, ORACLE_STEP, Geometry::Equiaffine)?.dist(p.expected_curvature()))
        },
    )
}

/// `κ_α = 0`: the system solution rebuilds the flat family's dual part.
fn kk_flat(ctx: &mut Ctx) -> Result<()> {
    let parabola = CurveSpec::new(AnalyticCurve::from_sources(["s", "s^2/2", "0", "0"])?, dom(-1.0, 3.0));
    let grid = uniform_grid(0.0, 2.0, 49);
    ctx.grid = grid.clone();
    for _ in 0..20 {
        let p = random_flat(&mut ctx.rng);
        let sol = solve_kk_system(&ScalarFn::constant(0.0), [p.c2, -2.0 * p.c1, -4.0 * p.c0], [0.0, 2.0], 1e-3)?;
        let rebuilt = sol.reconstruct(&parabola, p.beta0)?;
        let fam = make_family(&p, dom(0.0, 2.0))?;
        ctx.sweep(&eq_params(&p), |s| {
            let (a, b) = (jet(&fam, s)?, jet(&rebuilt, s)?);
            Ok((0..3).map(|k| a.d[k].dist(&b.d[k])).fold(0.0, nan_max))
        })?;
    }
    Ok(())
}

/// `κ_α = 1` on the unit circle: random initial data keep `κ_γ = 1 + 0ε`.
fn kk_const(ctx: &mut Ctx) -> Result<()> {
    let circle = CurveSpec::new(AnalyticCurve::from_sources(["sin(s)", "-cos(s)", "0", "0"])?, dom(-1.0, 3.0));
    ctx.grid = uniform_grid(0.0, 2.0, 49);
    for _ in 0..10 {
        let init = [ctx.rng.uniform(-1.0, 1.0), ctx.rng.uniform(-1.0, 1.0), ctx.rng.uniform(-1.0, 1.0)];
        let beta0 = random_vec(&mut ctx.rng, 1.0);
        let sol = solve_kk_system(&ScalarFn::constant(1.0), init, [0.0, 2.0], 1e-3)?;
        let c = sol.reconstruct(&circle, beta0)?;
        let params = [("y0", init[0]), ("y1", init[1]), ("y2", init[2]), ("beta0_x", beta0.x), ("beta0_y", beta0.y)];
        ctx.sweep(&params, |s| {
            let j = jet(&c, s)?;
            let k = equiaffine_curvature(&j)?;
            Ok(k.dist(DualScalar::ONE).max(admissibility_residual(&j).abs()))
        })?;
    }
    Ok(())
}

fn map_error(p: &EquiaffineFamilyParams, s: f64, domain: Domain) -> Result<f64> {
    let a = alpha_to_beta_map(p).expect("elliptic or hyperbolic");
    let j = jet(&make_family(p, domain)?, s)?;
    Ok((j.beta(0) - (a * j.alpha(0) + p.beta0)).amax())
}

fn elliptic_map(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-3.0, 3.0, 99);
    for _ in 0..10 {
        let p = normalized_map_params(&random_elliptic(&mut ctx.rng))?;
        ctx.sweep(&eq_params(&p), |s| map_error(&p, s, dom(-3.0, 3.0)))?;
    }
    Ok(())
}

fn elliptic_det(ctx: &mut Ctx) -> Result<()> {
    for _ in 0..10 {
        let p = normalized_map_params(&random_elliptic(&mut ctx.rng))?;
        let det = alpha_to_beta_map(&p).expect("elliptic").determinant();
        ctx.record(&eq_params(&p), (det + 1.0).abs(), 0.0);
    }
    Ok(())
}

fn hyperbolic_map(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-2.0, 2.0, 99);
    for _ in 0..10 {
        let p = random_hyperbolic_map(&mut ctx.rng)?;
        ctx.sweep(&eq_params(&p), |s| map_error(&p, s, dom(-2.0, 2.0)))?;
    }
    Ok(())
}

fn hyperbolic_det(ctx: &mut Ctx) -> Result<()> {
    for _ in 0..10 {
        let p = random_hyperbolic_map(&mut ctx.rng)?;
        let det = alpha_to_beta_map(&p).expect("hyperbolic").determinant();
        ctx.record(&eq_params(&p), (det - 1.0).abs(), 0.0);
    }
    Ok(())
}

/// Real parts on `r x² + r² y² = 1`; dual parts fitted by
/// `(x − x0)² + r(y − y0)² = a²` with the centre at `β0`.
fn conics(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-1.5, 1.5, 99);
    for i in 0..10 {
        let p = if i % 2 == 0 {
            random_elliptic(&mut ctx.rng)
        } else {
            random_hyperbolic_map(&mut ctx.rng)?
        };
        let c = make_family(&p, dom(-1.5, 1.5))?;
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        for &s in &ctx.grid {
            let j = jet(&c, s)?;
            alpha.push(j.alpha(0));
            beta.push(j.beta(0));
        }
        let fit = quadratic_form_check(&beta, p.r_alpha)?;
        let sign = if p.family == EquiaffineFamilyId::Elliptic { 1.0 } else { -1.0 };
        let a = (p.c0 * p.c0 + sign * p.c1 * p.c1).sqrt();
        let err = [
            real_conic_residual(&alpha, p.r_alpha),
            fit.max_residual,
            (fit.a - a).abs(),
            (fit.x0 - p.beta0.x).abs(),
            (fit.y0 - p.beta0.y).abs(),
        ]
        .into_iter()
        .fold(0.0, nan_max);
        ctx.record(&eq_params(&p), err, 0.0);
    }
    Ok(())
}

fn random_dual(rng: &mut SplitMix64) -> DualScalar {
    DualScalar::raw(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
}

fn random_dual_vec(rng: &mut SplitMix64) -> DualVec2 {
    DualVec2::from_parts_raw(random_vec(rng, 1.0), random_vec(rng, 1.0))
}

/// `κ(Aγ + b) = κ(γ)` for `A = L·U` with unit triangular dual factors.
fn sl2d_invariance(ctx: &mut Ctx) -> Result<()> {
    let base_params = random_elliptic(&mut ctx.rng);
    let base = make_family(&base_params, dom(-2.0, 2.0))?;
    ctx.grid = uniform_grid(-2.0, 2.0, 19);
    for _ in 0..50 {
        let (l, u) = (random_dual(&mut ctx.rng), random_dual(&mut ctx.rng));
        let b = random_dual_vec(&mut ctx.rng);
        let img = apply_equiaffine(&Mat2D::equiaffine_lu(l, u), &b, &base)?;
        let mut params = eq_params(&base_params);
        params.extend([("l_re", l.re()), ("l_du", l.du()), ("u_re", u.re()), ("u_du", u.du())]);
        ctx.sweep(&params, |s| {
            let k0 = equiaffine_curvature(&jet(&base, s)?)?;
            let k1 = equiaffine_curvature(&jet(&img, s)?)?;
            Ok(k0.dist(k1))
        })?;
    }
    Ok(())
}

/// `(γ″, γ‴) = (α″, α‴) + ε[(α″, β‴) + (β″, α‴)]` on generic jets.
fn eqrel_decomposition(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-1.0, 1.0, 49);
    for i in 0..20 {
        let p = random_family(&mut ctx.rng, i);
        let (l, u) = (random_dual(&mut ctx.rng), random_dual(&mut ctx.rng));
        let c = apply_equiaffine(
            &Mat2D::equiaffine_lu(l, u),
            &random_dual_vec(&mut ctx.rng),
            &make_family(&p, dom(-1.0, 1.0))?,
        )?;
        ctx.sweep(&eq_params(&p), |s| {
            let j = jet(&c, s)?;
            let k = det2(&j.d2(), &j.d3());
            let re = det_real(&j.alpha(2), &j.alpha(3));
            let du = det_real(&j.alpha(2), &j.beta(3)) + det_real(&j.beta(2), &j.alpha(3));
            Ok((k.re() - re).abs().max((k.du() - du).abs()))
        })?;
    }
    Ok(())
}

fn causal_of(rng: &mut SplitMix64) -> CausalClass {
    if rng.coin() {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

fn causal_code(c: CausalClass) -> f64 {
    if c == CausalClass::Spacelike {
        1.0
    } else {
        -1.0
    }
}

/// Polynomial turning function with `θ′ ∈ [0.6, 2.4]` on `[0, 1]`.
fn random_theta(rng: &mut SplitMix64) -> Vec<f64> {
    let mut c = vec![rng.uniform(-1.0, 1.0), rng.uniform(1.0, 2.0)];
    for _ in 0..3 {
        c.push(rng.uniform(-0.1, 0.1));
    }
    c
}

/// A random Lorentz catalog member and its parameter record. `r_lo..r_hi`
/// bounds `|r|`; `kind` selects constant curvature (0, 1) or real curvature
/// only (2).
fn random_lorentz(
    rng: &mut SplitMix64,
    kind: usize,
    r_range: (f64, f64),
) -> (LorentzFamilyParams, Vec<(&'static str, f64)>) {
    let causal = causal_of(rng);
    if kind % 3 == 2 {
        let theta = random_theta(rng);
        let m = 2.0 - rng.uniform(0.0, 2.0);
        let beta0 = random_vec(rng, 1.0);
        let mut rec: Vec<(&'static str, f64)> = vec![("m", m), ("causal", causal_code(causal))];
        for (name, v) in ["theta0", "theta1", "theta2", "theta3", "theta4"].into_iter().zip(&theta) {
            rec.push((name, *v));
        }
        rec.extend([("beta0_x", beta0.x), ("beta0_y", beta0.y)]);
        (
            LorentzFamilyParams::KappaRealOnly {
                theta: ThetaSpec::Polynomial(Polynomial::new(theta)),
                m,
                beta0,
                causal,
            },
            rec,
        )
    } else {
        let r = rng.signed(r_range.0, r_range.1);
        let (m, n) = (rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        let beta0 = random_vec(rng, 1.0);
        (
            LorentzFamilyParams::ConstCurvature { r, m, n, beta0, causal },
            vec![
                ("r", r),
                ("m", m),
                ("n", n),
                ("causal", causal_code(causal)),
                ("beta0_x", beta0.x),
                ("beta0_y", beta0.y),
            ],
        )
    }
}

/// Frenet `κ` the family carries in closed form.
fn lorentz_expected(p: &LorentzFamilyParams, c: &CurveSpec, s: f64) -> Result<DualScalar> {
    Ok(match p {
        LorentzFamilyParams::ConstCurvature { .. } => c
            .downcast_ref::<ConstCurvatureCurve>()
            .expect("constant curvature curve")
            .expected_curvature(),
        LorentzFamilyParams::KappaRealOnly { theta, .. } => DualScalar::raw(theta.eval(s)?[1].abs(), 0.0),
        _ => unreachable!("only curved families are drawn"),
    })
}

fn lorentz_sweep<F>(ctx: &mut Ctx, n: usize, r_range: (f64, f64), domain: Domain, mut f: F) -> Result<()>
where
    F: FnMut(&LorentzFamilyParams, &CurveSpec, f64) -> Result<f64>,
{
    for i in 0..n {
        let (p, rec) = random_lorentz(&mut ctx.rng, i, r_range);
        let c = make_lorentz_family(&p, domain)?;
        ctx.sweep(&rec, |s| f(&p, &c, s))?;
    }
    Ok(())
}

fn ltnk_frame(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(0.0, 1.0, 49);
    lorentz_sweep(ctx, 21, (0.25, 4.0), dom(0.0, 1.0), |_, c, s| {
        let f = frenet(&jet(c, s)?)?;
        let d = DualScalar::raw(f.delta, 0.0);
        Ok(lorentz_inner(&f.t, &f.t)
            .dist(d)
            .max(lorentz_inner(&f.n, &f.n).dist(-d))
            .max(lorentz_inner(&f.t, &f.n).dist(DualScalar::ZERO)))
    })
}

/// `T = T_α + εβ′`, `N = N_α + ε(δ⟨β″, T_α⟩/κ_α)T_α`,
/// `κ = κ_α − εδ⟨β″, N_α⟩`, each assembled from point-only jets and
/// compared with the frame computed in `D`.
fn ltnk_formulas(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(0.1, 0.9, 20);
    lorentz_sweep(ctx, 21, (0.5, 2.0), dom(0.0, 1.0), |_, c, s| {
        let f = frenet(&jet(c, s)?)?;
        // Second derivatives by differencing the tangent once. Differencing
        // quadrature-built points twice bottoms out near 1e-8.
        for k in [-4.0, 4.0] {
            jet(c, s + k * ORACLE_STEP)?;
        }
        let tangent = |u: f64| jet(c, u).map(|j| j.d1()).expect("checked above");
        let g2 = fd::richardson_jet(&tangent, s, ORACLE_STEP)[1];
        let (a1, b1) = (tangent(s).real_part(), tangent(s).dual_part());
        let (a2, b2) = (g2.real_part(), g2.dual_part());
        let delta = lorentz_inner_real(&a1, &a1).signum();
        let ka = lorentz_inner_real(&a2, &a2).abs().sqrt();
        let na = a2 / ka;
        let t = DualVec2::from_parts_raw(a1, b1);
        let n = DualVec2::from_parts_raw(na, a1 * (delta * lorentz_inner_real(&b2, &a1) / ka));
        let k = DualScalar::raw(ka, -delta * lorentz_inner_real(&b2, &na));
        Ok(t.dist(&f.t).max(n.dist(&f.n)).max(k.dist(f.kappa)))
    })
}

/// `T′ = κN` and `N′ = κT`, differentiating the computed frame numerically.
fn frenet_odes(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(0.1, 0.9, 20);
    lorentz_sweep(ctx, 21, (0.25, 4.0), dom(0.0, 1.0), |_, c, s| {
        let f = frenet(&jet(c, s)?)?;
        let frame = |u: f64| frenet(&jet(c, u)?);
        // Evaluate once so errors surface instead of NaN.
        for k in [-4.0, -2.0, -1.0, 1.0, 2.0, 4.0] {
            frame(s + k * ORACLE_STEP)?;
        }
        let t_of = |u: f64| frame(u).map(|f| f.t).expect("checked above");
        let n_of = |u: f64| frame(u).map(|f| f.n).expect("checked above");
        let dt = fd::richardson_jet(&t_of, s, ORACLE_STEP)[1];
        let dn = fd::richardson_jet(&n_of, s, ORACLE_STEP)[1];
        let scale = 1.0 + f.kappa.re().abs();
        Ok(dt.dist(&f.n.scale(f.kappa)).max(dn.dist(&f.t.scale(f.kappa))) / scale)
    })
}

fn lclass_curve(ctx: &mut Ctx, r: f64) -> Result<(LorentzFamilyParams, Vec<(&'static str, f64)>)> {
    let (m, n) = (ctx.rng.uniform(-2.0, 2.0), ctx.rng.uniform(-2.0, 2.0));
    let causal = causal_of(&mut ctx.rng);
    let beta0 = random_vec(&mut ctx.rng, 1.0);
    Ok((
        LorentzFamilyParams::ConstCurvature { r, m, n, beta0, causal },
        vec![("r", r), ("m", m), ("n", n), ("causal", causal_code(causal))],
    ))
}

fn lclass_dual_part(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-1.0, 1.0, 49);
    for _ in 0..20 {
        let r = ctx.rng.uniform(0.25, 4.0);
        let (p, rec) = lclass_curve(ctx, r)?;
        let LorentzFamilyParams::ConstCurvature { m, .. } = p else { unreachable!() };
        let c = make_lorentz_family(&p, dom(-1.0, 1.0))?;
        ctx.sweep(&rec, |s| Ok((frenet(&jet(&c, s)?)?.kappa.du() - m).abs()))?;
    }
    Ok(())
}

fn lclass_real_part(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-1.0, 1.0, 49);
    for _ in 0..20 {
        let r = ctx.rng.signed(0.25, 4.0);
        let (p, rec) = lclass_curve(ctx, r)?;
        let c = make_lorentz_family(&p, dom(-1.0, 1.0))?;
        ctx.sweep(&rec, |s| Ok((frenet(&jet(&c, s)?)?.kappa.re() - 1.0 / r.abs()).abs()))?;
    }
    Ok(())
}

fn lorentz_families_fd(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(0.1, 0.9, 20);
    lorentz_sweep(ctx, 21, (0.25, 4.0), dom(0.0, 1.0), |p, c, s| {
        let k = fd_curvature_oracle(c, s, ORACLE_STEP, Geometry::Lorentz)?;
        Ok(k.dist(lorentz_expected(p, c, s)?))
    })
}

fn kk_lorentz<F>(ctx: &mut Ctx, mut err: F) -> Result<()>
where
    F: FnMut(&LorentzFamilyParams, &CurveSpec, f64) -> Result<f64>,
{
    ctx.grid = uniform_grid(0.0, 1.0, 49);
    for _ in 0..10 {
        let (p, rec) = random_lorentz(&mut ctx.rng, 2, (1.0, 1.0));
        for causal in [CausalClass::Spacelike, CausalClass::Timelike] {
            let LorentzFamilyParams::KappaRealOnly { theta, m, beta0, .. } = p.clone() else { unreachable!() };
            let q = LorentzFamilyParams::KappaRealOnly { theta, m, beta0, causal };
            let c = make_lorentz_family(&q, dom(0.0, 1.0))?;
            let mut rec = rec.clone();
            rec.retain(|(k, _)| *k != "causal");
            rec.push(("causal", causal_code(causal)));
            ctx.sweep(&rec, |s| err(&q, &c, s))?;
        }
    }
    Ok(())
}

fn kk_lorentz_curvature(ctx: &mut Ctx) -> Result<()> {
    kk_lorentz(ctx, |p, c, s| Ok(frenet(&jet(c, s)?)?.kappa.dist(lorentz_expected(p, c, s)?)))
}

fn kk_lorentz_admissibility(ctx: &mut Ctx) -> Result<()> {
    kk_lorentz(ctx, |_, c, s| Ok(lorentz_admissibility(&jet(c, s)?).abs()))
}

fn poly_fn(c: Vec<f64>) -> ScalarFn {
    let p = Polynomial::new(c);
    let (a, b, d, e) = (p.clone(), p.clone(), p.clone(), p);
    ScalarFn::with_derivatives(
        move |t| a.jet(t)[0],
        move |t| b.jet(t)[1],
        move |t| d.jet(t)[2],
        move |t| e.jet(t)[3],
    )
}

/// Counts wrong verdicts: linear profiles and curves with `α″ = β″ = 0`
/// are straight, profiles with a quadratic term are not.
fn straight_line_criterion(ctx: &mut Ctx) -> Result<()> {
    let d = dom(-1.0, 1.0);
    for _ in 0..10 {
        let (a, b) = (ctx.rng.uniform(-2.0, 2.0), ctx.rng.uniform(-2.0, 2.0));
        let c2 = ctx.rng.signed(0.1, 2.0);
        let (p, q, v, w) = (
            random_vec(&mut ctx.rng, 1.0),
            random_vec(&mut ctx.rng, 1.0),
            random_vec(&mut ctx.rng, 1.0),
            Vec2::new(ctx.rng.signed(0.25, 1.0), ctx.rng.signed(0.25, 1.0)),
        );
        let profile = |f: ScalarFn| {
            make_lorentz_family(&LorentzFamilyParams::StraightLine { p, q, v, w, f }, d)
        };
        let mut wrong = 0.0;
        let cases = [
            (profile(poly_fn(vec![b, a]))?, true),
            (profile(poly_fn(vec![0.0, 0.0, 1.0]))?, false),
            (profile(poly_fn(vec![b, a, c2]))?, false),
            (
                CurveSpec::new(
                    AnalyticCurve::new(
                        [poly_fn(vec![p.x, v.x]), poly_fn(vec![p.y, v.y])],
                        [poly_fn(vec![q.x, w.x]), poly_fn(vec![q.y, w.y])],
                    ),
                    d,
                ),
                true,
            ),
        ];
        for (c, expected) in cases {
            if is_straight_line(&c)? != expected {
                wrong += 1.0;
            }
        }
        ctx.record(&[("a", a), ("b", b), ("c2", c2)], wrong, 0.0);
    }
    Ok(())
}

/// `⟨α′, α′⟩ = 0` always; `⟨γ′, γ′⟩ = 0 + 0ε` when `β′ ∥ v`.
fn lightlike_construction(ctx: &mut Ctx) -> Result<()> {
    let d = dom(-1.0, 1.0);
    ctx.grid = d.grid(49);
    for i in 0..20 {
        let p = random_vec(&mut ctx.rng, 1.0);
        let lam = ctx.rng.signed(0.25, 2.0);
        let v = Vec2::new(lam, if ctx.rng.coin() { lam } else { -lam });
        let g: Vec<f64> = (0..4).map(|_| ctx.rng.uniform(-1.0, 1.0)).collect();
        let q = random_vec(&mut ctx.rng, 1.0);
        let parallel = i % 2 == 0;
        let beta = if parallel {
            let gx: Vec<f64> = g.iter().map(|c| c * v.x).collect();
            let gy: Vec<f64> = g.iter().map(|c| c * v.y).collect();
            let mut gx = gx;
            let mut gy = gy;
            gx[0] += q.x;
            gy[0] += q.y;
            AnalyticCurve::real([poly_fn(gx), poly_fn(gy)])
        } else {
            let mut h = g.clone();
            h.reverse();
            AnalyticCurve::real([poly_fn(g.clone()), poly_fn(h)])
        };
        let c = make_lorentz_family(&LorentzFamilyParams::Lightlike { p, v, beta: CurveSpec::new(beta, d) }, d)?;
        let rec = [("v_x", v.x), ("v_y", v.y), ("parallel", if parallel { 1.0 } else { 0.0 })];
        ctx.sweep(&rec, |s| {
            let j = jet(&c, s)?;
            let a = lorentz_inner_real(&j.alpha(1), &j.alpha(1)).abs();
            if parallel {
                Ok(a.max(lorentz_inner(&j.d1(), &j.d1()).dist(DualScalar::ZERO)))
            } else {
                Ok(a)
            }
        })?;
    }
    Ok(())
}

/// Counts points where `β′ ≠ 0` has the same causal character as `α′`.
fn causal_swap(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(0.0, 1.0, 49);
    lorentz_sweep(ctx, 21, (0.25, 4.0), dom(0.0, 1.0), |_, c, s| {
        let j = jet(c, s)?;
        let b1 = j.beta(1);
        if b1.amax() <= 1e-9 {
            return Ok(0.0);
        }
        let (ca, cb) = (CausalClass::of(&j.alpha(1)), CausalClass::of(&b1));
        let swapped = matches!(
            (ca, cb),
            (CausalClass::Spacelike, CausalClass::Timelike) | (CausalClass::Timelike, CausalClass::Spacelike)
        );
        Ok(if swapped { 0.0 } else { 1.0 })
    })
}

fn lorentz_isometry_invariance(ctx: &mut Ctx) -> Result<()> {
    ctx.grid = uniform_grid(-1.0, 1.0, 19);
    let d = dom(-1.0, 1.0);
    for _ in 0..50 {
        let r = ctx.rng.signed(0.25, 4.0);
        let (p, mut rec) = lclass_curve(ctx, r)?;
        let base = make_lorentz_family(&p, d)?;
        let phi = ctx.rng.uniform(-1.5, 1.5);
        let (rx, ry) = (ctx.rng.coin(), ctx.rng.coin());
        let b = random_dual_vec(&mut ctx.rng);
        let iso = generate_isometry(phi, rx, ry, b);
        let img = apply_lorentz_isometry(&iso, &base)?;
        rec.extend([("phi", phi), ("reflect_x", rx as u8 as f64), ("reflect_y", ry as u8 as f64)]);
        ctx.sweep(&rec, |s| {
            let (j0, j1) = (jet(&base, s)?, jet(&img, s)?);
            let k = frenet(&j0)?.kappa.dist(frenet(&j1)?.kappa);
            let same = CausalClass::of(&j0.alpha(1)) == CausalClass::of(&j1.alpha(1));
            Ok(if same { k } else { k.max(1.0) })
        })?;
    }
    Ok(())
}
