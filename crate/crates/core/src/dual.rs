//! Arithmetic in the ring of dual numbers `D = {x + εy : ε² = 0}` and in the
//! module `D²`.
//!
//! Values are finite by construction: [`DualScalar::new`] rejects NaN and
//! infinities. The ring operations (`+`, `-`, `*`) are infallible; division and
//! the root functions return [`Result`] because they are only defined on part
//! of the ring.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Real 2-vector used for real and dual parts of planar objects.
pub type Vec2 = Vector2<f64>;

/// Library-wide default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(v))
    }
}

/// A dual number `re + ε·du`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct DualScalar {
    re: f64,
    du: f64,
}

impl DualScalar {
    pub const ZERO: DualScalar = DualScalar { re: 0.0, du: 0.0 };
    pub const ONE: DualScalar = DualScalar { re: 1.0, du: 0.0 };
    pub const EPS: DualScalar = DualScalar { re: 0.0, du: 1.0 };

    pub fn new(re: f64, du: f64) -> Result<Self> {
        Ok(Self {
            re: finite(re)?,
            du: finite(du)?,
        })
    }

    /// Element of the real subring.
    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    /// Unchecked constructor for values produced by ring operations on
    /// finite inputs.
    pub(crate) const fn raw(re: f64, du: f64) -> Self {
        Self { re, du }
    }

    pub const fn re(self) -> f64 {
        self.re
    }

    pub const fn du(self) -> f64 {
        self.du
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.du.is_finite()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::raw(self.re * k, self.du * k)
    }

    /// `self / rhs`, defined only when `rhs.re != 0`.
    pub fn div(self, rhs: DualScalar) -> Result<Self> {
        if rhs.re == 0.0 {
            return Err(Error::ZeroRealPart);
        }
        let re = self.re / rhs.re;
        let du = (self.du * rhs.re - self.re * rhs.du) / (rhs.re * rhs.re);
        Self::new(re, du)
    }

    pub fn recip(self) -> Result<Self> {
        Self::ONE.div(self)
    }

    /// Principal square root `√re + ε·du/(2√re)`; requires `re > 0`.
    pub fn sqrt(self) -> Result<Self> {
        if self.re <= 0.0 {
            return Err(Error::NonpositiveRealPart(self.re));
        }
        let r = self.re.sqrt();
        Self::new(r, self.du / (2.0 * r))
    }

    /// Real cube root `∛re + ε·du/(3∛re²)`; requires `re != 0`.
    pub fn cbrt(self) -> Result<Self> {
        if self.re == 0.0 {
            return Err(Error::ZeroRealPart);
        }
        let c = self.re.cbrt();
        Self::new(c, self.du / (3.0 * c * c))
    }

    /// `sign(re)·self`, the dual absolute value used for `|⟨u,u⟩|`.
    /// Undefined (returns the input) when `re == 0`.
    pub fn abs_by_real_sign(self) -> Self {
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Both parts within `tol` (absolute) of `other`.
    pub fn close_to(self, other: DualScalar, tol: f64) -> bool {
        (self.re - other.re).abs() <= tol && (self.du - other.du).abs() <= tol
    }

    /// Max of the componentwise absolute differences.
    pub fn dist(self, other: DualScalar) -> f64 {
        (self.re - other.re).abs().max((self.du - other.du).abs())
    }
}

impl fmt::Debug for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}+{:?}ε", self.re, self.du)
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.du < 0.0 {
            write!(f, "{} - {}ε", self.re, -self.du)
        } else {
            write!(f, "{} + {}ε", self.re, self.du)
        }
    }
}

impl Add for DualScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::raw(self.re + rhs.re, self.du + rhs.du)
    }
}

impl AddAssign for DualScalar {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for DualScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::raw(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Neg for DualScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::raw(-self.re, -self.du)
    }
}

impl Mul for DualScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::raw(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl Mul<f64> for DualScalar {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// A vector of `D²`, stored as two dual coordinates.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct DualVec2 {
    pub x: DualScalar,
    pub y: DualScalar,
}

impl DualVec2 {
    pub const ZERO: DualVec2 = DualVec2 {
        x: DualScalar::ZERO,
        y: DualScalar::ZERO,
    };

    pub const fn new(x: DualScalar, y: DualScalar) -> Self {
        Self { x, y }
    }

    /// `real + ε·dual`.
    pub fn from_parts(real: Vec2, dual: Vec2) -> Result<Self> {
        Ok(Self {
            x: DualScalar::new(real.x, dual.x)?,
            y: DualScalar::new(real.y, dual.y)?,
        })
    }

    pub(crate) fn from_parts_raw(real: Vec2, dual: Vec2) -> Self {
        Self {
            x: DualScalar::raw(real.x, dual.x),
            y: DualScalar::raw(real.y, dual.y),
        }
    }

    pub fn real_part(&self) -> Vec2 {
        Vec2::new(self.x.re(), self.y.re())
    }

    pub fn dual_part(&self) -> Vec2 {
        Vec2::new(self.x.du(), self.y.du())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn scale(&self, k: DualScalar) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    /// Largest absolute component over both parts.
    pub fn max_abs(&self) -> f64 {
        self.x
            .re()
            .abs()
            .max(self.x.du().abs())
            .max(self.y.re().abs())
            .max(self.y.du().abs())
    }

    pub fn dist(&self, other: &DualVec2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl fmt::Debug for DualVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

impl Add for DualVec2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for DualVec2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for DualVec2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<DualScalar> for DualVec2 {
    type Output = Self;
    fn mul(self, k: DualScalar) -> Self {
        self.scale(k)
    }
}

impl Mul<f64> for DualVec2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

/// Determinant form `(u, v) = u₁v₂ − u₂v₁` computed in `D`.
pub fn det2(u: &DualVec2, v: &DualVec2) -> DualScalar {
    u.x * v.y - u.y * v.x
}

/// Real determinant of two planar vectors.
pub fn det_real(u: &Vec2, v: &Vec2) -> f64 {
    u.x * v.y - u.y * v.x
}

/// Lorentzian form `⟨u, v⟩ = u₁v₁ − u₂v₂` extended to `D`.
pub fn lorentz_inner(u: &DualVec2, v: &DualVec2) -> DualScalar {
    u.x * v.x - u.y * v.y
}

/// Lorentzian form on real vectors.
pub fn lorentz_inner_real(u: &Vec2, v: &Vec2) -> f64 {
    u.x * v.x - u.y * v.y
}

/// 2×2 matrix with dual entries.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat2D {
    pub a11: DualScalar,
    pub a12: DualScalar,
    pub a21: DualScalar,
    pub a22: DualScalar,
}

impl Mat2D {
    pub const IDENTITY: Mat2D = Mat2D {
        a11: DualScalar::ONE,
        a12: DualScalar::ZERO,
        a21: DualScalar::ZERO,
        a22: DualScalar::ONE,
    };

    pub const fn new(a11: DualScalar, a12: DualScalar, a21: DualScalar, a22: DualScalar) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_real(m: &Matrix2<f64>) -> Result<Self> {
        Ok(Self::new(
            DualScalar::real(m[(0, 0)])?,
            DualScalar::real(m[(0, 1)])?,
            DualScalar::real(m[(1, 0)])?,
            DualScalar::real(m[(1, 1)])?,
        ))
    }

    pub(crate) fn from_real_raw(m: &Matrix2<f64>) -> Self {
        let r = |v: f64| DualScalar::raw(v, 0.0);
        Self::new(r(m[(0, 0)]), r(m[(0, 1)]), r(m[(1, 0)]), r(m[(1, 1)]))
    }

    /// `[[1, 0], [l, 1]]`.
    pub const fn unit_lower(l: DualScalar) -> Self {
        Self::new(DualScalar::ONE, DualScalar::ZERO, l, DualScalar::ONE)
    }

    /// `[[1, u], [0, 1]]`.
    pub const fn unit_upper(u: DualScalar) -> Self {
        Self::new(DualScalar::ONE, u, DualScalar::ZERO, DualScalar::ONE)
    }

    /// Element of `SL(2, D)` built as `L·U` from unit-triangular factors, so
    /// the determinant is `1 + 0ε` by construction.
    pub fn equiaffine_lu(l: DualScalar, u: DualScalar) -> Self {
        Self::unit_lower(l).mul(&Self::unit_upper(u))
    }

    pub fn det(&self) -> DualScalar {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply(&self, v: &DualVec2) -> DualVec2 {
        DualVec2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    pub fn mul(&self, o: &Mat2D) -> Mat2D {
        Mat2D::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }

    pub fn real_part(&self) -> Matrix2<f64> {
        Matrix2::new(self.a11.re(), self.a12.re(), self.a21.re(), self.a22.re())
    }

    pub fn dual_part(&self) -> Matrix2<f64> {
        Matrix2::new(self.a11.du(), self.a12.du(), self.a21.du(), self.a22.du())
    }
}
