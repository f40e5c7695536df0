//! Symmetric circulant 4×4 tensors, the cyclic affinor `q`, and tangent vectors.
//!
//! A symmetric circulant of order four is fixed by three numbers: its first
//! row is `(a, b, c, b)` and row `i` is row 0 shifted right by `i`. The
//! affinor `q` is the cyclic shift with coordinate table `q_i^j = δ_{i+1, j}`,
//! so `q⁴ = E` while `q² ≠ ±E`.
//!
//! Every symmetric circulant commutes with `q`, which is why a metric of this
//! shape satisfies `g(qw, qv) = g(w, v)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{ensure_finite, Error, Result};

/// Tangent vector `(x, y, z, u)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector4 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
}

impl Vector4 {
    pub const fn new(x: f64, y: f64, z: f64, u: f64) -> Self {
        Self { x, y, z, u }
    }

    pub fn try_new(x: f64, y: f64, z: f64, u: f64) -> Result<Self> {
        let v = Self::new(x, y, z, u);
        v.ensure_finite()?;
        Ok(v)
    }

    pub const fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.u]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub(crate) fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite("vector component"))
        }
    }

    /// Euclidean dot product of the coordinates.
    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z + self.u * other.u
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    fn get(&self, i: usize) -> f64 {
        match i & 3 {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => self.u,
        }
    }
}

impl From<[f64; 4]> for Vector4 {
    fn from(a: [f64; 4]) -> Self {
        Self::from_array(a)
    }
}

impl Add for Vector4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z, self.u + o.u)
    }
}

impl Sub for Vector4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z, self.u - o.u)
    }
}

impl Neg for Vector4 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z, -self.u)
    }
}

impl Mul<Vector4> for f64 {
    type Output = Vector4;
    fn mul(self, v: Vector4) -> Vector4 {
        Vector4::new(self * v.x, self * v.y, self * v.z, self * v.u)
    }
}

/// Whether [`make_metric`] enforces the metric ordering `a > c > b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricRole {
    Metric,
    /// No ordering check. Needed for `f`, which is indefinite.
    Raw,
}

/// Symmetric circulant 4×4 tensor with first row `(a, b, c, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymCirc4 {
    a: f64,
    b: f64,
    c: f64,
}

/// Builds a [`SymCirc4`], checking finiteness and, for [`MetricRole::Metric`],
/// the ordering `a > c > b > 0`.
pub fn make_metric(a: f64, b: f64, c: f64, role: MetricRole) -> Result<SymCirc4> {
    ensure_finite(a, "a")?;
    ensure_finite(b, "b")?;
    ensure_finite(c, "c")?;
    if role == MetricRole::Metric && !(a > c && c > b && b > 0.0) {
        return Err(Error::OrderingViolation { a, b, c });
    }
    Ok(SymCirc4 { a, b, c })
}

impl SymCirc4 {
    /// Shorthand for `make_metric(a, b, c, MetricRole::Raw)`.
    pub fn raw(a: f64, b: f64, c: f64) -> Result<Self> {
        make_metric(a, b, c, MetricRole::Raw)
    }

    /// Shorthand for `make_metric(a, b, c, MetricRole::Metric)`.
    pub fn metric(a: f64, b: f64, c: f64) -> Result<Self> {
        make_metric(a, b, c, MetricRole::Metric)
    }

    /// Internal constructor for values produced by finite arithmetic on
    /// already-validated tensors.
    pub(crate) const fn from_parts(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    pub const fn a(&self) -> f64 {
        self.a
    }

    pub const fn b(&self) -> f64 {
        self.b
    }

    pub const fn c(&self) -> f64 {
        self.c
    }

    pub const fn coefficients(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    pub const fn first_row(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.b]
    }

    /// Entry `(i, j)` of the expanded matrix: `first_row[(j - i) mod 4]`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.first_row()[(j + 4 - (i & 3)) & 3]
    }

    pub fn to_matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.entry(i, j);
            }
        }
        m
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    /// Matrix trace, `4a`.
    pub fn trace(&self) -> f64 {
        4.0 * self.a
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_parts(s * self.a, s * self.b, s * self.c)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    /// `(a − c)² ((a + c)² − 4b²)`.
    pub fn det(&self) -> f64 {
        det_closed_form(self)
    }

    pub fn spectrum(&self) -> Spectrum {
        eigenvalues(self)
    }

    /// Inverse, itself a symmetric circulant, assembled from the reciprocal
    /// eigenvalues. `None` when any eigenvalue is zero.
    pub fn inverse(&self) -> Option<Self> {
        let s = self.spectrum();
        if s.top == 0.0 || s.double == 0.0 || s.bottom == 0.0 {
            return None;
        }
        let (t, d, bt) = (1.0 / s.top, 1.0 / s.double, 1.0 / s.bottom);
        Some(Self::from_parts(
            0.25 * (t + 2.0 * d + bt),
            0.25 * (t - bt),
            0.25 * (t - 2.0 * d + bt),
        ))
    }
}

impl fmt::Display for SymCirc4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymCirc4({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Add for SymCirc4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::from_parts(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl Mul<SymCirc4> for f64 {
    type Output = SymCirc4;
    fn mul(self, m: SymCirc4) -> SymCirc4 {
        m.scale(self)
    }
}

/// `(a − c)² ((a + c)² − 4b²)`.
pub fn det_closed_form(m: &SymCirc4) -> f64 {
    let d = m.a - m.c;
    let s = m.a + m.c;
    d * d * (s * s - 4.0 * m.b * m.b)
}

/// Spectrum of a symmetric circulant: `a + 2b + c`, `a − c` (twice), `a − 2b + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// `a + 2b + c`, eigenvector `(1, 1, 1, 1)`.
    pub top: f64,
    /// `a − c`, multiplicity two, eigenvectors `(1, 0, −1, 0)` and `(0, 1, 0, −1)`.
    pub double: f64,
    /// `a − 2b + c`, eigenvector `(1, −1, 1, −1)`.
    pub bottom: f64,
}

impl Spectrum {
    /// All four eigenvalues with multiplicity, ascending.
    pub fn sorted(&self) -> [f64; 4] {
        let mut v = [self.top, self.double, self.double, self.bottom];
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn product(&self) -> f64 {
        self.top * self.double * self.double * self.bottom
    }

    pub fn min(&self) -> f64 {
        self.top.min(self.double).min(self.bottom)
    }
}

pub fn eigenvalues(m: &SymCirc4) -> Spectrum {
    Spectrum {
        top: m.a + 2.0 * m.b + m.c,
        double: m.a - m.c,
        bottom: m.a - 2.0 * m.b + m.c,
    }
}

/// Power `q^k` of the affinor, `k` reduced mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffinorPower(u8);

impl AffinorPower {
    pub const IDENTITY: Self = Self(0);
    pub const Q: Self = Self(1);
    pub const Q2: Self = Self(2);
    pub const Q3: Self = Self(3);

    pub fn new(k: i64) -> Self {
        Self(k.rem_euclid(4) as u8)
    }

    pub const fn k(self) -> usize {
        self.0 as usize
    }

    /// Coordinate table of `q^k`: entry `(i, j)` is 1 iff `j = i + k (mod 4)`.
    pub fn matrix(self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[(i + self.k()) & 3] = 1.0;
        }
        m
    }

    pub fn compose(self, other: Self) -> Self {
        Self((self.0 + other.0) & 3)
    }
}

/// Column action of `q^k`: `(q^k w)_i = w_{i+k}`, so `q(x, y, z, u) = (y, z, u, x)`.
pub fn apply_affinor(w: Vector4, k: AffinorPower) -> Vector4 {
    let s = k.k();
    Vector4::new(w.get(s), w.get(s + 1), w.get(s + 2), w.get(s + 3))
}

/// `wᵀ M v` using the circulant structure directly.
pub fn inner(m: &SymCirc4, w: Vector4, v: Vector4) -> f64 {
    let (w, v) = (w.to_array(), v.to_array());
    let mut diag = 0.0;
    let mut side = 0.0;
    let mut opposite = 0.0;
    for i in 0..4 {
        diag += w[i] * v[i];
        side += w[i] * (v[(i + 1) & 3] + v[(i + 3) & 3]);
        opposite += w[i] * v[(i + 2) & 3];
    }
    m.a * diag + m.b * side + m.c * opposite
}
