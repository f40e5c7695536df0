//! Smooth coefficient fields on a box in R⁴ and the gradient conditions under
//! which `q` is parallel.
//!
//! Gradients are row covectors. `q^k` acts on them from the right, so
//! `(v·q^k)_j = v_{j−k}`; tangent vectors instead shift the other way
//! (see [`crate::circulant::apply_affinor`]).

mod connection;
mod families;

use std::fmt;
use std::sync::Arc;

use crate::circulant::{AffinorPower, SymCirc4};
use crate::error::{Error, Result};
use crate::metric::ConformalParams;

pub use connection::{christoffel, nabla_q, nabla_q_residual, Christoffel};
pub use families::{builtin_families, families, family, FieldFamily};

pub type Point = [f64; 4];

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Axis-aligned closed box `lo ≤ p ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box4 {
    pub lo: Point,
    pub hi: Point,
}

impl Box4 {
    pub const fn new(lo: Point, hi: Point) -> Self {
        Self { lo, hi }
    }

    pub const fn cube(lo: f64, hi: f64) -> Self {
        Self::new([lo; 4], [hi; 4])
    }

    pub const fn everywhere() -> Self {
        Self::cube(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..4).all(|i| self.lo[i] <= p[i] && p[i] <= self.hi[i])
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            out.lo[i] = out.lo[i].max(other.lo[i]);
            out.hi[i] = out.hi[i].min(other.hi[i]);
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        (0..4).any(|i| self.lo[i] > self.hi[i])
    }

    /// Point at fractional coordinates `frac ∈ [0, 1]⁴`.
    pub fn point_at(&self, frac: Point) -> Point {
        let mut p = [0.0; 4];
        for i in 0..4 {
            p[i] = self.lo[i] + frac[i] * (self.hi[i] - self.lo[i]);
        }
        p
    }

    pub fn center(&self) -> Point {
        self.point_at([0.5; 4])
    }
}

type Eval = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
type Gradient = Arc<dyn Fn(&Point) -> GradRow + Send + Sync>;

/// A smooth function on a box with its finite-difference step.
///
/// `eval` must be reentrant and finite on the box inflated by `2·fd_step`.
#[derive(Clone)]
pub struct ScalarField {
    eval: Eval,
    gradient: Option<Gradient>,
    pub domain: Box4,
    pub fd_step: f64,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("domain", &self.domain)
            .field("fd_step", &self.fd_step)
            .field("analytic_gradient", &self.gradient.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new(domain: Box4, eval: impl Fn(&Point) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            gradient: None,
            domain,
            fd_step: DEFAULT_FD_STEP,
        }
    }

    pub fn constant(domain: Box4, value: f64) -> Self {
        Self::new(domain, move |_| value).with_analytic_gradient(|_| GradRow::ZERO)
    }

    /// Attaches a closed-form gradient, used to measure finite-difference error.
    pub fn with_analytic_gradient(
        mut self,
        g: impl Fn(&Point) -> GradRow + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn eval(&self, p: &Point) -> f64 {
        (self.eval)(p)
    }

    pub fn analytic_gradient(&self, p: &Point) -> Option<GradRow> {
        self.gradient.as_ref().map(|g| g(p))
    }

    /// `s·self + t·other` pointwise, on the intersection of both domains.
    pub fn combine(&self, s: f64, other: &ScalarField, t: f64) -> ScalarField {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let mut out = ScalarField::new(self.domain.intersect(&other.domain), move |p| {
            s * f(p) + t * g(p)
        });
        if let (Some(df), Some(dg)) = (self.gradient.clone(), other.gradient.clone()) {
            out = out.with_analytic_gradient(move |p| df(p).scale(s).add(&dg(p).scale(t)));
        }
        out.with_step(self.fd_step)
    }

    /// Pointwise product, on the intersection of both domains.
    pub fn product(&self, other: &ScalarField) -> ScalarField {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let mut out = ScalarField::new(self.domain.intersect(&other.domain), move |p| f(p) * g(p));
        if let (Some(df), Some(dg)) = (self.gradient.clone(), other.gradient.clone()) {
            let (f, g) = (self.eval.clone(), other.eval.clone());
            out = out.with_analytic_gradient(move |p| df(p).scale(g(p)).add(&dg(p).scale(f(p))));
        }
        out.with_step(self.fd_step)
    }

    fn ensure_in_domain(&self, p: &Point) -> Result<()> {
        if self.domain.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: *p })
        }
    }
}

/// Row covector of partial derivatives `(∂₁, ∂₂, ∂₃, ∂₄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradRow(pub [f64; 4]);

impl GradRow {
    pub const ZERO: Self = Self([0.0; 4]);

    pub fn add(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|x| s * x))
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Central differences `(f(p + h eᵢ) − f(p − h eᵢ)) / 2h` on each axis.
pub fn fd_gradient(f: &ScalarField, p: &Point) -> Result<GradRow> {
    f.ensure_in_domain(p)?;
    let h = f.fd_step;
    let mut out = [0.0; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut plus = *p;
        let mut minus = *p;
        plus[i] += h;
        minus[i] -= h;
        let d = (f.eval(&plus) - f.eval(&minus)) / (2.0 * h);
        if !d.is_finite() {
            return Err(Error::NonFinite("field value"));
        }
        *slot = d;
    }
    Ok(GradRow(out))
}

/// Max-norm gap between the finite-difference and closed-form gradients.
pub fn fd_error(f: &ScalarField, p: &Point) -> Result<Option<f64>> {
    let fd = fd_gradient(f, p)?;
    Ok(f.analytic_gradient(p).map(|g| fd.sub(&g).max_norm()))
}

/// Right action `v·q^k`: component `j` is `v_{j−k mod 4}`.
pub fn grad_act(v: GradRow, k: AffinorPower) -> GradRow {
    let s = k.k();
    GradRow(std::array::from_fn(|j| v.0[(j + 4 - s) & 3]))
}

/// Coefficient fields `A, B, C` of the metric, optionally with `α, β`.
#[derive(Debug, Clone)]
pub struct FieldBundle {
    pub a: ScalarField,
    pub b: ScalarField,
    pub c: ScalarField,
    pub alpha: Option<ScalarField>,
    pub beta: Option<ScalarField>,
}

impl FieldBundle {
    pub fn metric(a: ScalarField, b: ScalarField, c: ScalarField) -> Self {
        Self {
            a,
            b,
            c,
            alpha: None,
            beta: None,
        }
    }

    pub fn with_conformal(mut self, alpha: ScalarField, beta: ScalarField) -> Self {
        self.alpha = Some(alpha);
        self.beta = Some(beta);
        self
    }

    pub fn with_step(mut self, h: f64) -> Self {
        for f in [&mut self.a, &mut self.b, &mut self.c] {
            f.fd_step = h;
        }
        for f in [&mut self.alpha, &mut self.beta].into_iter().flatten() {
            f.fd_step = h;
        }
        self
    }

    pub fn fd_step(&self) -> f64 {
        self.a.fd_step
    }

    /// Intersection of every component's domain.
    pub fn domain(&self) -> Box4 {
        let mut d = self
            .a
            .domain
            .intersect(&self.b.domain)
            .intersect(&self.c.domain);
        for f in [&self.alpha, &self.beta].into_iter().flatten() {
            d = d.intersect(&f.domain);
        }
        d
    }

    fn ensure_in_domain(&self, p: &Point) -> Result<()> {
        if self.domain().contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: *p })
        }
    }

    /// `g(p)` with no ordering check.
    pub fn metric_at(&self, p: &Point) -> Result<SymCirc4> {
        self.ensure_in_domain(p)?;
        SymCirc4::raw(self.a.eval(p), self.b.eval(p), self.c.eval(p))
    }

    /// `g(p)`, requiring `A > C > B > 0`.
    pub fn ordered_metric_at(&self, p: &Point) -> Result<SymCirc4> {
        self.ensure_in_domain(p)?;
        SymCirc4::metric(self.a.eval(p), self.b.eval(p), self.c.eval(p))
    }

    pub fn conformal_at(&self, p: &Point) -> Option<Result<ConformalParams>> {
        let (alpha, beta) = (self.alpha.as_ref()?, self.beta.as_ref()?);
        Some(ConformalParams::new(alpha.eval(p), beta.eval(p)))
    }

    fn conformal_fields(&self) -> Result<(&ScalarField, &ScalarField)> {
        match (&self.alpha, &self.beta) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::MissingConformalFields),
        }
    }

    /// `(αA + βC, (α + β)B, αC + βA)` as fields.
    pub fn transformed(&self) -> Result<FieldBundle> {
        let (alpha, beta) = self.conformal_fields()?;
        let a = alpha
            .product(&self.a)
            .combine(1.0, &beta.product(&self.c), 1.0);
        let b = alpha.combine(1.0, beta, 1.0).product(&self.b);
        let c = alpha
            .product(&self.c)
            .combine(1.0, &beta.product(&self.a), 1.0);
        Ok(FieldBundle::metric(a, b, c))
    }
}

/// Residuals of the parallelism conditions
/// `grad A = (grad C) q²` and `2 grad B = (grad C)(q + q³)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientResiduals {
    pub first: f64,
    pub second: f64,
}

impl GradientResiduals {
    pub fn max(&self) -> f64 {
        self.first.max(self.second)
    }
}

fn metric_gradient_residuals(a: &GradRow, b: &GradRow, c: &GradRow) -> GradientResiduals {
    let first = a.sub(&grad_act(*c, AffinorPower::Q2)).max_norm();
    let twist = grad_act(*c, AffinorPower::Q).add(&grad_act(*c, AffinorPower::Q3));
    let second = b.scale(2.0).sub(&twist).max_norm();
    GradientResiduals { first, second }
}

/// `(res_A, res_B)` for the metric coefficients at `p`.
pub fn check_metric_parallel(bundle: &FieldBundle, p: &Point) -> Result<GradientResiduals> {
    bundle.ordered_metric_at(p)?;
    let ga = fd_gradient(&bundle.a, p)?;
    let gb = fd_gradient(&bundle.b, p)?;
    let gc = fd_gradient(&bundle.c, p)?;
    Ok(metric_gradient_residuals(&ga, &gb, &gc))
}

/// `(res_alpha, res_beta)` for `grad α = (grad β) q²`, `grad β = −(grad β) q²`.
pub fn check_conformal_parallel(
    alpha: &ScalarField,
    beta: &ScalarField,
    p: &Point,
) -> Result<GradientResiduals> {
    let ga = fd_gradient(alpha, p)?;
    let gb = fd_gradient(beta, p)?;
    let gb2 = grad_act(gb, AffinorPower::Q2);
    Ok(GradientResiduals {
        first: ga.sub(&gb2).max_norm(),
        second: gb.add(&gb2).max_norm(),
    })
}

/// Residuals of the parallelism conditions for `g̃ = αg + βf`, i.e. the
/// metric-gradient conditions applied to `(αA + βC, (α + β)B, αC + βA)`.
pub fn check_transformed_parallel(bundle: &FieldBundle, p: &Point) -> Result<GradientResiduals> {
    bundle.ensure_in_domain(p)?;
    let t = bundle.transformed()?;
    let ga = fd_gradient(&t.a, p)?;
    let gb = fd_gradient(&t.b, p)?;
    let gc = fd_gradient(&t.c, p)?;
    Ok(metric_gradient_residuals(&ga, &gb, &gc))
}
