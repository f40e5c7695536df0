//! Angles between `w`, `qw` and `q²w` under circulant metrics.
//!
//! Angles are carried as cosines everywhere; `arccos` belongs to presentation.
//! `cos_q` is the cosine of the angle between `w` and `qw`; `cos_q2` the one
//! between `w` and `q²w`.
//!
//! Under `g̃ = αg + βf` the pair transforms as
//!
//! ```text
//! cos_q'  = (α + β) cos_q / (α + β cos_q2)
//! cos_q2' = (α cos_q2 + β) / (α + β cos_q2)
//! ```
//!
//! The second map is a Möbius transformation with fixed points ±1. In the
//! variable `t = (1 − cos)/(1 + cos)` it is multiplication by
//! `r = (α − β)/(α + β)`, so `cos_q2` climbs to 1 geometrically. `cos_q` also
//! converges, but generally not to 1: its limit is the `q`-cosine under the
//! degenerate limit metric (see [`predicted_limit_cos_q`]).

use std::fmt;

use crate::circulant::{apply_affinor, inner, AffinorPower, SymCirc4, Vector4};
use crate::error::{Error, Result};
use crate::metric::{iterate_metrics_scaled, normalized_limit, ConformalParams, Scaling};
use crate::positivity::ensure_positive_definite;

/// Relative residual below which `w` counts as an eigenvector of `q`.
pub const EIGENVECTOR_TOLERANCE: f64 = 1e-12;

/// Slack allowed on `|cos| ≤ 1` for values produced by rounding.
pub const COSINE_SLACK: f64 = 1e-12;

/// `(g(w, w), g(w, qw), g(w, q²w))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramTriple {
    pub ww: f64,
    pub w_qw: f64,
    pub w_q2w: f64,
}

/// Evaluates the three Gram polynomials in the coordinates of `w`.
pub fn gram_triple(m: &SymCirc4, w: Vector4) -> GramTriple {
    let (a, b, c) = m.coefficients();
    let Vector4 { x, y, z, u } = w;
    let squares = x * x + y * y + z * z + u * u;
    let adjacent = x * y + x * u + y * z + z * u;
    let opposite = x * z + y * u;
    GramTriple {
        ww: a * squares + 2.0 * b * adjacent + 2.0 * c * opposite,
        w_qw: (a + c) * adjacent + b * (squares + 2.0 * opposite),
        w_q2w: 2.0 * a * opposite + 2.0 * b * adjacent + c * squares,
    }
}

/// Cosines of the angles from `w` to `qw` and to `q²w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePair {
    pub cos_q: f64,
    pub cos_q2: f64,
}

impl AnglePair {
    pub fn new(cos_q: f64, cos_q2: f64) -> Result<Self> {
        for value in [cos_q, cos_q2] {
            if !value.is_finite() {
                return Err(Error::NonFinite("cosine"));
            }
            if value.abs() > 1.0 + COSINE_SLACK {
                return Err(Error::CosineOutOfRange { value });
            }
        }
        Ok(Self { cos_q, cos_q2 })
    }

    /// `cos_q2 = −1`: the repelling fixed point, where the sequence stalls.
    pub fn is_boundary(&self) -> bool {
        self.cos_q2 <= -1.0 + COSINE_SLACK
    }

    /// The angles themselves, in radians.
    pub fn angles(&self) -> (f64, f64) {
        (
            self.cos_q.clamp(-1.0, 1.0).acos(),
            self.cos_q2.clamp(-1.0, 1.0).acos(),
        )
    }
}

const EXCLUDED_DIRECTIONS: [([f64; 4], &str); 2] = [
    ([1.0, 1.0, 1.0, 1.0], "(1, 1, 1, 1)"),
    ([1.0, -1.0, 1.0, -1.0], "(1, -1, 1, -1)"),
];

fn check_not_eigenvector(w: Vector4) -> Result<()> {
    let norm_sq = w.norm_sq();
    for (dir, name) in EXCLUDED_DIRECTIONS {
        let d = Vector4::from_array(dir);
        let proj = (w.dot(&d) / d.norm_sq()) * d;
        let residual = (w - proj).norm_sq().sqrt() / norm_sq.sqrt();
        if residual < EIGENVECTOR_TOLERANCE {
            return Err(Error::EigenvectorInput { direction: name });
        }
    }
    Ok(())
}

/// Validates `w` as an angle argument: finite, nonzero, not a real eigenvector of `q`.
pub fn check_angle_vector(w: Vector4) -> Result<()> {
    w.ensure_finite()?;
    if w.norm_sq() == 0.0 {
        return Err(Error::ZeroVector);
    }
    check_not_eigenvector(w)
}

pub fn angle_pair(m: &SymCirc4, w: Vector4) -> Result<AnglePair> {
    check_angle_vector(w)?;
    ensure_positive_definite(m)?;
    gram_cosines(m, w)
}

fn gram_cosines(m: &SymCirc4, w: Vector4) -> Result<AnglePair> {
    let g = gram_triple(m, w);
    if !(g.ww > 0.0) {
        let (a, b, c) = m.coefficients();
        return Err(Error::NotPositiveDefinite { a, b, c });
    }
    AnglePair::new(g.w_qw / g.ww, g.w_q2w / g.ww)
}

/// Angle pair after `g → αg + βf`, computed from the old pair alone.
pub fn transform_angle_pair(p0: AnglePair, cp: ConformalParams) -> Result<AnglePair> {
    cp.ensure_positivity_preserving()?;
    Ok(transform_unchecked(p0, cp))
}

fn transform_unchecked(p0: AnglePair, cp: ConformalParams) -> AnglePair {
    let ConformalParams { alpha, beta } = cp;
    let denom = alpha + beta * p0.cos_q2;
    AnglePair {
        cos_q: (alpha + beta) * p0.cos_q / denom,
        cos_q2: (alpha * p0.cos_q2 + beta) / denom,
    }
}

/// The `cos_q2` that is sent to 0 by the transformation: `−β/α`.
pub fn inverse_special_case(cp: ConformalParams) -> Result<f64> {
    cp.ensure_positivity_preserving()?;
    Ok(-cp.beta / cp.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceSource {
    Recurrence,
    Direct,
}

impl fmt::Display for TraceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Recurrence => "recurrence",
            Self::Direct => "direct",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub cos_q: f64,
    pub cos_q2: f64,
    pub source: TraceSource,
}

impl TraceRow {
    pub fn pair(&self) -> AnglePair {
        AnglePair {
            cos_q: self.cos_q,
            cos_q2: self.cos_q2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AngleTrace {
    pub rows: Vec<TraceRow>,
}

impl AngleTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Indices of rows sitting at the repelling fixed point `cos_q2 = −1`.
    pub fn boundary_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.pair().is_boundary())
            .map(|r| r.n)
            .collect()
    }

    /// Largest componentwise deviation against another trace of the same length.
    pub fn max_abs_deviation(&self, other: &AngleTrace) -> f64 {
        self.rows
            .iter()
            .zip(&other.rows)
            .map(|(x, y)| (x.cos_q - y.cos_q).abs().max((x.cos_q2 - y.cos_q2).abs()))
            .fold(0.0, f64::max)
    }
}

/// Rows `0..=n` obtained by iterating the cosine recurrences from `p0`.
pub fn recurrence_trace(p0: AnglePair, cp: ConformalParams, n: usize) -> Result<AngleTrace> {
    cp.ensure_positivity_preserving()?;
    let p0 = AnglePair::new(p0.cos_q, p0.cos_q2)?;
    let mut rows = Vec::with_capacity(n + 1);
    let mut current = p0;
    for k in 0..=n {
        if k > 0 {
            current = transform_unchecked(current, cp);
        }
        rows.push(TraceRow {
            n: k,
            cos_q: current.cos_q,
            cos_q2: current.cos_q2,
            source: TraceSource::Recurrence,
        });
    }
    Ok(AngleTrace { rows })
}

/// Rows `0..=n` where row `k` is `angle_pair(gₖ, w)`.
///
/// Positivity is checked on `g₀` and `(α, β)` only; every later `gₖ` inherits
/// it. The exact spectral test is not repeated per row because `aₖ − cₖ`
/// decays like `rᵏ` relative to `aₖ` and rounds to zero after roughly
/// thirty steps, which would read as a degenerate metric.
pub fn direct_trace(
    g0: &SymCirc4,
    w: Vector4,
    cp: ConformalParams,
    n: usize,
) -> Result<AngleTrace> {
    direct_trace_scaled(g0, w, cp, n, Scaling::Raw)
}

pub fn direct_trace_scaled(
    g0: &SymCirc4,
    w: Vector4,
    cp: ConformalParams,
    n: usize,
    scaling: Scaling,
) -> Result<AngleTrace> {
    check_angle_vector(w)?;
    let seq = iterate_metrics_scaled(g0, cp, n, scaling)?;
    let rows = seq
        .entries
        .iter()
        .enumerate()
        .map(|(k, g)| {
            gram_cosines(g, w).map(|p| TraceRow {
                n: k,
                cos_q: p.cos_q,
                cos_q2: p.cos_q2,
                source: TraceSource::Direct,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AngleTrace { rows })
}

/// `t = (1 − cos)/(1 + cos)`, the coordinate in which the recurrence is linear.
pub fn mobius_coordinate(cos: f64) -> Result<f64> {
    if cos.abs() > 1.0 + COSINE_SLACK {
        return Err(Error::CosineOutOfRange { value: cos });
    }
    if cos == -1.0 {
        return Err(Error::BoundaryFixedPoint);
    }
    Ok((1.0 - cos) / (1.0 + cos))
}

/// `cos_q2` after `n` steps, from `tₙ = rⁿ t₀`.
pub fn mobius_closed_form(cos_q2_0: f64, cp: ConformalParams, n: u32) -> Result<f64> {
    cp.ensure_positivity_preserving()?;
    if !cos_q2_0.is_finite() {
        return Err(Error::NonFinite("cosine"));
    }
    let t0 = mobius_coordinate(cos_q2_0)?;
    let t = t0 * cp.contraction_ratio().powi(n as i32);
    Ok((1.0 - t) / (1.0 + t))
}

/// Smallest `n` with `cos_q2ₙ ≥ 1 − tol`, predicted from the contraction ratio.
///
/// `1 − cos = 2t/(1 + t)`, so the target is `t ≤ tol/(2 − tol)`.
pub fn predicted_iterations(cos_q2_0: f64, cp: ConformalParams, tol: f64) -> Result<u32> {
    cp.ensure_positivity_preserving()?;
    let t0 = mobius_coordinate(cos_q2_0)?;
    let target = tol / (2.0 - tol);
    if t0 <= target {
        return Ok(0);
    }
    Ok(((target / t0).ln() / cp.contraction_ratio().ln()).ceil() as u32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub cos_q: f64,
    pub cos_q2: f64,
    pub converged: bool,
}

/// Last-row values, flagged converged once the final two rows differ by less
/// than `tol` in both components.
pub fn limit_estimate(trace: &AngleTrace, tol: f64) -> Option<LimitEstimate> {
    let last = trace.rows.last()?;
    let converged = match trace.rows.len() {
        0 | 1 => false,
        len => {
            let prev = &trace.rows[len - 2];
            (last.cos_q - prev.cos_q).abs() < tol && (last.cos_q2 - prev.cos_q2).abs() < tol
        }
    };
    Some(LimitEstimate {
        cos_q: last.cos_q,
        cos_q2: last.cos_q2,
        converged,
    })
}

/// `q`-cosine under the normalized limit metric `((a₀+c₀)/2, b₀, (a₀+c₀)/2)`.
///
/// This is where `cos_q` actually converges along the metric sequence. `None`
/// when `w` lies in the kernel of the limit metric.
pub fn predicted_limit_cos_q(g0: &SymCirc4, w: Vector4) -> Option<f64> {
    let lim = normalized_limit(g0);
    let ww = inner(&lim, w, w);
    if ww <= 1e-14 * lim.max_abs() * w.norm_sq() {
        return None;
    }
    Some(inner(&lim, w, apply_affinor(w, AffinorPower::Q)) / ww)
}
