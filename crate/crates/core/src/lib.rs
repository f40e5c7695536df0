//! Circulant Riemannian metrics on a 4-manifold with the cyclic affinor `q`.
//!
//! The crate covers:
//!
//! * [`circulant`]: the metric type [`SymCirc4`], `q` and its powers,
//!   determinants, spectra and inner products.
//! * [`positivity`]: positive-definiteness criteria, registered by name.
//! * [`metric`]: the pullback `f`, the almost conformal transformation
//!   `g̃ = αg + βf` and the iterated sequence `gₙ`.
//! * [`angle`]: angles from `w` to `qw` and `q²w`, how they transform, and
//!   their dynamics along `gₙ`.
//! * [`field`]: coefficient fields, finite-difference gradient conditions for
//!   `∇q = 0`, and the connection itself.

// Negated comparisons like `!(x > 0.0)` deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod circulant;
pub mod error;
pub mod field;
pub mod metric;
pub mod positivity;

pub use angle::{
    angle_pair, direct_trace, direct_trace_scaled, gram_triple, inverse_special_case,
    limit_estimate, mobius_closed_form, mobius_coordinate, predicted_iterations,
    predicted_limit_cos_q, recurrence_trace, transform_angle_pair, AnglePair, AngleTrace,
    GramTriple, LimitEstimate, TraceRow, TraceSource,
};
pub use circulant::{
    apply_affinor, det_closed_form, eigenvalues, inner, make_metric, AffinorPower, MetricRole,
    Spectrum, SymCirc4, Vector4,
};
pub use error::{Error, Result};
pub use metric::{
    closed_form_iterate, conformal_combine, iterate_metrics, iterate_metrics_scaled, pullback_f,
    ConformalParams, MetricSequence, Scaling,
};
pub use positivity::{is_positive_definite, PositivityCriterion, PositivityMode};
