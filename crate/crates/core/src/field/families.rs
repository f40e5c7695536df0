//! Named coefficient-field fixtures, selectable at runtime.
//!
//! Each family ships with a box on which its ordering constraints hold
//! everywhere (inflated by the default FD stencil).
//!
//! | name                  | A, B, C                                   | α, β              |
//! |-----------------------|-------------------------------------------|-------------------|
//! | `linear`              | `s + 2`, `s − 0.9`, `s`                   | –                 |
//! | `nonlinear`           | `C + 2`, `P(σ) − R(δ) + ½`, `P(σ) + R(δ) + 1.5` | –           |
//! | `broken`              | `s + 2`, `0.5`, `s`                       | –                 |
//! | `conformal_pair`      | as `linear`                               | `5 − d`, `d`      |
//! | `nonlinear_conformal` | as `nonlinear`                            | `5 − d`, `d`      |
//! | `constant_conformal`  | as `linear`                               | `2`, `1`          |
//!
//! with `s = σ = x₁+x₂+x₃+x₄`, `δ = x₁−x₂+x₃−x₄`, `d = x₁ − x₃`,
//! `P(σ) = σ²/10` and `R(δ) = 0.3 sin δ`.
//!
//! The metric-gradient conditions force `C = P(σ) + R(δ)` up to a constant
//! for some pair of profiles: `grad C` must be fixed by `q²`, and
//! integrability of `grad B` then turns into the 1-D wave equation in the
//! variables `x₁+x₃` and `x₂+x₄`.

use super::{Box4, FieldBundle, GradRow, Point, ScalarField};
use crate::error::{Error, Result};

pub trait FieldFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether the metric fields satisfy the parallelism conditions.
    fn parallel(&self) -> bool;
    fn bundle(&self) -> FieldBundle;
}

const LINEAR_BOX: Box4 = Box4::new([0.25, 0.3, 0.15, 0.5], [0.5, 0.6, 0.4, 0.8]);
const NONLINEAR_BOX: Box4 = Box4::cube(-1.0, 1.0);
const CONFORMAL_BOX: Box4 = Box4::new(
    [0.3, f64::NEG_INFINITY, 0.15, f64::NEG_INFINITY],
    [0.5, f64::INFINITY, 0.25, f64::INFINITY],
);

fn sigma(p: &Point) -> f64 {
    p[0] + p[1] + p[2] + p[3]
}

fn delta(p: &Point) -> f64 {
    p[0] - p[1] + p[2] - p[3]
}

const ONES: GradRow = GradRow([1.0; 4]);
const ALTERNATING: GradRow = GradRow([1.0, -1.0, 1.0, -1.0]);

fn sum_field(dom: Box4, offset: f64) -> ScalarField {
    ScalarField::new(dom, move |p| sigma(p) + offset).with_analytic_gradient(|_| ONES)
}

fn linear_metric() -> FieldBundle {
    FieldBundle::metric(
        sum_field(LINEAR_BOX, 2.0),
        sum_field(LINEAR_BOX, -0.9),
        sum_field(LINEAR_BOX, 0.0),
    )
}

fn nonlinear_metric() -> FieldBundle {
    let profile = |p: &Point| 0.1 * sigma(p).powi(2);
    let wave = |p: &Point| 0.3 * delta(p).sin();
    let d_profile = |p: &Point| ONES.scale(0.2 * sigma(p));
    let d_wave = |p: &Point| ALTERNATING.scale(0.3 * delta(p).cos());

    let c = ScalarField::new(NONLINEAR_BOX, move |p| 1.5 + profile(p) + wave(p))
        .with_analytic_gradient(move |p| d_profile(p).add(&d_wave(p)));
    let a = ScalarField::new(NONLINEAR_BOX, move |p| 3.5 + profile(p) + wave(p))
        .with_analytic_gradient(move |p| d_profile(p).add(&d_wave(p)));
    let b = ScalarField::new(NONLINEAR_BOX, move |p| 0.5 + profile(p) - wave(p))
        .with_analytic_gradient(move |p| d_profile(p).sub(&d_wave(p)));
    FieldBundle::metric(a, b, c)
}

fn conformal_pair() -> (ScalarField, ScalarField) {
    let alpha = ScalarField::new(CONFORMAL_BOX, |p| 5.0 - (p[0] - p[2]))
        .with_analytic_gradient(|_| GradRow([-1.0, 0.0, 1.0, 0.0]));
    let beta = ScalarField::new(CONFORMAL_BOX, |p| p[0] - p[2])
        .with_analytic_gradient(|_| GradRow([1.0, 0.0, -1.0, 0.0]));
    (alpha, beta)
}

struct Linear;
struct Nonlinear;
struct Broken;
struct ConformalPair;
struct NonlinearConformal;
struct ConstantConformal;

impl FieldFamily for Linear {
    fn name(&self) -> &'static str {
        "linear"
    }
    fn description(&self) -> &'static str {
        "A = s+2, B = s-0.9, C = s with s = x1+x2+x3+x4"
    }
    fn parallel(&self) -> bool {
        true
    }
    fn bundle(&self) -> FieldBundle {
        linear_metric()
    }
}

impl FieldFamily for Nonlinear {
    fn name(&self) -> &'static str {
        "nonlinear"
    }
    fn description(&self) -> &'static str {
        "C = 1.5 + s^2/10 + 0.3 sin(x1-x2+x3-x4), A = C+2, B = 0.5 + s^2/10 - 0.3 sin(x1-x2+x3-x4)"
    }
    fn parallel(&self) -> bool {
        true
    }
    fn bundle(&self) -> FieldBundle {
        nonlinear_metric()
    }
}

impl FieldFamily for Broken {
    fn name(&self) -> &'static str {
        "broken"
    }
    fn description(&self) -> &'static str {
        "A = s+2, B = 0.5, C = s; violates 2 grad B = (grad C)(q+q^3)"
    }
    fn parallel(&self) -> bool {
        false
    }
    fn bundle(&self) -> FieldBundle {
        FieldBundle::metric(
            sum_field(LINEAR_BOX, 2.0),
            ScalarField::constant(LINEAR_BOX, 0.5),
            sum_field(LINEAR_BOX, 0.0),
        )
    }
}

impl FieldFamily for ConformalPair {
    fn name(&self) -> &'static str {
        "conformal_pair"
    }
    fn description(&self) -> &'static str {
        "linear metric with alpha = 5-(x1-x3), beta = x1-x3"
    }
    fn parallel(&self) -> bool {
        true
    }
    fn bundle(&self) -> FieldBundle {
        let (alpha, beta) = conformal_pair();
        linear_metric().with_conformal(alpha, beta)
    }
}

impl FieldFamily for NonlinearConformal {
    fn name(&self) -> &'static str {
        "nonlinear_conformal"
    }
    fn description(&self) -> &'static str {
        "nonlinear metric with alpha = 5-(x1-x3), beta = x1-x3"
    }
    fn parallel(&self) -> bool {
        true
    }
    fn bundle(&self) -> FieldBundle {
        let (alpha, beta) = conformal_pair();
        nonlinear_metric().with_conformal(alpha, beta)
    }
}

impl FieldFamily for ConstantConformal {
    fn name(&self) -> &'static str {
        "constant_conformal"
    }
    fn description(&self) -> &'static str {
        "linear metric with constant alpha = 2, beta = 1"
    }
    fn parallel(&self) -> bool {
        true
    }
    fn bundle(&self) -> FieldBundle {
        linear_metric().with_conformal(
            ScalarField::constant(Box4::everywhere(), 2.0),
            ScalarField::constant(Box4::everywhere(), 1.0),
        )
    }
}

static FAMILIES: [&dyn FieldFamily; 6] = [
    &Linear,
    &Nonlinear,
    &Broken,
    &ConformalPair,
    &NonlinearConformal,
    &ConstantConformal,
];

pub fn families() -> &'static [&'static dyn FieldFamily] {
    &FAMILIES
}

pub fn family(name: &str) -> Result<&'static dyn FieldFamily> {
    FAMILIES
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::UnknownFamily(name.to_owned()))
}

/// The named fixture's field bundle.
pub fn builtin_families(name: &str) -> Result<FieldBundle> {
    family(name).map(|f| f.bundle())
}

#[cfg(test)]
mod tests {
    use super::super::{check_conformal_parallel, check_metric_parallel, fd_error, fd_gradient};
    use super::*;

    fn grid(b: &Box4) -> impl Iterator<Item = Point> + '_ {
        (0..81).map(move |i| {
            let frac = [i % 3, (i / 3) % 3, (i / 9) % 3, i / 27].map(|t| t as f64 / 2.0);
            b.point_at(frac)
        })
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(
            builtin_families("spherical"),
            Err(Error::UnknownFamily(_))
        ));
        assert_eq!(families().len(), 6);
    }

    #[test]
    fn ordering_holds_on_every_box() {
        for fam in families() {
            let b = fam.bundle();
            let dom = b.domain();
            assert!(!dom.is_empty(), "{}", fam.name());
            for p in grid(&dom) {
                b.ordered_metric_at(&p)
                    .unwrap_or_else(|e| panic!("{} at {p:?}: {e}", fam.name()));
                if let Some(cp) = b.conformal_at(&p) {
                    assert!(
                        cp.unwrap().is_positivity_preserving(),
                        "{} at {p:?}",
                        fam.name()
                    );
                }
            }
        }
    }

    #[test]
    fn parallel_families_pass_and_broken_fails() {
        for fam in families() {
            let b = fam.bundle();
            for p in grid(&b.domain()) {
                let r = check_metric_parallel(&b, &p).unwrap();
                if fam.parallel() {
                    assert!(r.max() < 1e-10, "{} {p:?} {r:?}", fam.name());
                } else {
                    assert!(r.max() > 1.0, "{} {p:?} {r:?}", fam.name());
                }
            }
        }
    }

    #[test]
    fn conformal_pair_passes_check_conformal_parallel_and_sum_is_constant() {
        let b = builtin_families("conformal_pair").unwrap();
        let (alpha, beta) = (b.alpha.as_ref().unwrap(), b.beta.as_ref().unwrap());
        for p in grid(&b.domain()) {
            assert!(check_conformal_parallel(alpha, beta, &p).unwrap().max() < 1e-10);
            assert!((alpha.eval(&p) + beta.eval(&p) - 5.0).abs() < 1e-12);
            let sum = alpha.combine(1.0, beta, 1.0);
            assert!(fd_gradient(&sum, &p).unwrap().max_norm() < 1e-8);
        }
    }

    #[test]
    fn analytic_gradients_agree_with_fd() {
        for fam in families() {
            let b = fam.bundle();
            let p = b.domain().center();
            for f in [&b.a, &b.b, &b.c] {
                assert!(fd_error(f, &p).unwrap().unwrap() < 1e-7, "{}", fam.name());
            }
        }
    }
}
