//! The pullback metric `f`, the almost conformal transformation
//! `g̃ = αg + βf`, and the iterated sequence `gₙ = α gₙ₋₁ + β fₙ₋₁`.

use crate::circulant::SymCirc4;
use crate::error::{ensure_finite, Error, Result};
use crate::positivity::ensure_positive_definite;

/// Entry magnitude above which sequence operations report [`Error::ScaleOverflow`].
pub const SCALE_LIMIT: f64 = 1e300;

/// The pair `(α, β)` of `g̃ = αg + βf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalParams {
    pub alpha: f64,
    pub beta: f64,
}

impl ConformalParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        ensure_finite(alpha, "alpha")?;
        ensure_finite(beta, "beta")?;
        Ok(Self { alpha, beta })
    }

    /// `0 < β < α`, the range in which positivity is preserved.
    pub fn is_positivity_preserving(&self) -> bool {
        0.0 < self.beta && self.beta < self.alpha
    }

    pub fn ensure_positivity_preserving(&self) -> Result<()> {
        if self.is_positivity_preserving() {
            Ok(())
        } else {
            Err(Error::InvalidParams {
                alpha: self.alpha,
                beta: self.beta,
            })
        }
    }

    /// Contraction ratio `(α − β)/(α + β)` of the cosine recurrence.
    pub fn contraction_ratio(&self) -> f64 {
        (self.alpha - self.beta) / (self.alpha + self.beta)
    }
}

/// `f_ij = g_ik q^k_t q^t_j`; for a symmetric circulant this swaps `a` and `c`.
pub fn pullback_f(g: &SymCirc4) -> SymCirc4 {
    SymCirc4::from_parts(g.c(), g.b(), g.a())
}

/// `αg + βf = (αa + βc, (α + β)b, αc + βa)`.
pub fn conformal_combine(g: &SymCirc4, p: ConformalParams) -> SymCirc4 {
    let ConformalParams { alpha, beta } = p;
    SymCirc4::from_parts(
        alpha * g.a() + beta * g.c(),
        (alpha + beta) * g.b(),
        alpha * g.c() + beta * g.a(),
    )
}

/// How [`iterate_metrics_scaled`] normalizes each entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    #[default]
    Raw,
    /// Divide each `gₙ` by its trace. Angles are unchanged.
    Trace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSequence {
    pub entries: Vec<SymCirc4>,
    pub params: ConformalParams,
}

impl MetricSequence {
    pub fn last(&self) -> &SymCirc4 {
        self.entries.last().expect("sequence always holds g0")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_sequence_inputs(g0: &SymCirc4, p: ConformalParams) -> Result<()> {
    p.ensure_positivity_preserving()?;
    ensure_positive_definite(g0)
}

fn check_scale(m: &SymCirc4, step: usize) -> Result<()> {
    let magnitude = m.max_abs();
    if !(magnitude <= SCALE_LIMIT) {
        return Err(Error::ScaleOverflow { step, magnitude });
    }
    Ok(())
}

/// `[g₀, …, gₙ]` with `gₖ = α gₖ₋₁ + β fₖ₋₁`.
pub fn iterate_metrics(g0: &SymCirc4, p: ConformalParams, n: usize) -> Result<MetricSequence> {
    iterate_metrics_scaled(g0, p, n, Scaling::Raw)
}

pub fn iterate_metrics_scaled(
    g0: &SymCirc4,
    p: ConformalParams,
    n: usize,
    scaling: Scaling,
) -> Result<MetricSequence> {
    check_sequence_inputs(g0, p)?;
    let normalize = |m: SymCirc4| match scaling {
        Scaling::Raw => m,
        Scaling::Trace => m.scale(1.0 / m.trace()),
    };
    let mut entries = Vec::with_capacity(n + 1);
    let mut current = normalize(*g0);
    entries.push(current);
    for step in 1..=n {
        current = normalize(conformal_combine(&current, p));
        check_scale(&current, step)?;
        entries.push(current);
    }
    Ok(MetricSequence { entries, params: p })
}

/// `gₙ` from the decoupled recursion: `aₙ + cₙ = (α+β)ⁿ(a₀+c₀)`,
/// `aₙ − cₙ = (α−β)ⁿ(a₀−c₀)`, `bₙ = (α+β)ⁿ b₀`.
pub fn closed_form_iterate(g0: &SymCirc4, p: ConformalParams, n: u32) -> Result<SymCirc4> {
    check_sequence_inputs(g0, p)?;
    let grow = (p.alpha + p.beta).powi(n as i32);
    let shrink = (p.alpha - p.beta).powi(n as i32);
    let sum = grow * (g0.a() + g0.c());
    let diff = shrink * (g0.a() - g0.c());
    let m = SymCirc4::from_parts(0.5 * (sum + diff), grow * g0.b(), 0.5 * (sum - diff));
    check_scale(&m, n as usize)?;
    Ok(m)
}

/// Limit of `gₙ / (α + β)ⁿ`: `((a₀+c₀)/2, b₀, (a₀+c₀)/2)`. Degenerate, since its
/// double eigenvalue `a − c` is zero.
pub fn normalized_limit(g0: &SymCirc4) -> SymCirc4 {
    let half = 0.5 * (g0.a() + g0.c());
    SymCirc4::from_parts(half, g0.b(), half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::{is_positive_definite, PositivityMode};
    use affinor_oracle as oracle;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn g312() -> SymCirc4 {
        SymCirc4::metric(3.0, 1.0, 2.0).unwrap()
    }

    fn p(alpha: f64, beta: f64) -> ConformalParams {
        ConformalParams::new(alpha, beta).unwrap()
    }

    #[test]
    fn pullback_examples() {
        assert_eq!(pullback_f(&g312()).coefficients(), (2.0, 1.0, 3.0));
        let fixed = SymCirc4::raw(1.0, 0.0, 1.0).unwrap();
        assert_eq!(pullback_f(&fixed), fixed);
        let g = SymCirc4::raw(5.0, 2.0, 4.0).unwrap();
        assert_eq!(pullback_f(&g).coefficients(), (4.0, 2.0, 5.0));
        assert_eq!(pullback_f(&pullback_f(&g)), g);
    }

    #[test]
    fn pullback_matches_index_contraction() {
        for g in [
            g312(),
            SymCirc4::raw(5.0, 2.0, 4.0).unwrap(),
            SymCirc4::raw(-1.5, 0.25, 7.0).unwrap(),
        ] {
            assert_eq!(
                pullback_f(&g).to_matrix(),
                oracle::contract_pullback(&g.to_matrix())
            );
        }
    }

    #[test]
    fn combine_examples() {
        assert_eq!(
            conformal_combine(&g312(), p(2.0, 1.0)).coefficients(),
            (8.0, 3.0, 7.0)
        );
        assert_eq!(conformal_combine(&g312(), p(1.0, 0.0)), g312());
        assert_eq!(conformal_combine(&g312(), p(0.0, 1.0)), pullback_f(&g312()));
    }

    #[test]
    fn nonfinite_params_rejected() {
        assert!(matches!(
            ConformalParams::new(f64::NAN, 1.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn iterate_examples() {
        let s = iterate_metrics(&g312(), p(2.0, 1.0), 1).unwrap();
        assert_eq!(
            s.entries,
            vec![g312(), SymCirc4::raw(8.0, 3.0, 7.0).unwrap()]
        );
        let s = iterate_metrics(&g312(), p(2.0, 1.0), 2).unwrap();
        assert_eq!(s.last().coefficients(), (23.0, 9.0, 22.0));
        assert!(matches!(
            iterate_metrics(&g312(), p(1.0, 2.0), 3),
            Err(Error::InvalidParams { .. })
        ));
        assert!(matches!(
            iterate_metrics(&SymCirc4::raw(2.0, 1.0, 3.0).unwrap(), p(2.0, 1.0), 3),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            closed_form_iterate(&g312(), p(2.0, 1.0), 2)
                .unwrap()
                .coefficients(),
            (23.0, 9.0, 22.0)
        );
        assert_eq!(
            closed_form_iterate(&g312(), p(2.0, 1.0), 0).unwrap(),
            g312()
        );
        let lim = normalized_limit(&g312());
        assert_eq!(lim.coefficients(), (2.5, 1.0, 2.5));
        assert_eq!(lim.spectrum().double, 0.0);
        let g60 = closed_form_iterate(&g312(), p(2.0, 1.0), 60)
            .unwrap()
            .scale(3f64.powi(-60));
        assert_relative_eq!(g60.a(), 2.5, max_relative = 1e-12);
        assert_relative_eq!(g60.c(), 2.5, max_relative = 1e-12);
    }

    #[test]
    fn overflow_reported() {
        let err = iterate_metrics(&g312(), p(1e10, 1.0), 40).unwrap_err();
        assert!(
            matches!(err, Error::ScaleOverflow { step: 30, .. }),
            "{err:?}"
        );
        assert!(matches!(
            closed_form_iterate(&g312(), p(1e10, 1.0), 40),
            Err(Error::ScaleOverflow { .. })
        ));
        let s = iterate_metrics_scaled(&g312(), p(1e10, 1.0), 40, Scaling::Trace).unwrap();
        assert_relative_eq!(s.last().trace(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn iterate_agrees_with_closed_form() {
        let s = iterate_metrics(&g312(), p(2.0, 1.0), 40).unwrap();
        for (n, g) in s.entries.iter().enumerate() {
            let cf = closed_form_iterate(&g312(), p(2.0, 1.0), n as u32).unwrap();
            assert_relative_eq!(g.a(), cf.a(), max_relative = 1e-10);
            assert_relative_eq!(g.b(), cf.b(), max_relative = 1e-10);
            assert_relative_eq!(g.c(), cf.c(), max_relative = 1e-10);
        }
    }

    fn ordered_metric() -> impl Strategy<Value = SymCirc4> {
        (0.01f64..5.0, 0.01f64..5.0, 0.01f64..5.0)
            .prop_map(|(b, dc, da)| SymCirc4::metric(b + dc + da, b, b + dc).unwrap())
    }

    fn params() -> impl Strategy<Value = ConformalParams> {
        (0.01f64..5.0, 0.01f64..0.99)
            .prop_map(|(alpha, frac)| ConformalParams::new(alpha, alpha * frac).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn combine_preserves_positivity(g in ordered_metric(), cp in params()) {
            let t = conformal_combine(&g, cp);
            prop_assert!(is_positive_definite(&t, PositivityMode::Exact));
            let (alpha, beta) = (cp.alpha, cp.beta);
            let (a, b, c) = g.coefficients();
            prop_assert!(alpha * a + beta * c > beta * a + alpha * c);
            prop_assert!(beta * a + alpha * c > (alpha + beta) * b);
            prop_assert!((alpha + beta) * b > 0.0);
        }

        #[test]
        fn combine_is_linear_in_g(
            g in ordered_metric(), h in ordered_metric(), s in -3.0f64..3.0, cp in params(),
        ) {
            let lhs = conformal_combine(&(g + s * h), cp);
            let rhs = conformal_combine(&g, cp) + s * conformal_combine(&h, cp);
            let scale = lhs.max_abs().max(1.0);
            prop_assert!((lhs.a() - rhs.a()).abs() <= 1e-12 * scale);
            prop_assert!((lhs.b() - rhs.b()).abs() <= 1e-12 * scale);
            prop_assert!((lhs.c() - rhs.c()).abs() <= 1e-12 * scale);
        }

        #[test]
        fn exact_only_metrics_stay_positive(
            (a, b, c) in (0.5f64..5.0, 0.0f64..1.0, -1.0f64..1.0)
                .prop_map(|(a, bf, cf)| (a, bf * a * 0.45, cf * a * 0.45)),
            cp in params(),
        ) {
            let g = SymCirc4::raw(a, b, c).unwrap();
            prop_assume!(is_positive_definite(&g, PositivityMode::Exact));
            prop_assert!(is_positive_definite(&conformal_combine(&g, cp), PositivityMode::Exact));
        }

        #[test]
        fn every_sequence_entry_positive(g in ordered_metric(), cp in params(), n in 0usize..30) {
            // Past this point a − c is below the rounding floor of a.
            let gap = cp.contraction_ratio().powi(n as i32) * (g.a() - g.c()) / (g.a() + g.c());
            prop_assume!(gap > 1e-10);
            let s = iterate_metrics_scaled(&g, cp, n, Scaling::Trace).unwrap();
            prop_assert_eq!(s.len(), n + 1);
            for m in &s.entries {
                prop_assert!(is_positive_definite(m, PositivityMode::Exact));
            }
        }
    }
}
