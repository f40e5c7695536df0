//! Positive-definiteness tests for [`SymCirc4`], registered by name.
//!
//! Two criteria are provided. `sufficient` is the ordering
//! `0 < b < c < a`, which implies positivity but is not implied by it.
//! `exact` checks the closed-form spectrum.

use crate::circulant::{eigenvalues, SymCirc4};
use crate::error::{Error, Result};

pub trait PositivityCriterion: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn holds(&self, m: &SymCirc4) -> bool;
}

pub struct OrderingCriterion;

impl PositivityCriterion for OrderingCriterion {
    fn name(&self) -> &'static str {
        "sufficient"
    }

    fn description(&self) -> &'static str {
        "ordering 0 < b < c < a (sufficient, not necessary)"
    }

    fn holds(&self, m: &SymCirc4) -> bool {
        let (a, b, c) = m.coefficients();
        0.0 < b && b < c && c < a
    }
}

pub struct SpectralCriterion;

impl PositivityCriterion for SpectralCriterion {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn description(&self) -> &'static str {
        "all eigenvalues a+2b+c, a-c, a-2b+c strictly positive"
    }

    fn holds(&self, m: &SymCirc4) -> bool {
        eigenvalues(m).min() > 0.0
    }
}

static CRITERIA: [&dyn PositivityCriterion; 2] = [&OrderingCriterion, &SpectralCriterion];

pub fn criteria() -> &'static [&'static dyn PositivityCriterion] {
    &CRITERIA
}

pub fn criterion(name: &str) -> Result<&'static dyn PositivityCriterion> {
    CRITERIA
        .iter()
        .copied()
        .find(|c| c.name() == name)
        .ok_or_else(|| Error::UnknownCriterion(name.to_owned()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityMode {
    Sufficient,
    Exact,
}

impl PositivityMode {
    pub fn criterion(self) -> &'static dyn PositivityCriterion {
        match self {
            Self::Sufficient => &OrderingCriterion,
            Self::Exact => &SpectralCriterion,
        }
    }
}

pub fn is_positive_definite(m: &SymCirc4, mode: PositivityMode) -> bool {
    mode.criterion().holds(m)
}

pub(crate) fn ensure_positive_definite(m: &SymCirc4) -> Result<()> {
    if is_positive_definite(m, PositivityMode::Exact) {
        Ok(())
    } else {
        let (a, b, c) = m.coefficients();
        Err(Error::NotPositiveDefinite { a, b, c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use affinor_oracle as oracle;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let g = SymCirc4::raw(3.0, 1.0, 2.0).unwrap();
        assert!(is_positive_definite(&g, PositivityMode::Sufficient));
        assert!(is_positive_definite(&g, PositivityMode::Exact));

        let f = SymCirc4::raw(2.0, 1.0, 3.0).unwrap();
        assert!(!is_positive_definite(&f, PositivityMode::Exact));
        assert!(!oracle::positive_definite_by_minors(&f.to_matrix()));

        let m = SymCirc4::raw(3.0, 1.0, 0.5).unwrap();
        assert!(!is_positive_definite(&m, PositivityMode::Sufficient));
        assert!(is_positive_definite(&m, PositivityMode::Exact));
        assert!(oracle::positive_definite_by_minors(&m.to_matrix()));
        let s = m.spectrum();
        assert_eq!((s.top, s.double, s.bottom), (5.5, 2.5, 1.5));
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(criterion("exact").unwrap().name(), "exact");
        assert_eq!(criterion("sufficient").unwrap().name(), "sufficient");
        assert!(matches!(criterion("nope"), Err(Error::UnknownCriterion(_))));
        assert_eq!(criteria().len(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn exact_agrees_with_minors_and_sufficient_implies_exact(
            a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0,
        ) {
            let m = SymCirc4::raw(a, b, c).unwrap();
            let exact = is_positive_definite(&m, PositivityMode::Exact);
            prop_assert_eq!(exact, oracle::positive_definite_by_minors(&m.to_matrix()));
            if is_positive_definite(&m, PositivityMode::Sufficient) {
                prop_assert!(exact);
            }
        }
    }
}
