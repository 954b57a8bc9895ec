use std::fmt;

use serde::{Deserialize, Serialize};

use crate::real::{extended, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalMethod {
    Exact,
    Wald,
    PearsonInversion,
}

impl fmt::Display for IntervalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalMethod::Exact => "exact",
            IntervalMethod::Wald => "wald",
            IntervalMethod::PearsonInversion => "pearson-inversion",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    OddsRatio,
}

/// Compatibility interval for the odds ratio at level `alpha`: the odds
/// ratios whose P-value exceeds `alpha`.
///
/// Either end may be open (`lower = 0`, `upper = +∞`) when the table sits on
/// the boundary of its support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct IntervalEstimate<T> {
    #[serde(with = "extended")]
    pub lower: T,
    #[serde(with = "extended")]
    pub upper: T,
    pub alpha: T,
    pub method: IntervalMethod,
    pub scale: Scale,
}

impl<T: Real> IntervalEstimate<T> {
    pub fn new(lower: T, upper: T, alpha: T, method: IntervalMethod) -> Self {
        Self { lower, upper, alpha, method, scale: Scale::OddsRatio }
    }

    /// Closed-interval membership.
    pub fn contains(&self, psi: T) -> bool {
        self.lower <= psi && psi <= self.upper
    }

    pub fn is_lower_open(&self) -> bool {
        self.lower <= T::zero()
    }

    pub fn is_upper_open(&self) -> bool {
        self.upper.is_infinite()
    }
}
