//! Compatibility inference for 2×2 tables.
//!
//! Exact conditional and large-sample P-values for the odds ratio, P-value
//! (compatibility) and S-value functions, compatibility intervals by test
//! inversion, α-level decision rules and their error rates, multiplicity
//! arithmetic, prior-data Bayesian fitting, and Monte Carlo checks of the
//! frequency properties of all of the above.
//!
//! Numeric routines are generic over [`Real`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, which is what the simulation
//! layer and the command-line tool use.

pub mod asymptotic;
pub mod compat;
pub mod decisions;
pub mod error;
pub mod exact;
pub mod interval;
pub mod prior;
pub mod real;
mod roots;
pub mod simulate;
pub mod special;
pub mod table;

pub use error::{Boundary, Error, Result};
pub use real::Real;
pub use roots::LOG_PSI_TOLERANCE;
pub use table::{Measure, Table2x2};

pub type AssociationSummary = table::AssociationSummary<f64>;
pub type IntervalEstimate = interval::IntervalEstimate<f64>;
pub type NchgDistribution = exact::NchgDistribution<f64>;
pub type ExactPValue = exact::ExactPValue<f64>;
pub type ExactTest = exact::ExactTest<f64>;
pub type OddsRatioEstimate = exact::OddsRatioEstimate<f64>;
pub type Chi2Result = asymptotic::Chi2Result<f64>;
pub type WaldInput = asymptotic::WaldInput<f64>;
pub type CompatibilityPoint = compat::CompatibilityPoint<f64>;
pub type CompatibilityCurve = compat::CompatibilityCurve<f64>;
pub type Grid = compat::Grid<f64>;
pub type TestDecision = decisions::TestDecision<f64>;
pub type IntervalPrior = prior::IntervalPrior<f64>;
pub type PriorData = prior::PriorData<f64>;
pub type AugmentedFit = prior::AugmentedFit<f64>;

pub use decisions::{Dependence, PowerSpec, PowerTest};
pub use simulate::{Scenario, SimReport};
