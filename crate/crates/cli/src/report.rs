//! JSON shapes emitted by the subcommands. Each one deserializes back into
//! the same type.

use compat_core::compat::CurveMethod;
use compat_core::real::extended;
use compat_core::{
    AssociationSummary, AugmentedFit, IntervalEstimate, IntervalPrior, PriorData, Table2x2, TestDecision,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescribeReport {
    pub table: Table2x2,
    pub margins: Margins,
    pub summary: AssociationSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Margins {
    pub exposed: u64,
    pub unexposed: u64,
    pub cases: u64,
    pub noncases: u64,
    pub total: u64,
}

impl Margins {
    pub fn of(t: &Table2x2) -> Self {
        Self {
            exposed: t.exposed(),
            unexposed: t.unexposed(),
            cases: t.cases(),
            noncases: t.noncases(),
            total: t.total(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub table: Table2x2,
    pub method: CurveMethod,
    /// Hypothesized odds ratio.
    pub psi: f64,
    /// `two-sided`, `lower` or `upper`.
    pub side: String,
    /// `doubling` or `min-likelihood`; exact test only.
    pub rule: Option<String>,
    pub mid_p: bool,
    /// Chi-square or |z| statistic for the large-sample tests.
    pub statistic: Option<f64>,
    pub p: f64,
    #[serde(with = "extended")]
    pub s_value: f64,
    pub coin_tosses: u32,
    pub decision: Option<TestDecision>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub table: Table2x2,
    pub interval: IntervalEstimate,
    /// Point estimate from the same method: the exact max-P estimate or the
    /// sample odds ratio.
    #[serde(with = "extended")]
    pub estimate: f64,
    /// Conditional MLE (exact method only).
    pub cmle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SValueReport {
    pub p: f64,
    #[serde(with = "extended")]
    pub s_value: f64,
    pub coin_tosses: u32,
    /// `(½^⌈s⌉, ½^⌊s⌋)`, the all-heads probabilities bracketing `p`.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BonferroniReport {
    pub alpha: f64,
    pub k: u32,
    pub per_test_alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorDataReport {
    pub prior: IntervalPrior,
    pub data: PriorData,
    /// True when the bounds are not symmetric about 1 on the log scale, so
    /// the prior was centered at their log midpoint.
    pub recentered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesFitReport {
    pub table: Table2x2,
    pub prior: Option<IntervalPrior>,
    pub fit: AugmentedFit,
}
