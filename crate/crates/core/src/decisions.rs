//! α-level decision rules, Monte Carlo power, and multiplicity arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{pearson_chi2, wald_p, WaldInput};
use crate::error::{Error, Result};
use crate::exact::ExactTest;
use crate::interval::IntervalEstimate;
use crate::real::Real;
use crate::simulate::{map_tables, replicate_rng, Scenario, SimReport};
use crate::special::normal_sf;
use crate::table::Table2x2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Reject,
    Accept,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Reject => "reject",
            Decision::Accept => "fail-to-reject",
        })
    }
}

/// Outcome of comparing a P-value (or an interval) to a cutoff. `p` is
/// `None` when the decision came from an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct TestDecision<T> {
    pub p: Option<T>,
    pub alpha: T,
    pub decision: Decision,
}

impl<T: Real> fmt::Display for TestDecision<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at level {}", self.decision, self.alpha)
    }
}

fn check_unit_open<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha.as_f64()))
    }
}

/// Reject when `p ≤ α`.
pub fn alpha_test<T: Real>(p: T, alpha: T) -> Result<TestDecision<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidP(p.as_f64()));
    }
    check_unit_open(alpha)?;
    let decision = if p <= alpha { Decision::Reject } else { Decision::Accept };
    Ok(TestDecision { p: Some(p), alpha, decision })
}

/// Reject when `ψ` falls outside the closed interval.
pub fn interval_test<T: Real>(iv: &IntervalEstimate<T>, psi: T) -> TestDecision<T> {
    let decision = if iv.contains(psi) { Decision::Accept } else { Decision::Reject };
    TestDecision { p: None, alpha: iv.alpha, decision }
}

pub fn bonferroni<T: Real>(alpha: T, k: u32) -> Result<T> {
    check_unit_open(alpha)?;
    if k == 0 {
        return Err(Error::InvalidK);
    }
    Ok(alpha / T::from_count(k as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerTest {
    Exact,
    Pearson,
    Wald,
}

impl PowerTest {
    pub fn as_str(&self) -> &'static str {
        match self {
            PowerTest::Exact => "exact",
            PowerTest::Pearson => "pearson",
            PowerTest::Wald => "wald",
        }
    }

    /// P-value for OR = 1, or `None` when the statistic does not exist
    /// (a zero margin, or a zero cell for the Wald test).
    pub fn null_p(&self, t: &Table2x2) -> Option<f64> {
        if t.cases() == 0 || t.noncases() == 0 {
            return None;
        }
        match self {
            PowerTest::Exact => Some(ExactTest::<f64>::new(t).p_at_log(0.0)),
            PowerTest::Pearson => pearson_chi2::<f64>(t).ok().map(|r| r.p),
            PowerTest::Wald => WaldInput::<f64>::for_table(t, 1.0).ok().and_then(|w| wald_p(&w).ok()),
        }
    }
}

impl std::str::FromStr for PowerTest {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(PowerTest::Exact),
            "pearson" => Ok(PowerTest::Pearson),
            "wald" => Ok(PowerTest::Wald),
            other => Err(Error::InvalidSpec(format!("unknown test '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpec {
    pub n_exposed: u64,
    pub n_unexposed: u64,
    pub baseline_risk: f64,
    pub or_pop: f64,
    pub alpha: f64,
    pub test: PowerTest,
    pub n_sims: u64,
    pub seed: u64,
}

impl PowerSpec {
    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::new(self.n_exposed, self.n_unexposed, self.baseline_risk, self.or_pop)
    }

    pub fn with_or(&self, or_pop: f64) -> Self {
        Self { or_pop, ..self.clone() }
    }
}

fn rejects(p: Option<f64>, alpha: f64) -> bool {
    if alpha >= 1.0 {
        return true;
    }
    if alpha <= 0.0 {
        return false;
    }
    matches!(p, Some(p) if p <= alpha)
}

/// Rejection rate of the chosen test of OR = 1 under the spec's true OR.
pub fn power_mc(spec: &PowerSpec) -> Result<SimReport> {
    Ok(power_at_levels(spec, &[spec.alpha])?.remove(0))
}

/// Power at several α levels from a single set of replicate tables, so the
/// rates are monotone in α by construction.
pub fn power_at_levels(spec: &PowerSpec, alphas: &[f64]) -> Result<Vec<SimReport>> {
    for &a in alphas {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::InvalidSpec(format!("alpha must be in [0, 1], got {a}")));
        }
    }
    let sc = spec.scenario()?;
    let ps = map_tables(&sc, spec.n_sims, spec.seed, |t| spec.test.null_p(t))?;
    let undefined = ps.iter().filter(|p| p.is_none()).count() as f64 / spec.n_sims as f64;
    Ok(alphas
        .iter()
        .map(|&alpha| {
            let hits = ps.iter().filter(|p| rejects(**p, alpha)).count() as u64;
            let power = hits as f64 / spec.n_sims as f64;
            let mut extras = BTreeMap::new();
            extras.insert("alpha".into(), alpha);
            extras.insert("beta".into(), 1.0 - power);
            extras.insert("undefined_fraction".into(), undefined);
            SimReport {
                scenario: Some(sc.clone()),
                method: format!("power/{}", spec.test.as_str()),
                n_sims: spec.n_sims,
                seed: spec.seed,
                estimate: power,
                mc_error: SimReport::rate_error(power, spec.n_sims),
                extras,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub or_pop: f64,
    pub power: f64,
    pub beta: f64,
    pub mc_error: f64,
}

/// Power at each true odds ratio in `or_grid`; every point reuses the spec's
/// seed.
pub fn power_curve(spec: &PowerSpec, or_grid: &[f64]) -> Result<Vec<PowerPoint>> {
    if or_grid.is_empty() {
        return Err(Error::InvalidGrid("odds-ratio grid is empty".into()));
    }
    if let Some(bad) = or_grid.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidGrid(format!("odds ratios must be positive and finite, got {bad}")));
    }
    or_grid
        .iter()
        .map(|&or| {
            let r = power_mc(&spec.with_or(or))?;
            Ok(PowerPoint { or_pop: or, power: r.estimate, beta: 1.0 - r.estimate, mc_error: r.mc_error })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Dependence {
    Independent,
    PerfectlyCorrelated,
    /// `k` equicorrelated standard normal statistics with correlation `rho`.
    Simulated {
        rho: f64,
        n_sims: u64,
        seed: u64,
    },
}

/// Probability of at least one `p ≤ α` among `k` true null hypotheses.
pub fn familywise_rate(alpha: f64, k: u32, dependence: Dependence) -> Result<SimReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidSpec(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    let mut extras = BTreeMap::new();
    extras.insert("alpha".into(), alpha);
    extras.insert("k".into(), k as f64);
    let analytic = |method: &str, rate: f64, extras| SimReport {
        scenario: None,
        method: method.into(),
        n_sims: 0,
        seed: 0,
        estimate: rate,
        mc_error: 0.0,
        extras,
    };
    match dependence {
        Dependence::Independent => {
            let rate = -(k as f64 * (-alpha).ln_1p()).exp_m1();
            Ok(analytic("familywise/independent", rate, extras))
        }
        Dependence::PerfectlyCorrelated => Ok(analytic("familywise/perfectly-correlated", alpha, extras)),
        Dependence::Simulated { rho, n_sims, seed } => {
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::InvalidSpec(format!("rho must be in [0, 1], got {rho}")));
            }
            if n_sims == 0 {
                return Err(Error::InvalidSpec("n_sims must be at least 1".into()));
            }
            let (shared, own) = (rho.sqrt(), (1.0 - rho).sqrt());
            let hits = (0..n_sims)
                .into_par_iter()
                .filter(|&i| {
                    let mut rng = replicate_rng(seed, i);
                    let w: f64 = rng.sample(StandardNormal);
                    (0..k).any(|_| {
                        let e: f64 = rng.sample(StandardNormal);
                        let z = shared * w + own * e;
                        2.0 * normal_sf(z.abs()) <= alpha
                    })
                })
                .count() as u64;
            // draws past the first hit are skipped; each replicate owns its
            // stream, so this does not affect other replicates
            let rate = hits as f64 / n_sims as f64;
            extras.insert("rho".into(), rho);
            Ok(SimReport {
                scenario: None,
                method: "familywise/simulated".into(),
                n_sims,
                seed,
                estimate: rate,
                mc_error: SimReport::rate_error(rate, n_sims),
                extras,
            })
        }
    }
}
