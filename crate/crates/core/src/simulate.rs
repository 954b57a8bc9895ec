//! Monte Carlo checks of frequency claims: interval coverage, sparse-data
//! bias of the sample odds ratio, and estimate inflation under a
//! significance filter.
//!
//! # Random streams
//!
//! Every replicate draws from its own ChaCha8 stream: the generator is keyed
//! by `seed` (expanded with `SeedableRng::seed_from_u64`) and the replicate
//! index is the ChaCha stream id. Replicates are therefore independent of one
//! another and of thread scheduling, and two simulations run with the same
//! seed see the same tables (common random numbers).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{log_or_se, wald_limits};
use crate::compat::fmt_sig15;
use crate::error::{Error, Result};
use crate::exact::{limits_for, ExactTest, LimitConstruction};
use crate::table::{log_odds_ratio, Table2x2};

/// Default replication count for desk-scale runs.
pub const DEFAULT_SIMS: u64 = 10_000;

/// Two independent binomial arms with a common baseline risk and a true
/// odds ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub n_exposed: u64,
    pub n_unexposed: u64,
    pub baseline_risk: f64,
    pub or_pop: f64,
    #[serde(default)]
    pub label: String,
}

impl Scenario {
    pub fn new(n_exposed: u64, n_unexposed: u64, baseline_risk: f64, or_pop: f64) -> Result<Self> {
        let sc = Self { n_exposed, n_unexposed, baseline_risk, or_pop, label: String::new() };
        sc.validate()?;
        Ok(sc)
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_exposed < 1 || self.n_unexposed < 1 {
            return Err(Error::InvalidSpec("group sizes must be at least 1".into()));
        }
        if !(self.baseline_risk > 0.0 && self.baseline_risk < 1.0) {
            return Err(Error::InvalidSpec(format!("baseline risk must be in (0, 1), got {}", self.baseline_risk)));
        }
        if !(self.or_pop > 0.0 && self.or_pop.is_finite()) {
            return Err(Error::InvalidSpec(format!("odds ratio must be positive and finite, got {}", self.or_pop)));
        }
        Ok(())
    }

    /// Risk among the exposed: baseline odds × OR, back on the risk scale.
    pub fn exposed_risk(&self) -> f64 {
        let odds = self.baseline_risk / (1.0 - self.baseline_risk) * self.or_pop;
        odds / (1.0 + odds)
    }

    fn samplers(&self) -> Result<(Binomial, Binomial)> {
        let e = Binomial::new(self.n_exposed, self.exposed_risk()).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let u = Binomial::new(self.n_unexposed, self.baseline_risk).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Ok((e, u))
    }
}

/// Generator for replicate `index` under `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws the `index`-th table of a scenario.
pub fn draw_table(sc: &Scenario, seed: u64, index: u64) -> Result<Table2x2> {
    let (e, u) = sc.samplers()?;
    Ok(draw_with(sc, &e, &u, seed, index))
}

fn draw_with(sc: &Scenario, e: &Binomial, u: &Binomial, seed: u64, index: u64) -> Table2x2 {
    let mut rng = replicate_rng(seed, index);
    let a = e.sample(&mut rng);
    let c = u.sample(&mut rng);
    Table2x2::new(a, sc.n_exposed - a, c, sc.n_unexposed - c).expect("arms are nonempty")
}

/// Runs `f` on every replicate table in parallel; results come back in
/// replicate order.
pub(crate) fn map_tables<R, F>(sc: &Scenario, n_sims: u64, seed: u64, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&Table2x2) -> R + Sync,
{
    sc.validate()?;
    if n_sims < 1 {
        return Err(Error::InvalidSpec("n_sims must be at least 1".into()));
    }
    let (e, u) = sc.samplers()?;
    Ok((0..n_sims).into_par_iter().map(|i| f(&draw_with(sc, &e, &u, seed, i))).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Absent for simulations not driven by a two-arm scenario.
    pub scenario: Option<Scenario>,
    pub method: String,
    pub n_sims: u64,
    pub seed: u64,
    pub estimate: f64,
    pub mc_error: f64,
    pub extras: BTreeMap<String, f64>,
}

impl SimReport {
    /// Standard error of a proportion estimated from `n` replicates.
    pub fn rate_error(rate: f64, n: u64) -> f64 {
        if n == 0 {
            return f64::NAN;
        }
        (rate * (1.0 - rate) / n as f64).sqrt()
    }

    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extras.get(key).copied()
    }

    pub fn csv_header() -> &'static str {
        "label,n_exposed,n_unexposed,baseline_risk,or_pop,method,n_sims,seed,estimate,mc_error,extras"
    }

    /// One CSV row matching [`SimReport::csv_header`]; extras are packed as
    /// `key=value` pairs separated by `;`.
    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        match &self.scenario {
            Some(sc) => {
                let _ = write!(
                    s,
                    "{},{},{},{},{},",
                    csv_field(&sc.label),
                    sc.n_exposed,
                    sc.n_unexposed,
                    fmt_sig15(sc.baseline_risk),
                    fmt_sig15(sc.or_pop)
                );
            }
            None => s.push_str(",,,,,"),
        }
        let extras: Vec<String> = self.extras.iter().map(|(k, v)| format!("{k}={}", fmt_sig15(*v))).collect();
        let _ = write!(
            s,
            "{},{},{},{},{},{}",
            csv_field(&self.method),
            self.n_sims,
            self.seed,
            fmt_sig15(self.estimate),
            fmt_sig15(self.mc_error),
            csv_field(&extras.join(";"))
        );
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Reads a JSON array of scenarios.
pub fn load_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_scenarios(&text)
}

pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>> {
    let list: Vec<Scenario> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    for sc in &list {
        sc.validate()?;
    }
    Ok(list)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverageMethod {
    Exact,
    Wald,
}

impl CoverageMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverageMethod::Exact => "exact",
            CoverageMethod::Wald => "wald",
        }
    }

    /// Interval for one table, or `None` when the method yields none.
    pub fn interval(&self, t: &Table2x2, alpha: f64) -> Option<(f64, f64)> {
        match self {
            CoverageMethod::Exact => {
                let iv = limits_for(&ExactTest::<f64>::new(t), alpha, LimitConstruction::TwoSidedInversion);
                Some((iv.lower, iv.upper))
            }
            CoverageMethod::Wald => {
                let se = log_or_se::<f64>(t).ok()?;
                let iv = wald_limits(log_odds_ratio::<f64>(t), se, alpha).ok()?;
                Some((iv.lower, iv.upper))
            }
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Fraction of replicate intervals containing the true odds ratio.
///
/// Replicates where the method produces no interval are excluded from the
/// headline estimate; `coverage_undefined_as_miss` reports the rate with
/// those counted as misses instead.
pub fn coverage_sim(sc: &Scenario, method: CoverageMethod, alpha: f64, n_sims: u64, seed: u64) -> Result<SimReport> {
    check_alpha(alpha)?;
    let outcomes =
        map_tables(sc, n_sims, seed, |t| method.interval(t, alpha).map(|(lo, hi)| lo <= sc.or_pop && sc.or_pop <= hi))?;
    let defined = outcomes.iter().filter(|o| o.is_some()).count() as u64;
    let covered = outcomes.iter().filter(|o| **o == Some(true)).count() as u64;
    let estimate = if defined > 0 { covered as f64 / defined as f64 } else { f64::NAN };
    let as_miss = covered as f64 / n_sims as f64;
    let mut extras = BTreeMap::new();
    extras.insert("undefined_fraction".into(), (n_sims - defined) as f64 / n_sims as f64);
    extras.insert("coverage_undefined_as_miss".into(), as_miss);
    extras.insert("mc_error_undefined_as_miss".into(), SimReport::rate_error(as_miss, n_sims));
    extras.insert("n_defined".into(), defined as f64);
    extras.insert("alpha".into(), alpha);
    Ok(SimReport {
        scenario: Some(sc.clone()),
        method: format!("coverage/{}", method.as_str()),
        n_sims,
        seed,
        estimate,
        mc_error: SimReport::rate_error(estimate, defined),
        extras,
    })
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        (s[m - 1] + s[m]) / 2.0
    }
}

/// Error of the sample log odds ratio, `ln(ad/bc) − ln OR`, over replicates
/// with all four cells positive. The estimate is the mean error; the median,
/// the median over every replicate with a defined estimate (infinite ones
/// included), and the share of infinite or undefined estimates are in the
/// extras.
pub fn sparse_bias_sim(sc: &Scenario, n_sims: u64, seed: u64) -> Result<SimReport> {
    let truth = sc.or_pop.ln();
    let draws = map_tables(sc, n_sims, seed, log_odds_ratio::<f64>)?;
    let errors: Vec<f64> = draws.iter().filter(|x| x.is_finite()).map(|x| x - truth).collect();
    let infinite = draws.iter().filter(|x| x.is_infinite()).count();
    let undefined = draws.iter().filter(|x| x.is_nan()).count();
    let (mean, sd) = mean_sd(&errors);
    let n = errors.len() as f64;
    let mut extras = BTreeMap::new();
    extras.insert("median_error".into(), median(&errors));
    // Dropping infinite estimates removes the most extreme replicates, so
    // the finite-only summaries can sit on the null side when zero cells are
    // common. The median over all non-undefined replicates does not.
    let all: Vec<f64> = draws.iter().filter(|x| !x.is_nan()).map(|x| x - truth).collect();
    extras.insert("median_error_all".into(), median(&all));
    // asymptotic standard error of a sample median under normality
    extras.insert("median_mc_error".into(), (std::f64::consts::PI / 2.0).sqrt() * sd / n.sqrt());
    extras.insert("infinite_fraction".into(), infinite as f64 / n_sims as f64);
    extras.insert("undefined_fraction".into(), undefined as f64 / n_sims as f64);
    extras.insert("n_finite".into(), n);
    Ok(SimReport {
        scenario: Some(sc.clone()),
        method: "sparse-bias".into(),
        n_sims,
        seed,
        estimate: mean,
        mc_error: sd / n.sqrt(),
        extras,
    })
}

/// Mean |log OR| among replicates whose exact test of OR = 1 gives `p ≤ α`,
/// next to the unfiltered mean and the true |ln OR|.
pub fn significance_filter_sim(sc: &Scenario, alpha: f64, n_sims: u64, seed: u64) -> Result<SimReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let draws = map_tables(sc, n_sims, seed, |t| {
        let p = ExactTest::<f64>::new(t).p_at_log(0.0);
        (log_odds_ratio::<f64>(t).abs(), p)
    })?;
    let overall: Vec<f64> = draws.iter().filter(|(l, _)| l.is_finite()).map(|(l, _)| *l).collect();
    let selected: Vec<f64> = draws.iter().filter(|(l, p)| l.is_finite() && *p <= alpha).map(|(l, _)| *l).collect();
    let n_pass = draws.iter().filter(|(_, p)| *p <= alpha).count() as u64;
    let (cond_mean, sd) = mean_sd(&selected);
    let (overall_mean, _) = mean_sd(&overall);
    let truth = sc.or_pop.ln().abs();
    let mut extras = BTreeMap::new();
    extras.insert("overall_mean_abs_log_or".into(), overall_mean);
    extras.insert("true_abs_log_or".into(), truth);
    extras.insert("selected_fraction".into(), n_pass as f64 / n_sims as f64);
    extras.insert("n_selected_finite".into(), selected.len() as f64);
    extras.insert("ratio_to_overall".into(), cond_mean / overall_mean);
    if truth > 0.0 {
        extras.insert("inflation_ratio".into(), cond_mean / truth);
    }
    Ok(SimReport {
        scenario: Some(sc.clone()),
        method: "significance-filter/exact".into(),
        n_sims,
        seed,
        estimate: cond_mean,
        mc_error: sd / (selected.len() as f64).sqrt(),
        extras,
    })
}
