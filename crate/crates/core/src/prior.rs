//! Priors expressed as data.
//!
//! A normal prior on a log ratio is translated into the balanced two-arm
//! pseudo-trial whose log-ratio variance matches it, and the posterior mode
//! is found by appending that pseudo-trial to the observed table as a second
//! stratum of one logistic model.

use serde::{Deserialize, Serialize};

use crate::asymptotic::log_or_haldane;
use crate::error::{Boundary, Error, Result};
use crate::real::{extended, Real};
use crate::special::normal_quantile;
use crate::table::{log_odds_ratio, Table2x2};

/// Noncases per arm in the prior stratum.
pub const PRIOR_NONCASES: f64 = 1e6;
/// IRLS iteration cap.
pub const MAX_ITERATIONS: usize = 100;

/// Largest change of any coefficient in one Newton step. Under sharp
/// prior-data conflict an uncapped first step can push an intercept so far
/// that its binomial weight underflows.
const MAX_STEP: f64 = 2.0;
const GRADIENT_TOLERANCE: f64 = 1e-10;

/// Relative slack used for step acceptance and the step-size stop: about
/// 2e-12 in double precision, 1e-3 in single.
fn slack<T: Real>() -> T {
    T::epsilon() * T::lit(1e4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorScale {
    OddsRatio,
    RateRatio,
}

/// "The ratio lies in `[lower, upper]` with probability `level`", read as a
/// normal prior on the log ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct IntervalPrior<T> {
    pub lower: T,
    pub upper: T,
    pub level: T,
    pub scale: PriorScale,
}

impl<T: Real> IntervalPrior<T> {
    pub fn new(lower: T, upper: T, level: T) -> Result<Self> {
        let p = Self { lower, upper, level, scale: PriorScale::OddsRatio };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.lower, self.upper);
        if !(lo > T::zero() && hi.is_finite()) {
            return Err(Error::InvalidSpec(format!("prior bounds must be positive and finite, got {lo}, {hi}")));
        }
        if lo == hi {
            return Err(Error::DegeneratePrior);
        }
        if lo > hi {
            return Err(Error::InvalidSpec(format!("prior lower bound {lo} exceeds upper bound {hi}")));
        }
        if !(self.level > T::zero() && self.level < T::one()) {
            return Err(Error::InvalidAlpha(self.level.as_f64()));
        }
        Ok(())
    }

    /// Midpoint of the bounds on the log scale.
    pub fn center_log(&self) -> T {
        (self.lower.ln() + self.upper.ln()) / T::lit(2.0)
    }

    /// True when the bounds are symmetric about the center on the log scale
    /// only after re-centering, i.e. when `lower · upper ≠ 1`.
    pub fn is_recentered(&self) -> bool {
        (self.lower * self.upper - T::one()).abs() > T::lit(1e-12)
    }
}

/// The balanced pseudo-trial equivalent to a normal log-ratio prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PriorData<T> {
    pub cases_per_arm: T,
    pub total_cases: T,
    pub implied_se: T,
    pub center_log: T,
    /// Smallest whole number of cases per arm whose implied interval is no
    /// wider than the stated one.
    pub required_cases_per_arm: u64,
    pub required_total_cases: u64,
}

impl<T: Real> PriorData<T> {
    pub fn from_cases(cases_per_arm: T, center_log: T) -> Result<Self> {
        if !(cases_per_arm > T::zero() && cases_per_arm.is_finite()) {
            return Err(Error::InvalidSpec(format!("cases per arm must be positive, got {cases_per_arm}")));
        }
        // guard against the ceiling landing one above an exact integer
        let nudged = cases_per_arm * (T::one() - T::lit(1e-12));
        let required = nudged.ceil().as_f64() as u64;
        Ok(Self {
            cases_per_arm,
            total_cases: T::lit(2.0) * cases_per_arm,
            implied_se: (T::lit(2.0) / cases_per_arm).sqrt(),
            center_log,
            required_cases_per_arm: required,
            required_total_cases: 2 * required,
        })
    }

    /// Central prior interval with mass `level` on the ratio scale.
    pub fn implied_interval(&self, level: T) -> (T, T) {
        let z = normal_quantile((T::one() + level) / T::lit(2.0));
        ((self.center_log - z * self.implied_se).exp(), (self.center_log + z * self.implied_se).exp())
    }
}

pub fn prior_to_data<T: Real>(prior: &IntervalPrior<T>) -> Result<PriorData<T>> {
    prior.validate()?;
    let z = normal_quantile((T::one() + prior.level) / T::lit(2.0));
    let se = (prior.upper.ln() - prior.lower.ln()) / (T::lit(2.0) * z);
    PriorData::from_cases(T::lit(2.0) / (se * se), prior.center_log())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AugmentedFit<T> {
    #[serde(with = "extended")]
    pub log_or_posterior: T,
    #[serde(with = "extended")]
    pub se_posterior: T,
    #[serde(with = "extended")]
    pub frequentist_log_or: T,
    #[serde(with = "extended")]
    pub frequentist_se: T,
    /// Set when the observed table puts the maximum-likelihood odds ratio
    /// at 0 or infinity.
    pub frequentist_boundary: Option<Boundary>,
    pub prior: Option<PriorData<T>>,
    pub converged: bool,
    pub iterations: usize,
}

impl<T: Real> AugmentedFit<T> {
    pub fn or_posterior(&self) -> T {
        self.log_or_posterior.exp()
    }
}

/// One binomial row of the stacked design.
#[derive(Debug, Clone)]
struct Row<T> {
    y: T,
    n: T,
    x: Vec<T>,
    offset: T,
}

fn softplus<T: Real>(eta: T) -> T {
    eta.max(T::zero()) + (-eta.abs()).exp().ln_1p()
}

fn logistic<T: Real>(eta: T) -> T {
    if eta >= T::zero() {
        T::one() / (T::one() + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (T::one() + e)
    }
}

fn eta<T: Real>(row: &Row<T>, beta: &[T]) -> T {
    row.x.iter().zip(beta).fold(row.offset, |acc, (x, b)| acc + *x * *b)
}

fn log_lik<T: Real>(rows: &[Row<T>], beta: &[T]) -> T {
    rows.iter()
        .map(|r| {
            let e = eta(r, beta);
            r.y * e - r.n * softplus(e)
        })
        .sum()
}

/// Score vector and information matrix.
fn score_info<T: Real>(rows: &[Row<T>], beta: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
    let k = beta.len();
    let mut u = vec![T::zero(); k];
    let mut info = vec![vec![T::zero(); k]; k];
    for r in rows {
        let pi = logistic(eta(r, beta));
        let resid = r.y - r.n * pi;
        let w = r.n * pi * (T::one() - pi);
        for i in 0..k {
            u[i] = u[i] + resid * r.x[i];
            for (cell, xj) in info[i].iter_mut().zip(&r.x) {
                *cell = *cell + w * r.x[i] * *xj;
            }
        }
    }
    (u, info)
}

/// Cholesky factor of a symmetric positive-definite matrix.
fn cholesky<T: Real>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let k = a.len();
    let mut l = vec![vec![T::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let s = (0..j).fold(a[i][j], |acc, m| acc - l[i][m] * l[j][m]);
            if i == j {
                if s <= T::zero() {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

fn chol_solve<T: Real>(l: &[Vec<T>], b: &[T]) -> Vec<T> {
    let k = l.len();
    let mut y = vec![T::zero(); k];
    for i in 0..k {
        y[i] = (0..i).fold(b[i], |acc, m| acc - l[i][m] * y[m]) / l[i][i];
    }
    let mut x = vec![T::zero(); k];
    for i in (0..k).rev() {
        x[i] = ((i + 1)..k).fold(y[i], |acc, m| acc - l[m][i] * x[m]) / l[i][i];
    }
    x
}

struct Fit<T> {
    beta: Vec<T>,
    cov_last: T,
    converged: bool,
    iterations: usize,
}

/// Newton–Raphson (IRLS) from `start` with step halving. Stops when the score
/// is below `GRADIENT_TOLERANCE` or when an accepted step no longer moves
/// any coefficient by more than a few thousand ulps; with pseudo-counts near
/// 10⁶ the score cannot always be resolved below 1e-10 in floating point.
fn irls<T: Real>(rows: &[Row<T>], start: Vec<T>) -> Result<Fit<T>> {
    let mut beta = start;
    let mut ll = log_lik(rows, &beta);
    for iter in 1..=MAX_ITERATIONS {
        let (u, info) = score_info(rows, &beta);
        let l = cholesky(&info).ok_or(Error::NonConvergence(iter))?;
        if u.iter().all(|g| g.abs() < T::lit(GRADIENT_TOLERANCE)) {
            return Ok(finish(beta, &l, true, iter - 1));
        }
        let step = chol_solve(&l, &u);
        let longest = step.iter().fold(T::zero(), |m, s| m.max(s.abs()));
        let mut scale = (T::lit(MAX_STEP) / longest).min(T::one());
        let mut accepted = None;
        for _ in 0..60 {
            let cand: Vec<T> = beta.iter().zip(&step).map(|(b, s)| *b + scale * *s).collect();
            let cand_ll = log_lik(rows, &cand);
            if cand_ll >= ll - slack::<T>() * ll.abs().max(T::one()) {
                accepted = Some((cand, cand_ll));
                break;
            }
            scale = scale / T::lit(2.0);
        }
        let Some((cand, cand_ll)) = accepted else {
            return Err(Error::NonConvergence(iter));
        };
        let moved = cand.iter().zip(&beta).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max);
        beta = cand;
        ll = cand_ll;
        if moved < slack() {
            let (_, info) = score_info(rows, &beta);
            let l = cholesky(&info).ok_or(Error::NonConvergence(iter))?;
            return Ok(finish(beta, &l, true, iter));
        }
    }
    Err(Error::NonConvergence(MAX_ITERATIONS))
}

fn finish<T: Real>(beta: Vec<T>, l: &[Vec<T>], converged: bool, iterations: usize) -> Fit<T> {
    let k = beta.len();
    let mut e = vec![T::zero(); k];
    e[k - 1] = T::one();
    let cov_last = chol_solve(l, &e)[k - 1];
    Fit { beta, cov_last, converged, iterations }
}

fn actual_rows<T: Real>(t: &Table2x2, k: usize) -> Vec<Row<T>> {
    let mut exposed = vec![T::zero(); k];
    exposed[0] = T::one();
    exposed[k - 1] = T::one();
    let mut unexposed = vec![T::zero(); k];
    unexposed[0] = T::one();
    let mut rows = Vec::new();
    if t.exposed() > 0 {
        rows.push(Row { y: T::from_count(t.a()), n: T::from_count(t.exposed()), x: exposed, offset: T::zero() });
    }
    if t.unexposed() > 0 {
        rows.push(Row { y: T::from_count(t.c()), n: T::from_count(t.unexposed()), x: unexposed, offset: T::zero() });
    }
    rows
}

fn unexposed_log_odds<T: Real>(t: &Table2x2) -> T {
    let h = T::lit(0.5);
    (T::from_count(t.c()) + h).ln() - (T::from_count(t.d()) + h).ln()
}

fn separation(t: &Table2x2) -> Option<Boundary> {
    let (ad, bc) = (t.a() * t.d(), t.b() * t.c());
    match (ad, bc) {
        (0, 0) => Some(Boundary::Zero),
        (0, _) => Some(Boundary::Zero),
        (_, 0) => Some(Boundary::Infinite),
        _ => None,
    }
}

/// Frequentist logistic fit of the table alone, plus (when a prior is given)
/// the posterior mode and approximate posterior SD from the augmented fit.
///
/// The prior stratum holds `A` cases and [`PRIOR_NONCASES`] noncases in each
/// arm, with `A` chosen so that `2/A + 2/M` equals the prior variance, and an
/// offset of `−center` on its exposed arm. When the observed table has no
/// cases or no noncases it carries no information on the odds ratio and
/// only the prior stratum is fitted.
pub fn augment_and_fit<T: Real>(t: &Table2x2, prior: Option<&PriorData<T>>) -> Result<AugmentedFit<T>> {
    let boundary = separation(t);
    let (haldane_b, haldane_se) = log_or_haldane::<T>(t);
    let (freq_b, freq_se, freq_iter) = match boundary {
        None => {
            let f = irls(&actual_rows::<T>(t, 2), vec![unexposed_log_odds(t), haldane_b])?;
            (f.beta[1], f.cov_last.sqrt(), f.iterations)
        }
        Some(_) => (log_odds_ratio::<T>(t), T::infinity(), 0),
    };
    let Some(pd) = prior else {
        if let Some(b) = boundary {
            return Err(Error::SeparatedData(b));
        }
        return Ok(AugmentedFit {
            log_or_posterior: freq_b,
            se_posterior: freq_se,
            frequentist_log_or: freq_b,
            frequentist_se: freq_se,
            frequentist_boundary: None,
            prior: None,
            converged: true,
            iterations: freq_iter,
        });
    };
    let m = T::lit(PRIOR_NONCASES);
    let var = pd.implied_se * pd.implied_se;
    let slack = var - T::lit(2.0) / m;
    if slack.is_nan() || slack <= T::zero() {
        return Err(Error::InvalidSpec(format!(
            "prior standard error {} is too small to encode with {PRIOR_NONCASES} noncases per arm",
            pd.implied_se
        )));
    }
    let cases = T::lit(2.0) / slack;
    let informative = t.cases() > 0 && t.noncases() > 0;
    let k = if informative { 3 } else { 2 };
    let mut rows = if informative { actual_rows::<T>(t, 3) } else { Vec::new() };
    let mut prior_exposed = vec![T::zero(); k];
    prior_exposed[k - 2] = T::one();
    prior_exposed[k - 1] = T::one();
    let mut prior_unexposed = vec![T::zero(); k];
    prior_unexposed[k - 2] = T::one();
    rows.push(Row { y: cases, n: cases + m, x: prior_exposed, offset: -pd.center_log });
    rows.push(Row { y: cases, n: cases + m, x: prior_unexposed, offset: T::zero() });
    // Starting near the optimum keeps the first Newton steps away from the
    // region where the 10^6-trial prior rows have vanishing weight.
    let (wd, wp) = (haldane_se.powi(-2), var.recip());
    let b0 = (wd * haldane_b + wp * pd.center_log) / (wd + wp);
    let mut start = vec![(cases / m).ln(), b0];
    if informative {
        start.insert(0, unexposed_log_odds(t));
    }
    let fit = irls(&rows, start)?;
    Ok(AugmentedFit {
        log_or_posterior: fit.beta[k - 1],
        se_posterior: fit.cov_last.sqrt(),
        frequentist_log_or: freq_b,
        frequentist_se: freq_se,
        frequentist_boundary: boundary,
        prior: Some(*pd),
        converged: fit.converged,
        iterations: fit.iterations,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Log-likelihood of the observed table at log OR `b`, maximized over
    /// the intercept.
    pub(crate) fn profile_log_lik(t: &Table2x2, b: f64) -> f64 {
        let (a, n1, c, n0) = (t.a() as f64, t.exposed() as f64, t.c() as f64, t.unexposed() as f64);
        let ll = |al: f64| a * (al + b) - n1 * softplus(al + b) + c * al - n0 * softplus(al);
        let mut al = 0.0f64;
        for _ in 0..200 {
            let (p1, p0) = (logistic(al + b), logistic(al));
            let g = a + c - n1 * p1 - n0 * p0;
            let h = n1 * p1 * (1.0 - p1) + n0 * p0 * (1.0 - p0);
            let step = g / h;
            al += step;
            if step.abs() < 1e-13 {
                break;
            }
        }
        ll(al)
    }

    /// Brute-force posterior mode: grid over log OR in [−1, 2], step 1e-4.
    pub(crate) fn grid_mode(t: &Table2x2, center: f64, se: f64) -> f64 {
        (0..=30_000)
            .map(|i| -1.0 + i as f64 * 1e-4)
            .map(|b| (b, profile_log_lik(t, b) - (b - center).powi(2) / (2.0 * se * se)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap()
            .0
    }

    fn example() -> Table2x2 {
        Table2x2::new(10, 110, 16, 464).unwrap()
    }

    #[test]
    fn symmetric_prior_converts_to_232_per_arm() {
        let pd = prior_to_data(&IntervalPrior::new(1.0 / 1.2, 1.2, 0.95f64).unwrap()).unwrap();
        assert!((pd.cases_per_arm - 231.1267).abs() < 1e-3);
        assert_eq!(pd.required_cases_per_arm, 232);
        assert_eq!(pd.required_total_cases, 464);
        assert!(pd.center_log.abs() < 1e-15);
    }

    #[test]
    fn formula_example() {
        let pd = prior_to_data(&IntervalPrior::new(0.5, 2.0, 0.95f64).unwrap()).unwrap();
        let z = 1.959_963_984_540_054f64;
        let se = 2f64.ln() / z;
        assert!((pd.implied_se - se).abs() < 1e-14);
        assert!((pd.cases_per_arm - 2.0 / (se * se)).abs() < 1e-10);
        assert_eq!((pd.cases_per_arm * 10.0).round() / 10.0, 16.0);
    }

    #[test]
    fn invalid_priors() {
        assert!(matches!(IntervalPrior::new(1.2, 1.2, 0.95f64), Err(Error::DegeneratePrior)));
        assert!(IntervalPrior::new(2.0, 1.0, 0.95f64).is_err());
        assert!(IntervalPrior::new(0.5, 2.0, 1.0f64).is_err());
        assert!(IntervalPrior::new(0.0, 2.0, 0.9f64).is_err());
    }

    #[test]
    fn interval_round_trip() {
        let prior = IntervalPrior::new(0.7, 3.1, 0.95f64).unwrap();
        assert!(prior.is_recentered());
        let pd = prior_to_data(&prior).unwrap();
        let (lo, hi) = pd.implied_interval(0.95);
        assert!((lo / 0.7 - 1.0).abs() < 1e-10 && (hi / 3.1 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn no_prior_identity() {
        let fit = augment_and_fit::<f64>(&example(), None).unwrap();
        let l = (10.0f64 * 464.0 / (110.0 * 16.0)).ln();
        assert!((fit.log_or_posterior - l).abs() < 1e-8);
        assert_eq!(fit.log_or_posterior, fit.frequentist_log_or);
        let woolf = (1.0 / 10.0 + 1.0 / 110.0 + 1.0 / 16.0 + 1.0 / 464.0f64).sqrt();
        assert!((fit.frequentist_se - woolf).abs() < 1e-8);
    }

    #[test]
    fn skeptical_prior_dominates_and_matches_grid() {
        let pd = prior_to_data(&IntervalPrior::new(1.0 / 1.2, 1.2, 0.95f64).unwrap()).unwrap();
        let fit = augment_and_fit(&example(), Some(&pd)).unwrap();
        assert!(fit.converged);
        let l = fit.frequentist_log_or;
        assert!(fit.log_or_posterior > 0.0 && fit.log_or_posterior < l / 2.0);
        let oracle = grid_mode(&example(), 0.0, pd.implied_se);
        assert!((fit.log_or_posterior - oracle).abs() < 1e-3, "{} vs {oracle}", fit.log_or_posterior);
    }

    #[test]
    fn separated_table_is_tagged() {
        let t = Table2x2::new(0, 40, 6, 50).unwrap();
        assert!(matches!(augment_and_fit::<f64>(&t, None), Err(Error::SeparatedData(Boundary::Zero))));
        let pd = PriorData::from_cases(20.0f64, 0.0).unwrap();
        let fit = augment_and_fit(&t, Some(&pd)).unwrap();
        assert_eq!(fit.frequentist_boundary, Some(Boundary::Zero));
        assert!(fit.frequentist_log_or == f64::NEG_INFINITY);
        assert!(fit.log_or_posterior < 0.0 && fit.log_or_posterior.is_finite());
    }

    #[test]
    fn no_case_table_returns_the_prior() {
        let t = Table2x2::new(0, 40, 0, 50).unwrap();
        let pd = PriorData::from_cases(50.0f64, 0.3).unwrap();
        let fit = augment_and_fit(&t, Some(&pd)).unwrap();
        assert!((fit.log_or_posterior - 0.3).abs() < 1e-9);
        assert!((fit.se_posterior - pd.implied_se).abs() < 1e-9);
    }

    #[test]
    fn converges_when_prior_and_data_disagree_sharply() {
        let t = Table2x2::new(14, 1900, 11, 44).unwrap();
        let pd = PriorData::from_cases(26_096.9f64, 5.706).unwrap();
        let fit = augment_and_fit(&t, Some(&pd)).unwrap();
        assert!(fit.converged);
        // the prior carries almost all of the information, so the mode sits
        // a little below its center, pulled toward the much smaller data estimate
        assert!(fit.log_or_posterior < 5.706 && fit.log_or_posterior > 5.0);
    }

    #[test]
    fn huge_prior_rejected() {
        let pd = PriorData::from_cases(2e6f64, 0.0).unwrap();
        assert!(matches!(augment_and_fit(&example(), Some(&pd)), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn single_precision_fit() {
        let pd = prior_to_data(&IntervalPrior::new(0.5f32, 2.0, 0.95).unwrap()).unwrap();
        let fit = augment_and_fit::<f32>(&example(), Some(&pd)).unwrap();
        let pd64 = PriorData::from_cases(pd.cases_per_arm as f64, 0.0).unwrap();
        let fit64 = augment_and_fit::<f64>(&example(), Some(&pd64)).unwrap();
        assert!((fit.log_or_posterior as f64 - fit64.log_or_posterior).abs() < 1e-2);
    }
}
