//! Exact conditional inference for the odds ratio.
//!
//! Conditioning on both margins of a 2×2 table leaves the exposed-case count
//! `A` with a noncentral hypergeometric distribution whose only parameter is
//! the odds ratio ψ:
//!
//! ```text
//! Pr(A = a; ψ) ∝ C(n1, a) · C(N − n1, m1 − a) · ψ^a,   a_min ≤ a ≤ a_max
//! ```
//!
//! Log-weights are accumulated from successive ratios of the combinatorial
//! factor, so margins in the thousands neither overflow nor lose relative
//! precision, and every ψ evaluation afterwards is one pass of `exp`.

use serde::{Deserialize, Serialize};

use crate::error::{Boundary, Error, Result};
use crate::interval::{IntervalEstimate, IntervalMethod};
use crate::real::Real;
use crate::roots::{bisect, bracket_increasing, region_edge};
use crate::table::Table2x2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoSidedRule {
    /// Twice the smaller one-sided tail, capped at 1.
    #[default]
    Doubling,
    /// Total probability of outcomes no more probable than the observed one.
    MinLikelihood,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Lower,
    Upper,
    TwoSided,
}

/// How the exact P-value is formed from the conditional distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExactOptions {
    pub rule: TwoSidedRule,
    /// Count only half of the observed point's probability.
    pub mid_p: bool,
}

/// How exact limits are constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitConstruction {
    /// Roots of `p(ψ) = α` for the two-sided P-value.
    #[default]
    TwoSidedInversion,
    /// Lower limit from `Pr(A ≥ a; ψ) = α/2`, upper from `Pr(A ≤ a; ψ) = α/2`.
    TailPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExactPValue<T> {
    pub p: T,
    pub psi: T,
    pub side: Side,
    pub rule: TwoSidedRule,
    pub mid_p: bool,
}

/// Support and unnormalized log-weights of `A` given the margins, with the
/// ψ-dependence factored out.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalSupport<T> {
    cases: u64,
    exposed: u64,
    total: u64,
    a_min: u64,
    a_max: u64,
    /// `ln[C(n1, a) C(N − n1, m1 − a)]` relative to `a = a_min`.
    log_base: Vec<T>,
}

impl<T: Real> ConditionalSupport<T> {
    pub fn new(cases: u64, exposed: u64, total: u64) -> Result<Self> {
        if cases > total || exposed > total {
            return Err(Error::InvalidSpec(format!("margins ({cases}, {exposed}) exceed the total {total}")));
        }
        let a_min = (cases + exposed).saturating_sub(total);
        let a_max = cases.min(exposed);
        let mut log_base = Vec::with_capacity((a_max - a_min + 1) as usize);
        let mut acc = T::zero();
        log_base.push(acc);
        for a in a_min..a_max {
            let up = T::from_count(exposed - a).ln() + T::from_count(cases - a).ln();
            // (a + 1) and (N − n1 − m1 + a + 1); the latter is ≥ 1 on the support.
            let down_b = T::from_count(total + a + 1 - exposed - cases);
            let down = T::from_count(a + 1).ln() + down_b.ln();
            acc = acc + up - down;
            log_base.push(acc);
        }
        Ok(Self { cases, exposed, total, a_min, a_max, log_base })
    }

    pub fn from_table(t: &Table2x2) -> Self {
        Self::new(t.cases(), t.exposed(), t.total()).expect("table margins are consistent")
    }

    pub fn a_min(&self) -> u64 {
        self.a_min
    }

    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn len(&self) -> usize {
        self.log_base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Normalized weights over the support at `ln ψ`; `ln ψ = ±∞` gives the
    /// point masses at `a_max` and `a_min`.
    pub fn weights_at_log(&self, log_psi: T) -> Vec<T> {
        let n = self.log_base.len();
        if log_psi == T::neg_infinity() {
            let mut w = vec![T::zero(); n];
            w[0] = T::one();
            return w;
        }
        if log_psi == T::infinity() {
            let mut w = vec![T::zero(); n];
            w[n - 1] = T::one();
            return w;
        }
        let mut w: Vec<T> = self.log_base.iter().enumerate().map(|(i, &lb)| lb + T::lit(i as f64) * log_psi).collect();
        let top = w.iter().copied().fold(T::neg_infinity(), T::max);
        let mut sum = T::zero();
        for v in w.iter_mut() {
            *v = (*v - top).exp();
            sum = sum + *v;
        }
        for v in w.iter_mut() {
            *v = *v / sum;
        }
        w
    }

    pub fn distribution(&self, psi: T) -> Result<NchgDistribution<T>> {
        check_psi(psi)?;
        Ok(NchgDistribution {
            cases: self.cases,
            exposed: self.exposed,
            total: self.total,
            psi,
            a_min: self.a_min,
            a_max: self.a_max,
            weights: self.weights_at_log(psi.ln()),
        })
    }
}

fn check_psi<T: Real>(psi: T) -> Result<()> {
    if psi > T::zero() && psi.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidPsi(psi.as_f64()))
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha.as_f64()))
    }
}

/// Noncentral hypergeometric distribution of the exposed-case count.
#[derive(Debug, Clone, PartialEq)]
pub struct NchgDistribution<T> {
    cases: u64,
    exposed: u64,
    total: u64,
    psi: T,
    a_min: u64,
    a_max: u64,
    weights: Vec<T>,
}

impl<T: Real> NchgDistribution<T> {
    pub fn new(cases: u64, exposed: u64, total: u64, psi: T) -> Result<Self> {
        ConditionalSupport::new(cases, exposed, total)?.distribution(psi)
    }

    pub fn for_table(t: &Table2x2, psi: T) -> Result<Self> {
        ConditionalSupport::from_table(t).distribution(psi)
    }

    pub fn cases(&self) -> u64 {
        self.cases
    }
    pub fn exposed(&self) -> u64 {
        self.exposed
    }
    pub fn total(&self) -> u64 {
        self.total
    }
    pub fn psi(&self) -> T {
        self.psi
    }
    pub fn support(&self) -> (u64, u64) {
        (self.a_min, self.a_max)
    }
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn pmf(&self, a: u64) -> T {
        if a < self.a_min || a > self.a_max {
            return T::zero();
        }
        self.weights[(a - self.a_min) as usize]
    }

    /// `Pr(A ≥ a)`.
    pub fn upper_tail(&self, a: u64) -> T {
        if a <= self.a_min {
            return T::one();
        }
        if a > self.a_max {
            return T::zero();
        }
        self.weights[(a - self.a_min) as usize..].iter().copied().sum()
    }

    /// `Pr(A ≤ a)`.
    pub fn lower_tail(&self, a: u64) -> T {
        if a < self.a_min {
            return T::zero();
        }
        if a >= self.a_max {
            return T::one();
        }
        self.weights[..=(a - self.a_min) as usize].iter().copied().sum()
    }

    pub fn mean(&self) -> T {
        self.weights.iter().enumerate().map(|(i, &w)| T::from_count(self.a_min + i as u64) * w).sum()
    }
}

/// Probability of the observed point and the two tails at one ψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tails<T> {
    pub point: T,
    pub lower: T,
    pub upper: T,
}

/// Exact test for one table, reusable across many ψ values.
#[derive(Debug, Clone)]
pub struct ExactTest<T> {
    support: ConditionalSupport<T>,
    observed: u64,
    options: ExactOptions,
}

impl<T: Real> ExactTest<T> {
    pub fn new(t: &Table2x2) -> Self {
        Self::with_options(t, ExactOptions::default())
    }

    pub fn with_options(t: &Table2x2, options: ExactOptions) -> Self {
        Self { support: ConditionalSupport::from_table(t), observed: t.a(), options }
    }

    pub fn options(&self) -> ExactOptions {
        self.options
    }

    pub fn support(&self) -> &ConditionalSupport<T> {
        &self.support
    }

    fn index(&self) -> usize {
        (self.observed - self.support.a_min) as usize
    }

    pub fn is_lower_boundary(&self) -> bool {
        self.observed == self.support.a_min
    }

    pub fn is_upper_boundary(&self) -> bool {
        self.observed == self.support.a_max
    }

    pub fn tails_at_log(&self, log_psi: T) -> Tails<T> {
        let w = self.support.weights_at_log(log_psi);
        let i = self.index();
        Tails { point: w[i], lower: w[..=i].iter().copied().sum(), upper: w[i..].iter().copied().sum() }
    }

    /// Tails with the mid-P adjustment applied when configured.
    fn effective_tails(&self, log_psi: T) -> (T, T, Vec<T>) {
        let w = self.support.weights_at_log(log_psi);
        let i = self.index();
        let mut lower: T = w[..=i].iter().copied().sum();
        let mut upper: T = w[i..].iter().copied().sum();
        if self.options.mid_p {
            let h = w[i] / T::lit(2.0);
            lower = lower - h;
            upper = upper - h;
        }
        (lower, upper, w)
    }

    pub fn one_sided_at_log(&self, log_psi: T, side: Side) -> T {
        let (lower, upper, _) = self.effective_tails(log_psi);
        match side {
            Side::Lower => lower,
            Side::Upper => upper,
            Side::TwoSided => self.p_at_log(log_psi),
        }
    }

    /// Two-sided P-value at `ln ψ`.
    pub fn p_at_log(&self, log_psi: T) -> T {
        let (lower, upper, w) = self.effective_tails(log_psi);
        let p = match self.options.rule {
            TwoSidedRule::Doubling => T::lit(2.0) * lower.min(upper),
            TwoSidedRule::MinLikelihood => {
                let obs = w[self.index()];
                let cut = obs * T::lit(1.0 + 1e-7);
                let mut s: T = w.iter().copied().filter(|&v| v <= cut).sum();
                if self.options.mid_p {
                    s = s - obs / T::lit(2.0);
                }
                s
            }
        };
        p.max(T::zero()).min(T::one())
    }

    pub fn p_value(&self, psi: T) -> Result<ExactPValue<T>> {
        check_psi(psi)?;
        Ok(ExactPValue {
            p: self.p_at_log(psi.ln()),
            psi,
            side: Side::TwoSided,
            rule: self.options.rule,
            mid_p: self.options.mid_p,
        })
    }

    /// Conditional mean of `A` at `ln ψ`.
    pub fn mean_at_log(&self, log_psi: T) -> T {
        let w = self.support.weights_at_log(log_psi);
        let a_min = self.support.a_min;
        w.iter().enumerate().map(|(i, &v)| T::from_count(a_min + i as u64) * v).sum()
    }

    /// The set of ln ψ on which the two-sided P-value attains its maximum,
    /// as `(lo, hi)`; ends run to ±∞ when the observed count sits at the edge
    /// of the support.
    ///
    /// Under the doubling rule this is where both tails are at least ½; under
    /// the minimum-likelihood rule it is where the observed count is a mode.
    pub fn max_p_set(&self) -> Result<(T, T)> {
        if self.support.a_min == self.support.a_max {
            return Err(Error::InvalidSpec(
                "margins admit a single table; the P-value is 1 for every odds ratio".into(),
            ));
        }
        let half = T::lit(0.5);
        match self.options.rule {
            TwoSidedRule::Doubling => {
                let lo = if self.is_lower_boundary() {
                    T::neg_infinity()
                } else {
                    // upper tail rises with ψ
                    self.solve_increasing(|x| self.one_sided_at_log(x, Side::Upper), half)
                };
                let hi = if self.is_upper_boundary() {
                    T::infinity()
                } else {
                    self.solve_increasing(|x| -self.one_sided_at_log(x, Side::Lower), -half)
                };
                Ok((lo, hi))
            }
            TwoSidedRule::MinLikelihood => {
                // pmf(a)/pmf(a−1) = ψ·r(a); the mode is `a` for ψ in [1/r(a), 1/r(a+1)].
                let i = self.index();
                let lb = &self.support.log_base;
                let lo = if i == 0 { T::neg_infinity() } else { -(lb[i] - lb[i - 1]) };
                let hi = if i + 1 == lb.len() { T::infinity() } else { -(lb[i + 1] - lb[i]) };
                Ok((lo, hi))
            }
        }
    }

    /// Root of an increasing function of ln ψ, by geometric bracketing
    /// from zero followed by bisection.
    fn solve_increasing<F: Fn(T) -> T>(&self, f: F, target: T) -> T {
        let (lo, hi) = bracket_increasing(&f, target, T::zero());
        bisect(|x| f(x) >= target, lo, hi)
    }
}

/// Exact tail probability for the observed exposed-case count at `psi`.
pub fn exact_tail<T: Real>(t: &Table2x2, psi: T, side: Side) -> Result<T> {
    check_psi(psi)?;
    let test = ExactTest::<T>::new(t);
    let tails = test.tails_at_log(psi.ln());
    Ok(match side {
        Side::Lower => tails.lower,
        Side::Upper => tails.upper,
        Side::TwoSided => test.p_at_log(psi.ln()),
    })
}

/// Two-sided exact P-value under the default rule (doubling, no mid-P).
pub fn exact_p<T: Real>(t: &Table2x2, psi: T) -> Result<ExactPValue<T>> {
    ExactTest::new(t).p_value(psi)
}

pub fn exact_p_with<T: Real>(t: &Table2x2, psi: T, options: ExactOptions) -> Result<ExactPValue<T>> {
    ExactTest::with_options(t, options).p_value(psi)
}

/// Point estimates of the odds ratio from the exact conditional model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct OddsRatioEstimate<T> {
    /// Log-scale midpoint of the set where the two-sided P-value peaks.
    pub max_p: T,
    pub max_p_set: (T, T),
    /// The attained maximum of the P-value function.
    pub p_max: T,
    /// Conditional MLE, the root of `E_ψ[A] = a`.
    pub cmle: T,
    /// `|ln max_p − ln cmle|`.
    pub log_discrepancy: T,
}

/// Conditional point estimate of the odds ratio.
///
/// Fails with `BoundaryEstimate` when the observed count is the smallest or
/// largest the margins allow.
pub fn cmle_or<T: Real>(t: &Table2x2) -> Result<OddsRatioEstimate<T>> {
    cmle_or_with(t, ExactOptions::default())
}

pub fn cmle_or_with<T: Real>(t: &Table2x2, options: ExactOptions) -> Result<OddsRatioEstimate<T>> {
    let test = ExactTest::<T>::with_options(t, options);
    let (lo, hi) = test.max_p_set()?;
    if test.is_lower_boundary() {
        return Err(Error::BoundaryEstimate(Boundary::Zero));
    }
    if test.is_upper_boundary() {
        return Err(Error::BoundaryEstimate(Boundary::Infinite));
    }
    let observed = T::from_count(t.a());
    let log_cmle = {
        let f = |x: T| test.mean_at_log(x);
        let (l, h) = bracket_increasing(&f, observed, T::zero());
        bisect(|x| f(x) >= observed, l, h)
    };
    let mid = (lo + hi) / T::lit(2.0);
    Ok(OddsRatioEstimate {
        max_p: mid.exp(),
        max_p_set: (lo.exp(), hi.exp()),
        p_max: test.p_at_log(mid),
        cmle: log_cmle.exp(),
        log_discrepancy: (mid - log_cmle).abs(),
    })
}

/// Exact compatibility limits at level `alpha` by two-sided test inversion
/// under the default rule.
pub fn exact_limits<T: Real>(t: &Table2x2, alpha: T) -> Result<IntervalEstimate<T>> {
    exact_limits_with(t, alpha, ExactOptions::default(), LimitConstruction::default())
}

pub fn exact_limits_with<T: Real>(
    t: &Table2x2,
    alpha: T,
    options: ExactOptions,
    construction: LimitConstruction,
) -> Result<IntervalEstimate<T>> {
    check_alpha(alpha)?;
    let test = ExactTest::<T>::with_options(t, options);
    Ok(limits_for(&test, alpha, construction))
}

pub(crate) fn limits_for<T: Real>(
    test: &ExactTest<T>,
    alpha: T,
    construction: LimitConstruction,
) -> IntervalEstimate<T> {
    let (start_lo, start_hi) = match test.max_p_set() {
        Ok(s) => s,
        // a single admissible table: every ψ is compatible
        Err(_) => return IntervalEstimate::new(T::zero(), T::infinity(), alpha, IntervalMethod::Exact),
    };
    let half_alpha = alpha / T::lit(2.0);
    let inside_lo = |x: T| match construction {
        LimitConstruction::TwoSidedInversion => test.p_at_log(x) > alpha,
        LimitConstruction::TailPair => test.one_sided_at_log(x, Side::Upper) > half_alpha,
    };
    let inside_hi = |x: T| match construction {
        LimitConstruction::TwoSidedInversion => test.p_at_log(x) > alpha,
        LimitConstruction::TailPair => test.one_sided_at_log(x, Side::Lower) > half_alpha,
    };
    let lower = if start_lo == T::neg_infinity() {
        T::zero()
    } else {
        region_edge(inside_lo, start_lo, -T::one()).map_or(T::zero(), T::exp)
    };
    let upper = if start_hi == T::infinity() {
        T::infinity()
    } else {
        region_edge(inside_hi, start_hi, T::one()).map_or(T::infinity(), T::exp)
    };
    IntervalEstimate::new(lower, upper, alpha, IntervalMethod::Exact)
}
