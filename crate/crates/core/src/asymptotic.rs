//! Large-sample approximations: Pearson chi-square and Wald inference on the
//! log odds ratio.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{IntervalEstimate, IntervalMethod};
use crate::real::Real;
use crate::roots::region_edge;
use crate::special::{chi2_sf, normal_quantile, normal_sf};
use crate::table::{log_odds_ratio, Table2x2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Chi2Result<T> {
    pub t: T,
    pub df: u32,
    pub p: T,
}

/// Estimate, standard error and hypothesized value on the log-OR scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct WaldInput<T> {
    pub b: T,
    pub se: T,
    pub c: T,
}

impl<T: Real> WaldInput<T> {
    /// Wald input for the hypothesis OR = `psi`, from the table's sample log
    /// odds ratio and Woolf standard error.
    pub fn for_table(t: &Table2x2, psi: T) -> Result<Self> {
        Ok(Self { b: log_odds_ratio(t), se: log_or_se(t)?, c: psi.ln() })
    }

    pub fn z(&self) -> T {
        (self.b - self.c).abs() / self.se
    }
}

fn has_zero_margin(t: &Table2x2) -> bool {
    t.cases() == 0 || t.noncases() == 0 || t.exposed() == 0 || t.unexposed() == 0
}

/// Uncorrected Pearson chi-square test of independence.
pub fn pearson_chi2<T: Real>(t: &Table2x2) -> Result<Chi2Result<T>> {
    if has_zero_margin(t) {
        return Err(Error::ZeroExpectedCount);
    }
    let expected: [T; 4] = crate::table::expected_counts(t);
    let stat: T = t
        .cells()
        .iter()
        .zip(expected)
        .map(|(&o, e)| {
            let d = T::from_count(o) - e;
            d * d / e
        })
        .sum();
    Ok(Chi2Result { t: stat, df: 1, p: chi2_sf(stat, 1) })
}

/// Woolf standard error of the log odds ratio, `sqrt(1/a + 1/b + 1/c + 1/d)`.
pub fn log_or_se<T: Real>(t: &Table2x2) -> Result<T> {
    if t.cells().contains(&0) {
        return Err(Error::ZeroCell);
    }
    Ok(t.cells().iter().map(|&n| T::from_count(n).recip()).sum::<T>().sqrt())
}

/// Log odds ratio and Woolf standard error with 0.5 added to every cell.
/// Defined for every table; used where sparse draws must still yield an
/// estimate.
pub fn log_or_haldane<T: Real>(t: &Table2x2) -> (T, T) {
    let h = T::lit(0.5);
    let [a, b, c, d] = t.cells().map(|n| T::from_count(n) + h);
    let est = (a * d).ln() - (b * c).ln();
    let se = (a.recip() + b.recip() + c.recip() + d.recip()).sqrt();
    (est, se)
}

/// Two-sided Wald P-value `2·Φ(−|b − c|/se)`.
pub fn wald_p<T: Real>(inp: &WaldInput<T>) -> Result<T> {
    if !(inp.se > T::zero() && inp.se.is_finite()) {
        return Err(Error::NonpositiveSe(inp.se.as_f64()));
    }
    Ok((T::lit(2.0) * normal_sf(inp.z())).min(T::one()))
}

/// Wald limits `exp(b ± z·se)` with `z = Φ⁻¹(1 − α/2)`. `alpha = 1` gives the
/// degenerate interval at `exp(b)`.
pub fn wald_limits<T: Real>(b: T, se: T, alpha: T) -> Result<IntervalEstimate<T>> {
    if !(se > T::zero() && se.is_finite()) {
        return Err(Error::NonpositiveSe(se.as_f64()));
    }
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidAlpha(alpha.as_f64()));
    }
    let z = normal_quantile(T::one() - alpha / T::lit(2.0));
    Ok(IntervalEstimate::new((b - z * se).exp(), (b + z * se).exp(), alpha, IntervalMethod::Wald))
}

pub fn wald_limits_for_table<T: Real>(t: &Table2x2, alpha: T) -> Result<IntervalEstimate<T>> {
    wald_limits(log_odds_ratio(t), log_or_se(t)?, alpha)
}

/// Pearson test of OR = ψ with both margins fixed.
///
/// Expected counts are the unique table with the observed margins whose odds
/// ratio is ψ; at ψ = 1 this is the ordinary independence test.
#[derive(Debug, Clone, Copy)]
pub struct PearsonTest<T> {
    a: T,
    exposed: T,
    cases: T,
    /// N − n1 − m1
    slack: T,
}

impl<T: Real> PearsonTest<T> {
    pub fn new(t: &Table2x2) -> Result<Self> {
        if has_zero_margin(t) {
            return Err(Error::ZeroExpectedCount);
        }
        let exposed = T::from_count(t.exposed());
        let cases = T::from_count(t.cases());
        Ok(Self { a: T::from_count(t.a()), exposed, cases, slack: T::from_count(t.total()) - exposed - cases })
    }

    /// Log odds ratio of the table with exposed-case count `x` and the
    /// observed margins; increasing in `x`.
    fn log_or_of(&self, x: T) -> T {
        (x.ln() + (self.slack + x).ln()) - ((self.exposed - x).ln() + (self.cases - x).ln())
    }

    /// Fitted exposed-case count under OR = exp(`log_psi`).
    pub fn fitted_at_log(&self, log_psi: T) -> T {
        let mut l = (-self.slack).max(T::zero());
        let mut h = self.exposed.min(self.cases);
        for _ in 0..200 {
            let mid = (l + h) / T::lit(2.0);
            if mid <= l || mid >= h {
                break;
            }
            if self.log_or_of(mid) < log_psi {
                l = mid;
            } else {
                h = mid;
            }
        }
        (l + h) / T::lit(2.0)
    }

    pub fn statistic_at_log(&self, log_psi: T) -> T {
        let x = self.fitted_at_log(log_psi);
        let d = self.a - x;
        d * d * (x.recip() + (self.exposed - x).recip() + (self.cases - x).recip() + (self.slack + x).recip())
    }

    pub fn p_at_log(&self, log_psi: T) -> T {
        let stat = self.statistic_at_log(log_psi);
        if stat.is_nan() {
            return T::one();
        }
        chi2_sf(stat, 1)
    }

    /// Compatibility limits from inverting the Pearson test.
    pub fn limits(&self, alpha: T) -> Result<IntervalEstimate<T>> {
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::InvalidAlpha(alpha.as_f64()));
        }
        let inside = |x: T| self.p_at_log(x) > alpha;
        // the sample log odds ratio, where the statistic is zero
        let mut center = self.log_or_of(self.a);
        if center.is_infinite() {
            // p tends to 1 toward the boundary; walk out until inside
            let dir = center.signum();
            let mut x = T::zero();
            let mut step = T::one();
            while !inside(x) && x.abs() < T::lit(700.0) {
                x = x + dir * step;
                step = step * T::lit(2.0);
            }
            center = x;
        }
        let lower = if self.log_or_of(self.a) == T::neg_infinity() {
            T::zero()
        } else {
            region_edge(inside, center, -T::one()).map_or(T::zero(), T::exp)
        };
        let upper = if self.log_or_of(self.a) == T::infinity() {
            T::infinity()
        } else {
            region_edge(inside, center, T::one()).map_or(T::infinity(), T::exp)
        };
        Ok(IntervalEstimate::new(lower, upper, alpha, IntervalMethod::PearsonInversion))
    }
}

/// Pearson P-value for OR = `psi` with margins fixed.
pub fn pearson_p<T: Real>(t: &Table2x2, psi: T) -> Result<T> {
    if !(psi > T::zero() && psi.is_finite()) {
        return Err(Error::InvalidPsi(psi.as_f64()));
    }
    Ok(PearsonTest::<T>::new(t)?.p_at_log(psi.ln()))
}

pub fn pearson_limits<T: Real>(t: &Table2x2, alpha: T) -> Result<IntervalEstimate<T>> {
    PearsonTest::new(t)?.limits(alpha)
}
