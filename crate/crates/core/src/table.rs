//! The 2×2 table and its descriptive association measures.
//!
//! Cells are stored in canonical order:
//!
//! ```text
//!               case   noncase
//! exposed        a        b       n1 = a + b
//! unexposed      c        d       n0 = c + d
//!               m1       m0       N
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct Table2x2 {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

#[derive(Deserialize)]
struct RawTable {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl TryFrom<RawTable> for Table2x2 {
    type Error = Error;

    fn try_from(r: RawTable) -> Result<Self> {
        Table2x2::from_signed(r.a, r.b, r.c, r.d)
    }
}

impl Table2x2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Result<Self> {
        if a + b + c + d == 0 {
            return Err(Error::EmptyTable);
        }
        Ok(Self { a, b, c, d })
    }

    /// Validates signed counts, as read from user input.
    pub fn from_signed(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        for v in [a, b, c, d] {
            if v < 0 {
                return Err(Error::NegativeCount(v));
            }
        }
        Self::new(a as u64, b as u64, c as u64, d as u64)
    }

    /// Builds a table from the cell order of a printed display:
    /// rows are outcome (case, noncase), columns are (unexposed, exposed).
    pub fn from_printed(unexp_case: u64, exp_case: u64, unexp_noncase: u64, exp_noncase: u64) -> Result<Self> {
        Self::new(exp_case, exp_noncase, unexp_case, unexp_noncase)
    }

    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn c(&self) -> u64 {
        self.c
    }
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn cells(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    /// Number of cases, `m1 = a + c`.
    pub fn cases(&self) -> u64 {
        self.a + self.c
    }

    pub fn noncases(&self) -> u64 {
        self.b + self.d
    }

    /// Number exposed, `n1 = a + b`.
    pub fn exposed(&self) -> u64 {
        self.a + self.b
    }

    pub fn unexposed(&self) -> u64 {
        self.c + self.d
    }

    /// Swaps the exposed and unexposed rows.
    pub fn flip_exposure(&self) -> Self {
        Self { a: self.c, b: self.d, c: self.a, d: self.b }
    }

    /// Every cell multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Result<Self> {
        Self::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn summarize<T: Real>(&self) -> AssociationSummary<T> {
        summarize(self)
    }
}

impl fmt::Display for Table2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Table2x2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected four comma-separated counts, got `{s}`")));
        }
        let mut v = [0i64; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| Error::Parse(format!("`{p}` is not an integer count")))?;
        }
        Self::from_signed(v[0], v[1], v[2], v[3])
    }
}

/// A derived measure that may be undefined (0/0) or infinite (x/0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure<T> {
    Finite(T),
    Infinite,
    Undefined,
}

impl<T: Real> Measure<T> {
    fn ratio(num: T, den: T) -> Self {
        if den > T::zero() {
            Measure::Finite(num / den)
        } else if num > T::zero() {
            Measure::Infinite
        } else {
            Measure::Undefined
        }
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Measure::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Value as a float, mapping `Infinite` to `+∞` and `Undefined` to NaN.
    pub fn value(&self) -> T {
        match *self {
            Measure::Finite(v) => v,
            Measure::Infinite => T::infinity(),
            Measure::Undefined => T::nan(),
        }
    }
}

/// Descriptive measures of a table, at full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AssociationSummary<T> {
    pub rd: Measure<T>,
    pub rr: Measure<T>,
    #[serde(rename = "or")]
    pub or_: Measure<T>,
    pub p_exposed: Measure<T>,
    pub p_unexposed: Measure<T>,
    pub odds_exposed: Measure<T>,
    pub odds_unexposed: Measure<T>,
    /// Expected counts under independence, canonical cell order.
    pub expected: [T; 4],
}

pub fn summarize<T: Real>(t: &Table2x2) -> AssociationSummary<T> {
    let [a, b, c, d] = t.cells().map(T::from_count);
    let n1 = a + b;
    let n0 = c + d;
    let p_exposed = Measure::ratio(a, n1);
    let p_unexposed = Measure::ratio(c, n0);
    let rd = match (p_exposed, p_unexposed) {
        (Measure::Finite(x), Measure::Finite(y)) => Measure::Finite(x - y),
        _ => Measure::Undefined,
    };
    let rr = match (p_exposed, p_unexposed) {
        (Measure::Finite(x), Measure::Finite(y)) => Measure::ratio(x, y),
        _ => Measure::Undefined,
    };
    AssociationSummary {
        rd,
        rr,
        or_: Measure::ratio(a * d, b * c),
        p_exposed,
        p_unexposed,
        odds_exposed: Measure::ratio(a, b),
        odds_unexposed: Measure::ratio(c, d),
        expected: expected_counts(t),
    }
}

/// Expected cell counts under independence: row total × column total / N.
pub fn expected_counts<T: Real>(t: &Table2x2) -> [T; 4] {
    let n = T::from_count(t.total());
    let n1 = T::from_count(t.exposed());
    let n0 = T::from_count(t.unexposed());
    let m1 = T::from_count(t.cases());
    let m0 = T::from_count(t.noncases());
    [n1 * m1 / n, n1 * m0 / n, n0 * m1 / n, n0 * m0 / n]
}

/// Sample log odds ratio `ln(ad/bc)`, infinite when a cell is zero.
pub fn log_odds_ratio<T: Real>(t: &Table2x2) -> T {
    let [a, b, c, d] = t.cells().map(T::from_count);
    (a * d).ln() - (b * c).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Table2x2 {
        Table2x2::new(10, 110, 16, 464).unwrap()
    }

    #[test]
    fn example_margins() {
        let t = example();
        assert_eq!(t.total(), 600);
        assert_eq!(t.cases(), 26);
        assert_eq!(t.exposed(), 120);
        assert_eq!(t.unexposed(), 480);
    }

    #[test]
    fn rejects_empty_and_negative() {
        assert_eq!(Table2x2::new(0, 0, 0, 0), Err(Error::EmptyTable));
        assert_eq!(Table2x2::from_signed(1, -2, 0, 0), Err(Error::NegativeCount(-2)));
        assert_eq!(Table2x2::new(1, 0, 0, 1).unwrap().total(), 2);
    }

    #[test]
    fn parses_and_rejects_garbage() {
        assert_eq!("10, 110,16,464".parse::<Table2x2>().unwrap(), example());
        assert!("1,2,3".parse::<Table2x2>().is_err());
        assert!("1,2,x,4".parse::<Table2x2>().is_err());
        assert_eq!("1,2,-3,4".parse::<Table2x2>(), Err(Error::NegativeCount(-3)));
    }

    #[test]
    fn printed_layout_maps_to_canonical() {
        assert_eq!(Table2x2::from_printed(16, 10, 464, 110).unwrap(), example());
    }

    #[test]
    fn example_summary() {
        let s: AssociationSummary<f64> = example().summarize();
        assert!((s.rd.value() - (10.0 / 120.0 - 16.0 / 480.0)).abs() < 1e-15);
        assert!((s.rr.value() - 2.5).abs() < 1e-12);
        assert!((s.or_.value() - 4640.0 / 1760.0).abs() < 1e-12);
        let e = s.expected;
        for (x, y) in e.iter().zip([5.2, 114.8, 20.8, 459.2]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_table() {
        let s: AssociationSummary<f64> = Table2x2::new(5, 5, 5, 5).unwrap().summarize();
        assert_eq!(s.rd, Measure::Finite(0.0));
        assert_eq!(s.rr, Measure::Finite(1.0));
        assert_eq!(s.or_, Measure::Finite(1.0));
    }

    #[test]
    fn degenerate_ratios_are_tagged() {
        let s: AssociationSummary<f64> = Table2x2::new(3, 0, 0, 4).unwrap().summarize();
        assert_eq!(s.or_, Measure::Infinite);
        assert_eq!(s.rr, Measure::Infinite);
        let s: AssociationSummary<f64> = Table2x2::new(0, 0, 2, 4).unwrap().summarize();
        assert_eq!(s.p_exposed, Measure::Undefined);
        assert_eq!(s.rd, Measure::Undefined);
        let s: AssociationSummary<f64> = Table2x2::new(0, 3, 0, 4).unwrap().summarize();
        assert_eq!(s.rr, Measure::Undefined);
        assert_eq!(s.or_, Measure::Undefined);
    }

    #[test]
    fn flip_inverts_or() {
        let t = example();
        assert_eq!(t.flip_exposure(), Table2x2::new(16, 464, 10, 110).unwrap());
        assert_eq!(t.flip_exposure().flip_exposure(), t);
        let or: f64 = t.flip_exposure().summarize::<f64>().or_.value();
        // 1760 / 4640
        assert!((or - 0.379_310_344_827_586_2).abs() < 1e-15);
    }

    #[test]
    fn summary_json_round_trip() {
        let s: AssociationSummary<f64> = Table2x2::new(3, 0, 1, 4).unwrap().summarize();
        let js = serde_json::to_string(&s).unwrap();
        let back: AssociationSummary<f64> = serde_json::from_str(&js).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn table_deserialization_validates() {
        assert!(serde_json::from_str::<Table2x2>(r#"{"a":0,"b":0,"c":0,"d":0}"#).is_err());
        assert!(serde_json::from_str::<Table2x2>(r#"{"a":-1,"b":0,"c":0,"d":3}"#).is_err());
        let t: Table2x2 = serde_json::from_str(r#"{"a":10,"b":110,"c":16,"d":464}"#).unwrap();
        assert_eq!(t, example());
    }
}
