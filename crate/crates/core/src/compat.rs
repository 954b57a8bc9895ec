//! P-value (compatibility) and S-value (surprisal) functions.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{log_or_se, PearsonTest};
use crate::error::{Error, Result};
use crate::exact::ExactTest;
use crate::real::{extended, Real};
use crate::table::{log_odds_ratio, Table2x2};

/// Surprisal `−log₂ p` in bits; `+∞` for `p = 0`.
pub fn s_value<T: Real>(p: T) -> Result<T> {
    check_p(p)?;
    if p == T::zero() {
        return Ok(T::infinity());
    }
    // -0.0 at p = 1 prints badly
    Ok((-p.log2()).max(T::zero()))
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidP(p.as_f64()))
    }
}

/// Number of heads in a row from a fair coin carrying about the same surprise
/// as `p`: the integer nearest the S-value, halves rounded down.
pub fn coin_toss_equivalent<T: Real>(p: T) -> Result<u32> {
    if !(p > T::zero() && p <= T::one()) {
        return Err(Error::InvalidP(p.as_f64()));
    }
    let s = s_value(p)?;
    let n = (s - T::lit(0.5)).ceil().max(T::zero());
    Ok(n.to_u32().unwrap_or(u32::MAX))
}

/// Probabilities of all heads in `⌈s⌉` and `⌊s⌋` tosses, which bracket `p`.
pub fn coin_toss_bracket<T: Real>(p: T) -> Result<(T, T)> {
    if !(p > T::zero() && p <= T::one()) {
        return Err(Error::InvalidP(p.as_f64()));
    }
    let s = s_value(p)?;
    let half = T::lit(0.5);
    Ok((half.powf(s.ceil()), half.powf(s.floor())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMethod {
    Exact,
    Wald,
    Pearson,
}

impl CurveMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveMethod::Exact => "exact",
            CurveMethod::Wald => "wald",
            CurveMethod::Pearson => "pearson",
        }
    }
}

impl FromStr for CurveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CurveMethod::Exact),
            "wald" => Ok(CurveMethod::Wald),
            "pearson" => Ok(CurveMethod::Pearson),
            other => Err(Error::Parse(format!("unknown method `{other}` (expected exact, wald or pearson)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CompatibilityPoint<T> {
    pub psi: T,
    pub p: T,
    #[serde(with = "extended")]
    pub s: T,
}

impl<T: Real> CompatibilityPoint<T> {
    pub fn new(psi: T, p: T) -> Self {
        let s = s_value(p).unwrap_or(T::nan());
        Self { psi, p, s }
    }
}

/// Log-uniform grid of hypothesized odds ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub psi_min: T,
    pub psi_max: T,
    pub points_per_decade: u32,
}

impl<T: Real> Grid<T> {
    pub fn new(psi_min: T, psi_max: T, points_per_decade: u32) -> Result<Self> {
        if !(psi_min > T::zero() && psi_min < psi_max && psi_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("need 0 < psi_min < psi_max < inf (got {psi_min}, {psi_max})")));
        }
        if points_per_decade == 0 {
            return Err(Error::InvalidGrid("points_per_decade must be at least 1".into()));
        }
        Ok(Self { psi_min, psi_max, points_per_decade })
    }

    /// 200 points per decade over `[center/64, center·64]`.
    pub fn around(center: T) -> Result<Self> {
        let span = T::lit(64.0);
        Self::new(center / span, center * span, 200)
    }

    pub fn points(&self) -> Vec<T> {
        let (l0, l1) = (self.psi_min.ln(), self.psi_max.ln());
        let decades = (self.psi_max / self.psi_min).log10();
        let steps = (decades * T::lit(self.points_per_decade as f64)).ceil().max(T::one());
        let k = steps.to_usize().unwrap_or(1);
        (0..=k).map(|i| if i == k { self.psi_max } else { (l0 + (l1 - l0) * T::lit(i as f64) / steps).exp() }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CompatibilityCurve<T> {
    pub method: CurveMethod,
    /// Table the curve was computed from, `a,b,c,d`.
    pub source: String,
    pub alpha_marks: Vec<T>,
    /// Log-scale midpoint of the grid points attaining the largest P-value.
    pub argmax_psi: T,
    pub p_max: T,
    pub points: Vec<CompatibilityPoint<T>>,
}

impl<T: Real> CompatibilityCurve<T> {
    /// Assembles a curve from points, which must have strictly increasing ψ.
    pub fn from_points(
        method: CurveMethod,
        source: impl Into<String>,
        alpha_marks: Vec<T>,
        points: Vec<CompatibilityPoint<T>>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if points.windows(2).any(|w| w[1].psi <= w[0].psi) {
            return Err(Error::InvalidGrid("psi values must be strictly increasing".into()));
        }
        if points.iter().any(|pt| !(pt.p >= T::zero() && pt.p <= T::one())) {
            return Err(Error::InvalidP(f64::NAN));
        }
        let p_max = points.iter().map(|pt| pt.p).fold(T::neg_infinity(), T::max);
        let first = points.iter().position(|pt| pt.p == p_max).unwrap_or(0);
        let last = points.iter().rposition(|pt| pt.p == p_max).unwrap_or(first);
        let argmax_psi = (points[first].psi * points[last].psi).sqrt();
        Ok(Self { method, source: source.into(), alpha_marks, argmax_psi, p_max, points })
    }

    /// Log-linear interpolation of the outermost ψ where the curve crosses
    /// `alpha` on each side of its maximum.
    pub fn crossings(&self, alpha: T) -> (Option<T>, Option<T>) {
        let pts = &self.points;
        let peak = pts.iter().position(|pt| pt.p == self.p_max).unwrap_or(0);
        let interp = |i: usize, j: usize| {
            let (a, b) = (&pts[i], &pts[j]);
            let w = (alpha - a.p) / (b.p - a.p);
            (a.psi.ln() + w * (b.psi.ln() - a.psi.ln())).exp()
        };
        let mut lower = None;
        for i in (0..peak).rev() {
            if pts[i].p <= alpha && pts[i + 1].p > alpha {
                lower = Some(interp(i, i + 1));
                break;
            }
        }
        let mut upper = None;
        for i in peak..pts.len().saturating_sub(1) {
            if pts[i].p > alpha && pts[i + 1].p <= alpha {
                upper = Some(interp(i, i + 1));
                break;
            }
        }
        (lower, upper)
    }

    /// Grid points with `p > alpha`.
    pub fn compatible(&self, alpha: T) -> impl Iterator<Item = &CompatibilityPoint<T>> {
        self.points.iter().filter(move |pt| pt.p > alpha)
    }
}

/// P-value function of the chosen method over a log-uniform grid.
/// Grid points are evaluated in parallel and assembled in ψ order.
pub fn compatibility_curve<T: Real>(
    t: &Table2x2,
    grid: &Grid<T>,
    method: CurveMethod,
    alpha_marks: Vec<T>,
) -> Result<CompatibilityCurve<T>> {
    let psis = grid.points();
    let log_psis: Vec<T> = psis.iter().map(|p| p.ln()).collect();
    let ps: Vec<T> = match method {
        CurveMethod::Exact => {
            let test = ExactTest::<T>::new(t);
            log_psis.par_iter().map(|&x| test.p_at_log(x)).collect()
        }
        CurveMethod::Pearson => {
            let test = PearsonTest::<T>::new(t)?;
            log_psis.par_iter().map(|&x| test.p_at_log(x)).collect()
        }
        CurveMethod::Wald => {
            let b: T = log_odds_ratio(t);
            let se: T = log_or_se(t)?;
            log_psis
                .par_iter()
                .map(|&c| (T::lit(2.0) * crate::special::normal_sf((b - c).abs() / se)).min(T::one()))
                .collect()
        }
    };
    let points = psis.into_iter().zip(ps).map(|(psi, p)| CompatibilityPoint::new(psi, p)).collect();
    CompatibilityCurve::from_points(method, t.to_string(), alpha_marks, points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(RenderFormat::Csv),
            "json" => Ok(RenderFormat::Json),
            "svg" => Ok(RenderFormat::Svg),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub width: u32,
    pub height: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { width: 720, height: 440 }
    }
}

pub fn render_curve<T: Real>(c: &CompatibilityCurve<T>, format: RenderFormat) -> Result<Vec<u8>> {
    match format {
        RenderFormat::Csv => render_csv(c),
        RenderFormat::Json => {
            if c.points.is_empty() {
                return Err(Error::EmptyCurve);
            }
            let mut out = serde_json::to_vec_pretty(c).map_err(|e| Error::Parse(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        RenderFormat::Svg => render_svg(&[c], SvgOptions::default()),
    }
}

/// Formats with at most 15 significant digits, shortest form that
/// round-trips at that precision. Non-finite values print as `inf`, `-inf`
/// and `nan`.
pub fn fmt_sig15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    let exp = if rounded == 0.0 { 0 } else { rounded.abs().log10().floor() as i32 };
    if (-5..15).contains(&exp) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn parse_extended(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        other => other.parse().map_err(|_| Error::Parse(format!("`{other}` is not a number"))),
    }
}

pub fn render_csv<T: Real>(c: &CompatibilityCurve<T>) -> Result<Vec<u8>> {
    if c.points.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["psi", "p", "s"]).map_err(io)?;
    for pt in &c.points {
        w.write_record([fmt_sig15(pt.psi.as_f64()), fmt_sig15(pt.p.as_f64()), fmt_sig15(pt.s.as_f64())]).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Parse(e.to_string()))
}

/// Reads `psi,p,s` rows back into points.
pub fn points_from_csv<T: Real>(data: &[u8]) -> Result<Vec<CompatibilityPoint<T>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(data);
    let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["psi", "p", "s"] {
        return Err(Error::Parse(format!("unexpected header {headers:?}")));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |i: usize| -> Result<T> { Ok(T::lit(parse_extended(rec.get(i).unwrap_or(""))?)) };
        out.push(CompatibilityPoint { psi: field(0)?, p: field(1)?, s: field(2)? });
    }
    Ok(out)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Static SVG 1.1 plot of one or more P-value functions against log ψ, with
/// an S-value scale on the right and a horizontal rule at each α mark.
pub fn render_svg<T: Real>(curves: &[&CompatibilityCurve<T>], opts: SvgOptions) -> Result<Vec<u8>> {
    if curves.is_empty() || curves.iter().any(|c| c.points.is_empty()) {
        return Err(Error::EmptyCurve);
    }
    let (w, h) = (opts.width as f64, opts.height as f64);
    let (left, right, top, bottom) = (64.0, 64.0, 36.0, 48.0);
    let pw = (w - left - right).max(1.0);
    let ph = (h - top - bottom).max(1.0);

    let lo = curves.iter().map(|c| c.points[0].psi.as_f64()).fold(f64::INFINITY, f64::min).ln();
    let hi = curves.iter().map(|c| c.points[c.points.len() - 1].psi.as_f64()).fold(f64::NEG_INFINITY, f64::max).ln();
    let span = if hi > lo { hi - lo } else { 1.0 };
    let x = |psi: f64| left + (psi.ln() - lo) / span * pw;
    let y = |p: f64| top + (1.0 - p) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(s, r#"<title>P-value function for the odds ratio</title>"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect class="frame" x="{left:.2}" y="{top:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );

    // left axis: p
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let yy = y(p);
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{:.2}" y1="{yy:.2}" x2="{left:.2}" y2="{yy:.2}" stroke="black"/>"#,
            left - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{p:.1}</text>"#,
            left - 6.0,
            yy + 3.0
        );
    }
    // right axis: s = −log₂ p at the heights of p = 2^−s
    let xr = left + pw;
    for bits in 0..=6 {
        let yy = y(0.5f64.powi(bits));
        let _ = writeln!(
            s,
            r#"<line class="s-tick" x1="{xr:.2}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="black"/>"#,
            xr + 4.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="10">{bits}</text>"#, xr + 6.0, yy + 3.0);
    }
    // bottom axis: decades and simple multiples
    let mut ticks: Vec<f64> = Vec::new();
    for e in -6..=6 {
        for m in [1.0, 2.0, 5.0] {
            let v = m * 10f64.powi(e);
            if v.ln() >= lo - 1e-12 && v.ln() <= hi + 1e-12 {
                ticks.push(v);
            }
        }
    }
    for v in ticks {
        let xx = x(v);
        let yb = top + ph;
        let _ = writeln!(
            s,
            r#"<line class="tick" x1="{xx:.2}" y1="{yb:.2}" x2="{xx:.2}" y2="{:.2}" stroke="black"/>"#,
            yb + 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{xx:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
            yb + 16.0,
            fmt_sig15(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">odds ratio (log scale)</text>"#,
        left + pw / 2.0,
        h - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">P-value</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(90 {:.2} {:.2})">S-value (bits)</text>"#,
        w - 14.0,
        top + ph / 2.0,
        w - 14.0,
        top + ph / 2.0
    );

    let mut alphas: Vec<f64> = curves.iter().flat_map(|c| c.alpha_marks.iter().map(|a| a.as_f64())).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    for a in alphas {
        let yy = y(a);
        let _ = writeln!(
            s,
            r#"<line class="alpha-rule" data-alpha="{}" x1="{left:.2}" y1="{yy:.2}" x2="{xr:.2}" y2="{yy:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
            fmt_sig15(a)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" fill="gray">α = {}</text>"#,
            left + 4.0,
            yy - 3.0,
            fmt_sig15(a)
        );
    }

    const COLORS: [&str; 3] = ["#1f4e9c", "#b2182b", "#2d8a3e"];
    for (i, c) in curves.iter().enumerate() {
        let mut d = String::new();
        for (j, pt) in c.points.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if j == 0 { "M" } else { " L" }, x(pt.psi.as_f64()), y(pt.p.as_f64()));
        }
        let _ = writeln!(
            s,
            r#"<path class="series" data-method="{}" d="{d}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            c.method.as_str(),
            COLORS[i % COLORS.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="{}">{} ({})</text>"#,
            left + pw - 120.0,
            top + 14.0 + 14.0 * i as f64,
            COLORS[i % COLORS.len()],
            c.method.as_str(),
            xml_escape(&c.source)
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s.into_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_value_identities() {
        assert_eq!(s_value(1.0f64).unwrap(), 0.0);
        assert_eq!(s_value(0.5f64).unwrap(), 1.0);
        assert!(s_value(0.0f64).unwrap().is_infinite());
        assert!(matches!(s_value(1.2f64), Err(Error::InvalidP(_))));
        assert!(matches!(s_value(-0.1f64), Err(Error::InvalidP(_))));
        assert!((s_value(0.041f64).unwrap() - 4.6).abs() < 0.05);
        assert!((s_value(0.05f64).unwrap() - 4.3).abs() < 0.05);
    }

    #[test]
    fn coin_tosses() {
        assert_eq!(coin_toss_equivalent(0.041f64).unwrap(), 5);
        assert_eq!(coin_toss_equivalent(0.644f64).unwrap(), 1);
        assert_eq!(coin_toss_equivalent(0.5f64).unwrap(), 1);
        assert_eq!(coin_toss_equivalent(1.0f64).unwrap(), 0);
        // s = 2.5 exactly: tie goes to fewer tosses
        assert_eq!(coin_toss_equivalent(2f64.powf(-2.5)).unwrap(), 2);
        assert!(coin_toss_equivalent(0.0f64).is_err());
        let (lo, hi) = coin_toss_bracket(0.041f64).unwrap();
        assert_eq!((lo, hi), (0.031_25, 0.062_5));
    }

    #[test]
    fn grid_validation_and_shape() {
        assert!(Grid::new(0.0f64, 1.0, 10).is_err());
        assert!(Grid::new(2.0f64, 1.0, 10).is_err());
        assert!(Grid::new(1.0f64, 2.0, 0).is_err());
        let g = Grid::new(1.0f64, 100.0, 10).unwrap().points();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[20], 100.0);
        assert!((g[10] - 10.0).abs() < 1e-12);
    }

    fn tiny_curve() -> CompatibilityCurve<f64> {
        let pts = vec![
            CompatibilityPoint::new(0.5, 0.2),
            CompatibilityPoint::new(1.0, 1.0),
            CompatibilityPoint::new(2.0, 0.012_345_678_901_234_567),
        ];
        CompatibilityCurve::from_points(CurveMethod::Exact, "1,2,3,4", vec![0.05], pts).unwrap()
    }

    #[test]
    fn curve_rejects_bad_points() {
        assert_eq!(
            CompatibilityCurve::<f64>::from_points(CurveMethod::Exact, "", vec![], vec![]),
            Err(Error::EmptyCurve)
        );
        let pts = vec![CompatibilityPoint::new(1.0, 0.5), CompatibilityPoint::new(1.0, 0.4)];
        assert!(CompatibilityCurve::from_points(CurveMethod::Exact, "", vec![], pts).is_err());
    }

    #[test]
    fn csv_shape() {
        let out = String::from_utf8(render_curve(&tiny_curve(), RenderFormat::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "psi,p,s");
        assert_eq!(lines[2], "1,1,0");
        assert!(!out.contains('\r'));
        assert!(lines[3].starts_with("2,0.0123456789012346,"));
    }

    #[test]
    fn json_round_trip() {
        let c = tiny_curve();
        let out = render_curve(&c, RenderFormat::Json).unwrap();
        let back: CompatibilityCurve<f64> = serde_json::from_slice(&out).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn infinite_surprisal_survives_serialization() {
        let pts = vec![CompatibilityPoint::new(1.0, 0.0), CompatibilityPoint::new(2.0, 0.5)];
        let c = CompatibilityCurve::from_points(CurveMethod::Wald, "x", vec![], pts).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert!(js.contains("\"inf\""));
        let back: CompatibilityCurve<f64> = serde_json::from_str(&js).unwrap();
        assert!(back.points[0].s.is_infinite());
        let csv = render_csv(&c).unwrap();
        let pts: Vec<CompatibilityPoint<f64>> = points_from_csv(&csv).unwrap();
        assert!(pts[0].s.is_infinite());
    }

    #[test]
    fn unsupported_format() {
        assert_eq!("png".parse::<RenderFormat>(), Err(Error::UnsupportedFormat("png".into())));
    }

    #[test]
    fn svg_structure() {
        let svg = String::from_utf8(render_curve(&tiny_curve(), RenderFormat::Svg).unwrap()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<path ").count(), 1);
        assert_eq!(svg.matches(r#"class="alpha-rule" data-alpha="0.05""#).count(), 1);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn fmt_sig15_behaviour() {
        assert_eq!(fmt_sig15(1.0), "1");
        assert_eq!(fmt_sig15(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig15(f64::INFINITY), "inf");
        assert_eq!(fmt_sig15(1.234_567_890_123_456_7e-9), "1.23456789012346e-9");
    }
}
