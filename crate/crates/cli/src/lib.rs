//! The `compat` command line, as a library so it can be driven in-process.
//!
//! [`run`] takes the argument list (without the program name) and returns
//! the exit status and both output streams. Exit status is 0 on success, 2
//! for usage errors (bad flags, malformed or out-of-range inputs) and 1 when
//! a valid request cannot be computed (for example a Wald interval on a
//! table with a zero cell).

pub mod args;
pub mod report;

use std::fmt::Write as _;

use clap::Parser;
use compat_core::asymptotic::{pearson_chi2, pearson_limits, pearson_p, wald_limits_for_table, wald_p, WaldInput};
use compat_core::compat::{
    coin_toss_bracket, coin_toss_equivalent, compatibility_curve, fmt_sig15, render_csv, render_svg, s_value,
    CurveMethod, SvgOptions,
};
use compat_core::decisions::{self, alpha_test, bonferroni, familywise_rate, power_curve, power_mc, Dependence};
use compat_core::exact::{cmle_or, ExactOptions, ExactTest, Side, TwoSidedRule};
use compat_core::prior::{augment_and_fit, prior_to_data, IntervalPrior};
use compat_core::simulate::{coverage_sim, load_scenarios, significance_filter_sim, sparse_bias_sim, CoverageMethod};
use compat_core::table::log_odds_ratio;
use compat_core::{CompatibilityCurve, Error, Grid, Measure, PowerSpec, Scenario, SimReport, Table2x2};

use args::{Cli, Command, CoverageArg, DependenceArg, Format, Layout, Method, Rule, ScenarioArgs, SideArg, TableArgs};
use report::*;

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Output {
    pub fn stdout_str(&self) -> &str {
        std::str::from_utf8(&self.stdout).unwrap_or("")
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NegativeCount(_)
            | Error::EmptyTable
            | Error::InvalidPsi(_)
            | Error::InvalidP(_)
            | Error::InvalidAlpha(_)
            | Error::InvalidK
            | Error::InvalidGrid(_)
            | Error::UnsupportedFormat(_)
            | Error::InvalidSpec(_)
            | Error::DegeneratePrior
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            Error::BoundaryEstimate(_)
            | Error::ZeroExpectedCount
            | Error::ZeroCell
            | Error::NonpositiveSe(_)
            | Error::EmptyCurve
            | Error::NonConvergence(_)
            | Error::SeparatedData(_) => Failure::Compute(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

/// Runs one invocation. `argv` excludes the program name.
pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("compat")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: Vec::new(), stderr: rendered }
            } else {
                // --help and --version
                Output { code: 0, stdout: rendered.into_bytes(), stderr: String::new() }
            };
        }
    };
    let result = match thread_cap() {
        Ok(None) => execute(&cli),
        Ok(Some(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::Compute(e.to_string())),
        },
        Err(f) => Err(f),
    };
    match result {
        Ok(stdout) => Output { code: 0, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Output {
            code: 2,
            stdout: Vec::new(),
            stderr: format!("error: {msg}\nhint: run `compat help` or `compat <subcommand> --help`\n"),
        },
        Err(Failure::Compute(msg)) => Output { code: 1, stdout: Vec::new(), stderr: format!("error: {msg}\n") },
    }
}

fn thread_cap() -> Res<Option<usize>> {
    match std::env::var("COMPAT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => usage(format!("COMPAT_THREADS must be a non-negative integer, got `{v}`")),
        },
    }
}

/// Decimal places used in text output.
#[derive(Debug, Clone, Copy)]
struct Digits {
    p: usize,
    or: usize,
    s: usize,
    rate: usize,
}

impl Digits {
    fn new(precision: Option<usize>) -> Self {
        match precision {
            Some(n) => Self { p: n, or: n, s: n, rate: n },
            None => Self { p: 3, or: 2, s: 1, rate: 4 },
        }
    }
}

fn fix(x: f64, dp: usize) -> String {
    if x.is_nan() {
        "undefined".into()
    } else if x == f64::INFINITY {
        "infinity".into()
    } else if x == f64::NEG_INFINITY {
        "-infinity".into()
    } else {
        format!("{x:.dp$}")
    }
}

fn measure(m: Measure<f64>, dp: usize) -> String {
    match m {
        Measure::Finite(x) => fix(x, dp),
        Measure::Infinite => "infinity".into(),
        Measure::Undefined => "undefined".into(),
    }
}

fn json<T: serde::Serialize>(value: &T) -> Res<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn no_format(cmd: &str, format: Format) -> Res<Vec<u8>> {
    let name = match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Svg => "svg",
    };
    usage(format!("{name} output is not available for {cmd}"))
}

fn parse_table(ta: &TableArgs) -> Res<Table2x2> {
    let parts: Vec<&str> = ta.table.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return usage(format!("--table needs four comma-separated counts, got `{}`", ta.table));
    }
    let mut v = [0i64; 4];
    for (slot, s) in v.iter_mut().zip(&parts) {
        *slot = s.parse().map_err(|_| Failure::Usage(format!("`{s}` is not a whole-number count")))?;
    }
    let t = Table2x2::from_signed(v[0], v[1], v[2], v[3])?;
    Ok(match ta.layout {
        Layout::Canonical => t,
        Layout::Printed => Table2x2::from_printed(t.a(), t.b(), t.c(), t.d())?,
    })
}

fn curve_method(m: Method) -> CurveMethod {
    match m {
        Method::Exact => CurveMethod::Exact,
        Method::Pearson => CurveMethod::Pearson,
        Method::Wald => CurveMethod::Wald,
    }
}

fn power_test(m: Method) -> decisions::PowerTest {
    match m {
        Method::Exact => decisions::PowerTest::Exact,
        Method::Pearson => decisions::PowerTest::Pearson,
        Method::Wald => decisions::PowerTest::Wald,
    }
}

fn execute(cli: &Cli) -> Res<Vec<u8>> {
    let d = Digits::new(cli.precision);
    let f = cli.format;
    match &cli.command {
        Command::Describe(ta) => describe(&parse_table(ta)?, f, d),
        Command::Test { table, psi, method, rule, side, mid_p, alpha } => {
            test(&parse_table(table)?, *psi, *method, *rule, *side, *mid_p, *alpha, f, d)
        }
        Command::CompatCurve { table, method, psi_min, psi_max, points_per_decade, alpha_marks, out } => {
            let t = parse_table(table)?;
            let bytes = compat_curve(&t, method, *psi_min, *psi_max, *points_per_decade, alpha_marks, f, d)?;
            match out {
                Some(path) => {
                    std::fs::write(path, &bytes)
                        .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?;
                    Ok(format!("wrote {}\n", path.display()).into_bytes())
                }
                None => Ok(bytes),
            }
        }
        Command::Interval { table, alpha, method } => interval(&parse_table(table)?, *alpha, *method, f, d),
        Command::Svalue { p } => svalue(*p, f, d),
        Command::Power { arms, alpha, test, sim } => {
            let spec = PowerSpec {
                n_exposed: arms.n_exposed,
                n_unexposed: arms.n_unexposed,
                baseline_risk: arms.baseline_risk,
                or_pop: arms.or_pop,
                alpha: *alpha,
                test: power_test(*test),
                n_sims: sim.n_sims,
                seed: sim.seed,
            };
            let r = power_mc(&spec)?;
            sim_output(&[r], f, d)
        }
        Command::PowerCurve { n_exposed, n_unexposed, baseline_risk, or_grid, alpha, test, sim } => {
            let spec = PowerSpec {
                n_exposed: *n_exposed,
                n_unexposed: *n_unexposed,
                baseline_risk: *baseline_risk,
                or_pop: 1.0,
                alpha: *alpha,
                test: power_test(*test),
                n_sims: sim.n_sims,
                seed: sim.seed,
            };
            spec.scenario()?;
            let pts = power_curve(&spec, or_grid)?;
            match f {
                Format::Json => json(&pts),
                Format::Csv => {
                    let mut s = String::from("or_pop,power,beta,mc_error\n");
                    for p in &pts {
                        let _ = writeln!(
                            s,
                            "{},{},{},{}",
                            fmt_sig15(p.or_pop),
                            fmt_sig15(p.power),
                            fmt_sig15(p.beta),
                            fmt_sig15(p.mc_error)
                        );
                    }
                    Ok(s.into_bytes())
                }
                Format::Text => {
                    let mut s = format!("power of the {} test of OR=1 at level {alpha}\n", test_name(*test));
                    for p in &pts {
                        let _ = writeln!(
                            s,
                            "OR={}  power={}  beta={}  (MC error {})",
                            fix(p.or_pop, d.or),
                            fix(p.power, d.rate),
                            fix(p.beta, d.rate),
                            fix(p.mc_error, d.rate)
                        );
                    }
                    Ok(s.into_bytes())
                }
                Format::Svg => no_format("power-curve", f),
            }
        }
        Command::Bonferroni { alpha, k } => {
            let per = bonferroni(*alpha, *k)?;
            let r = BonferroniReport { alpha: *alpha, k: *k, per_test_alpha: per };
            match f {
                Format::Json => json(&r),
                Format::Text => {
                    Ok(format!("per-test level for {k} tests at familywise level {alpha}: {}\n", fmt_sig15(per))
                        .into_bytes())
                }
                Format::Csv => {
                    Ok(format!("alpha,k,per_test_alpha\n{},{k},{}\n", fmt_sig15(*alpha), fmt_sig15(per)).into_bytes())
                }
                Format::Svg => no_format("bonferroni", f),
            }
        }
        Command::Familywise { alpha, k, dependence, rho, n_sims, seed } => {
            let dep = match dependence {
                DependenceArg::Independent => Dependence::Independent,
                DependenceArg::PerfectlyCorrelated => Dependence::PerfectlyCorrelated,
                DependenceArg::Simulated => {
                    let Some(seed) = seed else {
                        return usage("--seed is required with --dependence simulated");
                    };
                    let Some(rho) = rho else {
                        return usage("--rho is required with --dependence simulated");
                    };
                    Dependence::Simulated { rho: *rho, n_sims: *n_sims, seed: *seed }
                }
            };
            let r = familywise_rate(*alpha, *k, dep)?;
            sim_output(&[r], f, d)
        }
        Command::PriorData { lower, upper, level } => prior_data(*lower, *upper, *level, f, d),
        Command::BayesFit { table, lower, upper, level } => {
            bayes_fit(&parse_table(table)?, lower.zip(*upper), *level, f, d)
        }
        Command::CoverageSim { scenario, method, alpha, sim } => {
            let methods: &[CoverageMethod] = match method {
                CoverageArg::Exact => &[CoverageMethod::Exact],
                CoverageArg::Wald => &[CoverageMethod::Wald],
                CoverageArg::Both => &[CoverageMethod::Exact, CoverageMethod::Wald],
            };
            let mut reports = Vec::new();
            for sc in scenarios(scenario)? {
                for m in methods {
                    reports.push(coverage_sim(&sc, *m, *alpha, sim.n_sims, sim.seed)?);
                }
            }
            sim_output(&reports, f, d)
        }
        Command::SparseSim { scenario, sim } => {
            let reports = scenarios(scenario)?
                .iter()
                .map(|sc| sparse_bias_sim(sc, sim.n_sims, sim.seed))
                .collect::<compat_core::Result<Vec<_>>>()?;
            sim_output(&reports, f, d)
        }
        Command::FilterSim { scenario, alpha, sim } => {
            let reports = scenarios(scenario)?
                .iter()
                .map(|sc| significance_filter_sim(sc, *alpha, sim.n_sims, sim.seed))
                .collect::<compat_core::Result<Vec<_>>>()?;
            sim_output(&reports, f, d)
        }
    }
}

fn test_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Pearson => "Pearson chi-square",
        Method::Wald => "Wald",
    }
}

fn describe(t: &Table2x2, f: Format, d: Digits) -> Res<Vec<u8>> {
    let summary = t.summarize::<f64>();
    let r = DescribeReport { table: *t, margins: Margins::of(t), summary: summary.clone() };
    match f {
        Format::Json => json(&r),
        Format::Text => {
            let e = summary.expected;
            let mut s = String::new();
            let _ = writeln!(s, "table a,b,c,d = {t}");
            let _ = writeln!(s, "{:<12}{:>10}{:>10}{:>10}", "", "cases", "noncases", "total");
            let _ = writeln!(s, "{:<12}{:>10}{:>10}{:>10}", "exposed", t.a(), t.b(), t.exposed());
            let _ = writeln!(s, "{:<12}{:>10}{:>10}{:>10}", "unexposed", t.c(), t.d(), t.unexposed());
            let _ = writeln!(s, "{:<12}{:>10}{:>10}{:>10}", "total", t.cases(), t.noncases(), t.total());
            let _ = writeln!(
                s,
                "risk: exposed={} unexposed={}",
                measure(summary.p_exposed, d.p),
                measure(summary.p_unexposed, d.p)
            );
            let _ = writeln!(
                s,
                "RD={}  RR={}  OR={}",
                measure(summary.rd, d.p),
                measure(summary.rr, d.or),
                measure(summary.or_, d.or)
            );
            let e1 = d.s;
            let _ = writeln!(
                s,
                "expected under independence (a/b/c/d): {}/{}/{}/{}",
                fix(e[0], e1),
                fix(e[1], e1),
                fix(e[2], e1),
                fix(e[3], e1)
            );
            Ok(s.into_bytes())
        }
        _ => no_format("describe", f),
    }
}

#[allow(clippy::too_many_arguments)]
fn test(
    t: &Table2x2,
    psi: f64,
    method: Method,
    rule: Rule,
    side: SideArg,
    mid_p: bool,
    alpha: Option<f64>,
    f: Format,
    d: Digits,
) -> Res<Vec<u8>> {
    if !(psi > 0.0 && psi.is_finite()) {
        return Err(Error::InvalidPsi(psi).into());
    }
    if method != Method::Exact && (side != SideArg::TwoSided || mid_p || rule != Rule::Doubling) {
        return usage("--side, --mid-p and --rule apply to the exact test only");
    }
    let side_name = match side {
        SideArg::TwoSided => "two-sided",
        SideArg::Lower => "lower",
        SideArg::Upper => "upper",
    };
    let (p, statistic) = match method {
        Method::Exact => {
            let rule = match rule {
                Rule::Doubling => TwoSidedRule::Doubling,
                Rule::MinLikelihood => TwoSidedRule::MinLikelihood,
            };
            let test = ExactTest::<f64>::with_options(t, ExactOptions { rule, mid_p });
            let side = match side {
                SideArg::TwoSided => Side::TwoSided,
                SideArg::Lower => Side::Lower,
                SideArg::Upper => Side::Upper,
            };
            (test.one_sided_at_log(psi.ln(), side), None)
        }
        Method::Pearson => {
            let p = pearson_p::<f64>(t, psi)?;
            let stat = if psi == 1.0 { Some(pearson_chi2::<f64>(t)?.t) } else { None };
            (p, stat)
        }
        Method::Wald => {
            let w = WaldInput::for_table(t, psi)?;
            (wald_p(&w)?, Some(w.z()))
        }
    };
    let s = s_value(p)?;
    let n = coin_toss_equivalent(p)?;
    let decision = alpha.map(|a| alpha_test(p, a)).transpose()?;
    let r = TestReport {
        table: *t,
        method: curve_method(method),
        psi,
        side: side_name.into(),
        rule: (method == Method::Exact).then(|| match rule {
            Rule::Doubling => "doubling".to_string(),
            Rule::MinLikelihood => "min-likelihood".to_string(),
        }),
        mid_p,
        statistic,
        p,
        s_value: s,
        coin_tosses: n,
        decision,
    };
    match f {
        Format::Json => json(&r),
        Format::Text => {
            let mut out = format!("{} test of OR={} ({side_name})", test_name(method), fmt_sig15(psi));
            if let Some(st) = statistic {
                let label = if method == Method::Wald { "|z|" } else { "chi2 (df=1)" };
                let _ = write!(out, ", {label}={}", fix(st, 2));
            }
            let _ = writeln!(out);
            let _ = writeln!(out, "p={}, s={} bits, coin-toss n={}", fix(p, d.p), fix(s, d.s), n);
            if let Some(dec) = decision {
                let _ = writeln!(out, "decision: {dec}");
            }
            Ok(out.into_bytes())
        }
        _ => no_format("test", f),
    }
}

#[allow(clippy::too_many_arguments)]
fn compat_curve(
    t: &Table2x2,
    methods: &[Method],
    psi_min: Option<f64>,
    psi_max: Option<f64>,
    ppd: u32,
    alpha_marks: &[f64],
    f: Format,
    d: Digits,
) -> Res<Vec<u8>> {
    if let Some(a) = alpha_marks.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Error::InvalidAlpha(*a).into());
    }
    let mut methods = methods.to_vec();
    methods.dedup();
    let center = {
        let or = log_odds_ratio::<f64>(t).exp();
        if or.is_finite() && or > 0.0 {
            or
        } else {
            1.0
        }
    };
    let default = Grid::around(center)?;
    let grid = Grid::new(psi_min.unwrap_or(default.psi_min), psi_max.unwrap_or(default.psi_max), ppd)?;
    let curves = methods
        .iter()
        .map(|m| compatibility_curve(t, &grid, curve_method(*m), alpha_marks.to_vec()))
        .collect::<compat_core::Result<Vec<CompatibilityCurve>>>()?;
    match f {
        Format::Svg => {
            let refs: Vec<&CompatibilityCurve> = curves.iter().collect();
            Ok(render_svg(&refs, SvgOptions::default())?)
        }
        Format::Json if curves.len() == 1 => json(&curves[0]),
        Format::Json => json(&curves),
        Format::Csv if curves.len() == 1 => Ok(render_csv(&curves[0])?),
        Format::Csv => usage("csv output takes a single --method; use json or svg to overlay methods"),
        Format::Text => {
            let mut s = String::new();
            for c in &curves {
                let _ = writeln!(
                    s,
                    "{} P-value function over {} points, OR {} to {}",
                    c.method.as_str(),
                    c.points.len(),
                    fmt_sig15(grid.psi_min),
                    fmt_sig15(grid.psi_max)
                );
                let _ = writeln!(s, "  largest p={} at OR={}", fix(c.p_max, d.p), fix(c.argmax_psi, d.or));
                for &a in &c.alpha_marks {
                    let (lo, hi) = c.crossings(a);
                    let show = |x: Option<f64>, edge: &str| x.map_or(format!("beyond grid {edge}"), |v| fix(v, d.or));
                    let _ = writeln!(
                        s,
                        "  p > {} for OR between {} and {}",
                        fmt_sig15(a),
                        show(lo, "minimum"),
                        show(hi, "maximum")
                    );
                }
            }
            Ok(s.into_bytes())
        }
    }
}

fn interval(t: &Table2x2, alpha: f64, method: Method, f: Format, d: Digits) -> Res<Vec<u8>> {
    let (iv, estimate, cmle) = match method {
        Method::Exact => {
            let iv = compat_core::exact::exact_limits::<f64>(t, alpha)?;
            match cmle_or::<f64>(t) {
                Ok(e) => (iv, e.max_p, Some(e.cmle)),
                Err(Error::BoundaryEstimate(b)) => {
                    let est = match b {
                        compat_core::Boundary::Zero => 0.0,
                        compat_core::Boundary::Infinite => f64::INFINITY,
                    };
                    (iv, est, None)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Method::Wald => (wald_limits_for_table::<f64>(t, alpha)?, log_odds_ratio::<f64>(t).exp(), None),
        Method::Pearson => (pearson_limits::<f64>(t, alpha)?, log_odds_ratio::<f64>(t).exp(), None),
    };
    let r = IntervalReport { table: *t, interval: iv, estimate, cmle };
    match f {
        Format::Json => json(&r),
        Format::Text => {
            let mut s = format!(
                "{}-level compatibility interval ({}): ({}, {})\n",
                fmt_sig15(alpha),
                iv.method,
                fix(iv.lower, d.or),
                fix(iv.upper, d.or)
            );
            let _ = write!(s, "point estimate: OR={}", fix(estimate, d.or));
            if let Some(c) = cmle {
                let _ = write!(s, " (conditional MLE {})", fix(c, d.or));
            }
            s.push('\n');
            Ok(s.into_bytes())
        }
        _ => no_format("interval", f),
    }
}

fn svalue(p: f64, f: Format, d: Digits) -> Res<Vec<u8>> {
    let s = s_value(p)?;
    let n = coin_toss_equivalent(p)?;
    let bracket = coin_toss_bracket(p)?;
    let r = SValueReport { p, s_value: s, coin_tosses: n, bracket };
    match f {
        Format::Json => json(&r),
        Format::Text => Ok(format!(
            "p={} carries s={} bits, about as surprising as {} heads in a row from a fair coin (1/2^{} = {})\n",
            fmt_sig15(p),
            fix(s, d.s),
            n,
            n,
            fix(0.5f64.powi(n as i32), d.p)
        )
        .into_bytes()),
        _ => no_format("svalue", f),
    }
}

fn prior_data(lower: f64, upper: f64, level: f64, f: Format, d: Digits) -> Res<Vec<u8>> {
    let prior = IntervalPrior::new(lower, upper, level)?;
    let data = prior_to_data(&prior)?;
    let r = PriorDataReport { prior, data, recentered: prior.is_recentered() };
    match f {
        Format::Json => json(&r),
        Format::Text => {
            let mut s = format!(
                "prior: {}% of mass between {} and {}\n",
                fmt_sig15(level * 100.0),
                fmt_sig15(lower),
                fmt_sig15(upper)
            );
            let _ = writeln!(s, "implied SE of the log ratio: {}", fix(data.implied_se, 4));
            let _ = writeln!(
                s,
                "equivalent balanced trial: {} cases per arm ({} total); exact value {}",
                data.required_cases_per_arm,
                data.required_total_cases,
                fix(data.cases_per_arm, 2)
            );
            if r.recentered {
                let _ = writeln!(
                    s,
                    "bounds are not symmetric about 1; prior centered at OR={}",
                    fix(data.center_log.exp(), d.or)
                );
            }
            Ok(s.into_bytes())
        }
        _ => no_format("prior-data", f),
    }
}

fn bayes_fit(t: &Table2x2, bounds: Option<(f64, f64)>, level: f64, f: Format, d: Digits) -> Res<Vec<u8>> {
    let prior = bounds.map(|(lo, hi)| IntervalPrior::new(lo, hi, level)).transpose()?;
    let data = prior.as_ref().map(prior_to_data).transpose()?;
    let fit = augment_and_fit(t, data.as_ref())?;
    let r = BayesFitReport { table: *t, prior, fit };
    match f {
        Format::Json => json(&r),
        Format::Text => {
            let mut s = String::new();
            match fit.frequentist_boundary {
                None => {
                    let _ = writeln!(
                        s,
                        "frequentist: OR={} (log OR {}, SE {})",
                        fix(fit.frequentist_log_or.exp(), d.or),
                        fix(fit.frequentist_log_or, 4),
                        fix(fit.frequentist_se, 4)
                    );
                }
                Some(b) => {
                    let _ = writeln!(s, "frequentist: maximum-likelihood OR is {b} (separated data)");
                }
            }
            if let Some(pd) = data {
                let _ = writeln!(
                    s,
                    "prior data: {} cases per arm, centered at OR={}",
                    fix(pd.cases_per_arm, 2),
                    fix(pd.center_log.exp(), d.or)
                );
                let _ = writeln!(
                    s,
                    "posterior (augmented fit): OR={} (log OR {}, SD {}), {} iterations",
                    fix(fit.log_or_posterior.exp(), d.or),
                    fix(fit.log_or_posterior, 4),
                    fix(fit.se_posterior, 4),
                    fit.iterations
                );
            }
            Ok(s.into_bytes())
        }
        _ => no_format("bayes-fit", f),
    }
}

fn scenarios(args: &ScenarioArgs) -> Res<Vec<Scenario>> {
    if let Some(path) = &args.scenarios {
        let list = load_scenarios(path)?;
        if list.is_empty() {
            return usage(format!("{} holds no scenarios", path.display()));
        }
        return Ok(list);
    }
    match (args.n_exposed, args.n_unexposed, args.baseline_risk, args.or_pop) {
        (Some(n1), Some(n0), Some(r), Some(or)) => Ok(vec![Scenario::new(n1, n0, r, or)?.labeled(args.label.clone())]),
        _ => usage("give --n-exposed, --n-unexposed, --baseline-risk and --or, or --scenarios FILE"),
    }
}

fn sim_output(reports: &[SimReport], f: Format, d: Digits) -> Res<Vec<u8>> {
    match f {
        Format::Json => {
            let mut out = Vec::new();
            for r in reports {
                serde_json::to_writer(&mut out, r).map_err(|e| Failure::Compute(e.to_string()))?;
                out.push(b'\n');
            }
            Ok(out)
        }
        Format::Csv => {
            let mut s = String::from(SimReport::csv_header());
            s.push('\n');
            for r in reports {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            Ok(s.into_bytes())
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                if let Some(sc) = &r.scenario {
                    let label = if sc.label.is_empty() { String::new() } else { format!("[{}] ", sc.label) };
                    let _ = writeln!(
                        s,
                        "{label}arms {}/{}, baseline risk {}, OR {}",
                        sc.n_exposed,
                        sc.n_unexposed,
                        fmt_sig15(sc.baseline_risk),
                        fmt_sig15(sc.or_pop)
                    );
                }
                if r.n_sims > 0 {
                    let _ = writeln!(
                        s,
                        "  {}: {} (MC error {}), {} replicates, seed {}",
                        r.method,
                        fix(r.estimate, d.rate),
                        fix(r.mc_error, d.rate),
                        r.n_sims,
                        r.seed
                    );
                } else {
                    let _ = writeln!(s, "  {}: {}", r.method, fix(r.estimate, d.rate));
                }
                for (k, v) in &r.extras {
                    let shown = if v.fract() == 0.0 && v.abs() < 1e15 { format!("{v:.0}") } else { fix(*v, d.rate) };
                    let _ = writeln!(s, "    {k} = {shown}");
                }
            }
            Ok(s.into_bytes())
        }
        Format::Svg => no_format("this subcommand", f),
    }
}
