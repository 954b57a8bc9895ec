//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are pinned below.

mod common;

use std::process::ExitCode;

use compat_core::asymptotic::pearson_chi2;
use compat_core::compat::{coin_toss_bracket, coin_toss_equivalent, s_value};
use compat_core::decisions::{
    alpha_test, bonferroni, familywise_rate, interval_test, power_at_levels, power_mc, Dependence, PowerSpec, PowerTest,
};
use compat_core::exact::{cmle_or, exact_limits, exact_p, ExactTest, NchgDistribution};
use compat_core::prior::{augment_and_fit, prior_to_data, IntervalPrior};
use compat_core::simulate::{coverage_sim, significance_filter_sim, CoverageMethod, Scenario};
use compat_core::table::log_odds_ratio;
use compat_core::Table2x2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PMF_TOL: f64 = 1e-12;
const ENUM_TOL: f64 = 1e-12;
const FLIP_TOL: f64 = 1e-10;
const S_ADD_TOL: f64 = 1e-10;
const LIMIT_P_TOL: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-3;
const CHI2_TOL: f64 = 0.01;
const SIMS: u64 = 10_000;
const SEED: u64 = 20_240_601;

fn example() -> Table2x2 {
    Table2x2::new(10, 110, 16, 464).unwrap()
}

fn dp(x: f64, places: usize) -> String {
    format!("{x:.places$}")
}

/// Collects the sub-checks of one criterion and the first failure seen.
struct Criterion {
    ok: bool,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Self { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }
}

fn c1() -> Criterion {
    let mut c = Criterion::new();
    let s = example().summarize::<f64>();
    let rd = s.rd.value();
    let rr = s.rr.value();
    let or = s.or_.value();
    c.check(dp(rd, 3) == "0.050", format!("RD {rd}"));
    c.check(dp(rr, 1) == "2.5", format!("RR {rr}"));
    c.check(dp(or, 2) == "2.64" && dp(or, 1) == "2.6", format!("OR {or}"));
    let e: Vec<String> = s.expected.iter().map(|x| dp(*x, 1)).collect();
    c.check(e == ["5.2", "114.8", "20.8", "459.2"], format!("expected {e:?}"));
    c
}

fn c2() -> Criterion {
    let mut c = Criterion::new();
    let r = pearson_chi2::<f64>(&example()).unwrap();
    c.check((r.t - 5.79).abs() <= CHI2_TOL, format!("chi2 {}", r.t));
    c.check(r.df == 1, format!("df {}", r.df));
    c.check(format!("{:.1e}", r.p) == "1.6e-2", format!("p {}", r.p));
    c
}

fn c3() -> Criterion {
    let mut c = Criterion::new();
    for (psi, want) in [(1.0, "0.041"), (2.0, "0.644"), (6.0, "0.070")] {
        let p = exact_p(&example(), psi).unwrap().p;
        c.check(dp(p, 3) == want, format!("p({psi}) = {p}"));
    }
    c
}

fn c4() -> Criterion {
    let mut c = Criterion::new();
    let t = example();
    let est = cmle_or::<f64>(&t).unwrap();
    c.check(dp(est.max_p, 2) == "2.64", format!("max-p estimate {}", est.max_p));
    let iv = exact_limits(&t, 0.05).unwrap();
    c.check(dp(iv.lower, 2) == "1.04" && dp(iv.upper, 2) == "6.36", format!("limits {iv:?}"));
    for lim in [iv.lower, iv.upper] {
        let p = exact_p(&t, lim).unwrap().p;
        c.check((p - 0.05).abs() <= LIMIT_P_TOL, format!("p at limit {lim} = {p}"));
    }
    c
}

fn c5() -> Criterion {
    let mut c = Criterion::new();
    for (p, want) in [(0.041, "4.6"), (0.05, "4.3"), (0.644, "0.6")] {
        let s = s_value(p).unwrap();
        c.check(dp(s, 1) == want, format!("s({p}) = {s}"));
    }
    c.check(coin_toss_equivalent(0.041).unwrap() == 5, "coin tosses for 0.041");
    let (lo, hi) = coin_toss_bracket(0.041).unwrap();
    let half_up = |x: f64| (x * 1000.0).round() / 1000.0;
    c.check(lo == 0.5f64.powi(5) && hi == 0.5f64.powi(4), format!("bracket ({lo}, {hi})"));
    c.check(half_up(lo) == 0.031 && half_up(hi) == 0.063, format!("bracket ({lo}, {hi}) at 3 dp"));
    c
}

fn c6() -> Criterion {
    let mut c = Criterion::new();
    let b = bonferroni(0.05, 20).unwrap();
    c.check(dp(b, 4) == "0.0025", format!("bonferroni {b}"));
    let ind = |a| familywise_rate(a, 20, Dependence::Independent).unwrap().estimate;
    c.check(dp(ind(0.05), 2) == "0.64", format!("fwer(0.05) {}", ind(0.05)));
    c.check(dp(ind(0.0025), 3) == "0.049", format!("fwer(0.0025) {}", ind(0.0025)));
    let pc = familywise_rate(0.0025, 20, Dependence::PerfectlyCorrelated).unwrap().estimate;
    c.check(pc == 0.0025, format!("perfectly correlated {pc}"));
    c
}

fn c7() -> Criterion {
    let mut c = Criterion::new();
    let pd = prior_to_data(&IntervalPrior::new(1.0 / 1.2, 1.2, 0.95).unwrap()).unwrap();
    c.check(pd.required_cases_per_arm == 232, format!("cases per arm {pd:?}"));
    c.check(pd.required_total_cases == 464, format!("total {pd:?}"));
    c
}

fn c8() -> Criterion {
    let mut c = Criterion::new();
    let t = example();
    let pd = prior_to_data(&IntervalPrior::new(1.0 / 1.2, 1.2, 0.95).unwrap()).unwrap();
    let fit = augment_and_fit(&t, Some(&pd)).unwrap();
    let oracle = common::grid_posterior_mode(&t, pd.center_log, pd.implied_se);
    let mode = fit.log_or_posterior;
    c.check((mode - oracle).abs() <= ORACLE_TOL, format!("mode {mode} oracle {oracle}"));
    let l = log_odds_ratio::<f64>(&t);
    c.check(mode.abs() < (l - mode).abs(), format!("mode {mode} not nearer 0 than {l}"));
    c
}

fn random_table(rng: &mut ChaCha8Rng, max_cell: u64) -> Table2x2 {
    loop {
        let t = Table2x2::new(
            rng.random_range(0..=max_cell),
            rng.random_range(0..=max_cell),
            rng.random_range(0..=max_cell),
            rng.random_range(0..=max_cell),
        )
        .unwrap();
        if t.cases() > 0 && t.noncases() > 0 && t.exposed() > 0 && t.unexposed() > 0 {
            return t;
        }
    }
}

fn c9() -> Criterion {
    let mut c = Criterion::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut worst_norm: f64 = 0.0;
    for _ in 0..200 {
        let cases = rng.random_range(1..400u64);
        let exposed = rng.random_range(1..400u64);
        let total = cases.max(exposed) + rng.random_range(0..400u64);
        let d = NchgDistribution::new(cases, exposed, total, rng.random_range(-6.0f64..6.0).exp()).unwrap();
        let (lo, hi) = d.support();
        worst_norm = worst_norm.max(((lo..=hi).map(|a| d.pmf(a)).sum::<f64>() - 1.0).abs());
    }
    c.check(worst_norm <= PMF_TOL, format!("pmf normalization {worst_norm:e}"));

    let mut worst_enum: f64 = 0.0;
    for total in 2u32..=12 {
        for exposed in 1..total {
            for cases in 1..total {
                let psi = rng.random_range(-2.5f64..2.5).exp();
                let oracle = common::enumerate_pmf(cases, exposed, total, psi);
                let a = oracle[0].0;
                let t = Table2x2::new(
                    a as u64,
                    (exposed - a) as u64,
                    (cases - a) as u64,
                    (total + a - exposed - cases) as u64,
                )
                .unwrap();
                let d = NchgDistribution::for_table(&t, psi).unwrap();
                for &(x, p) in &oracle {
                    worst_enum = worst_enum.max((d.pmf(x as u64) - p).abs());
                }
            }
        }
    }
    c.check(worst_enum <= ENUM_TOL, format!("enumeration oracle {worst_enum:e}"));

    let mut disagreements = 0;
    for _ in 0..200 {
        let t = random_table(&mut rng, 40);
        let iv = exact_limits(&t, 0.05).unwrap();
        for i in -40..=40 {
            let psi = (i as f64 * 0.15).exp();
            let near = |lim: f64| lim > 0.0 && lim.is_finite() && (psi / lim).ln().abs() < 1e-6;
            if near(iv.lower) || near(iv.upper) {
                continue;
            }
            let by_p = alpha_test(exact_p(&t, psi).unwrap().p, 0.05).unwrap().decision;
            if by_p != interval_test(&iv, psi).decision {
                disagreements += 1;
            }
        }
    }
    c.check(disagreements == 0, format!("{disagreements} duality disagreements"));

    let mut worst_flip: f64 = 0.0;
    for _ in 0..200 {
        let t = random_table(&mut rng, 40);
        let x = rng.random_range(-3.0f64..3.0);
        let p = ExactTest::<f64>::new(&t).p_at_log(x);
        let q = ExactTest::<f64>::new(&t.flip_exposure()).p_at_log(-x);
        worst_flip = worst_flip.max((p - q).abs());
    }
    c.check(worst_flip <= FLIP_TOL, format!("flip symmetry {worst_flip:e}"));

    let mut worst_s: f64 = 0.0;
    for _ in 0..1000 {
        let p = rng.random_range(1e-9f64..1.0);
        let q = rng.random_range(1e-9f64..1.0);
        worst_s = worst_s.max((s_value(p * q).unwrap() - s_value(p).unwrap() - s_value(q).unwrap()).abs());
    }
    c.check(worst_s <= S_ADD_TOL, format!("S additivity {worst_s:e}"));

    let spec = |n1, n0, risk, or, seed| PowerSpec {
        n_exposed: n1,
        n_unexposed: n0,
        baseline_risk: risk,
        or_pop: or,
        alpha: 0.05,
        test: PowerTest::Exact,
        n_sims: SIMS,
        seed,
    };
    let ends = power_at_levels(&spec(60, 60, 0.1, 2.0, SEED), &[0.0, 1.0]).unwrap();
    c.check(ends[0].estimate == 0.0 && ends[1].estimate == 1.0, "power at alpha 0 and 1");

    let grid = [(480, 120, 0.033), (50, 50, 0.1), (100, 100, 0.3), (20, 80, 0.2), (200, 200, 0.05)];
    for (i, (n1, n0, risk)) in grid.into_iter().enumerate() {
        let r = power_mc(&spec(n1, n0, risk, 1.0, SEED + i as u64)).unwrap();
        c.check(
            r.estimate <= 0.05 + 3.0 * r.mc_error,
            format!("null rejection {} (±{}) at ({n1}, {n0}, {risk})", r.estimate, r.mc_error),
        );
    }
    c
}

fn c10() -> Criterion {
    let mut c = Criterion::new();
    let shape = Scenario::new(480, 120, 0.033, 2.636).unwrap();
    let r = coverage_sim(&shape, CoverageMethod::Exact, 0.05, SIMS, SEED).unwrap();
    c.check(r.estimate >= 0.95 - 3.0 * r.mc_error, format!("exact coverage {} (±{})", r.estimate, r.mc_error));

    let sparse = Scenario::new(50, 50, 0.02, 4.0).unwrap();
    let exact = coverage_sim(&sparse, CoverageMethod::Exact, 0.05, SIMS, SEED).unwrap();
    let wald = coverage_sim(&sparse, CoverageMethod::Wald, 0.05, SIMS, SEED).unwrap();
    c.check(wald.estimate < exact.estimate, format!("wald {} vs exact {}", wald.estimate, exact.estimate));

    let low = Scenario::new(100, 100, 0.05, 1.5).unwrap();
    let f = significance_filter_sim(&low, 0.05, SIMS, SEED).unwrap();
    c.check(f.estimate > 1.5f64.ln(), format!("filtered mean |log OR| {}", f.estimate));
    c
}

fn main() -> ExitCode {
    type Check = fn() -> Criterion;
    let criteria: [(&str, Check); 10] = [
        ("example table description", c1),
        ("Pearson chi-square", c2),
        ("exact P-values", c3),
        ("exact inversion", c4),
        ("surprisal", c5),
        ("multiplicity", c6),
        ("prior data", c7),
        ("augmented fit oracle", c8),
        ("property suites", c9),
        ("coverage claims", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let c = run();
        if c.ok {
            println!("criterion {:>2} PASS  {name}", i + 1);
        } else {
            failed += 1;
            println!("criterion {:>2} FAIL  {name}: {}", i + 1, c.notes.join("; "));
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
