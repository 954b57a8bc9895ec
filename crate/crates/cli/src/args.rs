use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "compat",
    version,
    about = "P-values, S-values and compatibility intervals for 2x2 tables",
    after_help = "Tables are given as --table a,b,c,d. In the canonical layout a = exposed cases, \
b = exposed noncases, c = unexposed cases, d = unexposed noncases. With --layout printed the four \
numbers are read row by row from a cases/noncases by unexposed/exposed display: unexposed cases, \
exposed cases, unexposed noncases, exposed noncases.\n\nCOMPAT_THREADS caps the worker threads \
used by curves and simulations (0 or unset = all cores)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Decimal places for every displayed number (default: 3 for P-values,
    /// 2 for odds ratios, 1 for S-values)
    #[arg(long, global = true)]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    /// Only for compat-curve
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    Canonical,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Pearson,
    Wald,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rule {
    Doubling,
    MinLikelihood,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    TwoSided,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DependenceArg {
    Independent,
    PerfectlyCorrelated,
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverageArg {
    Exact,
    Wald,
    /// Both methods on the same draws
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Four counts a,b,c,d
    #[arg(long, allow_hyphen_values = true)]
    pub table: String,

    #[arg(long, value_enum, default_value_t = Layout::Canonical)]
    pub layout: Layout,
}

#[derive(Debug, Clone, Args)]
pub struct ArmArgs {
    #[arg(long)]
    pub n_exposed: u64,
    #[arg(long)]
    pub n_unexposed: u64,
    /// Outcome risk among the unexposed
    #[arg(long)]
    pub baseline_risk: f64,
    /// True odds ratio
    #[arg(long = "or")]
    pub or_pop: f64,
}

/// One scenario from flags, or a JSON array of scenarios from a file.
#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    #[arg(long, conflicts_with = "scenarios")]
    pub n_exposed: Option<u64>,
    #[arg(long, conflicts_with = "scenarios")]
    pub n_unexposed: Option<u64>,
    #[arg(long, conflicts_with = "scenarios")]
    pub baseline_risk: Option<f64>,
    #[arg(long = "or", conflicts_with = "scenarios")]
    pub or_pop: Option<f64>,
    #[arg(long, default_value = "", conflicts_with = "scenarios")]
    pub label: String,
    /// JSON file holding an array of scenarios
    #[arg(long)]
    pub scenarios: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n_sims: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Counts, margins, risks, RD/RR/OR and expected counts
    Describe(TableArgs),

    /// P-value and S-value for a hypothesized odds ratio
    Test {
        #[command(flatten)]
        table: TableArgs,
        /// Hypothesized odds ratio
        #[arg(long = "or", default_value_t = 1.0)]
        psi: f64,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Two-sided rule for the exact test
        #[arg(long, value_enum, default_value_t = Rule::Doubling)]
        rule: Rule,
        /// Exact test only
        #[arg(long, value_enum, default_value_t = SideArg::TwoSided)]
        side: SideArg,
        /// Exact test only: count half of the observed table's probability
        #[arg(long)]
        mid_p: bool,
        /// Also report the decision at this level
        #[arg(long)]
        alpha: Option<f64>,
    },

    /// P-value function over a log-uniform grid of odds ratios
    CompatCurve {
        #[command(flatten)]
        table: TableArgs,
        /// Repeat or separate with commas to overlay methods (svg/json)
        #[arg(long, value_enum, value_delimiter = ',', default_value = "exact")]
        method: Vec<Method>,
        #[arg(long)]
        psi_min: Option<f64>,
        #[arg(long)]
        psi_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points_per_decade: u32,
        /// Levels drawn as horizontal rules
        #[arg(long, value_delimiter = ',', default_value = "0.05")]
        alpha_marks: Vec<f64>,
        /// Write to this file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Compatibility interval by test inversion
    Interval {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },

    /// S-value (bits of refutational information) of a P-value
    Svalue {
        #[arg(long)]
        p: f64,
    },

    /// Monte Carlo power of a test of OR = 1
    Power {
        #[command(flatten)]
        arms: ArmArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        test: Method,
        #[command(flatten)]
        sim: SimArgs,
    },

    /// Power over a list of true odds ratios
    PowerCurve {
        #[arg(long)]
        n_exposed: u64,
        #[arg(long)]
        n_unexposed: u64,
        #[arg(long)]
        baseline_risk: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        or_grid: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        test: Method,
        #[command(flatten)]
        sim: SimArgs,
    },

    /// Per-test level α/k
    Bonferroni {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        k: u32,
    },

    /// Chance of at least one p ≤ α among k true null hypotheses
    Familywise {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = DependenceArg::Independent)]
        dependence: DependenceArg,
        /// Correlation of the test statistics (simulated mode)
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        n_sims: u64,
        /// Required for simulated mode
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Prior interval to equivalent prior data
    PriorData {
        #[arg(long)]
        lower: f64,
        #[arg(long)]
        upper: f64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },

    /// Frequentist and prior-augmented logistic fits
    BayesFit {
        #[command(flatten)]
        table: TableArgs,
        /// Prior interval bounds; omit both for the frequentist fit only
        #[arg(long, requires = "upper")]
        lower: Option<f64>,
        #[arg(long, requires = "lower")]
        upper: Option<f64>,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },

    /// Coverage of exact and Wald intervals
    CoverageSim {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value_t = CoverageArg::Both)]
        method: CoverageArg,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[command(flatten)]
        sim: SimArgs,
    },

    /// Error of the sample log odds ratio in sparse data
    SparseSim {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        sim: SimArgs,
    },

    /// Size of estimates that pass a p ≤ α filter
    FilterSim {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[command(flatten)]
        sim: SimArgs,
    },
}
