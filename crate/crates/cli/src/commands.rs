//! Subcommand arguments and their execution.

use std::path::PathBuf;

use alasso::asymptotics::{
    classify_tuning, limit_f, limit_g, scaled_error_quantile, selprob_limit, uniform_rate,
    ThetaSequence, TuningKind,
};
use alasso::cdf_estimation::{
    theory_epsilon_bound, worst_case_experiment, BootstrapRule, CdfEstimator, PretestRule, Target,
    WorstCaseConfig,
};
use alasso::estimators::{
    alasso_general, alasso_location, cross_validate, default_cv_grid, hard_threshold,
    RegressionProblem, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use alasso::exact_dist::{selection_prob, FiniteSampleDist, Scale};
use alasso::montecarlo::{run_study, StudyConfig, Tuning};
use alasso::{validate, LocationModel, PowerLawSequence};
use clap::{Args, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliError;
use crate::output::{num, Report, Table};

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "snake_case")]
pub enum Command {
    /// Estimate from a sample mean, or from a regression data file
    #[command(allow_negative_numbers = true)]
    Estimate(EstimateArgs),
    /// Exact finite-sample distribution on a grid
    #[command(allow_negative_numbers = true)]
    Dist(DistArgs),
    /// Probability that the estimator is exactly zero
    #[command(allow_negative_numbers = true)]
    Selprob(SelprobArgs),
    /// Classify a tuning sequence and give the limit law along a parameter sequence
    #[command(allow_negative_numbers = true)]
    Limit(LimitArgs),
    /// Uniform convergence rate min(n^1/2, 1/mu_n)
    Rate(RateArgs),
    /// Worst-case error probability of a cdf estimator near the oscillation point
    #[command(allow_negative_numbers = true)]
    Impossibility(ImpossibilityArgs),
    /// Simulation study with correlated regressors
    Montecarlo(MontecarloArgs),
    /// Run the built-in invariant checks
    Validate(ValidateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Estimate(_) => "estimate",
            Command::Dist(_) => "dist",
            Command::Selprob(_) => "selprob",
            Command::Limit(_) => "limit",
            Command::Rate(_) => "rate",
            Command::Impossibility(_) => "impossibility",
            Command::Montecarlo(_) => "montecarlo",
            Command::Validate(_) => "validate",
        }
    }

    pub fn run(&self, seed: u64) -> Result<Report, CliError> {
        match self {
            Command::Estimate(a) => estimate(a, seed),
            Command::Dist(a) => dist(a),
            Command::Selprob(a) => selprob(a),
            Command::Limit(a) => limit(a),
            Command::Rate(a) => rate(a, seed),
            Command::Impossibility(a) => impossibility(a, seed),
            Command::Montecarlo(a) => montecarlo(a, seed),
            Command::Validate(_) => run_validate(seed),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `lo:hi:count` into `count` evenly spaced points.
fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || usage(format!("grid `{spec}` must look like lo:hi:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts[..] else { return Err(bad()) };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    if count == 0 || !(lo.is_finite() && hi.is_finite()) || (count > 1 && !(lo < hi)) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScaleArg {
    /// n^1/2 (estimate - theta)
    SqrtN,
    /// (estimate - theta) / mu
    InvMu,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    /// Sample mean of the location model
    #[arg(long, conflicts_with = "data")]
    pub y_bar: Option<f64>,
    /// CSV with a header; the last column is the response, the others the design
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Tuning parameter
    #[arg(long)]
    pub mu: Option<f64>,
    /// Choose mu by K-fold cross-validation (regression data only)
    #[arg(long, conflicts_with = "mu")]
    pub cv: bool,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
}

fn estimate(a: &EstimateArgs, seed: u64) -> Result<Report, CliError> {
    if let Some(y_bar) = a.y_bar {
        let mu = a.mu.ok_or_else(|| usage("--y-bar needs --mu"))?;
        let est = alasso_location(y_bar, mu)?;
        let hard = hard_threshold(y_bar, mu)?;
        let mut t = Table::new("estimate", vec!["y_bar", "mu", "estimate", "hard_threshold", "is_zero"]);
        t.push(vec![num(y_bar), num(mu), num(est), num(hard), (est == 0.0).to_string()]);
        return Ok(Report {
            result: json!({ "y_bar": y_bar, "mu": mu, "estimate": est, "hard_threshold": hard, "is_zero": est == 0.0 }),
            tables: vec![t],
            failed: false,
        });
    }
    let path = a.data.as_ref().ok_or_else(|| usage("estimate needs --y-bar or --data"))?;
    let problem = read_regression(path)?;
    let (mu, cv) = match (a.mu, a.cv) {
        (Some(mu), false) => (mu, None),
        (None, true) => {
            let sel = cross_validate(&problem, a.folds, &default_cv_grid(), seed)?;
            (sel.mu, Some(sel))
        }
        _ => return Err(usage("regression estimates need exactly one of --mu or --cv")),
    };
    let fit = alasso_general(&problem, mu, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let mut t = Table::new("estimate", vec!["coefficient", "estimate", "ls_estimate", "active"]);
    for j in 0..fit.estimate.len() {
        t.push(vec![
            (j + 1).to_string(),
            num(fit.estimate[j]),
            num(fit.ls_estimate[j]),
            fit.active_set[j].to_string(),
        ]);
    }
    Ok(Report {
        result: json!({ "fit": fit, "cross_validation": cv }),
        tables: vec![t],
        failed: false,
    })
}

fn read_regression(path: &PathBuf) -> Result<RegressionProblem, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("{} row {}: {e}", path.display(), i + 1)))?;
        rows.push(row);
    }
    let width = rows.first().map_or(0, Vec::len);
    if width < 2 || rows.iter().any(|r| r.len() != width) {
        return Err(usage("data needs at least two columns and equal-length rows"));
    }
    let k = width - 1;
    let x = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]);
    let y = DVector::from_iterator(rows.len(), rows.iter().map(|r| r[k]));
    Ok(RegressionProblem::new(x, y, 1.0)?)
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DistArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub mu: f64,
    /// Evaluation grid lo:hi:count
    #[arg(long, default_value = "-4:4:401", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = ScaleArg::SqrtN)]
    pub scale: ScaleArg,
}

fn dist(a: &DistArgs) -> Result<Report, CliError> {
    let model = LocationModel::new(a.n, a.theta, a.mu)?;
    let scale = match a.scale {
        ScaleArg::SqrtN => Scale::SqrtN,
        ScaleArg::InvMu => Scale::InvMu,
    };
    let d = FiniteSampleDist::new(model, scale);
    let mut t = Table::new("dist", vec!["x", "cdf", "density"]);
    let mut points = Vec::new();
    for x in parse_grid(&a.grid)? {
        let cdf = d.cdf(x);
        let density = d.density(x).ok();
        t.push(vec![num(x), num(cdf), density.map_or(String::new(), num)]);
        points.push(json!({ "x": x, "cdf": cdf, "density": density }));
    }
    Ok(Report {
        result: json!({
            "atom_location": d.atom_location,
            "atom_mass": d.atom_mass,
            "scale": scale,
            "points": points,
        }),
        tables: vec![t],
        failed: false,
    })
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SelprobArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub mu: f64,
}

fn selprob(a: &SelprobArgs) -> Result<Report, CliError> {
    let p = selection_prob(&LocationModel::new(a.n, a.theta, a.mu)?);
    let mut t = Table::new("selprob", vec!["n", "theta", "mu", "probability"]);
    t.push(vec![a.n.to_string(), num(a.theta), num(a.mu), num(p)]);
    Ok(Report { result: json!({ "probability": p }), tables: vec![t], failed: false })
}

/// A power law given either as `c*n^-a` or as coefficient and exponent.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MuRule {
    /// Tuning sequence, e.g. `n^-1/3` or `2*n^-0.25`
    #[arg(long, conflicts_with_all = ["mu_coef", "mu_exp"])]
    pub mu_rule: Option<String>,
    #[arg(long, requires = "mu_exp")]
    pub mu_coef: Option<f64>,
    /// Exponent a in mu_n = c n^-a
    #[arg(long)]
    pub mu_exp: Option<f64>,
}

impl MuRule {
    fn resolve(&self) -> Result<PowerLawSequence, CliError> {
        match (&self.mu_rule, self.mu_exp) {
            (Some(s), _) => Ok(PowerLawSequence::parse(s)?),
            (None, Some(a)) => Ok(PowerLawSequence::new(self.mu_coef.unwrap_or(1.0), a)?),
            (None, None) => Err(usage("give --mu-rule or --mu-exp")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LimitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mu: MuRule,
    /// theta_n = b n^-beta; omitted means theta_n = 0
    #[arg(long, conflicts_with = "theta_edge")]
    pub theta_coef: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub theta_exp: f64,
    /// Boundary sequence sign*mu_n + offset*n^-1/2, given as sign:offset
    #[arg(long, allow_hyphen_values = true)]
    pub theta_edge: Option<String>,
    #[arg(long, value_enum, default_value_t = ScaleArg::SqrtN)]
    pub scale: ScaleArg,
    /// Grid lo:hi:count at which to tabulate the limit cdf
    #[arg(long, default_value = "-4:4:81", allow_hyphen_values = true)]
    pub grid: String,
}

fn theta_sequence(a: &LimitArgs) -> Result<ThetaSequence, CliError> {
    if let Some(edge) = &a.theta_edge {
        let bad = || usage(format!("--theta-edge `{edge}` must look like sign:offset, e.g. -1:0.5"));
        let (s, o) = edge.split_once(':').ok_or_else(bad)?;
        let sign: f64 = s.parse().map_err(|_| bad())?;
        let offset: f64 = o.parse().map_err(|_| bad())?;
        return Ok(ThetaSequence::knife_edge(sign, offset)?);
    }
    match a.theta_coef {
        Some(b) => Ok(ThetaSequence::power(b, a.theta_exp)?),
        None => Ok(ThetaSequence::Zero),
    }
}

fn limit(a: &LimitArgs) -> Result<Report, CliError> {
    let mu = a.mu.resolve()?;
    let theta = theta_sequence(a)?;
    let law = match a.scale {
        ScaleArg::SqrtN => limit_f(&mu, &theta)?,
        ScaleArg::InvMu => limit_g(&mu, &theta)?,
    };
    let sel = selprob_limit(&mu, &theta)?;
    let mut t = Table::new("limit", vec!["x", "cdf"]);
    let mut points = Vec::new();
    for x in parse_grid(&a.grid)? {
        let c = law.law.cdf(x);
        t.push(vec![num(x), num(c)]);
        points.push(json!({ "x": x, "cdf": c }));
    }
    Ok(Report {
        result: json!({
            "mu": { "coef": mu.coef(), "exponent": mu.exponent() },
            "theta": theta,
            "regime": law.regime,
            "nu": law.nu,
            "zeta": law.zeta,
            "selection": sel,
            "law": law.law,
            "case": law.case,
            "points": points,
        }),
        tables: vec![t],
        failed: false,
    })
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub mu: MuRule,
    /// Sample sizes, comma separated
    #[arg(long, value_delimiter = ',', default_value = "100,10000,1000000")]
    pub n: Vec<u64>,
    /// If positive, also simulate the largest 99% quantile of a_n|estimate - theta|
    /// over a parameter grid with this many draws per point
    #[arg(long, default_value_t = 0)]
    pub check_reps: usize,
}

fn rate(a: &RateArgs, seed: u64) -> Result<Report, CliError> {
    let mu = a.mu.resolve()?;
    classify_tuning(&mu)?;
    let mut t = Table::new("rate", vec!["n", "mu_n", "a_n", "sup_q99"]);
    let mut rows = Vec::new();
    for &n in &a.n {
        if n == 0 {
            return Err(usage("sample sizes must be positive"));
        }
        let mu_n = mu.eval(n as f64);
        let a_n = uniform_rate(&mu, n);
        let q = (a.check_reps > 0).then(|| {
            // parameters out to a few multiples of the slower of the two scales
            let span = 4.0 / a_n;
            let grid: Vec<f64> = (0..=40).map(|i| span * (i as f64 / 20.0 - 1.0)).collect();
            scaled_error_quantile(&mu, n, &grid, a.check_reps, 0.99, seed)
        });
        t.push(vec![n.to_string(), num(mu_n), num(a_n), q.map_or(String::new(), num)]);
        rows.push(json!({ "n": n, "mu_n": mu_n, "a_n": a_n, "sup_q99": q }));
    }
    Ok(Report { result: json!({ "rows": rows }), tables: vec![t], failed: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorArg {
    Pretest,
    Bootstrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RegimeArg {
    Conservative,
    Consistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TargetArg {
    F,
    G,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ImpossibilityArgs {
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub mu: f64,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Pretest)]
    pub estimator: EstimatorArg,
    /// Estimate the cdf of n^1/2(estimate - theta) (f) or of (estimate - theta)/mu (g)
    #[arg(long, value_enum, default_value_t = TargetArg::F)]
    pub target: TargetArg,
    /// Regime the estimator assumes for its limit formulas
    #[arg(long, value_enum, default_value_t = RegimeArg::Conservative)]
    pub regime: RegimeArg,
    /// Half-width of the parameter window in units of n^-1/2 (f) or mu (g)
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Error threshold; defaults to 0.9 times the largest admissible value
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 41)]
    pub grid_size: usize,
    #[arg(long, default_value_t = 4000)]
    pub reps: usize,
    /// Bootstrap subsample size; defaults to n/4
    #[arg(long)]
    pub subsample: Option<usize>,
    #[arg(long, default_value_t = 200)]
    pub boot_reps: usize,
}

fn impossibility(a: &ImpossibilityArgs, seed: u64) -> Result<Report, CliError> {
    let target = match a.target {
        TargetArg::F => Target::F,
        TargetArg::G => Target::G,
    };
    let kind = match a.regime {
        RegimeArg::Conservative => TuningKind::Conservative,
        RegimeArg::Consistent => TuningKind::Consistent,
    };
    let estimator = match a.estimator {
        EstimatorArg::Pretest => CdfEstimator::PretestPlugin(PretestRule::new(kind)),
        EstimatorArg::Bootstrap => CdfEstimator::MOutOfNBootstrap(BootstrapRule {
            subsample_size: a.subsample.unwrap_or(a.n as usize / 4),
            reps: a.boot_reps,
            mu_exponent: match kind {
                TuningKind::Consistent => 1.0 / 3.0,
                _ => 0.5,
            },
        }),
    };
    let epsilon = match a.epsilon {
        Some(e) => e,
        None => 0.9 * theory_epsilon_bound(target, a.n, a.mu, a.t)?,
    };
    let report = worst_case_experiment(&WorstCaseConfig {
        estimator,
        target,
        n: a.n,
        mu: a.mu,
        t: a.t,
        c: a.c,
        epsilon,
        grid_size: a.grid_size,
        reps: a.reps,
        seed,
    })?;
    let mut t = Table::new("impossibility", vec!["theta", "true_cdf", "failure_prob"]);
    for i in 0..report.theta_grid.len() {
        t.push(vec![
            num(report.theta_grid[i]),
            num(report.true_cdf_by_theta[i]),
            num(report.failure_prob_by_theta[i]),
        ]);
    }
    Ok(Report { result: serde_json::to_value(&report).unwrap(), tables: vec![t], failed: false })
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MontecarloArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// `fixed:<mu or c*n^-a>` or `cv[:folds]`
    #[arg(long, default_value = "fixed:n^-1/3")]
    pub tuning: String,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Explicit coefficients, comma separated (default 3, 1.5, gamma n^-1/2, ...)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Skip kernel smoothing
    #[arg(long)]
    pub no_kde: bool,
}

fn parse_tuning(spec: &str, n: usize) -> Result<Tuning, CliError> {
    if let Some(rule) = spec.strip_prefix("fixed:") {
        let mu = PowerLawSequence::parse(rule)?.eval(n as f64);
        return Ok(Tuning::Fixed { mu });
    }
    if spec == "cv" {
        return Ok(Tuning::cross_validated());
    }
    if let Some(folds) = spec.strip_prefix("cv:") {
        let folds = folds.parse().map_err(|_| usage(format!("bad fold count in `{spec}`")))?;
        return Ok(Tuning::CrossValidated { folds, grid: default_cv_grid() });
    }
    Err(usage(format!("tuning `{spec}` must be fixed:<rule> or cv[:folds]")))
}

fn montecarlo(a: &MontecarloArgs, seed: u64) -> Result<Report, CliError> {
    let config = StudyConfig {
        n: a.n,
        k: a.k,
        rho: a.rho,
        gamma: a.gamma,
        theta: a.theta.clone(),
        tuning: parse_tuning(&a.tuning, a.n)?,
        replications: a.reps,
        seed,
        kde: !a.no_kde,
    };
    let study = run_study(&config)?;
    let mut tables = Vec::new();
    for (j, s) in study.summaries.iter().enumerate() {
        let mut t = Table::new(
            format!("component{}", s.component),
            vec!["replication", "estimate", "centered_scaled", "is_zero", "mu_used"],
        );
        for rec in &study.replications {
            match &rec.estimate {
                Some(e) => t.push(vec![
                    rec.replication.to_string(),
                    num(e[j]),
                    num(study.scaling[j] * (e[j] - study.theta[j])),
                    (e[j] == 0.0).to_string(),
                    num(rec.mu_used),
                ]),
                None => t.push(vec![rec.replication.to_string(), String::new(), String::new(), String::new(), String::new()]),
            }
        }
        tables.push(t);
    }
    let failures: Vec<_> = study
        .replications
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| json!({ "replication": r.replication, "error": e })))
        .collect();
    Ok(Report {
        result: json!({
            "config": study.config,
            "theta": study.theta,
            "scaling": study.scaling,
            "median_mu": study.median_mu(),
            "failed_replications": study.failed_replications,
            "failures": failures,
            "summaries": study.summaries,
        }),
        tables,
        failed: false,
    })
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ValidateArgs {}

fn run_validate(seed: u64) -> Result<Report, CliError> {
    let checks = validate::run_all(seed);
    let failed = checks.iter().any(|c| !c.passed);
    let mut t = Table::new("validate", vec!["check", "passed", "detail"]);
    for c in &checks {
        t.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
    }
    Ok(Report {
        result: json!({ "passed": !failed, "checks": checks }),
        tables: vec![t],
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_grid("2:5:1").unwrap(), vec![2.0]);
        for bad in ["1:0:3", "0:1", "a:1:2", "0:1:0"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn tuning_parsing() {
        match parse_tuning("fixed:n^-1/3", 1000).unwrap() {
            Tuning::Fixed { mu } => assert!((mu - 0.1).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_tuning("fixed:0.2", 10).unwrap(), Tuning::Fixed { mu: 0.2 });
        assert_eq!(parse_tuning("cv", 10).unwrap(), Tuning::cross_validated());
        assert!(matches!(parse_tuning("cv:5", 10).unwrap(), Tuning::CrossValidated { folds: 5, .. }));
        assert!(parse_tuning("auto", 10).is_err());
    }
}
