//! The adaptive LASSO estimator and its companions.
//!
//! In the location model (and coordinatewise under an orthogonal design with
//! `X'X = nI`) the estimator has the closed form
//! `ȳ (1 - μ²/ȳ²)₊`, which coincides with the nonnegative garotte. For a
//! general design the penalized least-squares problem
//!
//! ```text
//! (Y - Xθ)'(Y - Xθ) + 2 n μ² Σ |θ_i| / |θ̂_LS,i|
//! ```
//!
//! is solved by cyclic coordinate descent.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Least-squares coefficients at or below this magnitude make the adaptive
/// weight undefined.
pub const DEGENERATE_WEIGHT_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("tuning parameter must be positive and finite, got {mu}")))
    }
}

/// Closed-form adaptive LASSO in the location model.
///
/// Returns `0` when `|ȳ| <= μ`, else `ȳ - μ²/ȳ`.
pub fn alasso_location(y_bar: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(garotte(y_bar, mu))
}

#[inline]
pub(crate) fn garotte(y_bar: f64, mu: f64) -> f64 {
    if y_bar.abs() <= mu {
        0.0
    } else {
        y_bar - mu * mu / y_bar
    }
}

/// Hard thresholding: `ȳ` if `|ȳ| > μ`, else `0`.
pub fn hard_threshold(y_bar: f64, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    Ok(if y_bar.abs() <= mu { 0.0 } else { y_bar })
}

/// Location-model objective `n(ȳ - θ)² + 2nμ²|θ|/|ȳ|`.
pub fn location_objective(n: f64, y_bar: f64, mu: f64, theta: f64) -> f64 {
    n * (y_bar - theta).powi(2) + 2.0 * n * mu * mu * theta.abs() / y_bar.abs()
}

/// Soft thresholding `sign(z)(|z| - λ)₊`.
#[inline]
pub fn soft_threshold(z: f64, lambda: f64) -> f64 {
    if z > lambda {
        z - lambda
    } else if z < -lambda {
        z + lambda
    } else {
        0.0
    }
}

/// Linear regression problem `Y = Xθ + σu` with a full-column-rank design.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionProblem {
    design: DMatrix<f64>,
    response: DVector<f64>,
    sigma: f64,
}

impl RegressionProblem {
    pub fn new(design: DMatrix<f64>, response: DVector<f64>, sigma: f64) -> Result<Self> {
        if design.nrows() != response.len() {
            return Err(domain(format!(
                "response has {} entries but design has {} rows",
                response.len(),
                design.nrows()
            )));
        }
        if design.ncols() == 0 || design.nrows() < design.ncols() {
            return Err(domain("design must have at least as many rows as columns (k >= 1)"));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("sigma must be positive, got {sigma}")));
        }
        let sv = design.singular_values();
        let max = sv.max();
        let min = sv.min();
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        if ratio < RANK_TOL {
            return Err(Error::RankDeficient { ratio });
        }
        Ok(Self { design, response, sigma })
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    pub fn response(&self) -> &DVector<f64> {
        &self.response
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n(&self) -> usize {
        self.design.nrows()
    }

    pub fn k(&self) -> usize {
        self.design.ncols()
    }

    /// Same design, new response.
    pub fn with_response(&self, response: DVector<f64>) -> Result<Self> {
        if response.len() != self.n() {
            return Err(domain("response length does not match design"));
        }
        Ok(Self {
            design: self.design.clone(),
            response,
            sigma: self.sigma,
        })
    }

    /// Least-squares estimate `(X'X)^{-1} X'Y`.
    pub fn least_squares(&self) -> Result<DVector<f64>> {
        let s = SufficientStats::from_problem(self);
        s.least_squares()
    }

    /// Objective `(Y - Xθ)'(Y - Xθ) + 2nμ² Σ|θ_i|/|θ̂_LS,i|`.
    pub fn objective(&self, theta: &DVector<f64>, mu: f64, ls: &DVector<f64>) -> f64 {
        let r = &self.response - &self.design * theta;
        let pen: f64 = theta.iter().zip(ls.iter()).map(|(t, w)| t.abs() / w.abs()).sum();
        r.norm_squared() + 2.0 * self.n() as f64 * mu * mu * pen
    }
}

/// Output of [`alasso_general`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveLassoFit {
    pub estimate: Vec<f64>,
    pub ls_estimate: Vec<f64>,
    pub active_set: Vec<bool>,
    pub mu: f64,
    /// Full coordinate-descent cycles; `0` for closed forms.
    pub iterations: usize,
    /// Objective after each cycle (first entry: at the starting point).
    pub objective_path: Vec<f64>,
}

/// Gram matrix, `X'Y`, `Y'Y` and row count: everything the solver reads.
#[derive(Debug, Clone)]
pub(crate) struct SufficientStats {
    gram: DMatrix<f64>,
    xty: DVector<f64>,
    yty: f64,
    n: usize,
}

impl SufficientStats {
    pub(crate) fn from_problem(p: &RegressionProblem) -> Self {
        let xt = p.design.transpose();
        Self {
            gram: &xt * &p.design,
            xty: &xt * &p.response,
            yty: p.response.norm_squared(),
            n: p.n(),
        }
    }

    fn from_rows(x: &DMatrix<f64>, y: &DVector<f64>, rows: &[usize]) -> Self {
        let k = x.ncols();
        let mut gram = DMatrix::zeros(k, k);
        let mut xty = DVector::zeros(k);
        let mut yty = 0.0;
        for &r in rows {
            let yi = y[r];
            yty += yi * yi;
            for a in 0..k {
                let xa = x[(r, a)];
                xty[a] += xa * yi;
                for b in 0..k {
                    gram[(a, b)] += xa * x[(r, b)];
                }
            }
        }
        Self { gram, xty, yty, n: rows.len() }
    }

    fn least_squares(&self) -> Result<DVector<f64>> {
        let chol = self
            .gram
            .clone()
            .cholesky()
            .ok_or(Error::RankDeficient { ratio: 0.0 })?;
        Ok(chol.solve(&self.xty))
    }

    fn objective(&self, theta: &DVector<f64>, lambdas: &[f64]) -> f64 {
        let quad = theta.dot(&(&self.gram * theta));
        let pen: f64 = theta.iter().zip(lambdas).map(|(t, l)| t.abs() * l).sum();
        self.yty - 2.0 * theta.dot(&self.xty) + quad + 2.0 * pen
    }

    /// Cyclic coordinate descent, coordinates visited in order `0..k`.
    fn solve(&self, mu: f64, tol: f64, max_iter: usize) -> Result<AdaptiveLassoFit> {
        let ls = self.least_squares()?;
        if let Some((index, &value)) = ls
            .iter()
            .enumerate()
            .find(|(_, v)| v.abs() <= DEGENERATE_WEIGHT_TOL)
        {
            return Err(Error::DegenerateWeight { index, value });
        }
        let k = ls.len();
        // coordinate i minimizes G_ii θ_i² - 2 z θ_i + 2 λ_i |θ_i|
        let lambdas: Vec<f64> = ls
            .iter()
            .map(|w| self.n as f64 * mu * mu / w.abs())
            .collect();
        let mut theta = ls.clone();
        let mut path = vec![self.objective(&theta, &lambdas)];
        for cycle in 1..=max_iter {
            let mut max_change: f64 = 0.0;
            for i in 0..k {
                let gii = self.gram[(i, i)];
                let partial = self.gram.row(i).dot(&theta.transpose()) - gii * theta[i];
                let z = self.xty[i] - partial;
                let new = soft_threshold(z, lambdas[i]) / gii;
                max_change = max_change.max((new - theta[i]).abs());
                theta[i] = new;
            }
            path.push(self.objective(&theta, &lambdas));
            if max_change < tol {
                return Ok(AdaptiveLassoFit {
                    active_set: theta.iter().map(|&t| t != 0.0).collect(),
                    estimate: theta.iter().copied().collect(),
                    ls_estimate: ls.iter().copied().collect(),
                    mu,
                    iterations: cycle,
                    objective_path: path,
                });
            }
            if cycle == max_iter {
                return Err(Error::NonConvergence {
                    iterations: cycle,
                    last_change: max_change,
                    last_iterate: theta.iter().copied().collect(),
                });
            }
        }
        Err(Error::NonConvergence {
            iterations: 0,
            last_change: f64::INFINITY,
            last_iterate: theta.iter().copied().collect(),
        })
    }
}

/// Adaptive LASSO for a general design by cyclic coordinate descent.
///
/// The coordinate-`i` penalty level is `nμ²/|θ̂_LS,i|`; iteration stops when
/// no coordinate moves by `tol` or more during a full cycle.
pub fn alasso_general(
    problem: &RegressionProblem,
    mu: f64,
    tol: f64,
    max_iter: usize,
) -> Result<AdaptiveLassoFit> {
    check_mu(mu)?;
    if !(tol > 0.0) || max_iter == 0 {
        return Err(domain("tol must be positive and max_iter at least 1"));
    }
    SufficientStats::from_problem(problem).solve(mu, tol, max_iter)
}

/// 25 log-spaced values on `[1e-3, 1]`.
pub fn default_cv_grid() -> Vec<f64> {
    log_grid(1e-3, 1.0, 25)
}

/// `len` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..len)
        .map(|i| (a + (b - a) * i as f64 / (len - 1) as f64).exp())
        .collect()
}

/// Cross-validation result: the chosen `mu` and the error curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvSelection {
    pub mu: f64,
    pub grid: Vec<f64>,
    /// Out-of-fold mean squared prediction error per grid value.
    pub errors: Vec<f64>,
}

/// Seeded K-fold cross-validation of the tuning parameter.
///
/// Rows are shuffled with the seed and dealt round-robin into folds, so fold
/// sizes differ by at most one. Ties go to the larger `mu`.
pub fn cross_validate(
    problem: &RegressionProblem,
    folds: usize,
    grid: &[f64],
    seed: u64,
) -> Result<CvSelection> {
    if grid.is_empty() {
        return Err(domain("cross-validation grid is empty"));
    }
    for &mu in grid {
        check_mu(mu)?;
    }
    let n = problem.n();
    if folds < 2 || folds > n {
        return Err(domain(format!("need 2 <= folds <= n, got {folds} folds for n = {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let x = problem.design();
    let y = problem.response();

    let mut sse = vec![0.0; grid.len()];
    for f in 0..folds {
        let (test, train): (Vec<(usize, usize)>, Vec<(usize, usize)>) =
            order.iter().copied().enumerate().partition(|(pos, _)| pos % folds == f);
        let train: Vec<usize> = train.into_iter().map(|(_, r)| r).collect();
        let test: Vec<usize> = test.into_iter().map(|(_, r)| r).collect();
        let stats = SufficientStats::from_rows(x, y, &train);
        for (g, &mu) in grid.iter().enumerate() {
            let fit = stats.solve(mu, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            for &r in &test {
                let pred: f64 = (0..x.ncols()).map(|j| x[(r, j)] * fit.estimate[j]).sum();
                sse[g] += (y[r] - pred).powi(2);
            }
        }
    }
    let errors: Vec<f64> = sse.iter().map(|s| s / n as f64).collect();
    let best = errors.iter().copied().fold(f64::INFINITY, f64::min);
    let mu = grid
        .iter()
        .zip(&errors)
        .filter(|(_, &e)| e <= best * (1.0 + 1e-12))
        .map(|(&m, _)| m)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CvSelection {
        mu,
        grid: grid.to_vec(),
        errors,
    })
}

/// The `mu` chosen by [`cross_validate`].
pub fn cross_validate_mu(
    problem: &RegressionProblem,
    folds: usize,
    grid: &[f64],
    seed: u64,
) -> Result<f64> {
    cross_validate(problem, folds, grid, seed).map(|s| s.mu)
}
