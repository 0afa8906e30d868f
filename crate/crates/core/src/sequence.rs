//! Power-law sequences `c·n^(-α)` and their limits.
//!
//! Tuning parameters `μ_n` and moving parameters `θ_n` are described by this
//! family. Products, quotients and powers stay inside it, so the limits
//! `lim θ_n/μ_n`, `lim n^{1/2} μ_n` and `lim n^{1/2} μ_n²` that decide every
//! large-sample regime follow from exponent comparison alone.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::extended::ExtendedReal;

/// Exponents closer than this are treated as equal. Exponents typed on a
/// command line (`0.333`) are still distinct from `1/3`.
pub const EXPONENT_TOL: f64 = 1e-12;

/// The sequence `coef · n^(-exponent)` with `coef > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSequence {
    coef: f64,
    exponent: f64,
}

/// Combination whose limit [`limit_of`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitForm<'a> {
    /// `a_n / b_n`
    Ratio(&'a PowerLawSequence),
    /// `a_n · b_n`
    Product(&'a PowerLawSequence),
    /// `n^{1/2} · a_n`
    SqrtNScaled,
}

impl PowerLawSequence {
    pub fn new(coef: f64, exponent: f64) -> Result<Self> {
        if !(coef > 0.0 && coef.is_finite()) {
            return Err(domain(format!("power-law coefficient must be positive, got {coef}")));
        }
        if !exponent.is_finite() {
            return Err(domain(format!("power-law exponent must be finite, got {exponent}")));
        }
        Ok(Self { coef, exponent })
    }

    pub fn coef(&self) -> f64 {
        self.coef
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Value at sample size `n`.
    pub fn eval(&self, n: f64) -> f64 {
        self.coef * n.powf(-self.exponent)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coef: self.coef * other.coef,
            exponent: self.exponent + other.exponent,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        Self {
            coef: self.coef / other.coef,
            exponent: self.exponent - other.exponent,
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        Self {
            coef: self.coef.powi(k),
            exponent: self.exponent * k as f64,
        }
    }

    /// `n^{1/2} · a_n`.
    pub fn sqrt_n_scaled(&self) -> Self {
        Self {
            coef: self.coef,
            exponent: self.exponent - 0.5,
        }
    }

    /// `lim_{n→∞} c·n^(-α)`: `0`, `c` or `+∞`.
    pub fn limit(&self) -> ExtendedReal {
        if self.exponent > EXPONENT_TOL {
            ExtendedReal::ZERO
        } else if self.exponent < -EXPONENT_TOL {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::Finite(self.coef)
        }
    }

    /// Parses `c*n^-a`, `n^-a`, `c*n^a` or a bare constant `c`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || domain(format!("cannot parse power law `{s}` (expected c*n^-a)"));
        let (coef, rest) = match t.find('n') {
            None => return Self::new(t.parse().map_err(|_| bad())?, 0.0),
            Some(0) => (1.0, &t[..]),
            Some(i) => {
                let head = t[..i].strip_suffix('*').ok_or_else(bad)?;
                (head.parse::<f64>().map_err(|_| bad())?, &t[i..])
            }
        };
        let power = rest.strip_prefix("n^").ok_or_else(bad)?;
        let power = power.trim_start_matches('(').trim_end_matches(')');
        let exponent = parse_number_or_fraction(power).ok_or_else(bad)?;
        Self::new(coef, -exponent)
    }
}

fn parse_number_or_fraction(s: &str) -> Option<f64> {
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.parse().ok()?;
        let den: f64 = den.parse().ok()?;
        (den != 0.0).then(|| num / den)
    } else {
        s.parse().ok()
    }
}

/// Exact limit of a combination of power laws as `n → ∞`.
pub fn limit_of(a: &PowerLawSequence, form: LimitForm<'_>) -> ExtendedReal {
    match form {
        LimitForm::Ratio(b) => a.div(b).limit(),
        LimitForm::Product(b) => a.mul(b).limit(),
        LimitForm::SqrtNScaled => a.sqrt_n_scaled().limit(),
    }
}
