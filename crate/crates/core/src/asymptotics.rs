//! Large-sample behaviour along tuning sequences `μ_n` and moving
//! parameters `θ_n`.
//!
//! Everything here is decided by a handful of extended-real limits:
//!
//! | symbol | limit                    |
//! |--------|--------------------------|
//! | `m`    | `n^{1/2} μ_n`            |
//! | `ρ`    | `n^{1/2} μ_n²`           |
//! | `ν`    | `n^{1/2} θ_n`            |
//! | `ζ`    | `θ_n / μ_n`              |
//! | `r`    | `n^{1/2} μ_n² / θ_n`     |
//!
//! `m < ∞` is the conservative regime (the larger model keeps positive
//! probability at `θ = 0`), `m = ∞` the consistent one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::estimators::garotte;
use crate::exact_dist::roots;
use crate::extended::ExtendedReal::{self, Finite, NegInf, PosInf};
use crate::model::LocationModel;
use crate::normal::{phi, phi_interval};
use crate::sequence::{PowerLawSequence, EXPONENT_TOL};
use crate::stats::{quantile_sorted, sort_floats};

/// Relative tolerance for deciding `|ζ| = 1`.
const ZETA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningKind {
    /// `0 < m < ∞`
    Conservative,
    /// `m = ∞`
    Consistent,
    /// `m = 0`: uniformly equivalent to the unpenalized mean.
    DegenerateZero,
}

/// Limits describing a tuning sequence with `μ_n → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuningRegime {
    pub m_limit: ExtendedReal,
    pub kind: TuningKind,
    /// `n^{1/4} μ_n → 0`
    pub oracle_condition: bool,
    pub rho_limit: ExtendedReal,
}

impl TuningRegime {
    pub fn is_consistent(&self) -> bool {
        self.kind == TuningKind::Consistent
    }
}

/// Classifies `μ_n = c n^{-α}`. Requires `α > 0`, i.e. `μ_n → 0`.
pub fn classify_tuning(mu: &PowerLawSequence) -> Result<TuningRegime> {
    if mu.exponent() <= EXPONENT_TOL {
        return Err(domain(format!(
            "tuning sequence {}·n^-{} does not tend to zero; the estimator is not consistent",
            mu.coef(),
            mu.exponent()
        )));
    }
    let m_limit = mu.sqrt_n_scaled().limit();
    let rho_limit = mu.powi(2).sqrt_n_scaled().limit();
    let kind = match m_limit {
        PosInf => TuningKind::Consistent,
        Finite(v) if v == 0.0 => TuningKind::DegenerateZero,
        _ => TuningKind::Conservative,
    };
    Ok(TuningRegime {
        m_limit,
        kind,
        oracle_condition: mu.exponent() - 0.25 > EXPONENT_TOL,
        rho_limit,
    })
}

/// Moving parameter `θ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ThetaSequence {
    /// `θ_n = 0`
    Zero,
    /// `θ_n = coef · n^{-exponent}`, `coef ≠ 0` of either sign.
    Power { coef: f64, exponent: f64 },
    /// `θ_n = sign · μ_n + offset · n^{-1/2}`: sits on the selection
    /// boundary `|θ_n/μ_n| → 1` at distance `offset` on the `n^{-1/2}` scale.
    KnifeEdge { sign: f64, offset: f64 },
}

impl ThetaSequence {
    pub fn power(coef: f64, exponent: f64) -> Result<Self> {
        if !coef.is_finite() || !exponent.is_finite() {
            return Err(domain("theta sequence needs finite coefficient and exponent"));
        }
        Ok(if coef == 0.0 {
            ThetaSequence::Zero
        } else {
            ThetaSequence::Power { coef, exponent }
        })
    }

    pub fn knife_edge(sign: f64, offset: f64) -> Result<Self> {
        if sign.abs() != 1.0 || !offset.is_finite() {
            return Err(domain("knife-edge sequence needs sign ±1 and a finite offset"));
        }
        Ok(ThetaSequence::KnifeEdge { sign, offset })
    }

    pub fn eval(&self, n: f64, mu: &PowerLawSequence) -> f64 {
        match *self {
            ThetaSequence::Zero => 0.0,
            ThetaSequence::Power { coef, exponent } => coef * n.powf(-exponent),
            ThetaSequence::KnifeEdge { sign, offset } => sign * mu.eval(n) + offset / n.sqrt(),
        }
    }

    /// `|coef| n^{-exponent}` together with the sign of `coef`.
    fn split(&self) -> Option<(f64, PowerLawSequence)> {
        match *self {
            ThetaSequence::Power { coef, exponent } => Some((
                coef.signum(),
                PowerLawSequence::new(coef.abs(), exponent).expect("nonzero finite coefficient"),
            )),
            _ => None,
        }
    }
}

fn signed(sign: f64, v: ExtendedReal) -> ExtendedReal {
    if sign < 0.0 {
        -v
    } else {
        v
    }
}

/// `ν = lim n^{1/2} θ_n`.
pub fn nu_limit(mu: &PowerLawSequence, theta: &ThetaSequence) -> Result<ExtendedReal> {
    match theta {
        ThetaSequence::Zero => Ok(ExtendedReal::ZERO),
        ThetaSequence::Power { .. } => {
            let (s, p) = theta.split().unwrap();
            Ok(signed(s, p.sqrt_n_scaled().limit()))
        }
        &ThetaSequence::KnifeEdge { sign, offset } => {
            signed(sign, mu.sqrt_n_scaled().limit()).checked_add(Finite(offset))
        }
    }
}

/// `ζ = lim θ_n / μ_n`.
pub fn zeta_limit(mu: &PowerLawSequence, theta: &ThetaSequence) -> Result<ExtendedReal> {
    match theta {
        ThetaSequence::Zero => Ok(ExtendedReal::ZERO),
        ThetaSequence::Power { .. } => {
            let (s, p) = theta.split().unwrap();
            Ok(signed(s, p.div(mu).limit()))
        }
        &ThetaSequence::KnifeEdge { sign, offset } => {
            // sign + offset / (n^{1/2} μ_n)
            let inv = mu.sqrt_n_scaled().limit().checked_recip()?;
            Finite(sign).checked_add(Finite(offset).checked_mul(inv)?)
        }
    }
}

/// `r = lim n^{1/2} μ_n² / θ_n`, for sequences with `|ζ| = ∞`.
pub fn shift_limit(mu: &PowerLawSequence, theta: &ThetaSequence) -> Result<ExtendedReal> {
    match theta.split() {
        Some((s, p)) => Ok(signed(s, mu.powi(2).sqrt_n_scaled().div(&p).limit())),
        None => Err(Error::Unresolved(
            "n^{1/2} μ_n² / θ_n needs a nonzero power-law θ_n".into(),
        )),
    }
}

/// `lim n^{1/2}(μ_n - ζ θ_n)` on the boundary `|ζ| = 1`.
fn boundary_offset_limit(
    mu: &PowerLawSequence,
    theta: &ThetaSequence,
    zeta_sign: f64,
) -> Result<ExtendedReal> {
    match *theta {
        ThetaSequence::KnifeEdge { sign, offset } => Ok(Finite(-sign * offset)),
        ThetaSequence::Power { coef, exponent } => {
            // n^{1/2 - α}(c - ζ b) with equal exponents
            let gap = mu.coef() - zeta_sign * coef;
            if gap == 0.0 && (exponent - mu.exponent()).abs() == 0.0 {
                Ok(ExtendedReal::ZERO)
            } else {
                Err(Error::Unresolved(format!(
                    "|ζ| = 1 up to tolerance but μ_n - ζθ_n = {gap:e}·n^-{exponent} is not \
                     identically zero; use a knife-edge sequence to pin down the boundary offset"
                )))
            }
        }
        ThetaSequence::Zero => unreachable!("ζ = 0 for θ_n = 0"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionCase {
    /// `m < ∞`: `Φ(-ν + m) - Φ(-ν - m)`
    Conservative,
    /// `m = ∞`, `|ζ| < 1`
    BelowBoundary,
    /// `m = ∞`, `|ζ| = 1`: `Φ(r)`
    OnBoundary,
    /// `m = ∞`, `|ζ| > 1`
    AboveBoundary,
}

/// Limit of the probability of selecting the restricted model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionLimit {
    pub probability: f64,
    pub case: SelectionCase,
    pub regime: TuningRegime,
}

fn classify_zeta(zeta: ExtendedReal) -> std::cmp::Ordering {
    match zeta {
        Finite(z) if (z.abs() - 1.0).abs() <= ZETA_TOL => std::cmp::Ordering::Equal,
        Finite(z) => z.abs().total_cmp(&1.0),
        _ => std::cmp::Ordering::Greater,
    }
}

/// Limit of `P(θ̂_A = 0)` along `(μ_n, θ_n)`.
pub fn selprob_limit(mu: &PowerLawSequence, theta: &ThetaSequence) -> Result<SelectionLimit> {
    let regime = classify_tuning(mu)?;
    let (probability, case) = if regime.is_consistent() {
        let zeta = zeta_limit(mu, theta)?;
        match classify_zeta(zeta) {
            std::cmp::Ordering::Less => (1.0, SelectionCase::BelowBoundary),
            std::cmp::Ordering::Greater => (0.0, SelectionCase::AboveBoundary),
            std::cmp::Ordering::Equal => {
                let r = boundary_offset_limit(mu, theta, zeta.signum())?;
                (phi(r.to_f64()), SelectionCase::OnBoundary)
            }
        }
    } else {
        let m = regime.m_limit.to_f64();
        let nu = nu_limit(mu, theta)?.to_f64();
        let p = if nu.is_finite() { phi_interval(-nu - m, -nu + m) } else { 0.0 };
        (p, SelectionCase::Conservative)
    };
    Ok(SelectionLimit { probability, case, regime })
}

/// Limit laws of the centered and scaled estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum LimitDistribution {
    /// cdf `1(x >= location)`
    PointMass { location: f64 },
    /// cdf `Φ(x + shift)`
    ShiftedNormal { shift: f64 },
    /// Conservative-regime law with parameters `ν` and `m`.
    ConservativeMixture { nu: f64, m: f64 },
    /// cdf tends to 1 at every `x`: the mass drifts off to `-∞`.
    EscapePos,
    /// cdf tends to 0 at every `x`: the mass drifts off to `+∞`.
    EscapeNeg,
    StandardNormal,
}

impl LimitDistribution {
    /// Limit cdf (pointwise limit for the escape cases).
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            LimitDistribution::PointMass { location } => {
                if x >= location {
                    1.0
                } else {
                    0.0
                }
            }
            LimitDistribution::ShiftedNormal { shift } => phi(x + shift),
            LimitDistribution::ConservativeMixture { nu, m } => {
                let half_disc = (0.5 * (nu + x)).hypot(m);
                let centre = -0.5 * (nu - x);
                if x + nu >= 0.0 {
                    phi(centre + half_disc)
                } else {
                    phi(centre - half_disc)
                }
            }
            LimitDistribution::EscapePos => 1.0,
            LimitDistribution::EscapeNeg => 0.0,
            LimitDistribution::StandardNormal => phi(x),
        }
    }

    /// Whether the law puts no mass at `x`, so that weak convergence
    /// implies convergence of the cdf there.
    pub fn is_continuity_point(&self, x: f64) -> bool {
        match *self {
            LimitDistribution::PointMass { location } => x != location,
            LimitDistribution::ConservativeMixture { nu, .. } => x != -nu,
            _ => true,
        }
    }
}

/// Which case of the limit theorems produced a law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitCase {
    /// `m < ∞`, `ν` finite.
    ConservativeLocal,
    /// `m < ∞`, `|ν| = ∞`.
    ConservativeDistant,
    /// `m = ∞`, `ζ = 0`, `ν` finite: point mass at `-ν`.
    ConsistentLocal,
    /// `m = ∞`, `ζ = 0`, `|ν| = ∞`.
    EscapeSlowParameter,
    /// `m = ∞`, `0 < |ζ| < ∞`.
    EscapeComparableParameter,
    /// `m = ∞`, `|ζ| = ∞`, `|r| = ∞`.
    EscapeDivergentShift,
    /// `m = ∞`, `|ζ| = ∞`, `r` finite: `Φ(· + r)`.
    ConsistentShifted,
    /// Law of `μ_n^{-1}(θ̂_A - θ_n)` with `|ζ| < 1`: point mass at `-ζ`.
    RescaledBelowBoundary,
    /// `1 <= |ζ| < ∞`: point mass at `-1/ζ`.
    RescaledAboveBoundary,
    /// `|ζ| = ∞`: point mass at `0`.
    RescaledLargeParameter,
}

/// A limit law together with the case and limits that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub law: LimitDistribution,
    pub case: LimitCase,
    pub regime: TuningRegime,
    pub nu: ExtendedReal,
    pub zeta: ExtendedReal,
}

fn escape(sign: f64) -> LimitDistribution {
    if sign > 0.0 {
        LimitDistribution::EscapePos
    } else {
        LimitDistribution::EscapeNeg
    }
}

/// Weak limit of the law of `n^{1/2}(θ̂_A - θ_n)`.
pub fn limit_f(mu: &PowerLawSequence, theta: &ThetaSequence) -> Result<LimitLaw> {
    let regime = classify_tuning(mu)?;
    let nu = nu_limit(mu, theta)?;
    let zeta = zeta_limit(mu, theta)?;
    let (law, case) = if !regime.is_consistent() {
        match nu {
            Finite(v) => (
                LimitDistribution::ConservativeMixture {
                    nu: v,
                    m: regime.m_limit.to_f64(),
                },
                LimitCase::ConservativeLocal,
            ),
            _ => (LimitDistribution::StandardNormal, LimitCase::ConservativeDistant),
        }
    } else {
        match zeta {
            Finite(z) if z == 0.0 => match nu {
                Finite(v) => (
                    LimitDistribution::PointMass { location: -v },
                    LimitCase::ConsistentLocal,
                ),
                _ => (escape(nu.signum()), LimitCase::EscapeSlowParameter),
            },
            Finite(z) => (escape(z), LimitCase::EscapeComparableParameter),
            _ => match shift_limit(mu, theta)? {
                Finite(r) => (
                    LimitDistribution::ShiftedNormal { shift: r },
                    LimitCase::ConsistentShifted,
                ),
                r => (escape(r.signum()), LimitCase::EscapeDivergentShift),
            },
        }
    };
    Ok(LimitLaw { law, case, regime, nu, zeta })
}

/// Weak limit of the law of `μ_n^{-1}(θ̂_A - θ_n)`; consistent regime only.
pub fn limit_g(mu: &PowerLawSequence, theta: &ThetaSequence) -> Result<LimitLaw> {
    let regime = classify_tuning(mu)?;
    if !regime.is_consistent() {
        return Err(domain(
            "the μ_n^{-1} scaling has point-mass limits only in the consistent regime",
        ));
    }
    let nu = nu_limit(mu, theta)?;
    let zeta = zeta_limit(mu, theta)?;
    let (location, case) = match zeta {
        Finite(z) if z.abs() < 1.0 - ZETA_TOL => (-z, LimitCase::RescaledBelowBoundary),
        Finite(z) => (-1.0 / z, LimitCase::RescaledAboveBoundary),
        _ => (0.0, LimitCase::RescaledLargeParameter),
    };
    Ok(LimitLaw {
        law: LimitDistribution::PointMass { location: location + 0.0 },
        case,
        regime,
        nu,
        zeta,
    })
}

/// Uniform convergence rate `a_n = min(n^{1/2}, 1/μ_n)`.
pub fn uniform_rate(mu: &PowerLawSequence, n: u64) -> f64 {
    let n = n as f64;
    n.sqrt().min(1.0 / mu.eval(n))
}

/// Upper bound `2·1(n^{1/2}μ > ε)` on `sup_θ P(n^{1/2}|θ̂_A - ȳ| > ε)`.
pub fn mean_equivalence_bound(n: u64, mu: f64, eps: f64) -> f64 {
    if (n as f64).sqrt() * mu > eps {
        2.0
    } else {
        0.0
    }
}

/// Largest, over `theta_grid`, empirical `q`-quantile of
/// `a_n |θ̂_A - θ|` from `reps` simulated samples of size `n`.
pub fn scaled_error_quantile(
    mu: &PowerLawSequence,
    n: u64,
    theta_grid: &[f64],
    reps: usize,
    q: f64,
    seed: u64,
) -> f64 {
    let a_n = uniform_rate(mu, n);
    let mu_n = mu.eval(n as f64);
    let sqrt_n = (n as f64).sqrt();
    theta_grid
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut errs: Vec<f64> = (0..reps)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    a_n * (garotte(theta + z / sqrt_n, mu_n) - theta).abs()
                })
                .collect();
            sort_floats(&mut errs);
            quantile_sorted(&errs, q)
        })
        .fold(0.0, f64::max)
}

/// `(z(x) - x) / (n^{1/2} μ_n² / θ_n)` along `n_grid`, where `z` is the
/// upper root for `θ_n → +` and the lower root for `θ_n → -`.
///
/// Requires `θ_n/μ_n → ±∞` and `n^{1/2}θ_n → ±∞` with the same sign; the
/// ratios then tend to one.
pub fn root_asymptotics_check(
    mu: &PowerLawSequence,
    theta: &ThetaSequence,
    x: f64,
    n_grid: &[u64],
) -> Result<Vec<f64>> {
    let zeta = zeta_limit(mu, theta)?;
    let nu = nu_limit(mu, theta)?;
    let sign = match (zeta, nu) {
        (PosInf, PosInf) => 1.0,
        (NegInf, NegInf) => -1.0,
        _ => {
            return Err(domain(format!(
                "root asymptotics need θ_n/μ_n and n^(1/2)θ_n to diverge with the same sign \
                 (got ζ = {zeta}, ν = {nu})"
            )))
        }
    };
    n_grid
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let mu_n = mu.eval(nf);
            let theta_n = theta.eval(nf, mu);
            let model = LocationModel::new(n, theta_n, mu_n)?;
            let r = roots(&model, x);
            let z = if sign > 0.0 { r.z2 } else { r.z1 };
            Ok((z - x) / (nf.sqrt() * mu_n * mu_n / theta_n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl(c: f64, a: f64) -> PowerLawSequence {
        PowerLawSequence::new(c, a).unwrap()
    }

    #[test]
    fn classify_examples() {
        let r = classify_tuning(&pl(1.0, 1.0 / 3.0)).unwrap();
        assert_eq!(r.kind, TuningKind::Consistent);
        assert_eq!((r.m_limit, r.rho_limit, r.oracle_condition), (PosInf, Finite(0.0), true));

        let r = classify_tuning(&pl(3.0, 0.5)).unwrap();
        assert_eq!(r.kind, TuningKind::Conservative);
        assert_eq!((r.m_limit, r.rho_limit), (Finite(3.0), Finite(0.0)));

        let r = classify_tuning(&pl(1.0, 0.2)).unwrap();
        assert_eq!(r.kind, TuningKind::Consistent);
        assert_eq!((r.m_limit, r.rho_limit, r.oracle_condition), (PosInf, PosInf, false));

        let r = classify_tuning(&pl(2.0, 0.25)).unwrap();
        assert_eq!((r.rho_limit, r.oracle_condition), (Finite(4.0), false));

        let r = classify_tuning(&pl(1.0, 0.7)).unwrap();
        assert_eq!(r.kind, TuningKind::DegenerateZero);

        assert!(classify_tuning(&pl(1.0, 0.0)).is_err());
        assert!(classify_tuning(&pl(1.0, -0.1)).is_err());
    }

    #[test]
    fn regime_invariants() {
        for a in [0.05, 0.2, 0.25, 0.3, 0.5, 0.6, 1.0, 2.0] {
            for c in [0.5, 1.0, 3.0] {
                let r = classify_tuning(&pl(c, a)).unwrap();
                match r.m_limit {
                    PosInf => assert_eq!(r.kind, TuningKind::Consistent),
                    Finite(0.0) => assert_eq!(r.kind, TuningKind::DegenerateZero),
                    _ => assert_eq!(r.kind, TuningKind::Conservative),
                }
                if r.oracle_condition {
                    assert_eq!(r.rho_limit, Finite(0.0));
                }
            }
        }
    }

    #[test]
    fn selprob_examples() {
        let s = selprob_limit(&pl(1.0, 0.5), &ThetaSequence::Zero).unwrap();
        assert!((s.probability - 0.682_689_492_137_085_9).abs() < 1e-15);
        assert_eq!(s.case, SelectionCase::Conservative);

        let mu = pl(1.0, 1.0 / 3.0);
        let s = selprob_limit(&mu, &ThetaSequence::power(0.5, 1.0 / 3.0).unwrap()).unwrap();
        assert_eq!((s.probability, s.case), (1.0, SelectionCase::BelowBoundary));
        let s = selprob_limit(&mu, &ThetaSequence::power(2.0, 1.0 / 3.0).unwrap()).unwrap();
        assert_eq!((s.probability, s.case), (0.0, SelectionCase::AboveBoundary));
        let s = selprob_limit(&mu, &ThetaSequence::power(-2.0, 0.0).unwrap()).unwrap();
        assert_eq!(s.probability, 0.0);

        // exactly on the boundary, μ_n - θ_n ≡ 0
        let s = selprob_limit(&mu, &ThetaSequence::power(1.0, 1.0 / 3.0).unwrap()).unwrap();
        assert_eq!((s.probability, s.case), (0.5, SelectionCase::OnBoundary));
        let s = selprob_limit(&mu, &ThetaSequence::knife_edge(-1.0, 0.7).unwrap()).unwrap();
        assert!((s.probability - phi(0.7)).abs() < 1e-15);
        let err = selprob_limit(&mu, &ThetaSequence::power(1.0 + 1e-14, 1.0 / 3.0).unwrap());
        assert!(matches!(err, Err(Error::Unresolved(_))));
    }

    #[test]
    fn limit_f_examples() {
        let law = limit_f(&pl(1.0, 0.5), &ThetaSequence::Zero).unwrap();
        assert_eq!(law.law, LimitDistribution::ConservativeMixture { nu: 0.0, m: 1.0 });
        assert!((law.law.cdf(0.0) - 0.841_344_746_068_542_9).abs() < 1e-15);

        let mu = pl(1.0, 1.0 / 3.0);
        let law = limit_f(&mu, &ThetaSequence::power(5.0, 0.0).unwrap()).unwrap();
        assert_eq!(law.law, LimitDistribution::ShiftedNormal { shift: 0.0 });
        assert_eq!(law.case, LimitCase::ConsistentShifted);

        let law = limit_f(&mu, &ThetaSequence::power(0.5, 1.0 / 3.0).unwrap()).unwrap();
        assert_eq!((law.law, law.case), (LimitDistribution::EscapePos, LimitCase::EscapeComparableParameter));

        let law = limit_f(&pl(1.0, 0.25), &ThetaSequence::power(2.0, 0.0).unwrap()).unwrap();
        assert_eq!(law.law, LimitDistribution::ShiftedNormal { shift: 0.5 });
    }

    #[test]
    fn limit_f_escape_subcases() {
        let mu = pl(1.0, 1.0 / 3.0);
        let cases = [
            (ThetaSequence::power(-0.8, 1.0 / 3.0).unwrap(), LimitDistribution::EscapeNeg, LimitCase::EscapeComparableParameter),
            (ThetaSequence::power(3.0, 0.45).unwrap(), LimitDistribution::EscapePos, LimitCase::EscapeSlowParameter),
            (ThetaSequence::power(-3.0, 0.45).unwrap(), LimitDistribution::EscapeNeg, LimitCase::EscapeSlowParameter),
            (ThetaSequence::power(1.0, 0.5).unwrap(), LimitDistribution::PointMass { location: -1.0 }, LimitCase::ConsistentLocal),
            (ThetaSequence::Zero, LimitDistribution::PointMass { location: 0.0 }, LimitCase::ConsistentLocal),
            (ThetaSequence::knife_edge(1.0, 0.3).unwrap(), LimitDistribution::EscapePos, LimitCase::EscapeComparableParameter),
        ];
        for (theta, law, case) in cases {
            let got = limit_f(&mu, &theta).unwrap();
            assert_eq!((got.law, got.case), (law, case), "{theta:?}");
        }
        let mu = pl(2.0, 0.2);
        let got = limit_f(&mu, &ThetaSequence::power(1.0, 0.0).unwrap()).unwrap();
        assert_eq!((got.law, got.case), (LimitDistribution::EscapePos, LimitCase::EscapeDivergentShift));
        let got = limit_f(&mu, &ThetaSequence::power(-1.0, 0.0).unwrap()).unwrap();
        assert_eq!(got.law, LimitDistribution::EscapeNeg);
    }

    #[test]
    fn conservative_distant_parameter_is_standard_normal() {
        let law = limit_f(&pl(1.0, 0.5), &ThetaSequence::power(1.0, 0.0).unwrap()).unwrap();
        assert_eq!((law.law, law.case), (LimitDistribution::StandardNormal, LimitCase::ConservativeDistant));
    }

    #[test]
    fn mixture_with_zero_m_is_standard_normal() {
        for nu in [-2.0, 0.0, 0.7] {
            let d = LimitDistribution::ConservativeMixture { nu, m: 0.0 };
            for i in 0..=80 {
                let x = -4.0 + 0.1 * i as f64;
                assert!((d.cdf(x) - phi(x)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn limit_laws_are_distribution_functions() {
        let laws = [
            LimitDistribution::PointMass { location: -0.3 },
            LimitDistribution::ShiftedNormal { shift: 1.2 },
            LimitDistribution::ConservativeMixture { nu: -2.0, m: 1.0 },
            LimitDistribution::EscapePos,
            LimitDistribution::EscapeNeg,
            LimitDistribution::StandardNormal,
        ];
        for law in laws {
            let mut prev = 0.0;
            for i in 0..=400 {
                let v = law.cdf(-10.0 + 0.05 * i as f64);
                assert!((0.0..=1.0).contains(&v) && v >= prev);
                prev = v;
            }
        }
        assert_eq!(LimitDistribution::EscapePos.cdf(-1e9), 1.0);
        assert_eq!(LimitDistribution::EscapeNeg.cdf(1e9), 0.0);
    }

    #[test]
    fn limit_g_examples() {
        let mu = pl(1.0, 1.0 / 3.0);
        let at = |theta: ThetaSequence| match limit_g(&mu, &theta).unwrap().law {
            LimitDistribution::PointMass { location } => location,
            other => panic!("{other:?}"),
        };
        assert_eq!(at(ThetaSequence::power(0.5, 1.0 / 3.0).unwrap()), -0.5);
        assert_eq!(at(ThetaSequence::power(2.0, 1.0 / 3.0).unwrap()), -0.5);
        assert_eq!(at(ThetaSequence::power(3.0, 0.0).unwrap()), 0.0);
        assert_eq!(at(ThetaSequence::power(-4.0, 1.0 / 3.0).unwrap()), 0.25);
        assert_eq!(at(ThetaSequence::Zero), 0.0);
        assert!(limit_g(&pl(1.0, 0.5), &ThetaSequence::Zero).is_err());
    }

    #[test]
    fn uniform_rate_examples() {
        assert!((uniform_rate(&pl(1.0, 1.0 / 3.0), 1_000_000) - 100.0).abs() < 1e-9);
        assert!((uniform_rate(&pl(3.0, 0.5), 100) - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(uniform_rate(&pl(0.5, 0.5), 100), 10.0);
    }

    #[test]
    fn mean_equivalence_bound_cases() {
        assert_eq!(mean_equivalence_bound(100, 0.001, 0.1), 0.0);
        assert_eq!(mean_equivalence_bound(100, 0.1, 0.1), 2.0);
    }

    #[test]
    fn root_asymptotics_examples() {
        let mu = pl(1.0, 1.0 / 3.0);
        for (coef, x) in [(1.0, 0.0), (1.0, 1.0), (-1.0, 0.0), (-1.0, 1.0)] {
            let theta = ThetaSequence::power(coef, 0.0).unwrap();
            let r = root_asymptotics_check(&mu, &theta, x, &[100_000_000]).unwrap();
            assert!((r[0] - 1.0).abs() < 1e-3, "coef {coef}, x {x}: {}", r[0]);
        }
        assert!(root_asymptotics_check(&mu, &ThetaSequence::Zero, 0.0, &[100]).is_err());
        let slow = ThetaSequence::power(1.0, 0.45).unwrap();
        assert!(root_asymptotics_check(&mu, &slow, 0.0, &[100]).is_err());
    }
}
