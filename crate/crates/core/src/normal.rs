//! Standard normal distribution: cdf `Φ`, density `φ` and quantile `Φ⁻¹`.
//!
//! `Φ` is evaluated through the complementary error function so that both
//! tails keep full relative precision: `Φ(x) = erfc(-x/√2)/2`. The upper half
//! uses `1 - erfc(x/√2)/2` only implicitly, through the same call, because
//! `erfc` is accurate on the whole real line.

use crate::error::{domain, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal cdf, total on the extended real line.
///
/// `phi(-inf) = 0`, `phi(inf) = 1`; NaN propagates.
#[inline]
pub fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Checked standard normal cdf: rejects non-finite input.
pub fn phi_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("phi_cdf needs a finite argument, got {x}")));
    }
    Ok(phi(x))
}

/// Upper tail `1 - Φ(x)` without cancellation.
#[inline]
pub fn phi_upper(x: f64) -> f64 {
    phi(-x)
}

/// `Φ(b) - Φ(a)` for `a <= b`, evaluated in whichever tail loses less
/// precision.
pub fn phi_interval(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        phi_upper(a) - phi_upper(b)
    } else {
        phi(b) - phi(a)
    }
}

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal quantile.
///
/// Acklam's rational approximation followed by one Halley step against
/// [`phi`]; the refinement brings the result to near machine precision.
pub fn quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("quantile needs p in [0, 1], got {p}")));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    let x = acklam(p);
    // Halley refinement
    let e = if x > 0.0 {
        (1.0 - p) - phi_upper(x)
    } else {
        phi(x) - p
    };
    let u = e / pdf(x);
    Ok(x - u / (1.0 + 0.5 * x * u))
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}
