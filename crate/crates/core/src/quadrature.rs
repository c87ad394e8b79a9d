//! Adaptive Gauss–Kronrod (7/15) quadrature with a global error queue, plus
//! the compactifying maps used for half-line momentum integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of interval bisections.
    pub max_subdivisions: usize,
}

impl Default for QuadPolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken by position so the refinement order is deterministic
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// ∫ₐᵇ f on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, policy: &QuadPolicy) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    if b < a {
        let r = integrate(f, b, a, policy)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }

    let diverged = |estimate: f64, what: &str| Error::Convergence {
        what: format!("quadrature on [{a}, {b}]: {what}"),
        estimate,
        tolerance: policy.abs_tol,
    };

    let (v, e) = gk15(&f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);

    for _ in 0..policy.max_subdivisions {
        if !total.is_finite() || !err.is_finite() {
            return Err(diverged(err, "non-finite integrand"));
        }
        if err <= policy.abs_tol.max(policy.rel_tol * total.abs()) {
            break;
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 8.0 * f64::EPSILON * worst.b.abs().max(worst.a.abs()) {
            return Err(diverged(err, "interval too small, integrand likely singular"));
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }

    // Resum in position order: cheaper drift than the running update and
    // independent of the refinement history.
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segs.iter().map(|s| s.value).sum();
    let abs_error: f64 = segs.iter().map(|s| s.error).sum();
    if !value.is_finite() || !abs_error.is_finite() {
        return Err(diverged(abs_error, "non-finite integrand"));
    }
    if abs_error > policy.abs_tol.max(policy.rel_tol * value.abs()) {
        return Err(diverged(abs_error, "subdivision budget exhausted"));
    }
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
    })
}

/// ∫₀^∞ f(p) dp through p = tan θ / s, θ ∈ (0, π/2).
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64, policy: &QuadPolicy) -> Result<QuadResult> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::domain(format!("half-line scale must be > 0, got {scale}")));
    }
    integrate(
        |th: f64| {
            let c = th.cos();
            f(th.tan() / scale) / (scale * c * c)
        },
        0.0,
        FRAC_PI_2,
        policy,
    )
}

/// ∫₀^∞ f(p) p dp/(1+βp²), the radial measure of the deformed plane.
///
/// For β > 0 the substitution p = tan(√β ξ)/√β turns the measure into
/// tan θ dθ/β on θ = √β ξ ∈ (0, π/2).
pub fn deformed_quadrature<F: Fn(f64) -> f64>(f: F, beta: f64, policy: &QuadPolicy) -> Result<QuadResult> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::domain(format!("beta must be >= 0, got {beta}")));
    }
    if beta == 0.0 {
        return integrate_half_line(|p| f(p) * p, 1.0, policy);
    }
    let s = beta.sqrt();
    integrate(
        |th: f64| {
            let t = th.tan();
            f(t / s) * t / beta
        },
        0.0,
        FRAC_PI_2,
        policy,
    )
}
