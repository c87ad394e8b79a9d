//! Level sums, the Euler–Maclaurin route to them, and the Gaussian-exponential
//! integrals (parabolic cylinder functions) that appear along the way.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, QuadPolicy};
use crate::special::{erfcx, gamma, BERNOULLI_EVEN};

/// Euler–Maclaurin estimate with its pieces kept apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmResult {
    pub integral: f64,
    pub half_f0: f64,
    /// −B₂ₖ/(2k)!·f^{(2k−1)}(0), k = 1..order.
    pub corrections: Vec<f64>,
}

impl EmResult {
    pub fn value(&self) -> f64 {
        self.integral + self.half_f0 + self.corrections.iter().sum::<f64>()
    }

    pub fn uncorrected(&self) -> f64 {
        self.integral + self.half_f0
    }

    /// Size of the Bernoulli terms relative to the corrected sum.
    pub fn correction_ratio(&self) -> f64 {
        self.corrections.iter().sum::<f64>().abs() / self.value().abs()
    }
}

/// Σ_{n≥0} f(n) ≈ f(0)/2 + ∫₀^∞ f − Σ_{k=1}^{order} B₂ₖ/(2k)! f^{(2k−1)}(0).
///
/// `odd_derivs[k]` is f^{(2k+1)}(0); at most three correction pairs.
pub fn euler_maclaurin(f0: f64, odd_derivs: &[f64], integral: f64, order: usize) -> Result<EmResult> {
    if order > BERNOULLI_EVEN.len() || order > odd_derivs.len() {
        return Err(Error::domain(format!(
            "Euler–Maclaurin order {order} needs {order} odd derivatives (max {})",
            BERNOULLI_EVEN.len()
        )));
    }
    let mut fact = 1.0;
    let corrections = (0..order)
        .map(|k| {
            let m = 2 * k + 2;
            fact *= ((m - 1) * m) as f64;
            -BERNOULLI_EVEN[k] / fact * odd_derivs[k]
        })
        .collect();
    Ok(EmResult {
        integral,
        half_f0: 0.5 * f0,
        corrections,
    })
}

/// ∫₀^∞ x^{ν−1} e^{−px²−qx} dx by adaptive quadrature.
pub fn gauss_integral_d(nu: f64, p: f64, q: f64) -> Result<f64> {
    if !(nu > 0.0) || !(p >= 0.0) || (p == 0.0 && !(q > 0.0)) {
        return Err(Error::domain(format!(
            "gauss integral needs ν > 0, p ≥ 0 (q > 0 if p = 0); got ν={nu}, p={p}, q={q}"
        )));
    }
    if p == 0.0 {
        return Ok(gamma(nu) / q.powf(nu));
    }
    let policy = QuadPolicy {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        ..QuadPolicy::default()
    };
    let scale = (2.0 * p).sqrt().max(q.abs());
    let f = |x: f64| {
        if x == 0.0 {
            return if nu == 1.0 { 1.0 } else if nu > 1.0 { 0.0 } else { f64::INFINITY };
        }
        (-(p * x + q) * x + (nu - 1.0) * x.ln()).exp()
    };
    Ok(integrate_half_line(f, scale, &policy)?.value)
}

/// e^{u²/4} D_{−ν}(u), from the integral with p = ½, q = u.
pub fn cylinder_d_scaled(nu: f64, u: f64) -> Result<f64> {
    Ok(gauss_integral_d(nu, 0.5, u)? / gamma(nu))
}

/// The parabolic cylinder function D_{−ν}(u), ν > 0.
pub fn cylinder_d(nu: f64, u: f64) -> Result<f64> {
    Ok((-0.25 * u * u).exp() * cylinder_d_scaled(nu, u)?)
}

/// e^{u²/4} D_{−1}(u) = √(π/2) erfcx(u/√2).
pub fn scaled_d1(u: f64) -> f64 {
    FRAC_PI_2.sqrt() * erfcx(u / SQRT_2)
}

/// e^{u²/4} D_{−2}(u) = 1 − u·e^{u²/4} D_{−1}(u).
pub fn scaled_d2(u: f64) -> f64 {
    1.0 - u * scaled_d1(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumKind {
    /// Σ e^{−E(n)}
    S1,
    /// Σ n e^{−E(n)}
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Circular {
    Plus,
    Minus,
}

impl Circular {
    pub fn sign(self) -> f64 {
        match self {
            Circular::Plus => 1.0,
            Circular::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SSum {
    pub em: EmResult,
    pub direct: f64,
    pub direct_terms: usize,
    /// kT ≥ 10 ω̃.
    pub in_regime: bool,
}

impl SSum {
    pub fn rel_error(&self) -> f64 {
        (self.em.value() - self.direct).abs() / self.direct.abs()
    }
}

/// Exponent coefficients (p, q) of β̃ω̃[(1+ε±x)n + εn²].
fn exponent_coefs(sign: Circular, cfg: &SystemConfig) -> (f64, f64) {
    let a = cfg.inverse_temperature() * cfg.omega_tilde();
    let eps = cfg.epsilon();
    (a * eps, a * (1.0 + eps + sign.sign() * cfg.field_ratio()))
}

/// Brute-force Σ_{n≥0} n^{ν−1} e^{−pn²−qn}, stopped once terms fall below
/// 1e-18 of the running sum past the peak.
pub fn direct_sum(kind: SumKind, p: f64, q: f64, max_terms: usize) -> Result<(f64, usize)> {
    let mut total = 0.0;
    let mut comp = 0.0;
    for n in 0..max_terms {
        let x = n as f64;
        let e = (-(p * x + q) * x).exp();
        let term = match kind {
            SumKind::S1 => e,
            SumKind::S2 => x * e,
        };
        // Kahan: long sums of slowly decaying terms
        let y = term - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
        let past_peak = x * (2.0 * p * x + q) > 1.0;
        if past_peak && term < 1e-18 * total {
            return Ok((total, n + 1));
        }
    }
    Err(Error::Truncation {
        tail_bound: f64::NAN,
        terms: max_terms,
    })
}

/// Taylor coefficients of e^{−qn−pn²} about n = 0.
fn taylor(p: f64, q: f64, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    c[0] = 1.0;
    for k in 1..len {
        let prev2 = if k >= 2 { c[k - 2] } else { 0.0 };
        c[k] = (-q * c[k - 1] - 2.0 * p * prev2) / k as f64;
    }
    c
}

/// Euler–Maclaurin pieces for Σ n^{ν−1} e^{−pn²−qn} with three correction pairs.
pub fn em_sum(kind: SumKind, p: f64, q: f64) -> Result<EmResult> {
    let nu = match kind {
        SumKind::S1 => 1.0,
        SumKind::S2 => 2.0,
    };
    let c = taylor(p, q, 6);
    let mut fact = 1.0;
    let derivs: Vec<f64> = (0..6)
        .map(|j| {
            if j > 0 {
                fact *= j as f64;
            }
            fact * match kind {
                SumKind::S1 => c[j],
                SumKind::S2 => if j == 0 { 0.0 } else { c[j - 1] },
            }
        })
        .collect();
    let odd = [derivs[1], derivs[3], derivs[5]];
    euler_maclaurin(derivs[0], &odd, gauss_integral_d(nu, p, q)?, 3)
}

/// S₁± or S₂± for the given configuration, via Euler–Maclaurin and directly.
pub fn s_sums(kind: SumKind, sign: Circular, cfg: &SystemConfig) -> Result<SSum> {
    let (p, q) = exponent_coefs(sign, cfg);
    let em = em_sum(kind, p, q)?;
    let (direct, direct_terms) = direct_sum(kind, p, q, 50_000_000)?;
    Ok(SSum {
        em,
        direct,
        direct_terms,
        in_regime: cfg.temperature() >= 10.0 * cfg.omega_tilde(),
    })
}
