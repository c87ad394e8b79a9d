//! Momentum-space radial eigenfunctions and the Jacobi polynomials they are
//! built from.
//!
//! With y = βp² the normalized radial function is
//!
//!   R(p) = 𝒩 (1+y)^{−(λ+|l|)/2} y^{|l|/2} P_n^{(λ−1,|l|)}((y−1)/(y+1))
//!
//! and in the compact angle t = arctan(√β p) this is 𝒩 cos^λ t sin^{|l|} t
//! P_n(−cos 2t), which is how it is evaluated.

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::quadrature::{deformed_quadrature, QuadPolicy};
use crate::special::ln_gamma;
use crate::spectrum::{lambda_exponent, Branch, QuantumNumbers};

pub const JACOBI_MAX_DEGREE: u32 = 500;

/// P_n^{(a,b)}(x) by forward three-term recurrence.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> Result<f64> {
    if n > JACOBI_MAX_DEGREE {
        return Err(Error::domain(format!(
            "Jacobi degree {n} exceeds the cap {JACOBI_MAX_DEGREE}"
        )));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::domain(format!("Jacobi parameters must be > -1, got ({a}, {b})")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("Jacobi argument {x} outside [-1, 1]")));
    }
    Ok(jacobi_unchecked(n, a, b, x))
}

pub(crate) fn jacobi_unchecked(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let a1 = 2.0 * k * (k + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
        let a3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialWavefunction {
    pub qn: QuantumNumbers,
    pub lambda_exp: f64,
    pub beta: f64,
    pub norm_const: f64,
}

/// The normalized upper-branch eigenfunction of `qn`.
pub fn radial_wavefunction(qn: QuantumNumbers, cfg: &SystemConfig) -> Result<RadialWavefunction> {
    RadialWavefunction::new(qn, cfg)
}

impl RadialWavefunction {
    pub fn new(qn: QuantumNumbers, cfg: &SystemConfig) -> Result<Self> {
        if !cfg.is_deformed() {
            return Err(Error::Undeformed);
        }
        let lambda = lambda_exponent(cfg.epsilon(), qn.l, Branch::Upper)?;
        Ok(Self::from_parts(qn, lambda, cfg.beta()))
    }

    pub(crate) fn from_parts(qn: QuantumNumbers, lambda: f64, beta: f64) -> Self {
        let n = qn.n as f64;
        let al = qn.abs_l() as f64;
        // 𝒩² = 2β n! (2n+λ+|l|) Γ(n+λ+|l|) / (Γ(n+λ) Γ(n+|l|+1))
        let ln_n2 = (2.0 * beta).ln() + ln_gamma(n + 1.0) + (2.0 * n + lambda + al).ln()
            + ln_gamma(n + lambda + al)
            - ln_gamma(n + lambda)
            - ln_gamma(n + al + 1.0);
        Self {
            qn,
            lambda_exp: lambda,
            beta,
            norm_const: (0.5 * ln_n2).exp(),
        }
    }

    fn poly(&self, x: f64) -> f64 {
        jacobi_unchecked(self.qn.n, self.lambda_exp - 1.0, self.qn.abs_l() as f64, x)
    }

    /// R at momentum p ≥ 0.
    pub fn eval(&self, p: f64) -> f64 {
        let y = self.beta * p * p;
        let c2 = 1.0 / (1.0 + y);
        let s2 = y * c2;
        let x = (y - 1.0) * c2;
        self.norm_const
            * c2.powf(0.5 * self.lambda_exp)
            * s2.powf(0.5 * self.qn.abs_l() as f64)
            * self.poly(x)
    }

    /// R at the compact angle t = arctan(√β p) ∈ [0, π/2].
    pub fn eval_angle(&self, t: f64) -> f64 {
        let (s, c) = t.sin_cos();
        self.norm_const
            * c.powf(self.lambda_exp)
            * s.powi(self.qn.abs_l() as i32)
            * self.poly(-(2.0 * t).cos())
    }

    /// ln|R(p)|, usable far into the tail where R itself underflows.
    pub fn ln_abs(&self, p: f64) -> f64 {
        let y = self.beta * p * p;
        let x = (y - 1.0) / (y + 1.0);
        self.norm_const.ln() - 0.5 * self.lambda_exp * y.ln_1p()
            + 0.5 * self.qn.abs_l() as f64 * (y / (1.0 + y)).ln()
            + self.poly(x).abs().ln()
    }

    /// Jacobi argument (βp²−1)/(βp²+1).
    pub fn jacobi_argument(&self, p: f64) -> f64 {
        let y = self.beta * p * p;
        (y - 1.0) / (y + 1.0)
    }

    /// (p, R(p)) on `points` uniform angles strictly inside (0, π/2).
    pub fn sample(&self, points: usize) -> Vec<(f64, f64)> {
        let h = std::f64::consts::FRAC_PI_2 / (points + 1) as f64;
        let s = self.beta.sqrt();
        (1..=points)
            .map(|k| {
                let t = k as f64 * h;
                (t.tan() / s, self.eval_angle(t))
            })
            .collect()
    }
}

/// ∫ R² p dp/(1+βp²); 1 up to quadrature error.
pub fn norm(qn: QuantumNumbers, cfg: &SystemConfig) -> Result<f64> {
    let r = RadialWavefunction::new(qn, cfg)?;
    Ok(deformed_quadrature(|p| r.eval(p).powi(2), cfg.beta(), &QuadPolicy::default())?.value)
}

/// ∫ R_{n1 l} R_{n2 l} p dp/(1+βp²).
pub fn overlap(n1: u32, n2: u32, l: i32, cfg: &SystemConfig) -> Result<f64> {
    // Sorted so the integrand, and hence the result, is symmetric bit for bit.
    let (lo, hi) = (n1.min(n2), n1.max(n2));
    let a = RadialWavefunction::new(QuantumNumbers::new(lo, l), cfg)?;
    let b = RadialWavefunction::new(QuantumNumbers::new(hi, l), cfg)?;
    Ok(deformed_quadrature(|p| a.eval(p) * b.eval(p), cfg.beta(), &QuadPolicy::default())?.value)
}

/// ⟨p²⟩ = ∫ p² R² p dp/(1+βp²) on the physical branch.
pub fn p2_expectation(qn: QuantumNumbers, cfg: &SystemConfig) -> Result<f64> {
    p2_expectation_branch(qn, cfg, Branch::Upper)
}

/// ⟨p²⟩ on either branch of λ.
///
/// The integrand falls off as p^{1−2λ}, so the moment exists only for λ > 1;
/// otherwise [`Error::DivergentMoment`] is raised from the tail analysis
/// before any quadrature is attempted.
pub fn p2_expectation_branch(qn: QuantumNumbers, cfg: &SystemConfig, branch: Branch) -> Result<f64> {
    if !cfg.is_deformed() {
        return Err(Error::Undeformed);
    }
    let lambda = lambda_exponent(cfg.epsilon(), qn.l, branch)?;
    if lambda <= 1.0 {
        return Err(Error::DivergentMoment { lambda });
    }
    let r = RadialWavefunction::from_parts(qn, lambda, cfg.beta());
    let policy = QuadPolicy {
        abs_tol: 0.0,
        ..QuadPolicy::default()
    };
    Ok(deformed_quadrature(|p| (p * r.eval(p)).powi(2), cfg.beta(), &policy)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::make_config;

    fn cfg_eps(eps: f64) -> SystemConfig {
        make_config(1.0, 0.0, 1.0, 1.0, 1.0, eps).unwrap()
    }

    #[test]
    fn jacobi_low_degree() {
        for i in 0..=1000 {
            let x = -1.0 + i as f64 / 500.0;
            for (a, b) in [(0.5, 0.0), (2.3, 1.0), (-0.5, 0.7)] {
                assert_eq!(jacobi(0, a, b, x).unwrap(), 1.0);
                let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
                assert!((jacobi(1, a, b, x).unwrap() - p1).abs() < 1e-13);
            }
            // Gegenbauer/Legendre special cases
            let p2 = 0.5 * (3.0 * x * x - 1.0);
            let p3 = 0.5 * (5.0 * x * x * x - 3.0 * x);
            assert!((jacobi(2, 0.0, 0.0, x).unwrap() - p2).abs() < 1e-13);
            assert!((jacobi(3, 0.0, 0.0, x).unwrap() - p3).abs() < 1e-13);
            // P_2^{(1,1)} = (15x² − 3)/4
            assert!((jacobi(2, 1.0, 1.0, x).unwrap() - (15.0 * x * x - 3.0) / 4.0).abs() < 1e-13);
        }
        assert_eq!(jacobi(2, 1.0, 1.0, 1.0).unwrap(), 3.0);
    }

    #[test]
    fn jacobi_endpoint_binomial() {
        // P_n^{(a,b)}(1) = C(n+a, n)
        assert!((jacobi(5, 2.0, 0.3, 1.0).unwrap() - 21.0).abs() < 1e-12);
        assert!((jacobi(10, 3.0, 7.0, 1.0).unwrap() - 286.0).abs() < 1e-11);
    }

    #[test]
    fn jacobi_high_degree_goldens() {
        // 60-digit recurrence
        let cases = [
            (10, 0.5, 0.0, 0.37, 0.083_125_729_692_459_021),
            (50, 2.5, 3.0, -0.8125, -4.593_483_677_178_678_2),
            (100, 20.0, 1.0, 0.9, -1_138_880_387_036.851_7),
            (200, 3.7, 0.0, 0.123, -0.234_653_790_233_572_34),
            (200, -0.5, -0.5, 0.6, -0.039_649_402_255_001_551),
        ];
        for (n, a, b, x, want) in cases {
            let got = jacobi(n, a, b, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn jacobi_domain() {
        assert!(jacobi(3, -1.0, 0.0, 0.0).is_err());
        assert!(jacobi(3, 0.0, 0.0, 1.5).is_err());
        assert!(jacobi(501, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn ground_state_shape() {
        let c = cfg_eps(0.2);
        let r = radial_wavefunction(QuantumNumbers::new(0, 0), &c).unwrap();
        assert_eq!(r.eval(0.0), r.norm_const);
        assert_eq!(r.jacobi_argument(0.0), -1.0);
        assert!(r.jacobi_argument(1e8) > 1.0 - 1e-12);
        let p: f64 = 1.7;
        let want = r.norm_const * (1.0 + 0.2 * p * p).powf(-r.lambda_exp / 2.0);
        assert!((r.eval(p) - want).abs() < 1e-14 * want);
    }

    #[test]
    fn first_excited_golden() {
        // βp² = 1, ε = β = 0.2: 𝒩·2^{−λ/2}·P₁^{(λ−1,0)}(0), mpmath
        let c = cfg_eps(0.2);
        let r = radial_wavefunction(QuantumNumbers::new(1, 0), &c).unwrap();
        assert!((r.lambda_exp - 6.099_019_513_592_784_8).abs() < 1e-14);
        let v = r.eval((1.0f64 / 0.2).sqrt());
        assert!((v - 0.554_254_193_642_870_88).abs() < 1e-13, "{v}");
    }

    #[test]
    fn angle_and_momentum_forms_agree() {
        let c = cfg_eps(0.3);
        let r = radial_wavefunction(QuantumNumbers::new(3, -2), &c).unwrap();
        for k in 1..40 {
            let t = k as f64 * 0.039;
            let p = t.tan() / c.beta().sqrt();
            assert!((r.eval(p) - r.eval_angle(t)).abs() < 1e-12 * r.norm_const);
        }
    }

    #[test]
    fn undeformed_rejected() {
        let c = make_config(1.0, 0.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(radial_wavefunction(QuantumNumbers::new(0, 0), &c), Err(Error::Undeformed));
    }

    #[test]
    fn normalized_and_orthogonal() {
        let c = cfg_eps(0.2);
        for l in [0, 1, -2] {
            for n in 0..3 {
                let v = norm(QuantumNumbers::new(n, l), &c).unwrap();
                assert!((v - 1.0).abs() < 1e-8, "{n} {l} {v}");
            }
        }
        assert!(overlap(0, 1, 0, &c).unwrap().abs() < 1e-8);
        assert_eq!(overlap(1, 3, 2, &c).unwrap(), overlap(3, 1, 2, &c).unwrap());
    }

    #[test]
    fn norm_independent_of_field_split() {
        // same ε = 0.2 from ω = 0 and from ω̃ = 2 (ω = √3)
        let a = make_config(1.0, 0.0, 1.0, 1.0, 1.0, 0.2).unwrap();
        let b = make_config(1.0, 3f64.sqrt(), 1.0, 1.0, 1.0, 0.1).unwrap();
        assert!((a.epsilon() - b.epsilon()).abs() < 1e-15);
        let q = QuantumNumbers::new(2, 1);
        assert!((norm(q, &a).unwrap() - 1.0).abs() < 1e-9);
        assert!((norm(q, &b).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ground_state_p2_matches_beta_function() {
        // 𝒩² ∫ p³ (1+βp²)^{−λ−1} dp = 1/(β(λ−1))
        let c = cfg_eps(0.2);
        let v = p2_expectation(QuantumNumbers::new(0, 0), &c).unwrap();
        assert!((v - 0.980_580_675_690_920_16).abs() < 1e-10, "{v}");
    }

    #[test]
    fn p2_branches() {
        let c = cfg_eps(0.3);
        for n in 0..4 {
            for l in -2..=2 {
                let v = p2_expectation(QuantumNumbers::new(n, l), &c).unwrap();
                assert!(v.is_finite() && v > 0.0);
            }
        }
        let c = cfg_eps(0.5);
        let e = p2_expectation_branch(QuantumNumbers::new(0, 0), &c, Branch::Lower).unwrap_err();
        assert!(matches!(e, Error::DivergentMoment { lambda } if lambda < 0.5));
    }

    #[test]
    fn tail_exponent() {
        let c = cfg_eps(0.3);
        let r = radial_wavefunction(QuantumNumbers::new(2, 1), &c).unwrap();
        let s = c.beta().sqrt();
        let (p1, p2) = (1e2 / s, 1e4 / s);
        let slope = (r.ln_abs(p2) - r.ln_abs(p1)) / (p2.ln() - p1.ln());
        assert!((slope + r.lambda_exp).abs() < 0.01, "{slope} {}", r.lambda_exp);
    }
}
