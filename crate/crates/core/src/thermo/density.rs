use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::spectrum::HalfInt;

use std::f64::consts::PI;

/// Shell radius p(n_d, n_g) = √(2ω̃ [(1+ε)(n_d+n_g) + x(n_d−n_g) + ε(n_d²+n_g²)]).
pub fn momentum_shell(n_d: u32, n_g: u32, cfg: &SystemConfig) -> Result<f64> {
    let (d, g) = (n_d as f64, n_g as f64);
    let eps = cfg.epsilon();
    let bracket = (1.0 + eps) * (d + g) + cfg.field_ratio() * (d - g) + eps * (d * d + g * g);
    if bracket < 0.0 {
        return Err(Error::domain(format!(
            "negative shell bracket {bracket} at (n_d, n_g) = ({n_d}, {n_g})"
        )));
    }
    Ok((2.0 * cfg.omega_tilde() * bracket).sqrt())
}

/// One-particle density of states g(γ) = V^{2/3}/(4πβ) ln[1 + 4βω̃(1 + ε(2γ+1))];
/// at β = 0 the limit ω̃V^{2/3}/π.
pub fn states_density(gamma_q: HalfInt, cfg: &SystemConfig) -> f64 {
    density_at(gamma_q.twice() as f64, cfg)
}

/// g as a function of N = 2γ.
pub(crate) fn density_at(n: f64, cfg: &SystemConfig) -> f64 {
    let v23 = cfg.volume().powf(2.0 / 3.0);
    let beta = cfg.beta();
    let wt = cfg.omega_tilde();
    if beta == 0.0 {
        return wt * v23 / PI;
    }
    v23 / (4.0 * PI * beta) * (4.0 * beta * wt * (1.0 + cfg.epsilon() * (n + 1.0))).ln_1p()
}

/// Bounds g(N) ≤ a + b·(N+1), used for truncation tails.
pub(crate) fn density_majorant(cfg: &SystemConfig) -> (f64, f64) {
    let v23 = cfg.volume().powf(2.0 / 3.0);
    let beta = cfg.beta();
    let wt = cfg.omega_tilde();
    if beta == 0.0 {
        return (wt * v23 / PI, 0.0);
    }
    // ln(1+a+c) ≤ ln(1+a) + c
    (
        v23 / (4.0 * PI * beta) * (4.0 * beta * wt).ln_1p(),
        v23 * wt * cfg.epsilon() / PI,
    )
}

/// V^{2/3}/(2π) ∫ p dp/(1+βp²) between the shells (n_d, n_g) and
/// (n_d+1, n_g+1), in closed form.
pub fn annulus_density(n_d: u32, n_g: u32, cfg: &SystemConfig) -> Result<f64> {
    let v23 = cfg.volume().powf(2.0 / 3.0);
    let lo = momentum_shell(n_d, n_g, cfg)?;
    let hi = momentum_shell(n_d + 1, n_g + 1, cfg)?;
    let beta = cfg.beta();
    if beta == 0.0 {
        return Ok(v23 / (4.0 * PI) * (hi * hi - lo * lo));
    }
    Ok(v23 / (4.0 * PI * beta) * ((1.0 + beta * hi * hi) / (1.0 + beta * lo * lo)).ln())
}
