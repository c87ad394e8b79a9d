use serde::{Deserialize, Serialize};

use super::{analytic_mu, RadialGrid};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::spectrum::QuantumNumbers;
use crate::wavefn::RadialWavefunction;

/// Outcome of applying the radial operator to the analytic eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub n_points: usize,
    /// max|(H − μ)R| / max|R| on the requested grid.
    pub max_residual: f64,
    /// Same on the grid with half the spacing.
    pub refined_residual: f64,
    /// Rounding floor of the stencil on the requested grid.
    pub noise_floor: f64,
    /// True when refinement leaves the residual unchanged: a genuine defect
    /// (wrong eigenvalue or function) rather than truncation error.
    pub plateau: bool,
}

impl ResidualReport {
    pub fn refinement_ratio(&self) -> f64 {
        self.max_residual / self.refined_residual
    }
}

/// Residual on the uniform grid t_i = i·h, h = (π/2)/(m+1), using 4th-order
/// five-point stencils at i = 2..m−1. Returns (residual, noise floor).
fn residual_on(r: &RadialWavefunction, l: i32, eps: f64, mu: f64, m: usize) -> (f64, f64) {
    let h = std::f64::consts::FRAC_PI_2 / (m + 1) as f64;
    let vals: Vec<f64> = (0..m + 2)
        .map(|i| {
            if i == m + 1 {
                0.0
            } else {
                r.eval_angle(i as f64 * h)
            }
        })
        .collect();
    let rmax = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let l2 = (l as f64).powi(2);
    let mut worst: f64 = 0.0;
    let mut floor: f64 = 0.0;
    for i in 2..m {
        let t = i as f64 * h;
        let (s, c) = t.sin_cos();
        let tan = s / c;
        let q = c / s + tan;
        let v = l2 / (s * s * c * c) + tan * tan / (eps * eps);
        let (m2, m1, z, p1, p2) = (vals[i - 2], vals[i - 1], vals[i], vals[i + 1], vals[i + 2]);
        let d2 = (-p2 + 16.0 * p1 - 30.0 * z + 16.0 * m1 - m2) / (12.0 * h * h);
        let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
        let res = -d2 - q * d1 + (v - mu) * z;
        worst = worst.max(res.abs());
        let mag = (p2.abs() + 16.0 * p1.abs() + 30.0 * z.abs() + 16.0 * m1.abs() + m2.abs()) / (12.0 * h * h)
            + q * (p2.abs() + 8.0 * p1.abs() + 8.0 * m1.abs() + m2.abs()) / (12.0 * h)
            + (v + mu.abs()) * z.abs();
        floor = floor.max(f64::EPSILON * mag);
    }
    (worst / rmax, floor / rmax)
}

/// max|(H − μ)R|/max|R| for the analytic eigenfunction of `qn`, with μ taken
/// from the analytic energy.
pub fn residual_check(qn: QuantumNumbers, cfg: &SystemConfig, grid: &RadialGrid) -> Result<ResidualReport> {
    residual_check_shifted(qn, cfg, grid, 0.0)
}

/// As [`residual_check`] with μ deliberately offset by `shift`.
///
/// A correct pair converges at fourth order under refinement; a wrong
/// eigenvalue leaves a grid-independent plateau of size ≈ |shift|. Anything
/// in between, above the rounding floor, is reported as
/// [`Error::GridTooCoarse`].
pub fn residual_check_shifted(
    qn: QuantumNumbers,
    cfg: &SystemConfig,
    grid: &RadialGrid,
    shift: f64,
) -> Result<ResidualReport> {
    if grid.n_points < 512 {
        return Err(Error::GridTooCoarse(format!(
            "residual check needs at least 512 points, got {}",
            grid.n_points
        )));
    }
    let r = RadialWavefunction::new(qn, cfg)?;
    let mu = analytic_mu(qn, cfg) + shift;
    let eps = cfg.epsilon();
    let m = grid.n_points;
    let (coarse, floor) = residual_on(&r, qn.l, eps, mu, m);
    let (fine, _) = residual_on(&r, qn.l, eps, mu, 2 * m + 1);

    let ratio = coarse / fine;
    let plateau = (ratio - 1.0).abs() <= 0.1;
    let converging = ratio >= 4.0;
    let at_floor = coarse <= 10.0 * floor;
    if !(plateau || converging || at_floor) {
        return Err(Error::GridTooCoarse(format!(
            "residual {coarse:e} -> {fine:e} under refinement is neither converging nor a plateau"
        )));
    }
    Ok(ResidualReport {
        n_points: m,
        max_residual: coarse,
        refined_residual: fine,
        noise_floor: floor,
        plateau: plateau && !at_floor,
    })
}
