//! Independent checks of the analytic spectrum and eigenfunctions.
//!
//! The radial equation is solved on the compact angle t = √β ξ = arctan(√β p)
//! ∈ (0, π/2), where it reads
//!
//!   −R'' − (cot t + tan t) R' + [l²/(sin²t cos²t) + tan²t/ε²] R = μ R
//!
//! with the dimensionless eigenvalue μ = 2(E − ωl/2 − p_z²/2)/(εω̃). The
//! analytic levels are μ = 2λ(N+1) + N² + l²; as ε → 0, εμ/2 → N + 1 so the
//! map reproduces the undeformed oscillator.

mod residual;
pub mod tridiag;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::spectrum::{energy_exact, lambda_exponent, Branch, QuantumNumbers};
use crate::wavefn::RadialWavefunction;
use tridiag::SymTridiag;

pub use residual::{residual_check, residual_check_shifted, ResidualReport};

pub const DEFAULT_GRID: usize = 2048;
pub const MAX_EIGENVALUES: usize = 12;
const RICHARDSON_TOL: f64 = 1e-6;

/// Cell-centred nodes t_k = (k − ½)h, h = π/(2n+1), k = 1..n, so that
/// t = 0 sits half a cell below the first node (mirror closure) and t = π/2
/// is the Dirichlet node t_{n+1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub beta: f64,
    pub n_points: usize,
}

impl RadialGrid {
    pub fn new(beta: f64, n_points: usize) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Undeformed);
        }
        if n_points < 4 {
            return Err(Error::GridTooCoarse(format!("{n_points} points")));
        }
        Ok(Self { beta, n_points })
    }

    pub fn for_config(cfg: &SystemConfig, n_points: usize) -> Result<Self> {
        Self::new(cfg.beta(), n_points)
    }

    pub fn xi_max(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.beta.sqrt()
    }

    /// Spacing in t.
    pub fn step(&self) -> f64 {
        std::f64::consts::PI / (2 * self.n_points + 1) as f64
    }

    /// Node k, 0-based, in the angle variable.
    pub fn t(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.step()
    }

    pub fn xi(&self, k: usize) -> f64 {
        self.t(k) / self.beta.sqrt()
    }

    pub fn p(&self, k: usize) -> f64 {
        self.t(k).tan() / self.beta.sqrt()
    }

    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points,
            ..*self
        }
    }

    pub fn coarsened(&self) -> Self {
        Self {
            n_points: self.n_points / 2,
            ..*self
        }
    }
}

/// μ from a physical energy.
pub fn mu_from_energy(energy: f64, l: i32, pz: f64, cfg: &SystemConfig) -> f64 {
    2.0 * (energy - 0.5 * cfg.omega() * l as f64 - 0.5 * pz * pz) / (cfg.epsilon() * cfg.omega_tilde())
}

pub fn energy_from_mu(mu: f64, l: i32, pz: f64, cfg: &SystemConfig) -> f64 {
    0.5 * mu * cfg.epsilon() * cfg.omega_tilde() + 0.5 * cfg.omega() * l as f64 + 0.5 * pz * pz
}

/// μ of level (n, l) through the spectrum module.
pub fn analytic_mu(qn: QuantumNumbers, cfg: &SystemConfig) -> f64 {
    mu_from_energy(energy_exact(qn, 0.0, cfg).energy, qn.l, 0.0, cfg)
}

/// μ directly from λ, independent of the energy formula.
pub fn mu_from_lambda(n: u32, l: i32, epsilon: f64) -> Result<f64> {
    let lambda = lambda_exponent(epsilon, l, Branch::Upper)?;
    let nn = (2 * n + l.unsigned_abs()) as f64;
    Ok(2.0 * lambda * (nn + 1.0) + nn * nn + (l as f64).powi(2))
}

struct Discretized {
    sym: SymTridiag,
    /// Diagonal similarity: eigenvectors of the raw operator are w_k / scale_k.
    scale: Vec<f64>,
}

/// Central differences for R'' and R' separately, ghost R₀ = (−1)^{|l|}R₁
/// (R has parity (−1)^{|l|} about t = 0) and R = 0 at t = π/2.
fn raw_operator(l: i32, epsilon: f64, grid: &RadialGrid) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = grid.n_points;
    let h = grid.step();
    let l2 = (l as f64).powi(2);
    let mut sub = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n);
    for k in 0..n {
        let t = grid.t(k);
        let (s, c) = t.sin_cos();
        let tan = s / c;
        let q = c / s + tan;
        let v = l2 / (s * s * c * c) + tan * tan / (epsilon * epsilon);
        sub.push(-(1.0 / (h * h) - q / (2.0 * h)));
        sup.push(-(1.0 / (h * h) + q / (2.0 * h)));
        diag.push(2.0 / (h * h) + v);
    }
    let parity = if l % 2 == 0 { 1.0 } else { -1.0 };
    diag[0] += sub[0] * parity;
    (sub, diag, sup)
}

fn discretize(l: i32, epsilon: f64, grid: &RadialGrid) -> Result<Discretized> {
    let (sub, diag, sup) = raw_operator(l, epsilon, grid);
    let n = grid.n_points;
    let mut off = Vec::with_capacity(n - 1);
    let mut scale = Vec::with_capacity(n);
    scale.push(1.0);
    for k in 0..n - 1 {
        let prod = sub[k + 1] * sup[k];
        if !(prod > 0.0) {
            return Err(Error::NonRealEigenvalue {
                imag: prod.abs().sqrt(),
            });
        }
        off.push(-prod.sqrt());
        let ratio = (sup[k] / sub[k + 1]).sqrt();
        scale.push(scale[k] * ratio);
    }
    Ok(Discretized {
        sym: SymTridiag { diag, off },
        scale,
    })
}

/// The `k` lowest μ on a single grid, no extrapolation.
pub fn fd_eigenvalues(l: i32, epsilon: f64, grid: &RadialGrid, k: usize) -> Result<Vec<f64>> {
    Ok(discretize(l, epsilon, grid)?.sym.lowest(k))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub l: i32,
    /// Richardson-extrapolated μ, ascending.
    pub eigenvalues: Vec<f64>,
    /// Raw μ on the coarse, base and fine grids.
    pub raw: [Vec<f64>; 3],
    pub grid: RadialGrid,
    /// Observed convergence order of the lowest eigenvalue.
    pub order_estimate: f64,
    /// Largest relative gap between the two extrapolations.
    pub richardson_spread: f64,
}

impl EigenResult {
    pub fn energies(&self, cfg: &SystemConfig) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|&mu| energy_from_mu(mu, self.l, 0.0, cfg))
            .collect()
    }
}

fn richardson(coarse: &[f64], fine: &[f64], ratio: f64) -> Vec<f64> {
    let r2 = ratio * ratio;
    coarse
        .iter()
        .zip(fine)
        .map(|(a, b)| (r2 * b - a) / (r2 - 1.0))
        .collect()
}

/// Lowest `k` μ for magnetic number `l`, extrapolated from `grid` and its
/// refinement; the halved grid supplies the order estimate and a second
/// extrapolation whose disagreement bounds the error.
pub fn fd_eigensolve(l: i32, cfg: &SystemConfig, grid: &RadialGrid, k: usize) -> Result<EigenResult> {
    if !cfg.is_deformed() {
        return Err(Error::Undeformed);
    }
    if k == 0 || k > MAX_EIGENVALUES {
        return Err(Error::domain(format!("k must be in 1..={MAX_EIGENVALUES}, got {k}")));
    }
    if grid.n_points < 1024 {
        return Err(Error::GridTooCoarse(format!(
            "eigensolve needs at least 1024 points, got {}",
            grid.n_points
        )));
    }
    let eps = cfg.epsilon();
    let grids = [grid.coarsened(), *grid, grid.refined()];
    let raw: Vec<Vec<f64>> = grids
        .iter()
        .map(|g| fd_eigenvalues(l, eps, g, k))
        .collect::<Result<_>>()?;
    let ratio = |a: &RadialGrid, b: &RadialGrid| a.step() / b.step();

    let low = richardson(&raw[0], &raw[1], ratio(&grids[0], &grids[1]));
    let high = richardson(&raw[1], &raw[2], ratio(&grids[1], &grids[2]));
    let spread = low
        .iter()
        .zip(&high)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    if spread > RICHARDSON_TOL {
        return Err(Error::Convergence {
            what: format!("Richardson extrapolations disagree (l = {l})"),
            estimate: spread,
            tolerance: RICHARDSON_TOL,
        });
    }
    let d1 = (raw[0][0] - raw[1][0]).abs();
    let d2 = (raw[1][0] - raw[2][0]).abs();
    let order_estimate = (d1 / d2).ln() / ratio(&grids[1], &grids[2]).ln();

    let [r0, r1, r2]: [Vec<f64>; 3] = raw.try_into().expect("three grids");
    Ok(EigenResult {
        l,
        eigenvalues: high,
        raw: [r0, r1, r2],
        grid: *grid,
        order_estimate,
        richardson_spread: spread,
    })
}

/// FD eigenvector of the `index`-th level, normalized like the analytic
/// function (∫R² tan t dt/β = 1) and sign-aligned with it; returns the
/// max-norm difference relative to max|R|.
pub fn eigenvector_deviation(qn: QuantumNumbers, cfg: &SystemConfig, grid: &RadialGrid) -> Result<f64> {
    let eps = cfg.epsilon();
    let disc = discretize(qn.l, eps, grid)?;
    let mu = disc.sym.eigenvalue(qn.n as usize);
    let w = disc.sym.eigenvector(mu);
    let mut v: Vec<f64> = w.iter().zip(&disc.scale).map(|(w, s)| w / s).collect();

    let exact = RadialWavefunction::new(qn, cfg)?;
    let r: Vec<f64> = (0..grid.n_points).map(|k| exact.eval_angle(grid.t(k))).collect();
    let h = grid.step();
    let norm2: f64 = v
        .iter()
        .enumerate()
        .map(|(k, x)| x * x * grid.t(k).tan())
        .sum::<f64>()
        * h
        / grid.beta;
    let peak = (0..r.len()).max_by(|&a, &b| r[a].abs().total_cmp(&r[b].abs())).unwrap();
    let sign = if v[peak] * r[peak] < 0.0 { -1.0 } else { 1.0 };
    let scale = sign / norm2.sqrt();
    v.iter_mut().for_each(|x| *x *= scale);

    let rmax = r[peak].abs();
    Ok(v.iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / rmax)
}

/// (FD count, analytic count) of levels with μ < `cutoff` at fixed l.
pub fn count_below(l: i32, cfg: &SystemConfig, grid: &RadialGrid, cutoff: f64) -> Result<(usize, usize)> {
    let disc = discretize(l, cfg.epsilon(), grid)?;
    let fd = disc.sym.count_below(cutoff);
    let mut analytic = 0;
    while analytic_mu(QuantumNumbers::new(analytic as u32, l), cfg) < cutoff {
        analytic += 1;
    }
    Ok((fd, analytic))
}

/// Dense general eigensolve of the unsymmetrized operator, for small grids:
/// returns the `k` lowest real parts and the largest |imaginary part| among
/// them.
pub fn dense_check(l: i32, epsilon: f64, grid: &RadialGrid, k: usize) -> Result<(Vec<f64>, f64)> {
    let (sub, diag, sup) = raw_operator(l, epsilon, grid);
    let n = grid.n_points;
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if j + 1 == i {
            sub[i]
        } else if i + 1 == j {
            sup[i]
        } else {
            0.0
        }
    });
    let mut eig: Vec<_> = m.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re));
    eig.truncate(k);
    let imag = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let scale = eig.iter().map(|z| z.re.abs()).fold(1.0, f64::max);
    if imag > 1e-10 * scale {
        return Err(Error::NonRealEigenvalue { imag });
    }
    Ok((eig.iter().map(|z| z.re).collect(), imag))
}
