//! Energy levels: exact deformed spectrum, its first-order expansion in ε,
//! the weak/strong field limits and degeneracy classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// A number stored as twice its value, so half-integers compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }
    pub fn twice(self) -> i64 {
        self.0
    }
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Radial/magnetic pair (n, l); the circular numbers (n_d, n_g) are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: i32) -> Self {
        Self { n, l }
    }

    pub fn from_circular(n_d: u32, n_g: u32) -> Self {
        Self {
            n: n_d.min(n_g),
            l: n_d as i32 - n_g as i32,
        }
    }

    pub fn abs_l(&self) -> u32 {
        self.l.unsigned_abs()
    }

    /// N = 2n + |l|.
    pub fn principal(&self) -> u32 {
        2 * self.n + self.abs_l()
    }

    pub fn n_d(&self) -> u32 {
        self.n + (self.abs_l() as i32 + self.l) as u32 / 2
    }

    pub fn n_g(&self) -> u32 {
        self.n + (self.abs_l() as i32 - self.l) as u32 / 2
    }

    pub fn to_circular(&self) -> (u32, u32) {
        (self.n_d(), self.n_g())
    }

    /// γ = (n_d + n_g)/2.
    pub fn gamma_q(&self) -> HalfInt {
        HalfInt(self.principal() as i64)
    }

    /// ρ = (n_d − n_g)/2.
    pub fn rho_q(&self) -> HalfInt {
        HalfInt(self.l as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Upper,
    Lower,
}

/// λ = 1 ± √(1 + ε²(1+l²))/ε, the large-momentum decay exponent.
pub fn lambda_exponent(epsilon: f64, l: i32, branch: Branch) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::domain(format!(
            "lambda needs epsilon > 0, got {epsilon}"
        )));
    }
    let l2 = (l as f64).powi(2);
    let root = (1.0 + epsilon * epsilon * (1.0 + l2)).sqrt() / epsilon;
    Ok(match branch {
        Branch::Upper => 1.0 + root,
        Branch::Lower => 1.0 - root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLevel {
    pub qn: QuantumNumbers,
    pub energy: f64,
    /// `None` in the undeformed theory, where no exponent exists.
    pub lambda_exp: Option<f64>,
    pub branch: Branch,
    pub pz: f64,
}

/// Exact level E_nl (upper branch) plus the free longitudinal p_z²/2.
pub fn energy_exact(qn: QuantumNumbers, pz: f64, cfg: &SystemConfig) -> SpectrumLevel {
    let wt = cfg.omega_tilde();
    let eps = cfg.epsilon();
    let nn = qn.principal() as f64;
    let l = qn.l as f64;
    let kin = 0.5 * pz * pz;

    // β = 0 is taken on its own path: λ → ∞ there although E stays finite.
    if eps == 0.0 {
        return SpectrumLevel {
            qn,
            energy: wt * (nn + 1.0) + 0.5 * cfg.omega() * l + kin,
            lambda_exp: None,
            branch: Branch::Upper,
            pz,
        };
    }

    let energy = wt
        * ((nn + 1.0) * (1.0 + eps * eps * (1.0 + l * l)).sqrt()
            + 0.5 * eps * (nn * nn + l * l + 2.0 * nn + 2.0))
        + 0.5 * cfg.omega() * l
        + kin;
    SpectrumLevel {
        qn,
        energy,
        lambda_exp: lambda_exponent(eps, qn.l, Branch::Upper).ok(),
        branch: Branch::Upper,
        pz,
    }
}

/// First order in ε, written in the circular numbers.
pub fn energy_first_order(n_d: u32, n_g: u32, pz: f64, cfg: &SystemConfig) -> f64 {
    let wt = cfg.omega_tilde();
    let eps = cfg.epsilon();
    let x = cfg.field_ratio();
    let (d, g) = (n_d as f64, n_g as f64);
    0.5 * pz * pz
        + wt * (1.0 + eps)
        + wt * ((1.0 + eps + x) * d + eps * d * d)
        + wt * ((1.0 + eps - x) * g + eps * g * g)
}

/// An energy from a limiting formula, flagged when the configuration lies
/// outside the limit it was derived for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEnergy {
    pub energy: f64,
    pub in_regime: bool,
}

pub const WEAK_FIELD_MAX: f64 = 0.1;
pub const STRONG_FIELD_MIN: f64 = 10.0;

/// 2ω₀[(γ+½) + βω₀(γ(γ+1)+ρ²+½)], valid for ω ≪ ω₀.
pub fn weak_field_energy(gamma_q: HalfInt, rho_q: HalfInt, cfg: &SystemConfig) -> LimitEnergy {
    let w0 = cfg.omega0();
    let (g, r) = (gamma_q.value(), rho_q.value());
    let e0 = cfg.beta() * w0;
    let ratio = cfg.omega().abs() / w0;
    LimitEnergy {
        energy: 2.0 * w0 * ((g + 0.5) + e0 * (g * (g + 1.0) + r * r + 0.5)),
        in_regime: ratio > 0.0 && ratio <= WEAK_FIELD_MAX,
    }
}

/// 2ω[(γ+(1+ρ)/2) + βω(γ(γ+1)+ρ²+½)], valid for ω ≫ ω₀.
///
/// The constant ½ in the β bracket is what the first-order spectrum gives
/// when ω̃ → ω; without it the two disagree at first order.
pub fn strong_field_energy(gamma_q: HalfInt, rho_q: HalfInt, cfg: &SystemConfig) -> LimitEnergy {
    let w = cfg.omega();
    let (g, r) = (gamma_q.value(), rho_q.value());
    let e = cfg.beta() * w;
    LimitEnergy {
        energy: 2.0 * w * ((g + 0.5 * (1.0 + r)) + e * (g * (g + 1.0) + r * r + 0.5)),
        in_regime: w.abs() / cfg.omega0() >= STRONG_FIELD_MIN,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EnergyModel {
    #[default]
    Exact,
    FirstOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyClass {
    /// E/ω̃ of the first member.
    pub energy: f64,
    pub members: Vec<QuantumNumbers>,
}

impl DegeneracyClass {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

fn scaled_energy(qn: QuantumNumbers, cfg: &SystemConfig, model: EnergyModel) -> f64 {
    let e = match model {
        EnergyModel::Exact => energy_exact(qn, 0.0, cfg).energy,
        EnergyModel::FirstOrder => energy_first_order(qn.n_d(), qn.n_g(), 0.0, cfg),
    };
    e / cfg.omega_tilde()
}

/// Group every level with n_d + n_g ≤ `max_n` into classes of equal energy
/// (relative tolerance `tol`), sorted by energy.
pub fn degeneracy_table(
    cfg: &SystemConfig,
    max_n: u32,
    tol: f64,
    model: EnergyModel,
) -> Result<Vec<DegeneracyClass>> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    if max_n > 64 {
        return Err(Error::domain(format!("max_N is capped at 64, got {max_n}")));
    }

    let mut levels: Vec<(f64, QuantumNumbers)> = Vec::new();
    for total in 0..=max_n {
        for n_d in 0..=total {
            let qn = QuantumNumbers::from_circular(n_d, total - n_d);
            levels.push((scaled_energy(qn, cfg, model), qn));
        }
    }

    // Undeformed isotropic oscillator: E/ω̃ = N + 1 exactly, group by N.
    if cfg.beta() == 0.0 && cfg.omega() == 0.0 {
        return Ok((0..=max_n)
            .map(|nn| DegeneracyClass {
                energy: nn as f64 + 1.0,
                members: levels
                    .iter()
                    .filter(|(_, q)| q.principal() == nn)
                    .map(|(_, q)| *q)
                    .collect(),
            })
            .collect());
    }

    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut classes: Vec<DegeneracyClass> = Vec::new();
    for (e, qn) in levels {
        match classes.last_mut() {
            Some(c) if (e - c.energy).abs() <= tol * e.abs().max(c.energy.abs()) => {
                c.members.push(qn)
            }
            _ => classes.push(DegeneracyClass {
                energy: e,
                members: vec![qn],
            }),
        }
    }
    Ok(classes)
}
