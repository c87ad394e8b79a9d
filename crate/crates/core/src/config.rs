//! Physical parameters, the unit convention and the deformation scales.
//!
//! Everything downstream works in natural units: ℏ = m = k_B = 1 and
//! q/(2mc) = 1, so the (half-)cyclotron frequency ω equals the field value
//! `B` numerically and μ_B = qℏ/(2mc) = 1. With ω₀ = 1 energies are in units
//! of ℏω₀ and lengths in units of l₀ = √(ℏ/(mω₀)).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HBAR: f64 = 1.0;
pub const MASS: f64 = 1.0;
pub const K_B: f64 = 1.0;
/// q/(2mc); the field enters only through ω = (q/2mc)·B.
pub const CHARGE_OVER_2MC: f64 = 1.0;
/// μ_B = qℏ/(2mc).
pub const BOHR_MAGNETON: f64 = CHARGE_OVER_2MC * HBAR;

/// Dimensional constants used to move between a physical parameter set and
/// the dimensionless one the library computes with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
    pub k_b: f64,
    pub charge_over_2mc: f64,
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem {
        hbar: HBAR,
        mass: MASS,
        k_b: K_B,
        charge_over_2mc: CHARGE_OVER_2MC,
    };

    pub fn energy_unit(&self, omega0: f64) -> f64 {
        self.hbar * omega0
    }

    pub fn length_unit(&self, omega0: f64) -> f64 {
        (self.hbar / (self.mass * omega0)).sqrt()
    }

    /// Express a dimensional parameter set in units of ℏω₀ and l₀.
    pub fn to_dimensionless(&self, p: &PhysicalParams) -> PhysicalParams {
        let e0 = self.energy_unit(p.omega0);
        let l0 = self.length_unit(p.omega0);
        PhysicalParams {
            omega0: 1.0,
            field: self.charge_over_2mc * p.field / p.omega0,
            temperature: self.k_b * p.temperature / e0,
            volume: p.volume / l0.powi(3),
            fugacity: p.fugacity,
            beta: p.beta * self.mass * e0,
        }
    }

    /// Inverse of [`UnitSystem::to_dimensionless`] for a trap of frequency `omega0`.
    pub fn from_dimensionless(&self, d: &PhysicalParams, omega0: f64) -> PhysicalParams {
        let e0 = self.energy_unit(omega0);
        let l0 = self.length_unit(omega0);
        PhysicalParams {
            omega0: d.omega0 * omega0,
            field: d.field * omega0 / self.charge_over_2mc,
            temperature: d.temperature * e0 / self.k_b,
            volume: d.volume * l0.powi(3),
            fugacity: d.fugacity,
            beta: d.beta / (self.mass * e0),
        }
    }
}

/// Raw inputs, in whatever unit system they were given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub omega0: f64,
    pub field: f64,
    pub temperature: f64,
    pub volume: f64,
    pub fugacity: f64,
    pub beta: f64,
}

/// Parameters of the deformed algebra.
///
/// Only β′ = γ = 0 is solved; the other two are carried so that a request for
/// the general algebra fails loudly instead of being silently ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GupParams {
    beta: f64,
    beta_prime: f64,
    gamma_rep: f64,
    dim: u32,
}

impl GupParams {
    /// The working algebra in the D = 2 transverse plane.
    pub fn new(beta: f64) -> Result<Self> {
        Self::general(beta, 0.0, 0.0, 2)
    }

    pub fn with_dim(beta: f64, dim: u32) -> Result<Self> {
        Self::general(beta, 0.0, 0.0, dim)
    }

    pub fn general(beta: f64, beta_prime: f64, gamma_rep: f64, dim: u32) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::domain(format!("beta must be finite and >= 0, got {beta}")));
        }
        if dim == 0 {
            return Err(Error::domain("spatial dimension must be positive"));
        }
        if beta_prime != 0.0 || gamma_rep != 0.0 {
            return Err(Error::UnsupportedAlgebra {
                beta_prime,
                gamma_rep,
            });
        }
        Ok(Self {
            beta,
            beta_prime,
            gamma_rep,
            dim,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta_prime(&self) -> f64 {
        self.beta_prime
    }

    pub fn gamma_rep(&self) -> f64 {
        self.gamma_rep
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Measure squeezing exponent α = (γ − β′(D−1)/2)/(β+β′); zero for the
    /// working algebra and undefined when β + β′ = 0.
    pub fn squeezing_exponent(&self) -> Option<f64> {
        let denom = self.beta + self.beta_prime;
        (denom > 0.0).then(|| {
            (self.gamma_rep - self.beta_prime * (self.dim as f64 - 1.0) / 2.0) / denom
        })
    }
}

/// Δx_min = ℏ√(Dβ + β′).
pub fn minimal_length(gup: &GupParams) -> f64 {
    HBAR * (gup.dim as f64 * gup.beta + gup.beta_prime).sqrt()
}

/// λ_th = √(2πℏ²/(m k T)).
pub fn thermal_wavelength(temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::domain(format!(
            "temperature must be finite and > 0, got {temperature}"
        )));
    }
    Ok((2.0 * std::f64::consts::PI * HBAR * HBAR / (MASS * K_B * temperature)).sqrt())
}

/// ω̃ = √(ω² + ω₀²).
pub fn omega_tilde(omega: f64, omega0: f64) -> f64 {
    omega.hypot(omega0)
}

/// A validated parameter point with its derived scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    omega0: f64,
    field: f64,
    temperature: f64,
    volume: f64,
    fugacity: f64,
    gup: GupParams,
    omega: f64,
    omega_tilde: f64,
    epsilon: f64,
    kappa: f64,
    lambda_th: f64,
    dx_min: f64,
}

/// Build a [`SystemConfig`], enforcing ε < 1 and λ_th > Δx_min.
pub fn make_config(
    omega0: f64,
    field: f64,
    temperature: f64,
    volume: f64,
    fugacity: f64,
    beta: f64,
) -> Result<SystemConfig> {
    SystemConfig::from_gup(
        omega0,
        field,
        temperature,
        volume,
        fugacity,
        GupParams::new(beta)?,
    )
}

impl SystemConfig {
    pub fn from_gup(
        omega0: f64,
        field: f64,
        temperature: f64,
        volume: f64,
        fugacity: f64,
        gup: GupParams,
    ) -> Result<Self> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        positive("omega0", omega0)?;
        positive("temperature", temperature)?;
        positive("volume", volume)?;
        positive("fugacity", fugacity)?;
        if !field.is_finite() {
            return Err(Error::domain(format!("field must be finite, got {field}")));
        }

        let omega = CHARGE_OVER_2MC * field;
        let omega_tilde = omega_tilde(omega, omega0);
        let beta = gup.beta();
        let epsilon = MASS * HBAR * omega_tilde * beta;
        if epsilon >= 1.0 {
            return Err(Error::GupViolation { epsilon });
        }
        let lambda_th = thermal_wavelength(temperature)?;
        let dx_min = minimal_length(&gup);
        if beta > 0.0 && lambda_th <= dx_min {
            return Err(Error::ThermalRegimeViolation { lambda_th, dx_min });
        }

        Ok(Self {
            omega0,
            field,
            temperature,
            volume,
            fugacity,
            gup,
            omega,
            omega_tilde,
            epsilon,
            kappa: epsilon.sqrt(),
            lambda_th,
            dx_min,
        })
    }

    pub fn from_params(p: &PhysicalParams) -> Result<Self> {
        make_config(p.omega0, p.field, p.temperature, p.volume, p.fugacity, p.beta)
    }

    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            omega0: self.omega0,
            field: self.field,
            temperature: self.temperature,
            volume: self.volume,
            fugacity: self.fugacity,
            beta: self.beta(),
        }
    }

    pub fn with_field(&self, field: f64) -> Result<Self> {
        Self::from_gup(
            self.omega0,
            field,
            self.temperature,
            self.volume,
            self.fugacity,
            self.gup,
        )
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::from_gup(
            self.omega0,
            self.field,
            temperature,
            self.volume,
            self.fugacity,
            self.gup,
        )
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::from_gup(
            self.omega0,
            self.field,
            self.temperature,
            self.volume,
            self.fugacity,
            GupParams::with_dim(beta, self.gup.dim())?,
        )
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    pub fn field(&self) -> f64 {
        self.field
    }
    pub fn temperature(&self) -> f64 {
        self.temperature
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    pub fn fugacity(&self) -> f64 {
        self.fugacity
    }
    pub fn gup(&self) -> &GupParams {
        &self.gup
    }
    pub fn beta(&self) -> f64 {
        self.gup.beta()
    }
    /// ω = (q/2mc)·B.
    pub fn omega(&self) -> f64 {
        self.omega
    }
    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }
    /// ε = mℏω̃β.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    /// κ = √(mω̃ℏβ).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn lambda_th(&self) -> f64 {
        self.lambda_th
    }
    pub fn dx_min(&self) -> f64 {
        self.dx_min
    }
    /// β̃ = 1/kT.
    pub fn inverse_temperature(&self) -> f64 {
        1.0 / (K_B * self.temperature)
    }
    /// mβ/β̃, the deformation seen by the thermal state.
    pub fn thermal_deformation(&self) -> f64 {
        MASS * self.beta() * K_B * self.temperature
    }
    /// ω/(2ω̃), always in [−1/2, 1/2].
    pub fn field_ratio(&self) -> f64 {
        self.omega / (2.0 * self.omega_tilde)
    }
    pub fn is_deformed(&self) -> bool {
        self.beta() > 0.0
    }
}
