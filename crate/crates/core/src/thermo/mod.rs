//! High-temperature thermodynamics of the deformed oscillator gas.

mod closed;
mod density;
mod direct;
mod sums;

pub use closed::{
    critical_fields, difference_scan, erfcx_sqrt_asymptotic, grand_potential_closed, grand_potential_intermediate,
    lambda_min, magnetic_moment, magnetic_moment_closed_unchecked, max_temperature, sign_changes, susceptibility,
    susceptibility_beta0, susceptibility_closed_unchecked, susceptibility_strong, susceptibility_variant, susceptibility_weak,
    susceptibility_zero_field, u_pm, u_pm_from_lengths, ChiRegime, CriticalFields, MomentMode, SusceptibilityMode,
    CRITICAL_SCAN_POINTS, U_MIN,
};
pub use density::{annulus_density, momentum_shell, states_density};
pub use direct::{grand_potential_direct, pz_integral, DirectOptions, DirectResult, Statistics};
pub use sums::{
    cylinder_d, cylinder_d_scaled, direct_sum, em_sum, euler_maclaurin, gauss_integral_d, s_sums, scaled_d1,
    scaled_d2, Circular, EmResult, SSum, SumKind,
};

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::Error;

/// Everything the sweep layer reports for one parameter point. Quantities
/// that could not be evaluated are `None` and named in `flags`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub field: f64,
    pub temperature: f64,
    pub beta: f64,
    pub omega0: f64,
    pub volume: f64,
    pub fugacity: f64,
    pub phi_direct: Option<f64>,
    pub phi_closed: Option<f64>,
    pub m_closed: Option<f64>,
    pub m_numeric: Option<f64>,
    pub chi_numeric: Option<f64>,
    /// Closed-form χ evaluated even outside the large-u regime (plotting).
    pub chi_closed: Option<f64>,
    pub chi_variant: Option<f64>,
    pub chi_regime: Option<ChiRegime>,
    pub u_plus: Option<f64>,
    pub u_minus: Option<f64>,
    pub direct_terms: Option<usize>,
    pub tail_bound: Option<f64>,
    pub pz_error: Option<f64>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PointOptions {
    pub skip_direct: bool,
    pub direct: DirectOptions,
}

fn keep<T>(r: crate::error::Result<T>, what: &str, flags: &mut Vec<String>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            flags.push(format!("{what}:{}", e.code()));
            None
        }
    }
}

/// Evaluate one point; failures of individual quantities become flags.
pub fn evaluate_point(cfg: &SystemConfig, opts: &PointOptions) -> ThermoPoint {
    let mut flags = Vec::new();
    let (u_plus, u_minus) = match u_pm(cfg) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(Error::Undeformed) => (None, None),
        Err(e) => {
            flags.push(format!("u:{}", e.code()));
            (None, None)
        }
    };
    let direct = if opts.skip_direct {
        None
    } else {
        keep(grand_potential_direct(cfg, &opts.direct), "phi_direct", &mut flags)
    };
    let phi_closed = keep(grand_potential_closed(cfg), "phi_closed", &mut flags);
    let m_closed = keep(magnetic_moment(cfg, MomentMode::Closed), "m_closed", &mut flags);
    let m_numeric = keep(magnetic_moment(cfg, MomentMode::NumericClosed), "m_numeric", &mut flags);
    let chi_numeric = keep(susceptibility(cfg, SusceptibilityMode::Numeric), "chi_numeric", &mut flags);
    let variant = susceptibility_variant(cfg);
    ThermoPoint {
        field: cfg.field(),
        temperature: cfg.temperature(),
        beta: cfg.beta(),
        omega0: cfg.omega0(),
        volume: cfg.volume(),
        fugacity: cfg.fugacity(),
        phi_direct: direct.map(|d| d.phi),
        phi_closed,
        m_closed,
        m_numeric,
        chi_numeric,
        chi_closed: Some(susceptibility_closed_unchecked(cfg)),
        chi_variant: variant.map(|v| v.1),
        chi_regime: variant.map(|v| v.0),
        u_plus,
        u_minus,
        direct_terms: direct.map(|d| d.terms),
        tail_bound: direct.map(|d| d.tail_bound),
        pz_error: direct.map(|d| d.pz_error),
        flags,
    }
}
