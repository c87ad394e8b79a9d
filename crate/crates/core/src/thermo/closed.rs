//! High-temperature closed forms: grand potential, magnetic moment,
//! susceptibility and its regime limits, critical fields, maximal temperature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::direct::{grand_potential_direct, DirectOptions};
use super::sums::{scaled_d1, scaled_d2};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::special::erfcx;
use crate::spectrum::{STRONG_FIELD_MIN, WEAK_FIELD_MAX};

/// Below this the large-u expansions behind the closed forms are not trusted.
pub const U_MIN: f64 = 3.0;

/// u± = (1 ± ω/2ω̃)·√(β̃/(2β)).
pub fn u_pm(cfg: &SystemConfig) -> Result<(f64, f64)> {
    if !cfg.is_deformed() {
        return Err(Error::Undeformed);
    }
    let s = 1.0 / (2.0 * cfg.thermal_deformation()).sqrt();
    let x = cfg.field_ratio();
    Ok(((1.0 + x) * s, (1.0 - x) * s))
}

/// The same pair written through lengths: (1 ± ω/2ω̃)/√(2π) · λ_th/Δx_min.
pub fn u_pm_from_lengths(cfg: &SystemConfig) -> Result<(f64, f64)> {
    if !cfg.is_deformed() {
        return Err(Error::Undeformed);
    }
    let r = cfg.lambda_th() / cfg.dx_min() / (2.0 * PI).sqrt();
    let x = cfg.field_ratio();
    Ok(((1.0 + x) * r, (1.0 - x) * r))
}

fn require_large_u(cfg: &SystemConfig) -> Result<()> {
    if !cfg.is_deformed() {
        return Ok(());
    }
    let (_, um) = u_pm(cfg)?;
    if um < U_MIN {
        return Err(Error::Regime(format!("u- = {um:.4} < {U_MIN}: thermal wavelength too close to the minimal length")));
    }
    Ok(())
}

/// Grand potential with the exact cylinder functions and the p_z factor kept
/// whole; the level sums enter through Euler–Maclaurin without Bernoulli terms.
pub fn grand_potential_intermediate(cfg: &SystemConfig) -> Result<f64> {
    let (up, um) = u_pm(cfg)?;
    if um < U_MIN {
        return Err(Error::Regime(format!("u- = {um:.4} < {U_MIN}")));
    }
    let (beta, bt) = (cfg.beta(), cfg.inverse_temperature());
    let wt = cfg.omega_tilde();
    let eps = cfg.epsilon();
    let a1 = |u: f64| scaled_d1(u) / (wt * (2.0 * bt * beta).sqrt());
    let a2 = |u: f64| scaled_d2(u) / (2.0 * wt * wt * bt * beta);
    let (s1p, s1m) = (0.5 + a1(up), 0.5 + a1(um));
    let bracket = s1p * s1m + eps * (a2(up) * s1m + a2(um) * s1p);
    let pref = -(4.0 * wt * cfg.volume()) / (8.0 * PI * beta.sqrt() * bt) * (-bt * wt).exp();
    Ok(pref * erfcx((bt / (2.0 * beta)).sqrt()) * bracket)
}

/// 2V/(β̃²λ³), the overall scale of every closed form.
fn closed_scale(cfg: &SystemConfig) -> f64 {
    let bt = cfg.inverse_temperature();
    2.0 * cfg.volume() / (bt * bt * cfg.lambda_th().powi(3))
}

/// Field dependence F(ω) of −Φ/scale, and its first two derivatives, as
/// (1−δ)·a + δ·b with a = 4ω̃/D, b = 32ω̃³/D², D = 3ω̃² + ω₀².
fn shape(omega: f64, omega0: f64, delta: f64) -> [f64; 3] {
    let (w2, w02) = (omega * omega, omega0 * omega0);
    let wt2 = w2 + w02;
    let wt = wt2.sqrt();
    let d = 3.0 * wt2 + w02;
    let e = 3.0 * w2 + 4.0 * w02;
    let f = [4.0 * wt / d, 32.0 * wt * wt2 / (d * d)];
    let f1 = [
        -4.0 * omega * (3.0 * wt2 - w02) / (wt * d * d),
        -96.0 * omega * w2 * wt / (d * d * d),
    ];
    let f2 = [
        -4.0 * (-18.0 * w2 * w2 * w2 - 9.0 * w2 * w2 * w02 + 18.0 * w2 * w02 * w02 + 8.0 * w02 * w02 * w02)
            / (wt2 * wt * e.powi(3)),
        -96.0 * w2 * (-6.0 * w2 * w2 + 7.0 * w2 * w02 + 12.0 * w02 * w02) / (wt * e.powi(4)),
    ];
    let mix = |v: [f64; 2]| (1.0 - delta) * v[0] + delta * v[1];
    [mix(f), mix(f1), mix(f2)]
}

fn shape_at(cfg: &SystemConfig) -> [f64; 3] {
    shape(cfg.omega(), cfg.omega0(), cfg.thermal_deformation())
}

/// Closed Φ without the large-u check.
pub(crate) fn grand_potential_closed_unchecked(cfg: &SystemConfig) -> f64 {
    -closed_scale(cfg) * shape_at(cfg)[0]
}

/// Φ ≈ −(2V/(β̃²λ³))·[(1−δ)/(ω̃(1−x²)) + 2δ/(ω̃(1−x²)²)], δ = β/β̃, x = ω/2ω̃.
pub fn grand_potential_closed(cfg: &SystemConfig) -> Result<f64> {
    require_large_u(cfg)?;
    Ok(grand_potential_closed_unchecked(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MomentMode {
    #[default]
    Closed,
    /// −∂Φ/∂B on the closed Φ, by differences.
    NumericClosed,
    /// −∂Φ/∂B on the directly summed Φ.
    NumericDirect,
}

/// Central difference with one Richardson level: (4D(h/2) − D(h))/3.
fn richardson_derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let (dh, dh2) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * dh2 - dh) / 3.0)
}

fn step(cfg: &SystemConfig, rel: f64) -> f64 {
    rel * cfg.field().abs().max(cfg.omega0())
}

/// Closed M = −∂Φ/∂B (odd in B, negative for B > 0).
pub fn magnetic_moment_closed_unchecked(cfg: &SystemConfig) -> f64 {
    -crate::config::CHARGE_OVER_2MC * -closed_scale(cfg) * shape_at(cfg)[1]
}

pub fn magnetic_moment(cfg: &SystemConfig, mode: MomentMode) -> Result<f64> {
    match mode {
        MomentMode::Closed => {
            require_large_u(cfg)?;
            Ok(magnetic_moment_closed_unchecked(cfg))
        }
        MomentMode::NumericClosed => {
            require_large_u(cfg)?;
            let d = richardson_derivative(
                |b| Ok(grand_potential_closed_unchecked(&cfg.with_field(b)?)),
                cfg.field(),
                step(cfg, 1e-4),
            )?;
            Ok(-d)
        }
        MomentMode::NumericDirect => {
            // freeze the truncation so the differenced function is smooth
            let terms = grand_potential_direct(cfg, &DirectOptions::default())?.terms;
            let opts = DirectOptions {
                fixed_terms: Some(terms),
                ..DirectOptions::default()
            };
            let d = richardson_derivative(
                |b| Ok(grand_potential_direct(&cfg.with_field(b)?, &opts)?.phi),
                cfg.field(),
                step(cfg, 1e-2),
            )?;
            Ok(-d)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SusceptibilityMode {
    /// ∂M/∂B of the closed M, analytically.
    #[default]
    Closed,
    /// ∂M/∂B of the closed M, by differences.
    Numeric,
    /// ∂M/∂B with M itself differenced from the direct Φ.
    NumericDirect,
}

/// Analytic ∂M/∂B of the closed M, without the large-u check.
pub fn susceptibility_closed_unchecked(cfg: &SystemConfig) -> f64 {
    let g = crate::config::CHARGE_OVER_2MC;
    closed_scale(cfg) * g * g * shape_at(cfg)[2]
}

pub fn susceptibility(cfg: &SystemConfig, mode: SusceptibilityMode) -> Result<f64> {
    match mode {
        SusceptibilityMode::Closed => {
            require_large_u(cfg)?;
            Ok(susceptibility_closed_unchecked(cfg))
        }
        SusceptibilityMode::Numeric => {
            require_large_u(cfg)?;
            richardson_derivative(
                |b| Ok(magnetic_moment_closed_unchecked(&cfg.with_field(b)?)),
                cfg.field(),
                step(cfg, 1e-4),
            )
        }
        SusceptibilityMode::NumericDirect => richardson_derivative(
            |b| magnetic_moment(&cfg.with_field(b)?, MomentMode::NumericDirect),
            cfg.field(),
            step(cfg, 1e-2),
        ),
    }
}

/// Vμ_B²/(β̃²λ³ω₀³).
fn chi_unit(cfg: &SystemConfig) -> f64 {
    let mu = crate::config::BOHR_MAGNETON;
    0.5 * closed_scale(cfg) * mu * mu / cfg.omega0().powi(3)
}

fn field_ratio_w0(cfg: &SystemConfig) -> f64 {
    cfg.omega().abs() / cfg.omega0()
}

fn require_weak(cfg: &SystemConfig, what: &str) -> Result<()> {
    let r = field_ratio_w0(cfg);
    if r > WEAK_FIELD_MAX {
        return Err(Error::Regime(format!("{what} needs ω/ω₀ ≤ {WEAK_FIELD_MAX}, got {r}")));
    }
    Ok(())
}

/// −[1 − δ(1 − 9ω²/ω₀²)] in units of Vμ_B²/(β̃²λ³ω₀³): Landau diamagnetism
/// with a deformation correction that vanishes at ω = ω₀/3.
pub fn susceptibility_weak(cfg: &SystemConfig) -> Result<f64> {
    require_weak(cfg, "weak-field susceptibility")?;
    let r = field_ratio_w0(cfg);
    Ok(-chi_unit(cfg) * (1.0 - cfg.thermal_deformation() * (1.0 - 9.0 * r * r)))
}

/// −(1 − δ) in the same units; zero at T_max.
pub fn susceptibility_zero_field(cfg: &SystemConfig) -> Result<f64> {
    require_weak(cfg, "zero-field susceptibility")?;
    Ok(-chi_unit(cfg) * (1.0 - cfg.thermal_deformation()))
}

/// Landau value without the minimal length.
pub fn susceptibility_beta0(cfg: &SystemConfig) -> Result<f64> {
    require_weak(cfg, "undeformed susceptibility")?;
    Ok(-chi_unit(cfg))
}

/// +(16/3)(ω₀/ω)³[1 + 5δ/3] in the same units: orbital paramagnetism.
pub fn susceptibility_strong(cfg: &SystemConfig) -> Result<f64> {
    let r = field_ratio_w0(cfg);
    if r < STRONG_FIELD_MIN {
        return Err(Error::Regime(format!("strong-field susceptibility needs ω/ω₀ ≥ {STRONG_FIELD_MIN}, got {r}")));
    }
    Ok(chi_unit(cfg) * 16.0 / (3.0 * r.powi(3)) * (1.0 + 5.0 * cfg.thermal_deformation() / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChiRegime {
    ZeroField,
    Weak,
    Undeformed,
    Strong,
}

impl ChiRegime {
    pub fn label(self) -> &'static str {
        match self {
            ChiRegime::ZeroField => "zero",
            ChiRegime::Weak => "weak",
            ChiRegime::Undeformed => "beta0",
            ChiRegime::Strong => "strong",
        }
    }
}

/// The closed-form susceptibility for the regime the point sits in, if any.
pub fn susceptibility_variant(cfg: &SystemConfig) -> Option<(ChiRegime, f64)> {
    let r = field_ratio_w0(cfg);
    if r >= STRONG_FIELD_MIN {
        return susceptibility_strong(cfg).ok().map(|v| (ChiRegime::Strong, v));
    }
    if r > WEAK_FIELD_MAX {
        return None;
    }
    let out = if !cfg.is_deformed() {
        (ChiRegime::Undeformed, susceptibility_beta0(cfg).ok()?)
    } else if r == 0.0 {
        (ChiRegime::ZeroField, susceptibility_zero_field(cfg).ok()?)
    } else {
        (ChiRegime::Weak, susceptibility_weak(cfg).ok()?)
    };
    Some(out)
}

/// Fields where χ_β − χ_0 changes sign, refined by bisection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalFields {
    pub b1: f64,
    pub b2: f64,
    /// Every sign change found on the scan, ascending.
    pub roots: Vec<f64>,
}

pub const CRITICAL_SCAN_POINTS: usize = 400;

fn chi_difference(cfg: &SystemConfig, baseline: &SystemConfig, b: f64) -> Result<f64> {
    Ok(susceptibility_closed_unchecked(&cfg.with_field(b)?) - susceptibility_closed_unchecked(&baseline.with_field(b)?))
}

/// Log-spaced scan of χ_β − χ_0 over [10⁻³ω₀, b_hi] as (B, difference).
pub fn difference_scan(cfg: &SystemConfig, b_hi: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    let b_lo = 1e-3 * cfg.omega0();
    if !(b_hi > b_lo) || points < 2 {
        return Err(Error::domain(format!("scan needs b_hi > {b_lo} and ≥ 2 points")));
    }
    let baseline = cfg.with_beta(0.0)?;
    let (l0, l1) = (b_lo.ln(), b_hi.ln());
    (0..points)
        .map(|i| {
            let b = if i + 1 == points {
                b_hi
            } else {
                (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp()
            };
            Ok((b, chi_difference(cfg, &baseline, b)?))
        })
        .collect()
}

/// Indices i with a strict sign change between scan[i] and scan[i+1].
pub fn sign_changes(scan: &[(f64, f64)]) -> Vec<usize> {
    scan.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].1 * w[1].1 < 0.0 || (w[0].1 != 0.0 && w[1].1 == 0.0))
        .map(|(i, _)| i)
        .collect()
}

/// The two smallest fields where the minimal length leaves χ unchanged.
pub fn critical_fields(cfg: &SystemConfig, b_hi: f64) -> Result<CriticalFields> {
    if !cfg.is_deformed() {
        return Err(Error::Undeformed);
    }
    let baseline = cfg.with_beta(0.0)?;
    let scan = difference_scan(cfg, b_hi, CRITICAL_SCAN_POINTS)?;
    let idx = sign_changes(&scan);
    if idx.len() < 2 {
        return Err(Error::RootNotBracketed { found: idx.len(), scan });
    }
    let f = |b: f64| chi_difference(cfg, &baseline, b);
    let mut roots = Vec::with_capacity(idx.len());
    for i in idx {
        let (mut lo, mut hi) = (scan[i].0, scan[i + 1].0);
        let mut flo = scan[i].1;
        if scan[i + 1].1 == 0.0 {
            roots.push(hi);
            continue;
        }
        while hi - lo > 1e-12 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm < 0.0) == (flo < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    Ok(CriticalFields {
        b1: roots[0],
        b2: roots[1],
        roots,
    })
}

/// kT_max = 2ℏ²/(mΔx_min²): there λ_th has shrunk to √π·Δx_min.
pub fn max_temperature(dx_min: f64) -> Result<f64> {
    if !(dx_min > 0.0 && dx_min.is_finite()) {
        return Err(Error::domain(format!("minimal length must be > 0, got {dx_min}")));
    }
    Ok(2.0 / (dx_min * dx_min))
}

/// λ_min = √π·Δx_min.
pub fn lambda_min(dx_min: f64) -> Result<f64> {
    if !(dx_min > 0.0 && dx_min.is_finite()) {
        return Err(Error::domain(format!("minimal length must be > 0, got {dx_min}")));
    }
    Ok(PI.sqrt() * dx_min)
}

/// Two-term large-x form of e^x erfc(√x): (1/√(πx))(1 − 1/(2x)).
pub fn erfcx_sqrt_asymptotic(x: f64) -> f64 {
    (1.0 - 0.5 / x) / (PI * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{make_config, thermal_wavelength};
    use crate::thermo::direct::grand_potential_direct;

    fn cfg(b: f64, t: f64, beta: f64) -> SystemConfig {
        make_config(1.0, b, t, 1.0, 1.0, beta).unwrap()
    }

    #[test]
    fn u_forms_agree() {
        for (b, t, beta) in [(0.5, 30.0, 1e-3), (3.0, 20.0, 1e-4), (0.0, 100.0, 2e-4)] {
            let c = cfg(b, t, beta);
            let (a, m) = u_pm(&c).unwrap();
            let (a2, m2) = u_pm_from_lengths(&c).unwrap();
            assert!(((a - a2) / a).abs() < 1e-12 && ((m - m2) / m).abs() < 1e-12);
            assert!(a >= m && m > 0.0);
        }
        assert!(matches!(u_pm(&cfg(0.5, 30.0, 0.0)), Err(Error::Undeformed)));
    }

    #[test]
    fn undeformed_zero_field_limit() {
        let c = cfg(0.0, 30.0, 0.0);
        let bt = 1.0 / 30.0;
        let lam = thermal_wavelength(30.0).unwrap();
        let want = -2.0 / (bt * bt * lam.powi(3));
        assert!((grand_potential_closed(&c).unwrap() - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn erf_asymptotic_at_fifty() {
        let x: f64 = 50.0;
        let exact = erfcx(x.sqrt());
        let approx = erfcx_sqrt_asymptotic(x);
        assert!(((approx - exact) / exact).abs() < 0.01);
        // the (1 − β/β̃) factor is the same expansion with x = β̃/2β
        assert!(((approx - exact) / exact).abs() > 1e-5);
    }

    #[test]
    fn closed_tracks_direct() {
        // ε = 0.02 at kT = 30: β/β̃ ≈ 0.54, far outside the large-u expansion
        let w: f64 = 0.5;
        let c = cfg(w, 30.0, 0.02 / (1.0 + w * w).sqrt());
        assert!(matches!(grand_potential_closed(&c), Err(Error::Regime(_))));
        // β/β̃ = 0.01: closed within 5%, the intermediate form much closer
        let c = cfg(w, 30.0, 0.01 / 30.0);
        let d = grand_potential_direct(&c, &DirectOptions::default()).unwrap().phi;
        let f = grand_potential_closed(&c).unwrap();
        let i = grand_potential_intermediate(&c).unwrap();
        assert!(((f - d) / d).abs() < 0.05, "{f} {d}");
        assert!(((i - d) / d).abs() < 2e-3, "{i} {d}");
    }

    #[test]
    fn regime_guard() {
        let c = cfg(1.0, 160.0, 1e-3);
        assert!(matches!(grand_potential_closed(&c), Err(Error::Regime(_))));
        assert!(matches!(grand_potential_intermediate(&c), Err(Error::Regime(_))));
    }

    #[test]
    fn moment_is_derivative() {
        let c = cfg(0.7, 30.0, 1e-4);
        let m = magnetic_moment(&c, MomentMode::Closed).unwrap();
        let n = magnetic_moment(&c, MomentMode::NumericClosed).unwrap();
        assert!(((m - n) / m).abs() < 1e-9, "{m} {n}");
        assert!(m < 0.0);
        assert_eq!(magnetic_moment(&cfg(0.0, 30.0, 1e-4), MomentMode::Closed).unwrap(), 0.0);
    }

    #[test]
    fn moment_negative_on_grid() {
        for i in 1..=40 {
            let w = 10.0 * i as f64 / 40.0;
            for eps in [0.0, 0.1, 0.25, 0.5] {
                // sign holds for the closed form at any δ < 1
                let beta = eps / (1.0 + w * w).sqrt();
                let c = make_config(1.0, w, 1.0, 1.0, 1.0, beta).unwrap();
                assert!(magnetic_moment_closed_unchecked(&c) < 0.0);
            }
        }
    }

    #[test]
    fn moment_beta0_form() {
        // −(8V/(β̃²λ³))·ω(3ω̃²−ω₀²)/(ω̃(3ω̃²+ω₀²)²)
        let c = cfg(0.8, 25.0, 0.0);
        let bt = 1.0 / 25.0;
        let lam = c.lambda_th();
        let wt2: f64 = 1.64;
        let want = -8.0 / (bt * bt * lam.powi(3)) * 0.8 * (3.0 * wt2 - 1.0) / (wt2.sqrt() * (3.0 * wt2 + 1.0).powi(2));
        let m = magnetic_moment(&c, MomentMode::Closed).unwrap();
        assert!(((m - want) / want).abs() < 1e-13);
        let n = magnetic_moment(&c, MomentMode::NumericClosed).unwrap();
        assert!(((n - want) / want).abs() < 1e-10);
    }

    #[test]
    fn moment_direct_matches_closed() {
        let c = cfg(0.5, 20.0, 1e-4);
        let m = magnetic_moment(&c, MomentMode::Closed).unwrap();
        let d = magnetic_moment(&c, MomentMode::NumericDirect).unwrap();
        assert!(((m - d) / d).abs() < 0.05, "{m} {d}");
    }

    #[test]
    fn susceptibility_modes_agree() {
        for b in [0.0, 0.3, 2.0, 15.0] {
            let c = cfg(b, 30.0, 1e-4);
            let a = susceptibility(&c, SusceptibilityMode::Closed).unwrap();
            let n = susceptibility(&c, SusceptibilityMode::Numeric).unwrap();
            assert!(((a - n) / a).abs() < 1e-8, "{b} {a} {n}");
        }
    }

    #[test]
    fn variants() {
        let c = cfg(0.0, 30.0, 1e-3);
        let z = susceptibility_zero_field(&c).unwrap();
        let b0 = susceptibility_beta0(&c).unwrap();
        assert!(z < 0.0 && b0 < z);
        assert!(((z / b0) - (1.0 - 0.03)).abs() < 1e-14);
        let c0 = cfg(0.0, 30.0, 0.0);
        assert_eq!(susceptibility_zero_field(&c0).unwrap(), susceptibility_beta0(&c0).unwrap());
        // the zero-field closed form is the ω → 0 limit of the full χ
        let full = susceptibility(&c, SusceptibilityMode::Closed).unwrap();
        assert!(((full - z) / z).abs() < 1e-14);
        // deformation correction vanishes at ω₀/3
        let c3 = cfg(1.0 / 3.0, 30.0, 1e-3);
        assert!(matches!(susceptibility_weak(&c3), Err(Error::Regime(_))));
        let cw = make_config(10.0, 10.0 / 3.0 / 100.0, 30.0, 1.0, 1.0, 1e-3).unwrap();
        assert!(susceptibility_weak(&cw).unwrap() < 0.0);
        let s = susceptibility_strong(&cfg(12.0, 30.0, 1e-3)).unwrap();
        assert!(s > 0.0);
        assert!(susceptibility_strong(&cfg(5.0, 30.0, 1e-3)).is_err());
        assert_eq!(susceptibility_variant(&cfg(3.0, 30.0, 1e-3)), None);
        assert_eq!(susceptibility_variant(&c).unwrap().0, ChiRegime::ZeroField);
        assert_eq!(susceptibility_variant(&c0).unwrap().0, ChiRegime::Undeformed);
    }

    #[test]
    fn critical_field_goldens() {
        // roots of the δ-independent shape G'' = b'' − a'', mpmath findroot
        for delta in [0.1, 0.25, 0.5] {
            let c = cfg(0.0, 30.0, delta / 30.0);
            let cf = critical_fields(&c, 10.0).unwrap();
            assert_eq!(cf.roots.len(), 2);
            assert!((cf.b1 - 0.357_834_178_794_126_74).abs() < 1e-10, "{}", cf.b1);
            assert!((cf.b2 - 1.768_775_890_087_528_2).abs() < 1e-10, "{}", cf.b2);
        }
    }

    #[test]
    fn critical_fields_need_two_roots() {
        let c = cfg(0.0, 30.0, 0.1 / 30.0);
        match critical_fields(&c, 1.0) {
            Err(Error::RootNotBracketed { found, scan }) => {
                assert_eq!(found, 1);
                assert_eq!(scan.len(), CRITICAL_SCAN_POINTS);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn max_temperature_identities() {
        for dx in [0.01, 0.05, 0.3] {
            let t = max_temperature(dx).unwrap();
            let lam = thermal_wavelength(t).unwrap();
            assert!((lam - lambda_min(dx).unwrap()).abs() < 1e-12 * lam);
            assert!((max_temperature(2.0 * dx).unwrap() - t / 4.0).abs() < 1e-12 * t);
        }
        assert!(max_temperature(0.0).is_err());
        assert!(lambda_min(-1.0).is_err());
    }
}
