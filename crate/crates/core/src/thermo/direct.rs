//! Grand potential by explicit summation over levels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::density::{density_at, density_majorant};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_half_line, QuadPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Statistics {
    /// ln(1 + z e^{−β̃E}) → z e^{−β̃E}.
    #[default]
    MaxwellBoltzmann,
    FermiDirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectOptions {
    pub statistics: Statistics,
    /// Truncation tail must fall below this fraction of the partial sum.
    pub rel_tail_tol: f64,
    /// Cap on levels per circular index.
    pub max_terms: usize,
    /// Use exactly this many levels per index instead of the adaptive choice.
    pub fixed_terms: Option<usize>,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self {
            statistics: Statistics::MaxwellBoltzmann,
            rel_tail_tol: 1e-8,
            max_terms: 100_000,
            fixed_terms: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectResult {
    pub phi: f64,
    /// Bound on the neglected levels, in units of Φ.
    pub tail_bound: f64,
    /// Levels kept per circular index (largest over the statistics series).
    pub terms: usize,
    /// Terms of the fugacity series (1 for Maxwell–Boltzmann).
    pub series_terms: usize,
    pub pz_integral: f64,
    pub pz_error: f64,
}

/// ∫ e^{−b p²/2}/(1+βp²) dp over the real line, by quadrature.
pub fn pz_integral(b: f64, beta: f64) -> Result<(f64, f64)> {
    if beta == 0.0 {
        return Ok(((2.0 * PI / b).sqrt(), 0.0));
    }
    let policy = QuadPolicy {
        abs_tol: 0.0,
        rel_tol: 1e-12,
        ..QuadPolicy::default()
    };
    let r = integrate_half_line(|p| (-0.5 * b * p * p).exp() / (1.0 + beta * p * p), b.sqrt(), &policy)?;
    Ok((2.0 * r.value, 2.0 * r.abs_error))
}

/// Σ_{n≥m} rⁿ and Σ_{n≥m} n rⁿ.
fn geometric_tails(r: f64, m: usize) -> (f64, f64) {
    let rm = r.powi(m as i32);
    let one = 1.0 - r;
    (rm / one, rm * (m as f64 * one + r) / (one * one))
}

struct LevelSum {
    value: f64,
    tail: f64,
    terms: usize,
}

/// Σ_{n_d,n_g} g(n_d+n_g) e^{−b E(n_d,n_g)} with E at first order in ε.
fn level_sum(b: f64, cfg: &SystemConfig, opts: &DirectOptions) -> Result<LevelSum> {
    let wt = cfg.omega_tilde();
    let eps = cfg.epsilon();
    let x = cfg.field_ratio();
    let ground = (-b * wt * (1.0 + eps)).exp();
    let rd = (-b * wt * (1.0 + eps + x)).exp();
    let rg = (-b * wt * (1.0 + eps - x)).exp();
    let (ga, gb) = density_majorant(cfg);

    let tail_bound = |m: usize| {
        let (gd_m, hd_m) = geometric_tails(rd, m);
        let (gg_m, hg_m) = geometric_tails(rg, m);
        let (gd_0, hd_0) = geometric_tails(rd, 0);
        let (gg_0, hg_0) = geometric_tails(rg, 0);
        // rows n_d ≥ m, then columns n_g ≥ m (overlap counted twice: still a bound)
        let a = ga * gd_m * gg_0 + gb * ((hd_m + gd_m) * gg_0 + gd_m * hg_0);
        let c = ga * gg_m * gd_0 + gb * ((hg_m + gg_m) * gd_0 + gg_m * hd_0);
        ground * (a + c)
    };

    let sum_to = |m: usize| {
        let fd: Vec<f64> = (0..m)
            .map(|n| {
                let n = n as f64;
                (-b * wt * ((1.0 + eps + x) * n + eps * n * n)).exp()
            })
            .collect();
        let fg: Vec<f64> = (0..m)
            .map(|n| {
                let n = n as f64;
                (-b * wt * ((1.0 + eps - x) * n + eps * n * n)).exp()
            })
            .collect();
        let g: Vec<f64> = (0..2 * m).map(|n| density_at(n as f64, cfg)).collect();
        let mut total = 0.0;
        for (i, a) in fd.iter().enumerate() {
            let mut row = 0.0;
            for (j, c) in fg.iter().enumerate() {
                row += g[i + j] * c;
            }
            total += a * row;
        }
        ground * total
    };

    if let Some(m) = opts.fixed_terms {
        return Ok(LevelSum {
            value: sum_to(m),
            tail: tail_bound(m),
            terms: m,
        });
    }

    let cap = opts.max_terms.max(1);
    let mut m = cap.min(64);
    loop {
        let value = sum_to(m);
        let tail = tail_bound(m);
        if tail.is_finite() && tail <= opts.rel_tail_tol * value {
            return Ok(LevelSum { value, tail, terms: m });
        }
        // the full sum is at most value + tail, so a cap that cannot meet the
        // tolerance is detected without summing to it
        if m >= cap || !(tail_bound(cap) <= opts.rel_tail_tol * (value + tail)) {
            let t = tail_bound(cap);
            return Err(Error::Truncation {
                tail_bound: t / value,
                terms: cap,
            });
        }
        m = (2 * m).min(cap);
    }
}

/// Φ = −(V^{1/3}/(2πβ̃)) ∫dp_z/(1+βp_z²) Σ g ln(1 + z e^{−β̃E}).
///
/// Fermi statistics expand the logarithm as Σ_k (−1)^{k+1} z^k e^{−kβ̃E}/k,
/// which needs z e^{−β̃E₀} < 1.
pub fn grand_potential_direct(cfg: &SystemConfig, opts: &DirectOptions) -> Result<DirectResult> {
    let bt = cfg.inverse_temperature();
    let v13 = cfg.volume().cbrt();
    let z = cfg.fugacity();
    let pref = -v13 / (2.0 * PI * bt);

    match opts.statistics {
        Statistics::MaxwellBoltzmann => {
            let (iz, iz_err) = pz_integral(bt, cfg.beta())?;
            let s = level_sum(bt, cfg, opts)?;
            Ok(DirectResult {
                phi: pref * z * iz * s.value,
                tail_bound: (pref * z * iz * s.tail).abs(),
                terms: s.terms,
                series_terms: 1,
                pz_integral: iz,
                pz_error: iz_err,
            })
        }
        Statistics::FermiDirac => {
            let e0 = cfg.omega_tilde() * (1.0 + cfg.epsilon());
            let lead = z * (-bt * e0).exp();
            if lead >= 1.0 {
                return Err(Error::domain(format!(
                    "Fermi series needs z·exp(−E₀/kT) < 1, got {lead}"
                )));
            }
            let (mut total, mut tail, mut terms) = (0.0, 0.0, 0);
            let (mut iz1, mut iz1_err) = (0.0, 0.0);
            for k in 1..=opts.max_terms {
                let b = k as f64 * bt;
                let (iz, iz_err) = pz_integral(b, cfg.beta())?;
                if k == 1 {
                    iz1 = iz;
                    iz1_err = iz_err;
                }
                let s = level_sum(b, cfg, opts)?;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let term = sign * z.powi(k as i32) / k as f64 * iz * s.value;
                total += term;
                tail += (z.powi(k as i32) / k as f64 * iz * s.tail).abs();
                terms = terms.max(s.terms);
                // alternating series with decreasing terms: error below the next one
                let next = lead.powi(k as i32 + 1) / (k + 1) as f64 * iz * s.value;
                if next <= opts.rel_tail_tol * total.abs() {
                    return Ok(DirectResult {
                        phi: pref * total,
                        tail_bound: (pref * (tail + next)).abs(),
                        terms,
                        series_terms: k,
                        pz_integral: iz1,
                        pz_error: iz1_err,
                    });
                }
            }
            Err(Error::Truncation {
                tail_bound: f64::NAN,
                terms: opts.max_terms,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::make_config;
    use crate::special::erfcx;

    #[test]
    fn pz_integral_closed_form() {
        for (b, beta) in [(1.0 / 30.0, 1e-3), (0.05, 0.01), (1.0, 0.3)] {
            let (q, _) = pz_integral(b, beta).unwrap();
            let exact = PI / beta.sqrt() * erfcx((b / (2.0 * beta)).sqrt());
            assert!(((q - exact) / exact).abs() < 1e-11, "{q} {exact}");
        }
    }

    #[test]
    fn undeformed_geometric_oracle() {
        // β = 0: g constant, double geometric series in closed form
        let c = make_config(1.0, 0.3, 30.0, 1.0, 1.0, 0.0).unwrap();
        let r = grand_potential_direct(&c, &DirectOptions::default()).unwrap();
        let bt = 1.0 / 30.0;
        let (wt, x) = (c.omega_tilde(), c.field_ratio());
        let s = (wt / PI) * (-bt * wt).exp()
            / ((1.0 - (-bt * wt * (1.0 + x)).exp()) * (1.0 - (-bt * wt * (1.0 - x)).exp()));
        let exact = -1.0 / (2.0 * PI * bt) * (2.0 * PI / bt).sqrt() * s;
        assert!(((r.phi - exact) / exact).abs() < 1e-6, "{} {exact}", r.phi);
        // tiny β approaches the same value
        let c = make_config(1.0, 0.3, 30.0, 1.0, 1.0, 1e-9).unwrap();
        let r = grand_potential_direct(&c, &DirectOptions::default()).unwrap();
        assert!(((r.phi - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn more_negative_when_hotter() {
        let mut prev = 0.0;
        for t in [5.0, 10.0, 20.0, 40.0] {
            let c = make_config(1.0, 0.5, t, 1.0, 1.0, 1e-3).unwrap();
            let p = grand_potential_direct(&c, &DirectOptions::default()).unwrap().phi;
            assert!(p < prev);
            prev = p;
        }
    }

    #[test]
    fn tail_bound_is_honest() {
        let c = make_config(1.0, 0.5, 30.0, 1.0, 1.0, 1e-3).unwrap();
        let a = grand_potential_direct(&c, &DirectOptions::default()).unwrap();
        let b = grand_potential_direct(
            &c,
            &DirectOptions {
                fixed_terms: Some(2 * a.terms),
                ..DirectOptions::default()
            },
        )
        .unwrap();
        assert!((a.phi - b.phi).abs() <= a.tail_bound, "{} {}", (a.phi - b.phi).abs(), a.tail_bound);
        assert!(a.tail_bound <= 1e-8 * a.phi.abs() * 1.0001);
    }

    #[test]
    fn truncation_cap() {
        let c = make_config(1.0, 0.5, 30.0, 1.0, 1.0, 1e-3).unwrap();
        let e = grand_potential_direct(
            &c,
            &DirectOptions {
                max_terms: 100,
                ..DirectOptions::default()
            },
        )
        .unwrap_err();
        assert!(matches!(e, Error::Truncation { .. }));
    }

    #[test]
    fn fermi_below_boltzmann() {
        // ln(1+y) < y
        let c = make_config(1.0, 0.5, 5.0, 1.0, 0.5, 1e-3).unwrap();
        let mb = grand_potential_direct(&c, &DirectOptions::default()).unwrap();
        let fd = grand_potential_direct(
            &c,
            &DirectOptions {
                statistics: Statistics::FermiDirac,
                ..DirectOptions::default()
            },
        )
        .unwrap();
        assert!(fd.phi > mb.phi && fd.phi < 0.0);
        assert!(fd.series_terms > 1);
        // and converge to MB as z → 0
        let c = make_config(1.0, 0.5, 5.0, 1.0, 1e-6, 1e-3).unwrap();
        let mb = grand_potential_direct(&c, &DirectOptions::default()).unwrap().phi;
        let fd = grand_potential_direct(
            &c,
            &DirectOptions {
                statistics: Statistics::FermiDirac,
                ..DirectOptions::default()
            },
        )
        .unwrap()
        .phi;
        assert!(((fd - mb) / mb).abs() < 1e-5);
    }
}
