//! One-dimensional parameter sweeps over thermodynamic points.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{PhysicalParams, SystemConfig};
use crate::error::{Error, Result};
use crate::table::{Cell, Table};
use crate::thermo::{evaluate_point, CriticalFields, PointOptions, ThermoPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVar {
    Field,
    Temperature,
    Beta,
    Omega0,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Field => "B",
            SweepVar::Temperature => "T",
            SweepVar::Beta => "beta",
            SweepVar::Omega0 => "omega0",
        }
    }

    pub fn apply(self, p: &PhysicalParams, value: f64) -> PhysicalParams {
        let mut q = *p;
        match self {
            SweepVar::Field => q.field = value,
            SweepVar::Temperature => q.temperature = value,
            SweepVar::Beta => q.beta = value,
            SweepVar::Omega0 => q.omega0 = value,
        }
        q
    }
}

impl FromStr for SweepVar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(SweepVar::Field),
            "T" => Ok(SweepVar::Temperature),
            "beta" => Ok(SweepVar::Beta),
            "omega0" => Ok(SweepVar::Omega0),
            _ => Err(Error::domain(format!("unknown sweep variable {s:?} (B, T, beta, omega0)"))),
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// `lo..=hi` in `n` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl Range {
    pub fn new(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || !(lo < hi) {
            return Err(Error::domain(format!("range needs finite lo < hi, got {lo}:{hi}")));
        }
        if n < 2 {
            return Err(Error::domain(format!("range needs at least 2 points, got {n}")));
        }
        if spacing == Spacing::Log && lo <= 0.0 {
            return Err(Error::domain(format!("log range needs lo > 0, got {lo}")));
        }
        Ok(Self { lo, hi, n, spacing })
    }

    /// Endpoints are reproduced exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = self.n - 1;
        (0..self.n)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == last {
                    return self.hi;
                }
                let f = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.lo + (self.hi - self.lo) * f,
                    Spacing::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * f).exp(),
                }
            })
            .collect()
    }
}

/// `LO:HI:N` or `LO:HI:N:log`.
impl FromStr for Range {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::domain(format!("malformed range {s:?}, expected LO:HI:N[:log]"));
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(_) => return Err(bad()),
        };
        Range::new(lo, hi, n, spacing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub var: SweepVar,
    pub range: Range,
}

impl Sweep {
    /// Parameter points in sweep order.
    pub fn params(&self, base: &PhysicalParams) -> Vec<PhysicalParams> {
        self.range.points().into_iter().map(|v| self.var.apply(base, v)).collect()
    }
}

/// A point whose configuration itself was rejected.
fn rejected_point(p: &PhysicalParams, e: &Error) -> ThermoPoint {
    ThermoPoint {
        field: p.field,
        temperature: p.temperature,
        beta: p.beta,
        omega0: p.omega0,
        volume: p.volume,
        fugacity: p.fugacity,
        phi_direct: None,
        phi_closed: None,
        m_closed: None,
        m_numeric: None,
        chi_numeric: None,
        chi_closed: None,
        chi_variant: None,
        chi_regime: None,
        u_plus: None,
        u_minus: None,
        direct_terms: None,
        tail_bound: None,
        pz_error: None,
        flags: vec![format!("config:{}", e.code())],
    }
}

fn eval(p: &PhysicalParams, opts: &PointOptions) -> ThermoPoint {
    match SystemConfig::from_params(p) {
        Ok(c) => evaluate_point(&c, opts),
        Err(e) => rejected_point(p, &e),
    }
}

/// Evaluate every point, in order. `workers` ≤ 1 runs on the calling thread;
/// otherwise a dedicated pool of that size is used. Results do not depend on
/// the worker count.
pub fn run_points(points: &[PhysicalParams], opts: &PointOptions, workers: usize) -> Result<Vec<ThermoPoint>> {
    if workers <= 1 {
        return Ok(points.iter().map(|p| eval(p, opts)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::domain(format!("worker pool: {e}")))?;
    Ok(pool.install(|| points.par_iter().map(|p| eval(p, opts)).collect()))
}

pub const THERMO_COLUMNS: [&str; 23] = [
    "index",
    "B",
    "T",
    "beta",
    "omega0",
    "V",
    "z",
    "u_plus",
    "u_minus",
    "Phi_direct",
    "Phi_closed",
    "M_closed",
    "M_numeric",
    "chi_numeric",
    "chi_closed",
    "chi_variant",
    "chi_regime",
    "direct_terms",
    "tail_bound",
    "B1",
    "B2",
    "ok",
    "flags",
];

/// Project points onto [`THERMO_COLUMNS`]. `critical` fills B1/B2.
pub fn thermo_table(points: &[ThermoPoint], critical: Option<&Result<CriticalFields>>) -> Table {
    let mut t = Table::new(THERMO_COLUMNS);
    for (i, p) in points.iter().enumerate() {
        let mut flags = p.flags.clone();
        let (b1, b2) = match critical {
            Some(Ok(c)) => (Cell::from(c.b1), Cell::from(c.b2)),
            Some(Err(e)) => {
                flags.push(format!("critical:{}", e.code()));
                (Cell::Null, Cell::Null)
            }
            None => (Cell::Null, Cell::Null),
        };
        let row = vec![
            Cell::Int(i as i64),
            p.field.into(),
            p.temperature.into(),
            p.beta.into(),
            p.omega0.into(),
            p.volume.into(),
            p.fugacity.into(),
            p.u_plus.into(),
            p.u_minus.into(),
            p.phi_direct.into(),
            p.phi_closed.into(),
            p.m_closed.into(),
            p.m_numeric.into(),
            p.chi_numeric.into(),
            p.chi_closed.into(),
            p.chi_variant.into(),
            p.chi_regime.map_or(Cell::Null, |r| r.label().into()),
            p.direct_terms.map_or(Cell::Null, |n| Cell::Int(n as i64)),
            p.tail_bound.into(),
            b1,
            b2,
            Cell::Int(i64::from(flags.is_empty())),
            flags.join(";").into(),
        ];
        t.push_row(row).expect("row width matches THERMO_COLUMNS");
    }
    t
}
