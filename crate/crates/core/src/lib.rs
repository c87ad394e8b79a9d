//! Landau levels, momentum-space eigenfunctions and high-temperature
//! magnetism of a spinless electron in a 2D harmonic trap plus a constant
//! magnetic field, on a space with a minimal length (β-deformed commutators).
//!
//! All quantities are dimensionless: ℏ = m = k_B = 1 and q/(2mc) = 1, so the
//! cyclotron frequency ω equals the field `B`. See [`config`].

pub mod config;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod special;
pub mod spectrum;
pub mod sweep;
pub mod table;
pub mod thermo;
pub mod wavefn;

pub use config::{make_config, minimal_length, thermal_wavelength, GupParams, SystemConfig};
pub use error::{Error, Result};
pub use spectrum::{Branch, QuantumNumbers};
pub use wavefn::RadialWavefunction;
