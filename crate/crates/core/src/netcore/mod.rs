//! Frequency-domain two-port network algebra.
//!
//! Networks are represented by their chain (ABCD) matrix at a single
//! frequency. Lines, lumped series/shunt elements and ideal transformers are
//! built here and cascaded by matrix product; S-parameters are derived on
//! demand against a real reference impedance.

mod microstrip;
mod scattering;
mod tline;
mod twoport;
mod wilkinson;

use num_complex::Complex64;
use thiserror::Error;

pub use microstrip::{guided_wavelength_mm, microstrip_eps_eff, microstrip_z0};
pub use scattering::{return_loss_db, ScatteringMatrix, ScatteringMatrix3};
pub use tline::{make_tline, TransmissionLineSpec, DB_PER_NEPER};
pub use twoport::{
    cascade, cascade_all, ideal_transformer, input_impedance, series_element, shunt_element,
    to_scattering, Load, TwoPortNetwork,
};
pub use wilkinson::{wilkinson_ideal, WilkinsonDivider};

/// Complex impedance in ohms.
pub type Impedance = Complex64;
/// Complex admittance in siemens.
pub type Admittance = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("frequency must be positive and finite, got {0} Hz")]
    NonPositiveFrequency(f64),
    #[error("cascade frequency mismatch: {first} Hz vs {second} Hz")]
    FrequencyMismatch { first: f64, second: f64 },
    #[error("invalid transmission line: {0}")]
    InvalidLine(String),
    #[error("ideal transformer turn ratio must be nonzero and finite, got {0}")]
    ZeroTurnRatio(f64),
    #[error("reference impedance must be positive, got {0} ohm")]
    BadReference(f64),
    #[error("input looks like an open circuit (c*Z_L + d vanishes)")]
    OpenCircuit,
    #[error("network is singular for this conversion: {0}")]
    Singular(&'static str),
    #[error("T-junction needs at least one branch")]
    ZeroBranches,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, NetError>;

/// Characteristic impedance seen at a T-junction feeding `branches`
/// matched branches of impedance `z0` in parallel.
pub fn t_junction_impedance(z0: f64, branches: u32) -> Result<f64> {
    if branches == 0 {
        return Err(NetError::ZeroBranches);
    }
    Ok(z0 / f64::from(branches))
}

pub(crate) fn check_freq(freq_hz: f64) -> Result<()> {
    if freq_hz.is_finite() && freq_hz > 0.0 {
        Ok(())
    } else {
        Err(NetError::NonPositiveFrequency(freq_hz))
    }
}
