//! Quasi-static microstrip approximations.
//!
//! Hammerstad's closed forms for a zero-thickness strip of width `w` over a
//! substrate of height `h` and relative permittivity `eps_r`. Dispersion is
//! ignored; the values are adequate for the few-wavelength lines modelled
//! here.

use super::{check_freq, NetError, Result};
use crate::C0_MM_PER_S;

fn check_geometry(eps_r: f64, width: f64, height: f64) -> Result<()> {
    if !(eps_r >= 1.0) {
        return Err(NetError::InvalidArgument(format!(
            "eps_r must be >= 1, got {eps_r}"
        )));
    }
    if !(width > 0.0 && height > 0.0) {
        return Err(NetError::InvalidArgument(format!(
            "strip width and height must be > 0, got w={width}, h={height}"
        )));
    }
    Ok(())
}

pub fn microstrip_eps_eff(eps_r: f64, width: f64, height: f64) -> Result<f64> {
    check_geometry(eps_r, width, height)?;
    let u = width / height;
    let mut fill = (1.0 + 12.0 / u).powf(-0.5);
    if u < 1.0 {
        fill += 0.04 * (1.0 - u).powi(2);
    }
    Ok((eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * fill)
}

/// Characteristic impedance of the strip, ohm.
pub fn microstrip_z0(eps_r: f64, width: f64, height: f64) -> Result<f64> {
    let eps_eff = microstrip_eps_eff(eps_r, width, height)?;
    let u = width / height;
    let eta0 = 376.730_313_668;
    let z = if u <= 1.0 {
        60.0 / eps_eff.sqrt() * (8.0 / u + u / 4.0).ln()
    } else {
        eta0 / (eps_eff.sqrt() * (u + 1.393 + 0.667 * (u + 1.444).ln()))
    };
    Ok(z)
}

/// Guided wavelength in mm for a given effective permittivity.
pub fn guided_wavelength_mm(eps_eff: f64, freq_hz: f64) -> Result<f64> {
    check_freq(freq_hz)?;
    if !(eps_eff >= 1.0) {
        return Err(NetError::InvalidArgument(format!(
            "eps_eff must be >= 1, got {eps_eff}"
        )));
    }
    Ok(C0_MM_PER_S / (freq_hz * eps_eff.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_eff_lies_between_air_and_substrate() {
        for (er, w, h) in [(3.0, 0.2, 0.254), (6.15, 0.2, 0.127), (10.2, 2.0, 0.1)] {
            let e = microstrip_eps_eff(er, w, h).unwrap();
            assert!(e > (er + 1.0) / 2.0 && e < er, "{e}");
        }
    }

    #[test]
    fn wide_strip_approaches_substrate() {
        let e = microstrip_eps_eff(6.15, 1000.0, 0.127).unwrap();
        assert!((e - 6.15).abs() < 0.1);
    }

    #[test]
    fn fifty_ohm_on_thin_ro3006() {
        // 0.2 mm on 5 mil at eps_r 6.15 lands close to 50 ohm.
        let z = microstrip_z0(6.15, 0.2, 0.127).unwrap();
        assert!((z - 50.0).abs() < 4.0, "{z}");
    }

    #[test]
    fn free_space_wavelength() {
        let l = guided_wavelength_mm(1.0, 30e9).unwrap();
        assert!((l - 9.993_081_933).abs() < 1e-6);
        assert!(guided_wavelength_mm(1.0, 0.0).is_err());
        assert!(microstrip_eps_eff(0.5, 1.0, 1.0).is_err());
    }
}
