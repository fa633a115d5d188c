use num_complex::Complex64;

use super::{check_freq, NetError, Result, TwoPortNetwork};
use crate::C0_MM_PER_S;

/// dB per neper, `20 / ln 10`.
pub const DB_PER_NEPER: f64 = 20.0 / std::f64::consts::LN_10;

/// Uniform TEM/quasi-TEM line section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionLineSpec {
    /// Characteristic impedance, ohm.
    pub z0: f64,
    pub eps_eff: f64,
    /// Attenuation, dB/mm.
    pub alpha0: f64,
    /// Physical length, mm.
    pub length: f64,
}

impl TransmissionLineSpec {
    pub fn new(z0: f64, eps_eff: f64, alpha0: f64, length: f64) -> Result<Self> {
        let spec = Self {
            z0,
            eps_eff,
            alpha0,
            length,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lossless(z0: f64, eps_eff: f64, length: f64) -> Result<Self> {
        Self::new(z0, eps_eff, 0.0, length)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(NetError::InvalidLine(msg));
        if !(self.z0 > 0.0 && self.z0.is_finite()) {
            return bad(format!("z0 must be > 0, got {}", self.z0));
        }
        if !(self.eps_eff >= 1.0 && self.eps_eff.is_finite()) {
            return bad(format!("eps_eff must be >= 1, got {}", self.eps_eff));
        }
        if !(self.alpha0 >= 0.0 && self.alpha0.is_finite()) {
            return bad(format!("alpha0 must be >= 0, got {}", self.alpha0));
        }
        if !(self.length >= 0.0 && self.length.is_finite()) {
            return bad(format!("length must be >= 0, got {}", self.length));
        }
        Ok(())
    }

    /// Phase constant in rad/mm.
    pub fn beta(&self, freq_hz: f64) -> f64 {
        2.0 * std::f64::consts::PI * freq_hz * self.eps_eff.sqrt() / C0_MM_PER_S
    }

    /// Attenuation constant in Np/mm.
    pub fn alpha_np(&self) -> f64 {
        self.alpha0 / DB_PER_NEPER
    }

    /// Guided wavelength in mm.
    pub fn wavelength(&self, freq_hz: f64) -> f64 {
        C0_MM_PER_S / (freq_hz * self.eps_eff.sqrt())
    }

    pub fn with_length(mut self, length: f64) -> Self {
        self.length = length;
        self
    }
}

/// Chain matrix of a lossy line: `[[cosh gl, Z0 sinh gl], [sinh gl / Z0, cosh gl]]`.
pub fn make_tline(spec: &TransmissionLineSpec, freq_hz: f64) -> Result<TwoPortNetwork> {
    spec.validate()?;
    check_freq(freq_hz)?;
    let gl = Complex64::new(spec.alpha_np(), spec.beta(freq_hz)) * spec.length;
    let (ch, sh) = (gl.cosh(), gl.sinh());
    Ok(TwoPortNetwork::from_abcd(
        ch,
        sh * spec.z0,
        sh / spec.z0,
        ch,
        freq_hz,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{cascade, input_impedance, to_scattering, Load};
    use super::*;
    use approx::assert_relative_eq;

    const F: f64 = 19.5e9;

    fn line(z0: f64, eps: f64, alpha: f64, wavelengths: f64) -> TransmissionLineSpec {
        let l = TransmissionLineSpec::new(z0, eps, alpha, 0.0).unwrap();
        let lambda = l.wavelength(F);
        l.with_length(wavelengths * lambda)
    }

    #[test]
    fn zero_length_is_identity() {
        let n = make_tline(&line(50.0, 3.0, 0.1, 0.0), F).unwrap();
        assert_eq!(n, TwoPortNetwork::identity(F).unwrap());
    }

    #[test]
    fn quarter_wave_transforms() {
        // Z0^2 / ZL = 2500 / 100.
        let n = make_tline(&line(50.0, 2.2, 0.0, 0.25), F).unwrap();
        let z = input_impedance(&n, 100.0).unwrap();
        assert_relative_eq!(z.re, 25.0, epsilon = 1e-9);
        assert!(z.im.abs() < 1e-9);
    }

    #[test]
    fn half_wave_repeats_load() {
        let zl = Complex64::new(33.0, -12.0);
        for z0 in [20.0, 50.0, 120.0] {
            let n = make_tline(&line(z0, 4.0, 0.0, 0.5), F).unwrap();
            let z = input_impedance(&n, zl).unwrap();
            assert!((z - zl).norm() < 1e-9, "z0={z0}: {z}");
        }
    }

    #[test]
    fn open_quarter_wave_stub_is_short() {
        let n = make_tline(&line(50.0, 3.0, 0.0, 0.25), F).unwrap();
        let z = input_impedance(&n, Load::Open).unwrap();
        assert!(z.norm() < 1e-9);
    }

    #[test]
    fn eighths_cascade_to_quarter() {
        let eighth = make_tline(&line(50.0, 3.0, 0.0, 0.125), F).unwrap();
        let quarter = make_tline(&line(50.0, 3.0, 0.0, 0.25), F).unwrap();
        let both = cascade(&eighth, &eighth).unwrap();
        assert!(both.max_abs_diff(&quarter) < 1e-9);
    }

    #[test]
    fn matched_lossy_line_attenuates() {
        let spec = TransmissionLineSpec::new(50.0, 3.0, 0.1, 30.0).unwrap();
        let s = to_scattering(&make_tline(&spec, F).unwrap(), 50.0).unwrap();
        assert_relative_eq!(s.s21.norm(), 10f64.powf(-3.0 / 20.0), epsilon = 1e-12);
        assert!(s.s11.norm() < 1e-12);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(TransmissionLineSpec::new(0.0, 3.0, 0.0, 1.0).is_err());
        assert!(TransmissionLineSpec::new(50.0, 0.5, 0.0, 1.0).is_err());
        assert!(TransmissionLineSpec::new(50.0, 3.0, -0.1, 1.0).is_err());
        assert!(TransmissionLineSpec::new(50.0, 3.0, 0.0, -1.0).is_err());
        let ok = TransmissionLineSpec::lossless(50.0, 3.0, 1.0).unwrap();
        assert_eq!(
            make_tline(&ok, 0.0),
            Err(NetError::NonPositiveFrequency(0.0))
        );
    }
}
