//! Ideal equal-split Wilkinson divider.
//!
//! Two lossless arms of impedance `z0 * sqrt(2)`, a quarter wavelength long at
//! the design frequency, joined at the output ports by a `2 * z0` resistor.
//! The 3-port response at any frequency comes from nodal analysis of that
//! circuit, which is equivalent to the usual even/odd-mode decomposition.

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::{check_freq, NetError, Result, ScatteringMatrix3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilkinsonDivider {
    /// Port reference impedance, ohm.
    pub z0: f64,
    /// Design (centre) frequency, Hz.
    pub f0: f64,
}

impl WilkinsonDivider {
    pub fn new(z0: f64, f0: f64) -> Result<Self> {
        check_freq(f0)?;
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(NetError::BadReference(z0));
        }
        Ok(Self { z0, f0 })
    }

    pub fn arm_impedance(&self) -> f64 {
        self.z0 * std::f64::consts::SQRT_2
    }

    pub fn isolation_resistance(&self) -> f64 {
        2.0 * self.z0
    }

    /// Electrical length of each arm at `freq_hz`, radians.
    pub fn arm_angle(&self, freq_hz: f64) -> f64 {
        std::f64::consts::FRAC_PI_2 * freq_hz / self.f0
    }

    pub fn scattering(&self, freq_hz: f64) -> Result<ScatteringMatrix3> {
        check_freq(freq_hz)?;
        let theta = self.arm_angle(freq_hz);
        let (sin, cos) = theta.sin_cos();
        if sin.abs() < 1e-12 {
            return Err(NetError::Singular(
                "Wilkinson arm is a multiple of a half wavelength",
            ));
        }
        let yc = 1.0 / self.arm_impedance();
        let j = Complex64::i();
        // Lossless line admittance parameters: y11 = y22 = -j Yc cot, y12 = j Yc csc.
        let y_self = -j * yc * (cos / sin);
        let y_mut = j * yc / sin;
        let g = Complex64::new(1.0 / self.isolation_resistance(), 0.0);

        let y = Matrix3::new(
            2.0 * y_self,
            y_mut,
            y_mut,
            y_mut,
            y_self + g,
            -g,
            y_mut,
            -g,
            y_self + g,
        );
        let z0 = Complex64::new(self.z0, 0.0);
        let eye = Matrix3::<Complex64>::identity();
        let zy = y * z0;
        let inv = (eye + zy)
            .try_inverse()
            .ok_or(NetError::Singular("I + Z0*Y is not invertible"))?;
        let s = (eye - zy) * inv;
        let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = s[(r, c)];
            }
        }
        Ok(ScatteringMatrix3 {
            s: out,
            zref: self.z0,
        })
    }
}

/// S-matrix of an ideal Wilkinson designed for `f0`, evaluated at `freq`.
pub fn wilkinson_ideal(z0: f64, f0: f64, freq: f64) -> Result<ScatteringMatrix3> {
    WilkinsonDivider::new(z0, f0)?.scattering(freq)
}
