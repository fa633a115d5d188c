//! Circuit model of the aperture-coupled differential feed.
//!
//! A bottom-layer microstrip feed ends in an open stub roughly a quarter
//! wave past an H-shaped slot in the shared ground plane. The slot couples
//! magnetically into a top-layer line that splits to `n_dies` dies. At
//! circuit level this is:
//!
//! ```text
//!  feed ──[ series stub: -j Z0 cot(beta_f L_stub) ]──[ 1 : n_f/n_p ]──┬── Z_L
//!                                                                    L_c ∥ C_slot
//! ```
//!
//! with `Z_L = z0 / n_dies` the combined top-layer impedance, turn ratios
//! `n_p = L_S1 / 2W_T` and `n_f = 1 - exp(-L_S,eff / 4h_T)`, and a parallel
//! `L_c`-`C_slot` tank resonating at the half-wave slot frequency.
//!
//! The effective slot length folds the H-arms in as
//! `L_S,eff = L_S1 + 2 * kappa * L_S2`.

mod model;
mod optimize;

use thiserror::Error;

use crate::netcore::NetError;

pub use model::{
    build_circuit_model, differential_phase_error, frequency_sweep, input_reflection,
    resonance_frequency, tuning_family, worst_return_loss, Reflection, SweepPoint,
    DEFAULT_L_S1_GRID,
};
pub use optimize::{optimize_matching, Bounds, MatchResult, OptimizeOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApertureError {
    #[error("invalid geometry: {field}: {message}")]
    InvalidGeometry {
        field: &'static str,
        message: String,
    },
    #[error(
        "open stub of {l_stub} mm is a multiple of a half guided wavelength ({half_wavelength} mm); cot(beta*L) is singular"
    )]
    StubResonance { l_stub: f64, half_wavelength: f64 },
    #[error("invalid band: {0}")]
    InvalidBand(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error(
        "optimizer found no geometry better than 10 dB return loss (best {:.2} dB)",
        .0.worst_return_loss
    )]
    NoConvergence(Box<MatchResult>),
    #[error(transparent)]
    Net(#[from] NetError),
}

pub type Result<T> = std::result::Result<T, ApertureError>;

/// Physical layout of one aperture-coupled junction. Lengths in mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureGeometry {
    /// Main slot length.
    pub l_s1: f64,
    /// H-arm length; zero gives a plain rectangular slot.
    pub l_s2: f64,
    /// Slot width.
    pub w_s: f64,
    /// Top-layer line width.
    pub w_t: f64,
    /// Top substrate thickness.
    pub h_t: f64,
    pub eps_r: f64,
    /// Open-stub length past the slot.
    pub l_stub: f64,
    /// Feed impedance, ohm.
    pub z0: f64,
    /// Dies combined on the top layer.
    pub n_dies: u32,
}

impl ApertureGeometry {
    /// Design centre for [`ApertureGeometry::default`], Hz.
    pub const DEFAULT_CENTRE_HZ: f64 = 23e9;

    pub fn validate(&self) -> Result<()> {
        let check = |field: &'static str, v: f64, ok: bool, need: &str| {
            if ok && v.is_finite() {
                Ok(())
            } else {
                Err(ApertureError::InvalidGeometry {
                    field,
                    message: format!("must be {need}, got {v}"),
                })
            }
        };
        check("l_s1", self.l_s1, self.l_s1 > 0.0, "> 0")?;
        check("l_s2", self.l_s2, self.l_s2 >= 0.0, ">= 0")?;
        check("w_s", self.w_s, self.w_s > 0.0, "> 0")?;
        check("w_t", self.w_t, self.w_t > 0.0, "> 0")?;
        check("h_t", self.h_t, self.h_t > 0.0, "> 0")?;
        check("eps_r", self.eps_r, self.eps_r >= 1.0, ">= 1")?;
        check("l_stub", self.l_stub, self.l_stub > 0.0, "> 0")?;
        check("z0", self.z0, self.z0 > 0.0, "> 0")?;
        if !matches!(self.n_dies, 1 | 2 | 4) {
            return Err(ApertureError::InvalidGeometry {
                field: "n_dies",
                message: format!("must be 1, 2 or 4, got {}", self.n_dies),
            });
        }
        Ok(())
    }

    /// Effective slot length `L_S1 + 2 kappa L_S2`, mm.
    pub fn l_s_eff(&self, cal: &Calibration) -> f64 {
        self.l_s1 + 2.0 * cal.kappa * self.l_s2
    }

    /// Combined top-layer impedance `z0 / n_dies`, ohm.
    pub fn load_impedance(&self) -> f64 {
        self.z0 / f64::from(self.n_dies)
    }

    /// Quasi-static effective permittivity of the feed and top-layer lines.
    pub fn line_eps_eff(&self) -> Result<f64> {
        Ok(crate::netcore::microstrip_eps_eff(
            self.eps_r, self.w_t, self.h_t,
        )?)
    }

    /// Guided wavelength of the feed and top-layer lines, mm.
    pub fn guided_wavelength(&self, freq_hz: f64) -> Result<f64> {
        Ok(crate::netcore::guided_wavelength_mm(
            self.line_eps_eff()?,
            freq_hz,
        )?)
    }

    /// Feed phase constant, rad/mm.
    pub fn beta_f(&self, freq_hz: f64) -> Result<f64> {
        Ok(2.0 * std::f64::consts::PI / self.guided_wavelength(freq_hz)?)
    }

    /// Copy with the stub set to a quarter guided wavelength at `freq_hz`.
    pub fn with_quarter_wave_stub(mut self, freq_hz: f64) -> Result<Self> {
        self.l_stub = self.guided_wavelength(freq_hz)? / 4.0;
        Ok(self)
    }
}

impl Default for ApertureGeometry {
    /// Four-die junction with `L_S1 = W_T` (so `n_p = 0.5`), 2 mm H-arms on
    /// 10 mil eps_r = 3 and a quarter-wave stub at 23 GHz.
    fn default() -> Self {
        let base = Self {
            l_s1: 0.3,
            l_s2: 2.0,
            w_s: 0.1,
            w_t: 0.3,
            h_t: 0.254,
            eps_r: 3.0,
            l_stub: 1.0,
            z0: 50.0,
            n_dies: 4,
        };
        base.with_quarter_wave_stub(Self::DEFAULT_CENTRE_HZ)
            .expect("default geometry is valid")
    }
}

/// Constants that turn the proportional design relations into equalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// H-arm weight in the effective slot length.
    pub kappa: f64,
    /// Largest slot width considered when normalising coupling, mm.
    pub w_s_max: f64,
    /// Largest effective slot length considered when normalising coupling, mm.
    pub l_s_eff_max: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        let b = Bounds::default();
        Self {
            kappa: 1.0,
            w_s_max: 0.5,
            l_s_eff_max: b.l_s1.1 + 2.0 * b.l_s2.1,
        }
    }
}

/// Derived circuit quantities for one geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel {
    pub n_p: f64,
    pub n_f: f64,
    /// Normalised coupling in `[0, 1]`.
    pub c_c: f64,
    /// Slot inductance, nH.
    pub l_c: f64,
    /// Slot capacitance, pF.
    pub c_slot: f64,
    /// Slot resonance, Hz.
    pub f_slot: f64,
}

impl CouplingModel {
    pub fn from_geometry(geom: &ApertureGeometry, cal: &Calibration) -> Result<Self> {
        geom.validate()?;
        let l_eff = geom.l_s_eff(cal);
        let f_slot = slot_resonance(geom.eps_r, l_eff);
        let z_l = geom.load_impedance();
        let w = 2.0 * std::f64::consts::PI * f_slot;
        Ok(Self {
            n_p: turn_ratio_np(geom.l_s1, geom.w_t),
            n_f: turn_ratio_nf(l_eff, geom.h_t),
            c_c: coupling_coefficient(geom.eps_r, geom.w_s, l_eff, cal),
            // Tank impedance sqrt(L/C) equals the load it shunts.
            l_c: z_l / w * 1e9,
            c_slot: 1.0 / (w * z_l) * 1e12,
            f_slot,
        })
    }

    /// Feed-side transformer ratio `n_f / n_p`.
    pub fn transformer_ratio(&self) -> f64 {
        self.n_f / self.n_p
    }
}

/// Feed-to-slot turn ratio `L_S / 2W_T`.
pub fn turn_ratio_np(l_s: f64, w_t: f64) -> f64 {
    debug_assert!(w_t > 0.0);
    l_s / (2.0 * w_t)
}

/// Slot-to-top-layer turn ratio `1 - exp(-L_S / 4h_T)`.
pub fn turn_ratio_nf(l_s: f64, h_t: f64) -> f64 {
    debug_assert!(h_t > 0.0);
    -(-l_s / (4.0 * h_t)).exp_m1()
}

/// Un-normalised slot coupling `sqrt(eps_r) / sqrt((pi/W_S)^2 + (pi/L_S)^2)`, mm.
pub fn coupling_coefficient_raw(eps_r: f64, w_s: f64, l_s_eff: f64) -> f64 {
    use std::f64::consts::PI;
    eps_r.sqrt() / ((PI / w_s).powi(2) + (PI / l_s_eff).powi(2)).sqrt()
}

/// Slot coupling normalised by its supremum over the calibrated range, so the
/// result lies in `[0, 1]`.
pub fn coupling_coefficient(eps_r: f64, w_s: f64, l_s_eff: f64, cal: &Calibration) -> f64 {
    let sup = coupling_coefficient_raw(eps_r, cal.w_s_max, cal.l_s_eff_max);
    (coupling_coefficient_raw(eps_r, w_s, l_s_eff) / sup).clamp(0.0, 1.0)
}

/// Load `z_l` seen through the slot, `(n_f / n_p)^2 z_l`.
pub fn transformed_impedance(z_l: f64, n_f: f64, n_p: f64) -> f64 {
    debug_assert!(n_p > 0.0);
    (n_f / n_p).powi(2) * z_l
}

/// Feed input impedance with the open stub in series: `Z_s - j Z0 cot(beta_f L_stub)`.
pub fn stub_input_impedance(
    z_s: num_complex::Complex64,
    z0: f64,
    beta_f: f64,
    l_stub: f64,
) -> Result<num_complex::Complex64> {
    let theta = beta_f * l_stub;
    let (sin, cos) = theta.sin_cos();
    if sin.abs() < 1e-12 {
        return Err(ApertureError::StubResonance {
            l_stub,
            half_wavelength: std::f64::consts::PI / beta_f,
        });
    }
    Ok(z_s - num_complex::Complex64::new(0.0, z0 * cos / sin))
}

/// Half-wave slot resonance, Hz. The slot sits between dielectric and air
/// on average, so its effective permittivity is `(eps_r + 1) / 2`.
pub fn slot_resonance(eps_r: f64, l_s_eff: f64) -> f64 {
    let eps_slot = (eps_r + 1.0) / 2.0;
    crate::C0_MM_PER_S / (2.0 * l_s_eff * eps_slot.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn np_values() {
        assert_eq!(turn_ratio_np(0.3, 0.3), 0.5);
        assert_eq!(turn_ratio_np(1.0, 2.0), 0.25);
        assert_eq!(turn_ratio_np(0.0, 2.0), 0.0);
    }

    #[test]
    fn nf_values() {
        assert_relative_eq!(
            turn_ratio_nf(4.0, 1.0),
            1.0 - (-1.0f64).exp(),
            epsilon = 1e-15
        );
        assert_relative_eq!(turn_ratio_nf(4.0, 1.0), 0.6321, epsilon = 1e-4);
        assert_eq!(turn_ratio_nf(0.0, 0.254), 0.0);
        assert!(turn_ratio_nf(100.0, 0.254) > 0.999_999);
    }

    #[test]
    fn coupling_square_slot() {
        let l = 1.7;
        let raw = coupling_coefficient_raw(3.0, l, l);
        assert_relative_eq!(raw, 3f64.sqrt() * l / (PI * 2f64.sqrt()), epsilon = 1e-12);
    }

    #[test]
    fn coupling_grows_with_slot_and_arms() {
        let cal = Calibration::default();
        let mut prev = 0.0;
        for k in 1..50 {
            let c = coupling_coefficient(3.0, 0.1, 0.1 * k as f64, &cal);
            assert!(c > prev && c <= 1.0);
            prev = c;
        }
        let g = ApertureGeometry::default();
        let more = ApertureGeometry { l_s2: 2.5, ..g };
        let a = CouplingModel::from_geometry(&g, &cal).unwrap().c_c;
        let b = CouplingModel::from_geometry(&more, &cal).unwrap().c_c;
        assert!(b > a);
    }

    #[test]
    fn transformed_values() {
        assert_eq!(transformed_impedance(12.5, 1.0, 0.5), 50.0);
        assert_eq!(transformed_impedance(33.0, 0.7, 0.7), 33.0);
        assert_relative_eq!(
            transformed_impedance(50.0, 0.8, 0.5),
            128.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn stub_values() {
        let zs = Complex64::new(48.0, 3.0);
        let beta = 2.0;
        let z = stub_input_impedance(zs, 50.0, beta, PI / 2.0 / beta).unwrap();
        assert!((z - zs).norm() < 1e-12);
        let z = stub_input_impedance(zs, 50.0, beta, PI / 4.0 / beta).unwrap();
        assert!((z - (zs - Complex64::new(0.0, 50.0))).norm() < 1e-12);
        // Just short of a quarter wave the stub is capacitive (negative X).
        let z = stub_input_impedance(zs, 50.0, beta, 0.95 * PI / 2.0 / beta).unwrap();
        assert!(z.im < zs.im);
        let err = stub_input_impedance(zs, 50.0, beta, PI / beta).unwrap_err();
        assert!(matches!(err, ApertureError::StubResonance { .. }));
        assert!(err.to_string().contains("half guided wavelength"));
    }

    #[test]
    fn geometry_validation() {
        let g = ApertureGeometry::default();
        assert!(g.validate().is_ok());
        assert!(ApertureGeometry { n_dies: 3, ..g }.validate().is_err());
        assert!(ApertureGeometry { w_t: 0.0, ..g }.validate().is_err());
        assert!(ApertureGeometry { eps_r: 0.5, ..g }.validate().is_err());
        assert!(ApertureGeometry { l_s2: 0.0, ..g }.validate().is_ok());
    }

    #[test]
    fn tank_is_sized_to_resonate_at_slot_frequency() {
        let cm =
            CouplingModel::from_geometry(&ApertureGeometry::default(), &Calibration::default())
                .unwrap();
        let f = 1.0 / (2.0 * PI * (cm.l_c * 1e-9 * cm.c_slot * 1e-12).sqrt());
        assert_relative_eq!(f, cm.f_slot, max_relative = 1e-12);
        assert_relative_eq!(cm.n_p, 0.5);
        assert!(cm.f_slot > 20e9 && cm.f_slot < 26e9);
    }
}
