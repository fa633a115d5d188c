use num_complex::Complex64;

use super::{ApertureError, ApertureGeometry, Calibration, CouplingModel, Result};
use crate::netcore::{
    cascade_all, ideal_transformer, input_impedance, series_element, shunt_element, TwoPortNetwork,
};

/// Feed-to-top-layer two-port at `freq_hz`; terminate port 2 in
/// [`ApertureGeometry::load_impedance`] to get the feed input impedance.
pub fn build_circuit_model(
    geom: &ApertureGeometry,
    freq_hz: f64,
    cal: &Calibration,
) -> Result<TwoPortNetwork> {
    let cm = CouplingModel::from_geometry(geom, cal)?;
    let beta = geom.beta_f(freq_hz)?;
    let stub_z = super::stub_input_impedance(Complex64::new(0.0, 0.0), geom.z0, beta, geom.l_stub)?;

    let w = 2.0 * std::f64::consts::PI * freq_hz;
    let y_tank = Complex64::new(0.0, w * cm.c_slot * 1e-12 - 1.0 / (w * cm.l_c * 1e-9));

    let parts = [
        series_element(stub_z, freq_hz)?,
        ideal_transformer(cm.transformer_ratio(), freq_hz)?,
        shunt_element(y_tank, freq_hz)?,
    ];
    Ok(cascade_all(&parts)?)
}

/// Feed input impedance and reflection coefficient (against `geom.z0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub z_in: Complex64,
    pub gamma: Complex64,
}

pub fn input_reflection(
    geom: &ApertureGeometry,
    freq_hz: f64,
    cal: &Calibration,
) -> Result<Reflection> {
    let net = build_circuit_model(geom, freq_hz, cal)?;
    let z_in = input_impedance(&net, geom.load_impedance())?;
    let gamma = (z_in - geom.z0) / (z_in + geom.z0);
    Ok(Reflection { z_in, gamma })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub freq_hz: f64,
    pub result: Result<Reflection>,
}

impl SweepPoint {
    pub fn return_loss_db(&self) -> Option<f64> {
        self.result
            .as_ref()
            .ok()
            .map(|r| crate::netcore::return_loss_db(r.gamma))
    }
}

fn check_band(band: (f64, f64)) -> Result<()> {
    let (lo, hi) = band;
    if lo > 0.0 && hi >= lo && hi.is_finite() {
        Ok(())
    } else {
        Err(ApertureError::InvalidBand(format!("[{lo}, {hi}] Hz")))
    }
}

fn grid(band: (f64, f64), points: usize) -> impl Iterator<Item = f64> {
    let step = if points > 1 {
        (band.1 - band.0) / (points - 1) as f64
    } else {
        0.0
    };
    (0..points).map(move |k| {
        if k + 1 == points && points > 1 {
            band.1
        } else {
            band.0 + step * k as f64
        }
    })
}

/// Evenly spaced locus of `Z_in(f)` and `S11(f)`. Points hitting a stub
/// singularity carry the error and the sweep continues.
pub fn frequency_sweep(
    geom: &ApertureGeometry,
    band: (f64, f64),
    points: usize,
    cal: &Calibration,
) -> Result<Vec<SweepPoint>> {
    geom.validate()?;
    check_band(band)?;
    if points < 2 {
        return Err(ApertureError::InvalidBand(format!(
            "a sweep needs at least 2 points, got {points}"
        )));
    }
    Ok(grid(band, points)
        .map(|f| SweepPoint {
            freq_hz: f,
            result: input_reflection(geom, f, cal),
        })
        .collect())
}

/// `|S11|` with singular points counted as total reflection.
fn gamma_mag(geom: &ApertureGeometry, f: f64, cal: &Calibration) -> f64 {
    input_reflection(geom, f, cal).map_or(1.0, |r| r.gamma.norm())
}

/// Worst (smallest) return loss over `points` samples of `band`, dB.
pub fn worst_return_loss(
    geom: &ApertureGeometry,
    band: (f64, f64),
    points: usize,
    cal: &Calibration,
) -> f64 {
    let worst = grid(band, points.max(1))
        .map(|f| gamma_mag(geom, f, cal))
        .fold(0.0, f64::max);
    -20.0 * worst.log10()
}

/// Frequency of minimum `|S11|` inside `window`, Hz.
///
/// A coarse scan picks the best sample; golden-section search then refines
/// between its neighbours.
pub fn resonance_frequency(
    geom: &ApertureGeometry,
    window: (f64, f64),
    cal: &Calibration,
) -> Result<f64> {
    geom.validate()?;
    check_band(window)?;
    const COARSE: usize = 401;
    let freqs: Vec<f64> = grid(window, COARSE).collect();
    let mags: Vec<f64> = freqs.iter().map(|&f| gamma_mag(geom, f, cal)).collect();
    let best = mags
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map_or(0, |(i, _)| i);
    let mut a = freqs[best.saturating_sub(1)];
    let mut b = freqs[(best + 1).min(COARSE - 1)];

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (gamma_mag(geom, c, cal), gamma_mag(geom, d, cal));
    while (b - a) > 1e-9 * window.1 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gamma_mag(geom, c, cal);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gamma_mag(geom, d, cal);
        }
    }
    Ok(0.5 * (a + b))
}

/// Main-slot lengths (mm) over which resonance tracking is checked: from
/// `L_S1 = W_T` of the default geometry up to four times that.
pub const DEFAULT_L_S1_GRID: [f64; 19] = [
    0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00, 1.05,
    1.10, 1.15, 1.20,
];

/// Geometries that retune `base` to each main-slot length while holding
/// `L_S1 / W_T = 1` (so `n_p = 0.5`) and moving the stub to a quarter wave at
/// the new slot resonance.
pub fn tuning_family(
    base: &ApertureGeometry,
    l_s1_values: &[f64],
    cal: &Calibration,
) -> Result<Vec<ApertureGeometry>> {
    l_s1_values
        .iter()
        .map(|&l| {
            let g = ApertureGeometry {
                l_s1: l,
                w_t: l,
                ..*base
            };
            let f_slot = CouplingModel::from_geometry(&g, cal)?.f_slot;
            g.with_quarter_wave_stub(f_slot)
        })
        .collect()
}

/// Deviation from an exact 180 degree split between the two top-layer
/// branches when one is `asym_dl` mm longer, degrees.
pub fn differential_phase_error(
    geom: &ApertureGeometry,
    freq_hz: f64,
    asym_dl: f64,
) -> Result<f64> {
    Ok(360.0 * asym_dl / geom.guided_wavelength(freq_hz)?)
}
