//! Scenario files.
//!
//! A scenario is a TOML document with the tables `[array]`, `[element]`,
//! `[aperture]`, `[pattern]`, `[sweeps]` and `[outputs]`. Every key is
//! optional and unknown keys are rejected. Parsing fills defaults, then
//! [`ScenarioConfig::resolve`] checks every model precondition and reports
//! violations by key path, for example `array.m_dies`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aperture::{
    ApertureError, ApertureGeometry, Bounds, Calibration, OptimizeOptions, DEFAULT_L_S1_GRID,
};
use crate::array_budget::{angle_grid, BudgetError, ElementSpec, SteeringState};
use crate::pdn_topology::{die_count, ArraySpec, LineDefaults, TopologyError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{key}: {message}")]
    Parse { key: String, message: String },
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    /// Dotted key path the error refers to, empty for I/O errors.
    pub fn key(&self) -> &str {
        match self {
            ConfigError::Io { .. } => "",
            ConfigError::Parse { key, .. } | ConfigError::Invalid { key, .. } => key,
        }
    }
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArrayConfig {
    pub n_total: u32,
    pub m_per_die: u32,
    /// Optional cross-check of `n_total / m_per_die`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_dies: Option<u32>,
    /// Element pitch, mm.
    pub d: f64,
    /// Trace width, mm.
    pub w_trace: f64,
    /// dB/mm.
    pub alpha0: f64,
    /// Hz.
    pub freq_lo: f64,
    /// Overrides the wavelength derived from `w_trace` and `freq_lo`, mm.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_g: Option<f64>,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        let l = LineDefaults::default();
        Self {
            n_total: 16,
            m_per_die: 4,
            m_dies: None,
            d: l.d,
            w_trace: l.w_trace,
            alpha0: l.alpha0,
            freq_lo: l.freq_lo,
            lambda_w: None,
            lambda_g: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElementConfig {
    /// dBm.
    pub p_sat: f64,
    /// Per-element gain, dB. Mutually exclusive with `array_gain_db`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_el: Option<f64>,
    /// Measured gain of the whole array, dB; sets `g_el = G - 10 log10 N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub array_gain_db: Option<f64>,
    /// mW.
    pub p_dc_tx: f64,
    /// mW.
    pub p_dc_rx: f64,
    /// Measured EIRP used for efficiency instead of the model value, dBm.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eirp_measured: Option<f64>,
    pub routing_loss_db: f64,
    /// Frequency for the compensation-power estimate, Hz.
    pub freq_rf: f64,
}

impl Default for ElementConfig {
    fn default() -> Self {
        let e = ElementSpec::default();
        Self {
            p_sat: e.p_sat,
            g_el: None,
            array_gain_db: None,
            p_dc_tx: e.p_dc_tx,
            p_dc_rx: e.p_dc_rx,
            eirp_measured: None,
            routing_loss_db: 0.0,
            freq_rf: 78.5e9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ApertureConfig {
    pub l_s1: f64,
    pub l_s2: f64,
    pub w_s: f64,
    pub w_t: f64,
    pub h_t: f64,
    pub eps_r: f64,
    /// Defaults to a quarter guided wavelength at `design_freq`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_stub: Option<f64>,
    pub z0: f64,
    pub n_dies: u32,
    pub design_freq: f64,
    pub kappa: f64,
    pub match_band: [f64; 2],
    pub sweep_band: [f64; 2],
    pub sweep_points: usize,
    pub max_evals: usize,
}

impl Default for ApertureConfig {
    fn default() -> Self {
        let g = ApertureGeometry::default();
        Self {
            l_s1: g.l_s1,
            l_s2: g.l_s2,
            w_s: g.w_s,
            w_t: g.w_t,
            h_t: g.h_t,
            eps_r: g.eps_r,
            l_stub: None,
            z0: g.z0,
            n_dies: g.n_dies,
            design_freq: ApertureGeometry::DEFAULT_CENTRE_HZ,
            kappa: Calibration::default().kappa,
            match_band: [22e9, 24e9],
            sweep_band: [18e9, 28e9],
            sweep_points: 101,
            max_evals: OptimizeOptions::default().max_evals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatternConfig {
    pub n_elements: u32,
    pub d_over_lambda: f64,
    /// Degrees.
    pub theta0: f64,
    pub phase_bits: u32,
    pub amp_err_db: f64,
    pub seed: u64,
    /// Angle grid spacing, degrees.
    pub step_deg: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            n_elements: 4,
            d_over_lambda: 0.5,
            theta0: 0.0,
            phase_bits: 0,
            amp_err_db: 0.0,
            seed: 0,
            step_deg: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Element counts; empty means `array.n_total` only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<u32>,
    /// Elements per die; empty means `array.m_per_die` only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<u32>,
    /// Main-slot lengths for the locus and resonance sweeps, mm.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub l_s1: Vec<f64>,
    /// Extra steering angles for the pattern, degrees.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub theta0: Vec<f64>,
    /// Defaults to `array.freq_lo` +/- 10 %.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flatness_band: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Used when no `--out` is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: None,
            svg: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub array: ArrayConfig,
    pub element: ElementConfig,
    pub aperture: ApertureConfig,
    pub pattern: PatternConfig,
    pub sweeps: SweepConfig,
    pub outputs: OutputConfig,
}

/// A scenario with every model input built and checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub spec: ArraySpec,
    pub element: ElementSpec,
    pub eirp_measured: Option<f64>,
    pub routing_loss_db: f64,
    pub freq_rf: f64,
    pub geometry: ApertureGeometry,
    pub bounds: Bounds,
    pub optimize: OptimizeOptions,
    pub match_band: (f64, f64),
    pub sweep_band: (f64, f64),
    pub sweep_points: usize,
    pub n_elements: u32,
    pub d_over_lambda: f64,
    pub steering: Vec<SteeringState>,
    pub angles: Vec<f64>,
    pub n_values: Vec<u32>,
    pub m_values: Vec<u32>,
    pub l_s1_values: Vec<f64>,
    pub flatness_band: (f64, f64),
    pub svg: bool,
}

/// Reads, parses and validates a scenario file.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = parse_config_str(&text)?;
    cfg.resolve()?;
    Ok(cfg)
}

/// Parses scenario text without running [`ScenarioConfig::resolve`].
pub fn parse_config_str(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let de = toml::Deserializer::new(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        let message = e.inner().message().trim().to_string();
        ConfigError::Parse {
            key: if key == "." { "(root)".into() } else { key },
            message,
        }
    })
}

fn band(key: &str, b: [f64; 2]) -> Result<(f64, f64), ConfigError> {
    if b[0] > 0.0 && b[1] >= b[0] && b[1].is_finite() {
        Ok((b[0], b[1]))
    } else {
        Err(invalid(
            key,
            format!("expected 0 < lo <= hi, got [{}, {}]", b[0], b[1]),
        ))
    }
}

fn topology_key(e: &TopologyError) -> String {
    match e {
        TopologyError::InvalidSpec { field, .. } => format!("array.{field}"),
        TopologyError::NotPowerOfTwo(_) => "array.m_dies".into(),
        TopologyError::NotDivisible { .. } => "array.m_per_die".into(),
        _ => "array".into(),
    }
}

fn topology_err(e: TopologyError) -> ConfigError {
    let key = topology_key(&e);
    let msg = e.to_string();
    let msg = msg.strip_prefix("m_dies: ").unwrap_or(&msg).to_string();
    invalid(key, msg)
}

fn aperture_err(e: ApertureError) -> ConfigError {
    match e {
        ApertureError::InvalidGeometry { field, message } => {
            invalid(format!("aperture.{field}"), message)
        }
        other => invalid("aperture", other.to_string()),
    }
}

fn budget_err(table: &str, e: BudgetError) -> ConfigError {
    match e {
        BudgetError::InvalidArgument { field, message } => {
            invalid(format!("{table}.{field}"), message)
        }
        other => invalid(table, other.to_string()),
    }
}

impl ScenarioConfig {
    /// Minimal scenario for `n_total` elements at `m_per_die` per die.
    pub fn with_array(n_total: u32, m_per_die: u32) -> Self {
        let mut c = Self::default();
        c.array.n_total = n_total;
        c.array.m_per_die = m_per_die;
        c
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let a = &self.array;
        let m_dies = die_count(a.n_total, a.m_per_die).map_err(topology_err)?;
        if let Some(given) = a.m_dies {
            if !given.is_power_of_two() {
                return Err(invalid(
                    "array.m_dies",
                    format!("{given} is not a power of two"),
                ));
            }
            if given != m_dies {
                return Err(invalid(
                    "array.m_dies",
                    format!(
                        "{given} disagrees with n_total / m_per_die = {} / {} = {m_dies}",
                        a.n_total, a.m_per_die
                    ),
                ));
            }
        }
        let lines = LineDefaults {
            freq_lo: a.freq_lo,
            d: a.d,
            w_trace: a.w_trace,
            alpha0: a.alpha0,
            ..LineDefaults::default()
        };
        for (key, v) in [("array.freq_lo", a.freq_lo), ("array.w_trace", a.w_trace)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(key, format!("must be > 0, got {v}")));
            }
        }
        let lambda_w = match a.lambda_w {
            Some(v) => v,
            None => lines
                .lambda_w()
                .map_err(|e| invalid("array.w_trace", e.to_string()))?,
        };
        let lambda_g = match a.lambda_g {
            Some(v) => v,
            None => lines
                .lambda_g()
                .map_err(|e| invalid("array.w_trace", e.to_string()))?,
        };
        let spec = ArraySpec::new(
            a.n_total,
            a.m_per_die,
            a.d,
            a.w_trace,
            a.alpha0,
            lambda_w,
            lambda_g,
            a.freq_lo,
        )
        .map_err(topology_err)?;

        let e = &self.element;
        let g_el = match (e.g_el, e.array_gain_db) {
            (Some(_), Some(_)) => {
                return Err(invalid(
                    "element.array_gain_db",
                    "give either g_el or array_gain_db, not both",
                ))
            }
            (Some(g), None) => g,
            (None, Some(ga)) => ElementSpec::gain_from_array(ga, a.n_total),
            (None, None) => ElementSpec::default().g_el,
        };
        let element = ElementSpec {
            p_sat: e.p_sat,
            g_el,
            p_dc_tx: e.p_dc_tx,
            p_dc_rx: e.p_dc_rx,
        };
        element.validate().map_err(|x| budget_err("element", x))?;
        if element.p_dc_tx <= 0.0 {
            return Err(invalid("element.p_dc_tx", "must be > 0"));
        }
        if !(e.routing_loss_db >= 0.0 && e.routing_loss_db.is_finite()) {
            return Err(invalid(
                "element.routing_loss_db",
                format!("must be >= 0, got {}", e.routing_loss_db),
            ));
        }
        if !(e.freq_rf > 0.0 && e.freq_rf.is_finite()) {
            return Err(invalid(
                "element.freq_rf",
                format!("must be > 0, got {}", e.freq_rf),
            ));
        }
        if let Some(v) = e.eirp_measured {
            if !v.is_finite() {
                return Err(invalid("element.eirp_measured", "must be finite"));
            }
        }

        let ap = &self.aperture;
        if !(ap.design_freq > 0.0 && ap.design_freq.is_finite()) {
            return Err(invalid("aperture.design_freq", "must be > 0"));
        }
        if !(ap.kappa >= 0.0 && ap.kappa.is_finite()) {
            return Err(invalid("aperture.kappa", "must be >= 0"));
        }
        let mut geometry = ApertureGeometry {
            l_s1: ap.l_s1,
            l_s2: ap.l_s2,
            w_s: ap.w_s,
            w_t: ap.w_t,
            h_t: ap.h_t,
            eps_r: ap.eps_r,
            l_stub: ap.l_stub.unwrap_or(1.0),
            z0: ap.z0,
            n_dies: ap.n_dies,
        };
        geometry.validate().map_err(aperture_err)?;
        if ap.l_stub.is_none() {
            geometry = geometry
                .with_quarter_wave_stub(ap.design_freq)
                .map_err(aperture_err)?;
        }
        let match_band = band("aperture.match_band", ap.match_band)?;
        let sweep_band = band("aperture.sweep_band", ap.sweep_band)?;
        if ap.sweep_points < 2 {
            return Err(invalid("aperture.sweep_points", "must be >= 2"));
        }
        if ap.max_evals == 0 {
            return Err(invalid("aperture.max_evals", "must be >= 1"));
        }
        let mut optimize = OptimizeOptions {
            max_evals: ap.max_evals,
            ..OptimizeOptions::default()
        };
        optimize.calibration.kappa = ap.kappa;

        let p = &self.pattern;
        if p.n_elements == 0 {
            return Err(invalid("pattern.n_elements", "must be >= 1"));
        }
        if !(p.d_over_lambda > 0.0 && p.d_over_lambda.is_finite()) {
            return Err(invalid("pattern.d_over_lambda", "must be > 0"));
        }
        if !(p.step_deg > 0.0 && p.step_deg <= 10.0) {
            return Err(invalid("pattern.step_deg", "must lie in (0, 10]"));
        }
        let base = SteeringState {
            theta0: p.theta0,
            phase_bits: p.phase_bits,
            amp_err_db: p.amp_err_db,
            seed: p.seed,
        };
        base.validate().map_err(|x| budget_err("pattern", x))?;
        let mut steering = vec![base];
        for (i, &t) in self.sweeps.theta0.iter().enumerate() {
            let s = SteeringState { theta0: t, ..base };
            s.validate()
                .map_err(|x| invalid(format!("sweeps.theta0[{i}]"), x.to_string()))?;
            if !steering.contains(&s) {
                steering.push(s);
            }
        }

        let s = &self.sweeps;
        for (i, &n) in s.n.iter().enumerate() {
            if n == 0 {
                return Err(invalid(format!("sweeps.n[{i}]"), "must be >= 1"));
            }
        }
        for (i, &m) in s.m.iter().enumerate() {
            if m == 0 {
                return Err(invalid(format!("sweeps.m[{i}]"), "must be >= 1"));
            }
        }
        for (i, &l) in s.l_s1.iter().enumerate() {
            if !(l > 0.0 && l.is_finite()) {
                return Err(invalid(format!("sweeps.l_s1[{i}]"), "must be > 0"));
            }
        }
        let flatness_band = match s.flatness_band {
            Some(b) => band("sweeps.flatness_band", b)?,
            None => (0.9 * a.freq_lo, 1.1 * a.freq_lo),
        };
        let or = |v: &Vec<u32>, d: u32| if v.is_empty() { vec![d] } else { v.clone() };

        Ok(Resolved {
            spec,
            element,
            eirp_measured: e.eirp_measured,
            routing_loss_db: e.routing_loss_db,
            freq_rf: e.freq_rf,
            geometry,
            bounds: Bounds::default(),
            optimize,
            match_band,
            sweep_band,
            sweep_points: ap.sweep_points,
            n_elements: p.n_elements,
            d_over_lambda: p.d_over_lambda,
            steering,
            angles: angle_grid(p.step_deg),
            n_values: or(&s.n, a.n_total),
            m_values: or(&s.m, a.m_per_die),
            l_s1_values: if s.l_s1.is_empty() {
                DEFAULT_L_S1_GRID.to_vec()
            } else {
                s.l_s1.clone()
            },
            flatness_band,
            svg: self.outputs.svg,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = parse_config_str("[array]\nn_total = 16\nm_per_die = 4\n").unwrap();
        assert_eq!(c, ScenarioConfig::with_array(16, 4));
        let r = c.resolve().unwrap();
        assert_eq!(r.spec.m_dies, 4);
        assert_eq!(r.spec.d, 1.9);
        assert_eq!(r.n_values, vec![16]);
        assert_eq!(r.l_s1_values, DEFAULT_L_S1_GRID.to_vec());
        let stub = ApertureGeometry::default().l_stub;
        assert!((r.geometry.l_stub - stub).abs() < 1e-12);
    }

    #[test]
    fn die_count_errors_name_m_dies() {
        let e = parse_config_str("[array]\nn_total = 24\nm_per_die = 4\n")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert_eq!(e.key(), "array.m_dies");
        let e = parse_config_str("[array]\nn_total = 16\nm_per_die = 4\nm_dies = 8\n")
            .unwrap()
            .resolve()
            .unwrap_err();
        assert_eq!(e.key(), "array.m_dies");
    }

    #[test]
    fn unknown_keys_are_rejected_with_path() {
        let e = parse_config_str("[aperture]\nl_s3 = 1.0\n").unwrap_err();
        assert_eq!(e.key(), "aperture.l_s3");
        assert!(e.to_string().contains("unknown field"), "{e}");
        let e = parse_config_str("[bogus]\nx = 1\n").unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
        let e = parse_config_str("[array]\nd = \"wide\"\n").unwrap_err();
        assert_eq!(e.key(), "array.d");
    }

    #[test]
    fn invalid_values_name_their_key() {
        let cases = [
            ("[aperture]\nn_dies = 3\n", "aperture.n_dies"),
            ("[aperture]\nw_t = -1\n", "aperture.w_t"),
            ("[array]\nd = 0\n", "array.d"),
            ("[element]\np_dc_tx = -5\n", "element.p_dc_tx"),
            ("[pattern]\ntheta0 = 95\n", "pattern.theta0"),
            ("[sweeps]\nn = [16, 0]\n", "sweeps.n[1]"),
            (
                "[aperture]\nmatch_band = [24e9, 22e9]\n",
                "aperture.match_band",
            ),
            (
                "[element]\ng_el = 1\narray_gain_db = 12\n",
                "element.array_gain_db",
            ),
        ];
        for (text, key) in cases {
            let e = parse_config_str(text).unwrap().resolve().unwrap_err();
            assert_eq!(e.key(), key, "{text}");
        }
    }

    #[test]
    fn round_trip() {
        let mut c = ScenarioConfig::with_array(64, 16);
        c.element.eirp_measured = Some(30.0);
        c.element.array_gain_db = Some(12.0);
        c.sweeps.n = vec![16, 64, 256];
        c.sweeps.flatness_band = Some([17.55e9, 21.45e9]);
        c.aperture.l_stub = Some(1.7);
        let text = c.to_toml_string();
        assert_eq!(parse_config_str(&text).unwrap(), c);
        let d = ScenarioConfig::default();
        assert_eq!(parse_config_str(&d.to_toml_string()).unwrap(), d);
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let e = parse_config(Path::new("/nonexistent/scenario.toml")).unwrap_err();
        assert!(matches!(e, ConfigError::Io { .. }));
    }
}
