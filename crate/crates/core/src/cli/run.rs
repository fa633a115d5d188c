use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::checks::{acceptance_checks, Check};
use super::config::{ConfigError, Resolved, ScenarioConfig};
use super::format::{fmt_sig, Table};
use super::svg::{emit_svg_plot, PlotError, PlotStyle, Series};
use crate::aperture::{
    frequency_sweep, input_reflection, optimize_matching, resonance_frequency, tuning_family,
    ApertureError, ApertureGeometry, CouplingModel, MatchResult,
};
use crate::array_budget::{
    array_factor, budget, soa_compare_table, BudgetInputs, PATTERN_FLOOR_DB,
};
use crate::netcore::return_loss_db;
use crate::pdn_topology::{frequency_flatness, sweep_compare, TopologyKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Topology,
    Aperture,
    Array,
    Compare,
    Report,
}

impl Subcommand {
    pub const ALL: [Subcommand; 5] = [
        Subcommand::Topology,
        Subcommand::Aperture,
        Subcommand::Array,
        Subcommand::Compare,
        Subcommand::Report,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Subcommand::Topology => "topology",
            Subcommand::Aperture => "aperture",
            Subcommand::Array => "array",
            Subcommand::Compare => "compare",
            Subcommand::Report => "report",
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Subcommand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown subcommand `{s}`"))
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("plot {name}: {source}")]
    Plot {
        name: String,
        #[source]
        source: PlotError,
    },
    #[error("{0}: no rows could be computed")]
    Failed(&'static str),
}

/// A model error that removed one row from an output table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorRow {
    pub source: String,
    pub key: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Files written by one run, in name order, with their digests.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub out_dir: PathBuf,
    pub files: Vec<OutputFile>,
    pub errors: Vec<ErrorRow>,
    /// Only filled by the `report` subcommand.
    pub checks: Vec<Check>,
}

impl ReportBundle {
    pub fn manifest_path(&self) -> PathBuf {
        self.out_dir.join(MANIFEST)
    }

    pub fn file(&self, name: &str) -> Option<&OutputFile> {
        self.files.iter().find(|f| f.name == name)
    }
}

pub const MANIFEST: &str = "manifest.txt";
pub const ERRORS: &str = "errors.csv";

#[derive(Default)]
struct Outputs {
    files: BTreeMap<String, Vec<u8>>,
    errors: Vec<ErrorRow>,
    checks: Vec<Check>,
}

impl Outputs {
    fn put(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.insert(name.to_string(), bytes);
    }

    fn table(&mut self, name: &str, t: &Table) {
        self.put(name, t.to_bytes());
    }

    fn error(&mut self, source: &str, key: impl Into<String>, message: impl fmt::Display) {
        self.errors.push(ErrorRow {
            source: source.into(),
            key: key.into(),
            message: message.to_string(),
        });
    }

    fn plot(
        &mut self,
        r: &Resolved,
        name: &str,
        series: &[Series],
        style: PlotStyle,
    ) -> Result<(), RunError> {
        if !r.svg {
            return Ok(());
        }
        let svg = emit_svg_plot(series, &style).map_err(|source| RunError::Plot {
            name: name.into(),
            source,
        })?;
        self.put(name, svg.into_bytes());
        Ok(())
    }
}

/// Runs `sub` on a scenario and writes its outputs into `out_dir`.
pub fn run(
    sub: Subcommand,
    cfg: &ScenarioConfig,
    out_dir: &Path,
) -> Result<ReportBundle, RunError> {
    let r = cfg.resolve()?;
    let mut out = Outputs::default();
    match sub {
        Subcommand::Topology => topology(&r, &mut out)?,
        Subcommand::Aperture => {
            aperture(&r, &mut out)?;
        }
        Subcommand::Array => array(&r, &mut out)?,
        Subcommand::Compare => compare(&mut out),
        Subcommand::Report => {
            topology(&r, &mut out)?;
            let matches = aperture(&r, &mut out)?;
            array(&r, &mut out)?;
            compare(&mut out);
            out.checks = acceptance_checks(&r, &matches);
            out.put("summary.txt", summary(&out.checks).into_bytes());
            let mut t = Table::new(&["id", "name", "value", "target", "pass"]);
            for c in &out.checks {
                t.push(vec![
                    c.id.to_string(),
                    c.name.clone(),
                    c.value.clone(),
                    c.target.clone(),
                    c.pass.to_string(),
                ]);
            }
            out.table("checks.csv", &t);
        }
    }
    write_bundle(out, out_dir)
}

fn write_bundle(mut out: Outputs, out_dir: &Path) -> Result<ReportBundle, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    let mut et = Table::new(&["source", "key", "message"]);
    for e in &out.errors {
        et.push(vec![e.source.clone(), e.key.clone(), e.message.clone()]);
    }
    out.table(ERRORS, &et);

    std::fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let mut files = Vec::with_capacity(out.files.len());
    let mut manifest = String::new();
    for (name, bytes) in &out.files {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes).map_err(io(&path))?;
        let sha256 = hex::encode(Sha256::digest(bytes));
        manifest.push_str(&format!("{sha256}  {name}\n"));
        files.push(OutputFile {
            name: name.clone(),
            sha256,
            bytes: bytes.len(),
        });
    }
    let path = out_dir.join(MANIFEST);
    std::fs::write(&path, &manifest).map_err(io(&path))?;
    Ok(ReportBundle {
        out_dir: out_dir.to_path_buf(),
        files,
        errors: out.errors,
        checks: out.checks,
    })
}

fn summary(checks: &[Check]) -> String {
    let passed = checks.iter().filter(|c| c.pass).count();
    let mut s = format!("acceptance checks: {passed}/{} passed\n", checks.len());
    for c in checks {
        s.push_str(&format!(
            "[{}] {:>2} {}: {} (target {})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.value,
            c.target
        ));
    }
    s
}

fn topology(r: &Resolved, out: &mut Outputs) -> Result<(), RunError> {
    let rows = sweep_compare(&r.spec, &r.n_values, &r.m_values);
    let mut t = Table::new(&[
        "kind",
        "m",
        "N",
        "length_mm",
        "junctions",
        "footprint_mm2",
        "loss_total_db",
        "loss_excess_db",
        "normalized_area",
    ]);
    let mut flat = Table::new(&["kind", "m", "N", "f_lo_hz", "f_hi_hz", "flatness_db"]);
    let mut series: BTreeMap<TopologyKind, Vec<(f64, f64)>> = BTreeMap::new();
    let mut by_key = BTreeMap::new();
    let first_m = r.m_values.iter().min().copied();
    for row in &rows {
        let key = format!("kind={},m={},N={}", row.kind, row.m_per_die, row.n_total);
        let rep = match &row.result {
            Ok(rep) => rep,
            Err(e) => {
                out.error("topology", key, e);
                continue;
            }
        };
        t.push(vec![
            rep.kind.to_string(),
            rep.m_per_die.to_string(),
            rep.n_total.to_string(),
            fmt_sig(rep.routing_length),
            rep.junctions.to_string(),
            fmt_sig(rep.footprint),
            fmt_sig(rep.loss_total),
            fmt_sig(rep.loss_excess),
            fmt_sig(rep.normalized_area),
        ]);
        by_key.insert((rep.kind, rep.m_per_die, rep.n_total), rep.loss_total);
        if Some(rep.m_per_die) == first_m {
            series
                .entry(rep.kind)
                .or_default()
                .push((f64::from(rep.n_total), rep.loss_total));
        }
        let spec = r
            .spec
            .with_counts(row.n_total, row.m_per_die)
            .expect("row already validated");
        match frequency_flatness(&spec, row.kind, r.flatness_band) {
            Ok(dev) => flat.push(vec![
                row.kind.to_string(),
                row.m_per_die.to_string(),
                row.n_total.to_string(),
                fmt_sig(r.flatness_band.0),
                fmt_sig(r.flatness_band.1),
                fmt_sig(dev),
            ]),
            Err(e) => out.error("flatness", key, e),
        }
    }
    if t.is_empty() {
        return Err(RunError::Failed("topology"));
    }
    let mut delta = Table::new(&["m", "N", "wilkinson_minus_aperture_db"]);
    for (&(kind, m, n), &w) in &by_key {
        if kind != TopologyKind::Wilkinson {
            continue;
        }
        if let Some(a) = by_key.get(&(TopologyKind::ApertureCoupled, m, n)) {
            delta.push(vec![m.to_string(), n.to_string(), fmt_sig(w - a)]);
        }
    }
    out.table("topology.csv", &t);
    out.table("topology_delta.csv", &delta);
    out.table("flatness.csv", &flat);
    let series: Vec<Series> = series
        .into_iter()
        .map(|(k, pts)| Series::new(k.as_str(), pts))
        .collect();
    out.plot(
        r,
        "topology_loss.svg",
        &series,
        PlotStyle::Line {
            title: format!("Distribution loss, m = {}", first_m.unwrap_or(0)),
            x_label: "elements N".into(),
            y_label: "loss (dB)".into(),
            log_x: true,
        },
    )
}

/// `(x, y)` points of one plotted series.
type Curve = Vec<(f64, f64)>;

fn sweep_table(
    geom: &ApertureGeometry,
    r: &Resolved,
    out: &mut Outputs,
    label: &str,
) -> Result<(Table, Curve, Curve), RunError> {
    let cal = r.optimize.calibration;
    let pts = frequency_sweep(geom, r.sweep_band, r.sweep_points, &cal).map_err(|e| {
        out.error("aperture", label, &e);
        RunError::Failed("aperture")
    })?;
    let mut t = Table::new(&[
        "freq_hz",
        "z_re",
        "z_im",
        "gamma_re",
        "gamma_im",
        "return_loss_db",
    ]);
    let mut smith = Vec::new();
    let mut rl = Vec::new();
    for p in &pts {
        match &p.result {
            Ok(refl) => {
                let loss = return_loss_db(refl.gamma);
                t.push(vec![
                    fmt_sig(p.freq_hz),
                    fmt_sig(refl.z_in.re),
                    fmt_sig(refl.z_in.im),
                    fmt_sig(refl.gamma.re),
                    fmt_sig(refl.gamma.im),
                    fmt_sig(loss),
                ]);
                smith.push((refl.gamma.re, refl.gamma.im));
                rl.push((p.freq_hz / 1e9, -loss));
            }
            Err(e) => out.error(
                "aperture",
                format!("{label},freq_hz={}", fmt_sig(p.freq_hz)),
                e,
            ),
        }
    }
    Ok((t, smith, rl))
}

/// Optimiser runs from the configured start and from its transposed
/// `(l_s1, l_s2)` assignment.
fn aperture(r: &Resolved, out: &mut Outputs) -> Result<Vec<MatchResult>, RunError> {
    let cal = r.optimize.calibration;
    let g = r.geometry;

    let mut model = Table::new(&["quantity", "value"]);
    match CouplingModel::from_geometry(&g, &cal) {
        Ok(cm) => {
            let rows = [
                ("l_s_eff_mm", g.l_s_eff(&cal)),
                ("l_stub_mm", g.l_stub),
                ("n_p", cm.n_p),
                ("n_f", cm.n_f),
                ("coupling", cm.c_c),
                ("l_c_nh", cm.l_c),
                ("c_slot_pf", cm.c_slot),
                ("f_slot_hz", cm.f_slot),
                ("load_ohm", g.load_impedance()),
                (
                    "transformed_load_ohm",
                    crate::aperture::transformed_impedance(g.load_impedance(), cm.n_f, cm.n_p),
                ),
            ];
            for (k, v) in rows {
                model.push(vec![k.into(), fmt_sig(v)]);
            }
        }
        Err(e) => out.error("aperture", "model", e),
    }
    out.table("aperture_model.csv", &model);

    let (t, smith, rl) = sweep_table(&g, r, out, "start")?;
    out.table("aperture_sweep.csv", &t);

    let mut locus = Table::new(&["l_s1", "freq_hz", "gamma_re", "gamma_im", "return_loss_db"]);
    let mut smith_series = vec![Series::new("start", smith)];
    for &l in &r.l_s1_values {
        let gl = ApertureGeometry { l_s1: l, ..g };
        let Ok(pts) = frequency_sweep(&gl, r.sweep_band, r.sweep_points, &cal) else {
            out.error(
                "aperture_locus",
                format!("l_s1={}", fmt_sig(l)),
                "invalid geometry",
            );
            continue;
        };
        for p in pts {
            match p.result {
                Ok(refl) => locus.push(vec![
                    fmt_sig(l),
                    fmt_sig(p.freq_hz),
                    fmt_sig(refl.gamma.re),
                    fmt_sig(refl.gamma.im),
                    fmt_sig(return_loss_db(refl.gamma)),
                ]),
                Err(e) => out.error(
                    "aperture_locus",
                    format!("l_s1={},freq_hz={}", fmt_sig(l), fmt_sig(p.freq_hz)),
                    e,
                ),
            }
        }
    }
    out.table("aperture_locus.csv", &locus);

    let mut res = Table::new(&[
        "family",
        "l_s1",
        "w_t",
        "l_stub",
        "resonance_hz",
        "return_loss_db",
    ]);
    let window = r.optimize.resonance_window;
    let fixed: Vec<ApertureGeometry> = r
        .l_s1_values
        .iter()
        .map(|&l| ApertureGeometry { l_s1: l, ..g })
        .collect();
    let tuned = tuning_family(&g, &r.l_s1_values, &cal).unwrap_or_else(|e| {
        out.error("aperture_resonance", "tuned", e);
        Vec::new()
    });
    for (family, geoms) in [("fixed_w_t", fixed), ("tuned", tuned)] {
        for gg in geoms {
            let row = resonance_frequency(&gg, window, &cal)
                .and_then(|f| input_reflection(&gg, f, &cal).map(|x| (f, return_loss_db(x.gamma))));
            match row {
                Ok((f, loss)) => res.push(vec![
                    family.into(),
                    fmt_sig(gg.l_s1),
                    fmt_sig(gg.w_t),
                    fmt_sig(gg.l_stub),
                    fmt_sig(f),
                    fmt_sig(loss),
                ]),
                Err(e) => out.error(
                    "aperture_resonance",
                    format!("{family},l_s1={}", fmt_sig(gg.l_s1)),
                    e,
                ),
            }
        }
    }
    out.table("aperture_resonance.csv", &res);

    let mut mt = Table::new(&[
        "start",
        "band_lo_hz",
        "band_hi_hz",
        "start_l_s1",
        "start_l_s2",
        "l_s1",
        "l_s2",
        "l_stub",
        "initial_rl_db",
        "worst_rl_db",
        "resonance_hz",
        "phase_error_deg",
        "evaluations",
    ]);
    let starts = [
        ("as_given", g),
        (
            "transposed",
            ApertureGeometry {
                l_s1: g.l_s2,
                l_s2: g.l_s1,
                ..g
            },
        ),
    ];
    let mut matches = Vec::new();
    let mut rl_series = vec![Series::new("start", rl)];
    for (name, start) in starts {
        let result = match optimize_matching(r.match_band, &start, &r.bounds, &r.optimize) {
            Ok(m) => Ok(m),
            Err(ApertureError::NoConvergence(best)) => {
                out.error(
                    "aperture_match",
                    name,
                    ApertureError::NoConvergence(best.clone()),
                );
                Ok(*best)
            }
            Err(e) => Err(e),
        };
        match result {
            Ok(m) => {
                mt.push(vec![
                    name.into(),
                    fmt_sig(m.band.0),
                    fmt_sig(m.band.1),
                    fmt_sig(start.l_s1),
                    fmt_sig(start.l_s2),
                    fmt_sig(m.geometry.l_s1),
                    fmt_sig(m.geometry.l_s2),
                    fmt_sig(m.geometry.l_stub),
                    fmt_sig(m.initial_return_loss),
                    fmt_sig(m.worst_return_loss),
                    fmt_sig(m.resonance),
                    fmt_sig(m.phase_error),
                    m.evaluations.to_string(),
                ]);
                if name == "as_given" {
                    let (t, smith, rl) = sweep_table(&m.geometry, r, out, "matched")?;
                    out.table("aperture_matched_sweep.csv", &t);
                    smith_series.push(Series::new("matched", smith));
                    rl_series.push(Series::new("matched", rl));
                }
                matches.push(m);
            }
            Err(e) => out.error("aperture_match", name, e),
        }
    }
    out.table("aperture_match.csv", &mt);

    out.plot(
        r,
        "aperture_smith.svg",
        &smith_series,
        PlotStyle::Smith {
            title: format!(
                "Input reflection, {}-{} GHz",
                fmt_sig(r.sweep_band.0 / 1e9),
                fmt_sig(r.sweep_band.1 / 1e9)
            ),
        },
    )?;
    out.plot(
        r,
        "aperture_s11.svg",
        &rl_series,
        PlotStyle::Line {
            title: "S11".into(),
            x_label: "frequency (GHz)".into(),
            y_label: "S11 (dB)".into(),
            log_x: false,
        },
    )?;
    Ok(matches)
}

fn array(r: &Resolved, out: &mut Outputs) -> Result<(), RunError> {
    let mut pat = Table::new(&["theta0_deg", "angle_deg", "af_db"]);
    let mut met = Table::new(&[
        "theta0_deg",
        "phase_bits",
        "amp_err_db",
        "seed",
        "peak_deg",
        "hpbw_deg",
        "first_null_deg",
        "peak_to_null_db",
    ]);
    let opt = |v: Option<f64>| v.map_or_else(String::new, fmt_sig);
    let mut series = Vec::new();
    for s in &r.steering {
        let key = format!("theta0={}", fmt_sig(s.theta0));
        let p = match array_factor(r.n_elements, r.d_over_lambda, s, &r.angles) {
            Ok(p) => p,
            Err(e) => {
                out.error("pattern", key, e);
                continue;
            }
        };
        for (a, v) in p.angles.iter().zip(&p.af_db) {
            pat.push(vec![fmt_sig(s.theta0), fmt_sig(*a), fmt_sig(*v)]);
        }
        if p.hpbw.is_none() {
            out.error("pattern", key.clone(), "no -3 dB crossing on the grid");
        }
        met.push(vec![
            fmt_sig(s.theta0),
            s.phase_bits.to_string(),
            fmt_sig(s.amp_err_db),
            s.seed.to_string(),
            fmt_sig(p.peak_angle()),
            opt(p.hpbw),
            opt(p.first_null),
            opt(p.peak_to_null),
        ]);
        series.push(Series::new(
            format!("θ0 = {}°", fmt_sig(s.theta0)),
            p.angles
                .iter()
                .copied()
                .zip(p.af_db.iter().copied())
                .collect(),
        ));
    }
    if met.is_empty() {
        return Err(RunError::Failed("array"));
    }
    out.table("pattern.csv", &pat);
    out.table("pattern_metrics.csv", &met);

    let inputs = BudgetInputs {
        element: r.element,
        n: r.spec.n_total,
        routing_loss_db: r.routing_loss_db,
        freq_hz: r.freq_rf,
        eirp_measured: r.eirp_measured,
    };
    let mut bt = Table::new(&[
        "n",
        "n_eff",
        "fill_ratio",
        "eirp_model_dbm",
        "eirp_dbm",
        "p_dc_total_mw",
        "efficiency_pct",
        "comp_power_mw",
    ]);
    match budget(&inputs) {
        Ok(b) => bt.push(vec![
            inputs.n.to_string(),
            b.n_eff.to_string(),
            fmt_sig(b.fill_ratio),
            fmt_sig(b.eirp_model),
            fmt_sig(b.eirp),
            fmt_sig(b.p_dc_total),
            fmt_sig(b.efficiency_pct),
            fmt_sig(b.comp_power),
        ]),
        Err(e) => out.error("budget", "element", e),
    }
    out.table("budget.csv", &bt);
    out.plot(
        r,
        "pattern_polar.svg",
        &series,
        PlotStyle::Polar {
            title: format!("Array factor, N = {}", r.n_elements),
            floor_db: (-40.0f64).max(PATTERN_FLOOR_DB),
        },
    )
}

fn compare(out: &mut Outputs) {
    let mut t = Table::new(&[
        "column",
        "technology",
        "freq_ghz",
        "array_size",
        "p_sat_dbm",
        "eirp_dbm",
        "pdc_tx_per_el_mw",
        "pdc_rx_per_el_mw",
        "stored_pct",
        "recomputed_pct",
        "discrepancy",
    ]);
    for c in soa_compare_table() {
        t.push(vec![
            c.column,
            c.technology,
            c.freq_ghz,
            c.array_size.to_string(),
            fmt_sig(c.p_sat_dbm),
            fmt_sig(c.eirp_dbm),
            fmt_sig(c.pdc_tx_per_el_mw),
            fmt_sig(c.pdc_rx_per_el_mw),
            fmt_sig(c.stored_pct),
            fmt_sig(c.recomputed_pct),
            c.discrepancy.to_string(),
        ]);
    }
    out.table("soa_table.csv", &t);
}
