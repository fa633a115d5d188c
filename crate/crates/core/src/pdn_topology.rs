//! Analytic H-tree power-delivery models.
//!
//! An `N`-element array is built from `M` dies carrying `m` elements each
//! (`N = m * M`). The LO/IF signal is distributed to the dies by one of three
//! H-tree variants: plain T-junctions, Wilkinson dividers, or the
//! aperture-coupled four-way combiner. This module evaluates the closed-form
//! routing length, junction count, footprint, loss and normalized area of
//! each variant, and builds the corresponding cascaded [`netcore`] network
//! to check loss flatness over a band.
//!
//! [`netcore`]: crate::netcore

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::netcore::{
    self, cascade, ideal_transformer, make_tline, microstrip_eps_eff, series_element,
    shunt_element, to_scattering, NetError, TransmissionLineSpec, TwoPortNetwork, WilkinsonDivider,
};
use crate::C0_MM_PER_S;

/// Reference impedance of the distribution network, ohm.
pub const PDN_Z0: f64 = 50.0;

/// Frequency grid used by [`frequency_flatness`].
pub const FLATNESS_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("{field}: {message}")]
    InvalidSpec {
        field: &'static str,
        message: String,
    },
    #[error("m_dies: die count {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("m_dies: element count {n} is not divisible by elements per die {m}")]
    NotDivisible { n: u32, m: u32 },
    #[error("invalid band: {0}")]
    InvalidBand(String),
    #[error(transparent)]
    Net(#[from] NetError),
}

pub type Result<T> = std::result::Result<T, TopologyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TopologyKind {
    TJunction,
    Wilkinson,
    ApertureCoupled,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 3] = [
        TopologyKind::TJunction,
        TopologyKind::Wilkinson,
        TopologyKind::ApertureCoupled,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::TJunction => "t_junction",
            TopologyKind::Wilkinson => "wilkinson",
            TopologyKind::ApertureCoupled => "aperture_coupled",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Substrate used to derive a guided wavelength from the trace width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substrate {
    pub eps_r: f64,
    /// Dielectric height, mm.
    pub height: f64,
}

impl Substrate {
    /// 5 mil RO3006, the LO/IF feed-line layer.
    pub const RO3006_5MIL: Substrate = Substrate {
        eps_r: 6.15,
        height: 0.127,
    };
    /// 10 mil RO3003, the antenna and aperture top layer.
    pub const RO3003_10MIL: Substrate = Substrate {
        eps_r: 3.0,
        height: 0.254,
    };

    /// Quasi-static guided wavelength (mm) of a `width` mm strip at `freq_hz`.
    pub fn guided_wavelength(&self, width: f64, freq_hz: f64) -> Result<f64> {
        let eps_eff = microstrip_eps_eff(self.eps_r, width, self.height)?;
        Ok(netcore::guided_wavelength_mm(eps_eff, freq_hz)?)
    }
}

/// Geometry and line parameters of a scalable `N = m * M` array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArraySpec {
    /// Total element count `N`.
    pub n_total: u32,
    /// Elements per die `m`.
    pub m_per_die: u32,
    /// Die count `M`.
    pub m_dies: u32,
    /// Element pitch, mm.
    pub d: f64,
    /// Trace width, mm.
    pub w_trace: f64,
    /// Line attenuation, dB/mm.
    pub alpha0: f64,
    /// Guided wavelength on the Wilkinson layer at `freq_lo`, mm.
    pub lambda_w: f64,
    /// Guided wavelength on the aperture-feed layer at `freq_lo`, mm.
    pub lambda_g: f64,
    /// Distribution (LO) frequency, Hz.
    pub freq_lo: f64,
}

/// Default line parameters used when a scenario leaves them out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineDefaults {
    pub freq_lo: f64,
    pub d: f64,
    pub w_trace: f64,
    pub alpha0: f64,
    pub wilkinson_substrate: Substrate,
    pub aperture_substrate: Substrate,
}

impl Default for LineDefaults {
    fn default() -> Self {
        Self {
            freq_lo: 19.5e9,
            d: 1.9,
            w_trace: 0.2,
            alpha0: 0.05,
            wilkinson_substrate: Substrate::RO3006_5MIL,
            // The open stub sits on the feed line, which shares the
            // Wilkinson layer's material.
            aperture_substrate: Substrate::RO3006_5MIL,
        }
    }
}

impl LineDefaults {
    pub fn lambda_w(&self) -> Result<f64> {
        self.wilkinson_substrate
            .guided_wavelength(self.w_trace, self.freq_lo)
    }

    pub fn lambda_g(&self) -> Result<f64> {
        self.aperture_substrate
            .guided_wavelength(self.w_trace, self.freq_lo)
    }

    /// Array spec for `n_total` elements and `m_per_die` elements per die.
    pub fn array(&self, n_total: u32, m_per_die: u32) -> Result<ArraySpec> {
        ArraySpec::new(
            n_total,
            m_per_die,
            self.d,
            self.w_trace,
            self.alpha0,
            self.lambda_w()?,
            self.lambda_g()?,
            self.freq_lo,
        )
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(TopologyError::InvalidSpec {
            field,
            message: format!("must be > 0, got {v}"),
        })
    }
}

/// Die count for `n_total` elements at `m_per_die` per die.
pub fn die_count(n_total: u32, m_per_die: u32) -> Result<u32> {
    if n_total == 0 {
        return Err(TopologyError::InvalidSpec {
            field: "n_total",
            message: "must be >= 1".into(),
        });
    }
    if m_per_die == 0 {
        return Err(TopologyError::InvalidSpec {
            field: "m_per_die",
            message: "must be >= 1".into(),
        });
    }
    if !n_total.is_multiple_of(m_per_die) {
        return Err(TopologyError::NotDivisible {
            n: n_total,
            m: m_per_die,
        });
    }
    let m_dies = n_total / m_per_die;
    if !m_dies.is_power_of_two() {
        return Err(TopologyError::NotPowerOfTwo(u64::from(m_dies)));
    }
    Ok(m_dies)
}

impl ArraySpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_total: u32,
        m_per_die: u32,
        d: f64,
        w_trace: f64,
        alpha0: f64,
        lambda_w: f64,
        lambda_g: f64,
        freq_lo: f64,
    ) -> Result<Self> {
        let m_dies = die_count(n_total, m_per_die)?;
        let spec = Self {
            n_total,
            m_per_die,
            m_dies,
            d,
            w_trace,
            alpha0,
            lambda_w,
            lambda_g,
            freq_lo,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let m_dies = die_count(self.n_total, self.m_per_die)?;
        if m_dies != self.m_dies {
            return Err(TopologyError::InvalidSpec {
                field: "m_dies",
                message: format!(
                    "N = m * M violated: {} != {} * {}",
                    self.n_total, self.m_per_die, self.m_dies
                ),
            });
        }
        positive("d", self.d)?;
        positive("w_trace", self.w_trace)?;
        positive("lambda_w", self.lambda_w)?;
        positive("lambda_g", self.lambda_g)?;
        positive("freq_lo", self.freq_lo)?;
        if !(self.alpha0 >= 0.0 && self.alpha0.is_finite()) {
            return Err(TopologyError::InvalidSpec {
                field: "alpha0",
                message: format!("must be >= 0, got {}", self.alpha0),
            });
        }
        Ok(())
    }

    /// Same line parameters with a different element/die split.
    pub fn with_counts(&self, n_total: u32, m_per_die: u32) -> Result<Self> {
        let m_dies = die_count(n_total, m_per_die)?;
        Ok(Self {
            n_total,
            m_per_die,
            m_dies,
            ..*self
        })
    }

    fn levels(&self) -> u32 {
        self.m_dies.trailing_zeros()
    }
}

/// Centre-to-centre die spacing `D = m * d`, mm.
pub fn die_pitch(spec: &ArraySpec) -> f64 {
    f64::from(spec.m_per_die) * spec.d
}

/// Level-by-level H-tree routing sum.
///
/// Level `i` (0 ..= log2 M) contributes `floor(M / 2^i)` segments of length
/// `D * (i + 1) / 2`, the bracket evaluated in real arithmetic.
pub fn routing_length_series(spec: &ArraySpec) -> f64 {
    let pitch = die_pitch(spec);
    (0..=spec.levels())
        .map(|i| {
            let count = f64::from(spec.m_dies >> i);
            count * pitch * f64::from(i + 1) / 2.0
        })
        .sum()
}

/// Closed-form routing estimate `(4/3) N d`, mm.
pub fn routing_length_closed(n_total: u32, d: f64) -> Result<f64> {
    if n_total == 0 {
        return Err(TopologyError::InvalidSpec {
            field: "n_total",
            message: "must be >= 1".into(),
        });
    }
    Ok(4.0 / 3.0 * f64::from(n_total) * d)
}

fn closed(spec: &ArraySpec) -> f64 {
    4.0 / 3.0 * f64::from(spec.n_total) * spec.d
}

/// Number of dividing junctions in the tree.
///
/// Binary trees (T-junction, Wilkinson) need `sum floor(M / 2^i)`; the
/// aperture combiner splits four ways and needs `sum floor(M / 4^i)`.
pub fn junction_count(m_dies: u32, kind: TopologyKind) -> u32 {
    let shift_per_level = match kind {
        TopologyKind::TJunction | TopologyKind::Wilkinson => 1,
        TopologyKind::ApertureCoupled => 2,
    };
    (1..)
        .map(|i| m_dies.checked_shr(shift_per_level * i).unwrap_or(0))
        .take_while(|&c| c > 0)
        .sum()
}

/// PDN footprint, mm^2.
pub fn footprint(spec: &ArraySpec, kind: TopologyKind) -> f64 {
    let m = f64::from(spec.m_dies);
    let extra = match kind {
        TopologyKind::TJunction => 0.0,
        TopologyKind::Wilkinson => spec.lambda_w * m / 4.0,
        TopologyKind::ApertureCoupled => spec.lambda_g * m / (4.0 * 3.0),
    };
    (closed(spec) + extra) * spec.w_trace
}

/// Lumped junction loss of the tree, dB. The `10 log10` split terms are
/// floored at 0 dB so a tree too small for the combiner never shows gain.
pub fn junction_loss_db(m_dies: u32, kind: TopologyKind) -> f64 {
    let m = f64::from(m_dies);
    match kind {
        TopologyKind::TJunction => 0.0,
        TopologyKind::Wilkinson => 3.0 + (10.0 * m.log10()).max(0.0),
        TopologyKind::ApertureCoupled => 3.0 + (10.0 * (m / 3.0).log10()).max(0.0),
    }
}

/// Total and excess distribution loss, dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionLoss {
    pub total: f64,
    /// Loss above the unavoidable `10 log10 M` power split, floored at zero.
    pub excess: f64,
}

pub fn distribution_loss(spec: &ArraySpec, kind: TopologyKind) -> DistributionLoss {
    let routing = closed(spec) * spec.alpha0;
    let total = routing + junction_loss_db(spec.m_dies, kind);
    let split = match kind {
        TopologyKind::TJunction => 0.0,
        _ => 10.0 * f64::from(spec.m_dies).log10(),
    };
    DistributionLoss {
        total,
        excess: (total - split).max(0.0),
    }
}

/// PDN area over total antenna area `N d^2`.
pub fn normalized_area(spec: &ArraySpec, kind: TopologyKind) -> f64 {
    footprint(spec, kind) / (f64::from(spec.n_total) * spec.d * spec.d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyReport {
    pub kind: TopologyKind,
    pub m_per_die: u32,
    pub n_total: u32,
    /// Closed-form routing length, mm.
    pub routing_length: f64,
    pub junctions: u32,
    /// mm^2.
    pub footprint: f64,
    pub loss_total: f64,
    pub loss_excess: f64,
    pub normalized_area: f64,
}

pub fn report(spec: &ArraySpec, kind: TopologyKind) -> TopologyReport {
    let loss = distribution_loss(spec, kind);
    TopologyReport {
        kind,
        m_per_die: spec.m_per_die,
        n_total: spec.n_total,
        routing_length: closed(spec),
        junctions: junction_count(spec.m_dies, kind),
        footprint: footprint(spec, kind),
        loss_total: loss.total,
        loss_excess: loss.excess,
        normalized_area: normalized_area(spec, kind),
    }
}

/// One row of a sweep; invalid `(N, m)` pairs keep their slot with the error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kind: TopologyKind,
    pub m_per_die: u32,
    pub n_total: u32,
    pub result: Result<TopologyReport>,
}

/// Evaluates every topology at every `(N, m)` pair, ordered by
/// `(kind, m, N)`.
pub fn sweep_compare(template: &ArraySpec, n_values: &[u32], m_values: &[u32]) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(3 * n_values.len() * m_values.len());
    for kind in TopologyKind::ALL {
        let mut ms = m_values.to_vec();
        ms.sort_unstable();
        ms.dedup();
        for &m in &ms {
            let mut ns = n_values.to_vec();
            ns.sort_unstable();
            ns.dedup();
            for &n in &ns {
                let result = template.with_counts(n, m).map(|s| report(&s, kind));
                rows.push(SweepRow {
                    kind,
                    m_per_die: m,
                    n_total: n,
                    result,
                });
            }
        }
    }
    rows
}

fn eps_eff_from_wavelength(lambda_mm: f64, freq_hz: f64) -> f64 {
    let ratio = C0_MM_PER_S / (freq_hz * lambda_mm);
    (ratio * ratio).max(1.0)
}

/// Network from the PDN input to one die for `kind` at `freq_hz`.
///
/// The closed-form routing length is split evenly between the tree levels
/// and carried on matched lines with the array's attenuation. Junctions are
/// ideal: a T-junction is the sibling branch as a matched shunt load, a
/// Wilkinson level is the through path of [`WilkinsonDivider`], and an
/// aperture level is a four-way (or, for an odd level count, two-way) ideal
/// transformer combiner fed through a quarter-wave open stub.
pub fn path_network(spec: &ArraySpec, kind: TopologyKind, freq_hz: f64) -> Result<TwoPortNetwork> {
    let z0 = PDN_Z0;
    let lambda = match kind {
        TopologyKind::ApertureCoupled => spec.lambda_g,
        _ => spec.lambda_w,
    };
    let eps_eff = eps_eff_from_wavelength(lambda, spec.freq_lo);

    let stages: Vec<TwoPortNetwork> = match kind {
        TopologyKind::TJunction => {
            let sibling = shunt_element(Complex64::new(1.0 / z0, 0.0), freq_hz)?;
            vec![sibling; spec.levels() as usize]
        }
        TopologyKind::Wilkinson => {
            let div = WilkinsonDivider::new(z0, spec.freq_lo)?;
            let through = div.scattering(freq_hz)?.reduce(1, 2);
            let stage = TwoPortNetwork::from_scattering(&through, freq_hz)?;
            vec![stage; spec.levels() as usize]
        }
        TopologyKind::ApertureCoupled => {
            let levels = spec.levels();
            let mut ways = vec![4u32; (levels / 2) as usize];
            if levels % 2 == 1 {
                ways.push(2);
            }
            // Stub is a quarter wave at freq_lo on the feed layer.
            let theta = std::f64::consts::FRAC_PI_2 * freq_hz / spec.freq_lo;
            let stub_x = -z0 / theta.tan();
            ways.iter()
                .map(|&w| {
                    let stub = series_element(Complex64::new(0.0, stub_x), freq_hz)?;
                    let xfmr = ideal_transformer(f64::from(w).sqrt(), freq_hz)?;
                    let siblings =
                        shunt_element(Complex64::new(f64::from(w - 1) / z0, 0.0), freq_hz)?;
                    Ok(cascade(&cascade(&stub, &xfmr)?, &siblings)?)
                })
                .collect::<Result<_>>()?
        }
    };

    let segment = TransmissionLineSpec::new(
        z0,
        eps_eff,
        spec.alpha0,
        closed(spec) / (stages.len() + 1) as f64,
    )?;
    let line = make_tline(&segment, freq_hz)?;
    let mut net = line;
    for stage in &stages {
        net = cascade(&cascade(&net, stage)?, &line)?;
    }
    Ok(net)
}

/// Power delivered to each die relative to the source, dB, with the ideal
/// split normalised out and the lumped junction loss applied. At `freq_lo`
/// this equals `-distribution_loss(..).total` for the two dividing
/// topologies.
pub fn delivered_power_db(spec: &ArraySpec, kind: TopologyKind, freq_hz: f64) -> Result<f64> {
    let net = path_network(spec, kind, freq_hz)?;
    let s = to_scattering(&net, PDN_Z0)?;
    let split = 10.0 * f64::from(spec.m_dies).log10();
    Ok(s.insertion_gain_db() + split - junction_loss_db(spec.m_dies, kind))
}

/// Peak deviation (dB) of delivered power over `[f_min, f_max]` from its
/// value at the band centre.
pub fn frequency_flatness(spec: &ArraySpec, kind: TopologyKind, band: (f64, f64)) -> Result<f64> {
    let (lo, hi) = band;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(TopologyError::InvalidBand(format!("[{lo}, {hi}] Hz")));
    }
    if hi == lo {
        return Ok(0.0);
    }
    let centre = delivered_power_db(spec, kind, 0.5 * (lo + hi))?;
    let step = (hi - lo) / (FLATNESS_POINTS - 1) as f64;
    (0..FLATNESS_POINTS).try_fold(0.0f64, |worst, k| {
        let p = delivered_power_db(spec, kind, lo + step * k as f64)?;
        Ok(worst.max((p - centre).abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit(n: u32, m: u32) -> ArraySpec {
        ArraySpec::new(n, m, 1.0, 0.2, 0.05, 7.0, 7.0, 19.5e9).unwrap()
    }

    fn line_defaults(n: u32, m: u32) -> ArraySpec {
        LineDefaults::default().array(n, m).unwrap()
    }

    #[test]
    fn die_pitch_values() {
        assert_relative_eq!(die_pitch(&line_defaults(16, 4)), 7.6, epsilon = 1e-12);
        assert_relative_eq!(die_pitch(&line_defaults(16, 1)), 1.9, epsilon = 1e-12);
        assert_relative_eq!(die_pitch(&line_defaults(16, 16)), 30.4, epsilon = 1e-12);
    }

    /// Independent oracle: walk the tree level by level.
    fn series_oracle(m_dies: u32, m: u32, d: f64) -> f64 {
        let mut total = 0.0;
        let mut count = m_dies;
        let mut i = 0.0;
        loop {
            total += count as f64 * (m as f64 * d) * (i + 1.0) / 2.0;
            if count == 1 {
                break;
            }
            count /= 2;
            i += 1.0;
        }
        total
    }

    #[test]
    fn routing_series_matches_walk() {
        assert_relative_eq!(routing_length_series(&unit(16, 4)), 22.0, epsilon = 1e-12);
        assert_relative_eq!(routing_length_series(&unit(4, 4)), 2.0, epsilon = 1e-12);
        for (n, m) in [(64, 4), (256, 4), (1024, 16), (32, 8)] {
            let s = unit(n, m);
            assert_relative_eq!(
                routing_length_series(&s),
                series_oracle(s.m_dies, m, 1.0),
                epsilon = 1e-9
            );
        }
        let ratio = 22.0 / routing_length_closed(16, 1.0).unwrap();
        assert_relative_eq!(ratio, 1.03125, epsilon = 1e-12);
    }

    #[test]
    fn routing_closed_values() {
        assert_relative_eq!(
            routing_length_closed(16, 1.9).unwrap(),
            40.5333,
            epsilon = 1e-4
        );
        assert_relative_eq!(routing_length_closed(1, 1.0).unwrap(), 4.0 / 3.0);
        assert_relative_eq!(
            routing_length_closed(256, 1.9).unwrap(),
            648.5333,
            epsilon = 1e-4
        );
        assert!(routing_length_closed(0, 1.0).is_err());
    }

    #[test]
    fn junction_counts() {
        use TopologyKind::*;
        assert_eq!(junction_count(16, Wilkinson), 15);
        assert_eq!(junction_count(16, ApertureCoupled), 5);
        assert_eq!(junction_count(16, TJunction), 15);
        assert_eq!(junction_count(1, Wilkinson), 0);
        assert_eq!(junction_count(1, ApertureCoupled), 0);
        assert_eq!(junction_count(4, Wilkinson), 3);
        assert_eq!(junction_count(4, ApertureCoupled), 1);
        assert_eq!(junction_count(1 << 31, Wilkinson), (1u32 << 31) - 1);
    }

    #[test]
    fn footprint_rows() {
        let s = ArraySpec::new(16, 4, 1.9, 0.2, 0.05, 7.0, 9.0, 19.5e9).unwrap();
        assert_relative_eq!(
            footprint(&s, TopologyKind::TJunction),
            8.10667,
            epsilon = 1e-5
        );
        let diff = footprint(&s, TopologyKind::Wilkinson) - footprint(&s, TopologyKind::TJunction);
        assert_relative_eq!(diff, 7.0 * 4.0 / 4.0 * 0.2, epsilon = 1e-12);
        assert!(
            footprint(&s, TopologyKind::ApertureCoupled) < footprint(&s, TopologyKind::Wilkinson)
        );
    }

    #[test]
    fn loss_deltas() {
        for n in [16, 32, 64, 128] {
            let s = line_defaults(n, 4);
            let w = distribution_loss(&s, TopologyKind::Wilkinson).total;
            let a = distribution_loss(&s, TopologyKind::ApertureCoupled).total;
            assert_relative_eq!(w - a, 10.0 * 3f64.log10(), epsilon = 1e-12);
        }
        let s = line_defaults(16, 16);
        let t = distribution_loss(&s, TopologyKind::TJunction).total;
        assert_relative_eq!(
            distribution_loss(&s, TopologyKind::Wilkinson).total,
            t + 3.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            distribution_loss(&s, TopologyKind::ApertureCoupled).total,
            t + 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn doubling_m_saves_3db() {
        let a = line_defaults(256, 4);
        let b = line_defaults(256, 8);
        for kind in [TopologyKind::Wilkinson, TopologyKind::ApertureCoupled] {
            let d = distribution_loss(&a, kind).total - distribution_loss(&b, kind).total;
            assert_relative_eq!(d, 10.0 * 2f64.log10(), epsilon = 1e-12);
        }
    }

    #[test]
    fn junction_terms_order_tjunction_aperture_wilkinson() {
        for k in 1..=12 {
            let m = 1u32 << k;
            let t = junction_loss_db(m, TopologyKind::TJunction);
            let a = junction_loss_db(m, TopologyKind::ApertureCoupled);
            let w = junction_loss_db(m, TopologyKind::Wilkinson);
            assert!(t < a && a < w, "M = {m}: {t} {a} {w}");
        }
        assert_eq!(
            junction_loss_db(1, TopologyKind::ApertureCoupled),
            junction_loss_db(1, TopologyKind::Wilkinson)
        );
    }

    #[test]
    fn sweep_order_and_errors() {
        let t = line_defaults(16, 4);
        let rows = sweep_compare(&t, &[64, 16, 24], &[8, 4]);
        assert_eq!(rows.len(), 18);
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.kind, r.m_per_die, r.n_total))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let bad = rows
            .iter()
            .find(|r| r.n_total == 24 && r.m_per_die == 4)
            .unwrap();
        assert_eq!(bad.result, Err(TopologyError::NotPowerOfTwo(6)));
        assert_eq!(sweep_compare(&t, &[16], &[4]).len(), 3);
    }

    #[test]
    fn invalid_specs() {
        assert_eq!(die_count(24, 4), Err(TopologyError::NotPowerOfTwo(6)));
        assert!(matches!(
            die_count(10, 4),
            Err(TopologyError::NotDivisible { .. })
        ));
        assert!(ArraySpec::new(16, 4, 0.0, 0.2, 0.05, 7.0, 7.0, 19.5e9).is_err());
        assert!(ArraySpec::new(16, 4, 1.0, 0.2, -1.0, 7.0, 7.0, 19.5e9).is_err());
    }

    #[test]
    fn delivered_power_matches_table_at_centre() {
        let s = line_defaults(64, 4);
        for kind in [TopologyKind::Wilkinson, TopologyKind::ApertureCoupled] {
            let p = delivered_power_db(&s, kind, s.freq_lo).unwrap();
            assert_relative_eq!(p, -distribution_loss(&s, kind).total, epsilon = 1e-9);
        }
    }

    #[test]
    fn flatness_edge_cases() {
        let s = line_defaults(64, 4);
        let f = s.freq_lo;
        assert_eq!(
            frequency_flatness(&s, TopologyKind::ApertureCoupled, (f, f)).unwrap(),
            0.0
        );
        assert!(frequency_flatness(&s, TopologyKind::Wilkinson, (f, 0.5 * f)).is_err());
        let dev =
            frequency_flatness(&s, TopologyKind::ApertureCoupled, (0.9 * f, 1.1 * f)).unwrap();
        assert!(dev <= 0.5, "{dev}");
        // Odd level count exercises the two-way combiner stage.
        let s = line_defaults(32, 4);
        let dev =
            frequency_flatness(&s, TopologyKind::ApertureCoupled, (0.9 * f, 1.1 * f)).unwrap();
        assert!(dev <= 0.5, "{dev}");
    }
}
