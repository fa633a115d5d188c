use num_complex::Complex64;

use super::{check_freq, Admittance, Impedance, NetError, Result, ScatteringMatrix};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Chain-parameter (ABCD) description of a two-port at one frequency.
///
/// `a` and `d` are dimensionless, `b` is in ohms and `c` in siemens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortNetwork {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub freq_hz: f64,
}

/// Termination used when collapsing a two-port to a one-port.
///
/// Open and short circuits are carried as limit forms instead of very large
/// or very small impedances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Load {
    Impedance(Impedance),
    Open,
    Short,
}

impl From<Impedance> for Load {
    fn from(z: Impedance) -> Self {
        Load::Impedance(z)
    }
}

impl From<f64> for Load {
    fn from(r: f64) -> Self {
        Load::Impedance(Complex64::new(r, 0.0))
    }
}

impl TwoPortNetwork {
    pub fn identity(freq_hz: f64) -> Result<Self> {
        check_freq(freq_hz)?;
        Ok(Self::from_abcd(ONE, ZERO, ZERO, ONE, freq_hz))
    }

    pub(crate) fn from_abcd(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        freq_hz: f64,
    ) -> Self {
        Self {
            a,
            b,
            c,
            d,
            freq_hz,
        }
    }

    /// `a*d - b*c`; equals one for reciprocal networks.
    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Rebuilds a chain matrix from S-parameters referenced to `zref`.
    pub fn from_scattering(s: &ScatteringMatrix, freq_hz: f64) -> Result<Self> {
        check_freq(freq_hz)?;
        if !(s.zref > 0.0) {
            return Err(NetError::BadReference(s.zref));
        }
        if s.s21.norm() == 0.0 {
            return Err(NetError::Singular("s21 is zero"));
        }
        let z0 = s.zref;
        let prod = s.s12 * s.s21;
        let den = 2.0 * s.s21;
        let a = ((ONE + s.s11) * (ONE - s.s22) + prod) / den;
        let b = z0 * ((ONE + s.s11) * (ONE + s.s22) - prod) / den;
        let c = ((ONE - s.s11) * (ONE - s.s22) - prod) / (den * z0);
        let d = ((ONE - s.s11) * (ONE + s.s22) + prod) / den;
        Ok(Self::from_abcd(a, b, c, d, freq_hz))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

fn same_freq(f1: f64, f2: f64) -> bool {
    (f1 - f2).abs() <= 1e-12 * f1.abs().max(f2.abs())
}

/// Chain-matrix product `first * second` (signal flows through `first`
/// before `second`).
pub fn cascade(first: &TwoPortNetwork, second: &TwoPortNetwork) -> Result<TwoPortNetwork> {
    if !same_freq(first.freq_hz, second.freq_hz) {
        return Err(NetError::FrequencyMismatch {
            first: first.freq_hz,
            second: second.freq_hz,
        });
    }
    Ok(TwoPortNetwork::from_abcd(
        first.a * second.a + first.b * second.c,
        first.a * second.b + first.b * second.d,
        first.c * second.a + first.d * second.c,
        first.c * second.b + first.d * second.d,
        first.freq_hz,
    ))
}

/// Cascades a chain of networks left to right. An empty chain carries no
/// frequency and returns an error.
pub fn cascade_all<'a, I>(nets: I) -> Result<TwoPortNetwork>
where
    I: IntoIterator<Item = &'a TwoPortNetwork>,
{
    let mut iter = nets.into_iter();
    let first = *iter
        .next()
        .ok_or_else(|| NetError::InvalidArgument("empty cascade".into()))?;
    iter.try_fold(first, |acc, n| cascade(&acc, n))
}

pub fn series_element(z: Impedance, freq_hz: f64) -> Result<TwoPortNetwork> {
    check_freq(freq_hz)?;
    Ok(TwoPortNetwork::from_abcd(ONE, z, ZERO, ONE, freq_hz))
}

pub fn shunt_element(y: Admittance, freq_hz: f64) -> Result<TwoPortNetwork> {
    check_freq(freq_hz)?;
    Ok(TwoPortNetwork::from_abcd(ONE, ZERO, y, ONE, freq_hz))
}

/// Ideal transformer with turn ratio `n`; a load `Z` at port 2 appears as
/// `n^2 * Z` at port 1.
pub fn ideal_transformer(n: f64, freq_hz: f64) -> Result<TwoPortNetwork> {
    check_freq(freq_hz)?;
    if n == 0.0 || !n.is_finite() {
        return Err(NetError::ZeroTurnRatio(n));
    }
    Ok(TwoPortNetwork::from_abcd(
        Complex64::new(n, 0.0),
        ZERO,
        ZERO,
        Complex64::new(1.0 / n, 0.0),
        freq_hz,
    ))
}

/// Impedance looking into port 1 with `load` on port 2.
pub fn input_impedance(net: &TwoPortNetwork, load: impl Into<Load>) -> Result<Impedance> {
    let (num, den) = match load.into() {
        Load::Impedance(z) => (net.a * z + net.b, net.c * z + net.d),
        Load::Open => (net.a, net.c),
        Load::Short => (net.b, net.d),
    };
    let scale = num.norm().max(1.0);
    if den.norm() <= 1e-14 * scale {
        return Err(NetError::OpenCircuit);
    }
    Ok(num / den)
}

/// Chain-to-S conversion against a real reference impedance.
pub fn to_scattering(net: &TwoPortNetwork, zref: f64) -> Result<ScatteringMatrix> {
    if !(zref > 0.0) || !zref.is_finite() {
        return Err(NetError::BadReference(zref));
    }
    let b_n = net.b / zref;
    let c_n = net.c * zref;
    let delta = net.a + b_n + c_n + net.d;
    if delta.norm() == 0.0 {
        return Err(NetError::Singular("a + b/Z0 + c*Z0 + d is zero"));
    }
    Ok(ScatteringMatrix {
        s11: (net.a + b_n - c_n - net.d) / delta,
        s12: 2.0 * net.determinant() / delta,
        s21: 2.0 / delta,
        s22: (-net.a + b_n - c_n + net.d) / delta,
        zref,
    })
}
