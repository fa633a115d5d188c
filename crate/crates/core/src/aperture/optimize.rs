//! Bounded Nelder-Mead search over `(L_S1, L_S2, L_stub)`.
//!
//! The objective is the worst `|S11|` across the band. The search runs in
//! box-normalised coordinates with every trial point clamped into the box,
//! and restarts from the incumbent with a fresh simplex whenever the
//! current one collapses, until the evaluation budget is spent. There is no
//! randomness, so identical inputs give identical results.

use super::model::{resonance_frequency, worst_return_loss};
use super::{ApertureError, ApertureGeometry, Calibration, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub l_s1: (f64, f64),
    pub l_s2: (f64, f64),
    pub l_stub: (f64, f64),
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            l_s1: (0.05, 2.5),
            l_s2: (0.0, 3.0),
            l_stub: (0.5, 3.5),
        }
    }
}

impl Bounds {
    fn as_array(&self) -> [(f64, f64); 3] {
        [self.l_s1, self.l_s2, self.l_stub]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in ["l_s1", "l_s2", "l_stub"].iter().zip(self.as_array()) {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= 0.0) {
                return Err(ApertureError::InvalidBounds(format!(
                    "{name}: [{lo}, {hi}] is not a valid interval"
                )));
            }
        }
        if self.l_s1.0 <= 0.0 || self.l_stub.0 <= 0.0 {
            return Err(ApertureError::InvalidBounds(
                "l_s1 and l_stub lower bounds must be > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn contains(&self, g: &ApertureGeometry) -> bool {
        [g.l_s1, g.l_s2, g.l_stub]
            .iter()
            .zip(self.as_array())
            .all(|(v, (lo, hi))| *v >= lo && *v <= hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    /// Model-evaluation budget.
    pub max_evals: usize,
    /// Samples across the band per evaluation.
    pub band_points: usize,
    /// Window searched when reporting the resonance of the result, Hz.
    pub resonance_window: (f64, f64),
    pub calibration: Calibration,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            max_evals: 500,
            band_points: 21,
            resonance_window: (15e9, 35e9),
            calibration: Calibration::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub geometry: ApertureGeometry,
    pub band: (f64, f64),
    /// Smallest return loss over the band at the returned geometry, dB.
    pub worst_return_loss: f64,
    /// Same figure for the starting geometry, dB.
    pub initial_return_loss: f64,
    /// Minimum-|S11| frequency of the returned geometry, Hz.
    pub resonance: f64,
    /// Deviation from 180 degrees between the two top-layer branches.
    /// The modelled layout is symmetric, so this is zero.
    pub phase_error: f64,
    pub evaluations: usize,
}

struct Problem<'a> {
    base: ApertureGeometry,
    bounds: [(f64, f64); 3],
    band: (f64, f64),
    opts: &'a OptimizeOptions,
    evals: usize,
}

impl Problem<'_> {
    fn geometry(&self, u: &[f64; 3]) -> ApertureGeometry {
        let v: Vec<f64> = u
            .iter()
            .zip(self.bounds)
            .map(|(x, (lo, hi))| lo + x.clamp(0.0, 1.0) * (hi - lo))
            .collect();
        ApertureGeometry {
            l_s1: v[0],
            l_s2: v[1],
            l_stub: v[2],
            ..self.base
        }
    }

    fn normalise(&self, g: &ApertureGeometry) -> [f64; 3] {
        let mut u = [0.0; 3];
        for (k, (v, (lo, hi))) in [g.l_s1, g.l_s2, g.l_stub]
            .into_iter()
            .zip(self.bounds)
            .enumerate()
        {
            u[k] = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
        }
        u
    }

    /// Worst-case `|S11|` over the band.
    fn objective(&mut self, u: &[f64; 3]) -> f64 {
        self.evals += 1;
        let g = self.geometry(u);
        let rl = worst_return_loss(&g, self.band, self.opts.band_points, &self.opts.calibration);
        10f64.powf(-rl / 20.0)
    }

    fn budget_left(&self) -> bool {
        self.evals < self.opts.max_evals
    }
}

fn clamp_unit(p: [f64; 3]) -> [f64; 3] {
    p.map(|x| x.clamp(0.0, 1.0))
}

fn lerp(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    clamp_unit([
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ])
}

/// Runs Nelder-Mead from `start` until the simplex collapses or the budget
/// is exhausted; returns the best vertex and its value.
fn nelder_mead(prob: &mut Problem<'_>, start: ([f64; 3], f64), step: f64) -> ([f64; 3], f64) {
    let mut simplex: Vec<([f64; 3], f64)> = vec![start];
    for k in 0..3 {
        if !prob.budget_left() {
            break;
        }
        let mut p = start.0;
        p[k] = if p[k] + step <= 1.0 {
            p[k] + step
        } else {
            p[k] - step
        };
        let p = clamp_unit(p);
        let f = prob.objective(&p);
        simplex.push((p, f));
    }
    if simplex.len() < 4 {
        return best_of(&simplex);
    }

    while prob.budget_left() {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[3].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .flat_map(|(p, _)| {
                p.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
            })
            .fold(0.0, f64::max);
        if spread < 1e-12 && size < 1e-7 {
            break;
        }

        let mut centroid = [0.0; 3];
        for (p, _) in &simplex[..3] {
            for k in 0..3 {
                centroid[k] += p[k] / 3.0;
            }
        }
        let worst = simplex[3];
        let reflected = lerp(&centroid, &worst.0, -1.0);
        let fr = prob.objective(&reflected);

        if fr < simplex[0].1 {
            if !prob.budget_left() {
                simplex[3] = (reflected, fr);
                break;
            }
            let expanded = lerp(&centroid, &worst.0, -2.0);
            let fe = prob.objective(&expanded);
            simplex[3] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[2].1 {
            simplex[3] = (reflected, fr);
        } else {
            if !prob.budget_left() {
                break;
            }
            let (contracted, fc) = if fr < worst.1 {
                let c = lerp(&centroid, &reflected, 0.5);
                (c, prob.objective(&c))
            } else {
                let c = lerp(&centroid, &worst.0, 0.5);
                (c, prob.objective(&c))
            };
            if fc < worst.1.min(fr) {
                simplex[3] = (contracted, fc);
            } else {
                let best = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    if !prob.budget_left() {
                        break;
                    }
                    let p = lerp(&best, &vertex.0, 0.5);
                    *vertex = (p, prob.objective(&p));
                }
            }
        }
    }
    best_of(&simplex)
}

fn best_of(simplex: &[([f64; 3], f64)]) -> ([f64; 3], f64) {
    *simplex
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex is never empty")
}

/// Tunes `(l_s1, l_s2, l_stub)` of `initial` inside `bounds` to minimise the
/// worst-case reflection across `band`.
///
/// Returns [`ApertureError::NoConvergence`] carrying the best result when no
/// point better than 10 dB return loss was found.
pub fn optimize_matching(
    band: (f64, f64),
    initial: &ApertureGeometry,
    bounds: &Bounds,
    opts: &OptimizeOptions,
) -> Result<MatchResult> {
    initial.validate()?;
    bounds.validate()?;
    let (lo, hi) = band;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(ApertureError::InvalidBand(format!("[{lo}, {hi}] Hz")));
    }
    if !bounds.contains(initial) {
        return Err(ApertureError::InvalidBounds(
            "initial geometry lies outside the bounds".into(),
        ));
    }
    if opts.max_evals == 0 || opts.band_points == 0 {
        return Err(ApertureError::InvalidBounds(
            "evaluation budget and band points must be positive".into(),
        ));
    }

    let mut prob = Problem {
        base: *initial,
        bounds: bounds.as_array(),
        band,
        opts,
        evals: 0,
    };
    let u0 = prob.normalise(initial);
    let f0 = prob.objective(&u0);
    let mut best = (u0, f0);
    let mut step = 0.15;
    while prob.budget_left() {
        let before = prob.evals;
        let candidate = nelder_mead(&mut prob, best, step);
        if candidate.1 < best.1 {
            best = candidate;
        }
        if prob.evals == before {
            break;
        }
        step = (step * 0.5).max(0.01);
    }

    // The incumbent keeps the caller's exact values when nothing improved.
    let geometry = if best.1 < f0 {
        prob.geometry(&best.0)
    } else {
        *initial
    };
    let cal = &opts.calibration;
    let worst = worst_return_loss(&geometry, band, opts.band_points, cal);
    let result = MatchResult {
        geometry,
        band,
        worst_return_loss: worst,
        initial_return_loss: worst_return_loss(initial, band, opts.band_points, cal),
        resonance: resonance_frequency(&geometry, opts.resonance_window, cal)?,
        phase_error: super::differential_phase_error(&geometry, 0.5 * (lo + hi), 0.0)?,
        evaluations: prob.evals,
    };
    if result.worst_return_loss > 10.0 {
        Ok(result)
    } else {
        Err(ApertureError::NoConvergence(Box::new(result)))
    }
}
