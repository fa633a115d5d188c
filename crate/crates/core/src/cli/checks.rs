//! Scenario-level self-checks written into the `report` summary.

use super::config::Resolved;
use super::format::fmt_sig;
use crate::aperture::{
    input_reflection, resonance_frequency, transformed_impedance, turn_ratio_np, ApertureGeometry,
    CouplingModel, MatchResult,
};
use crate::array_budget::{
    angle_grid, array_factor, compensation_power, eirp, eirp_over_pdc, fill_factor, ElementSpec,
    SteeringState,
};
use crate::pdn_topology::{
    distribution_loss, frequency_flatness, junction_count, normalized_area, routing_length_closed,
    routing_length_series, TopologyKind,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub value: String,
    pub target: String,
    pub pass: bool,
}

fn check(id: u32, name: &str, value: String, target: &str, pass: bool) -> Check {
    Check {
        id,
        name: name.into(),
        value,
        target: target.into(),
        pass,
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(" ")
}

pub fn acceptance_checks(r: &Resolved, matches: &[MatchResult]) -> Vec<Check> {
    use TopologyKind::*;
    let spec = r.spec;
    let m = spec.m_per_die;
    let mut out = Vec::new();

    let third = 10.0 * 3f64.log10();
    let deltas: Vec<f64> = [4u32, 8, 16, 32]
        .iter()
        .filter_map(|&dies| spec.with_counts(dies * m, m).ok())
        .map(|s| {
            distribution_loss(&s, Wilkinson).total - distribution_loss(&s, ApertureCoupled).total
        })
        .collect();
    out.push(check(
        1,
        "wilkinson minus aperture loss, M = 4..32",
        list(&deltas),
        "4.77121 dB, within 0.3 of 5",
        deltas.len() == 4
            && deltas.iter().all(|d| (d - third).abs() < 1e-9)
            && (third - 5.0).abs() <= 0.3,
    ));

    let dbl: Vec<f64> = [Wilkinson, ApertureCoupled]
        .iter()
        .filter_map(|&k| {
            let a = spec.with_counts(256, 4).ok()?;
            let b = spec.with_counts(256, 8).ok()?;
            Some(distribution_loss(&a, k).total - distribution_loss(&b, k).total)
        })
        .collect();
    out.push(check(
        2,
        "loss saved by doubling m at N = 256",
        list(&dbl),
        "3.010 +/- 0.001 dB",
        dbl.len() == 2 && dbl.iter().all(|d| (d - 3.010).abs() <= 0.001),
    ));

    let jw = junction_count(16, Wilkinson);
    let ja = junction_count(16, ApertureCoupled);
    out.push(check(
        3,
        "junctions at M = 16",
        format!("{jw} {ja}"),
        "15 5",
        jw == 15 && ja == 5,
    ));

    let f256 = fill_factor(2.0, 256).1;
    let f16 = fill_factor(2.0, 16).1;
    out.push(check(
        4,
        "elements left after 2 dB, N = 256 and 16",
        format!("{f256} {f16}"),
        "204 13",
        f256 == 204 && f16 == 13,
    ));

    let eff = eirp_over_pdc(30.0, 16.0 * 250.0);
    out.push(check(
        5,
        "EIRP/PDC at 30 dBm, 16 x 250 mW",
        fmt_sig(eff),
        "25 %",
        (eff - 25.0).abs() < 1e-9,
    ));

    let c20 = compensation_power(2.0, 20e9);
    let c100 = compensation_power(2.0, 100e9);
    out.push(check(
        6,
        "compensation power for 2 dB at 20 and 100 GHz",
        list(&[c20, c100]),
        "20 40 mW",
        (c20 - 20.0).abs() < 1e-12 && (c100 - 40.0).abs() < 1e-12,
    ));

    let zt = transformed_impedance(12.5, 1.0, 0.5);
    let np = turn_ratio_np(r.geometry.w_t, r.geometry.w_t);
    out.push(check(
        7,
        "12.5 ohm through n_f = 1, n_p = 0.5; n_p at L_S1 = W_T",
        list(&[zt, np]),
        "50 0.5",
        zt == 50.0 && np == 0.5,
    ));

    let cal = r.optimize.calibration;
    let stub = CouplingModel::from_geometry(&r.geometry, &cal).and_then(|cm| {
        let g = r.geometry.with_quarter_wave_stub(cm.f_slot)?;
        let z = input_reflection(&g, cm.f_slot, &cal)?.z_in;
        let zt = transformed_impedance(g.load_impedance(), cm.n_f, cm.n_p);
        Ok((z - zt).norm())
    });
    out.push(match stub {
        Ok(err) => check(
            8,
            "quarter-wave stub input vs transformed load",
            fmt_sig(err),
            "<= 1e-9 ohm",
            err <= 1e-9,
        ),
        Err(e) => check(
            8,
            "quarter-wave stub input vs transformed load",
            e.to_string(),
            "<= 1e-9 ohm",
            false,
        ),
    });

    let ratios: Vec<f64> = [4u32, 16, 64]
        .iter()
        .filter_map(|&dies| {
            let s = spec.with_counts(dies * m, m).ok()?;
            Some(routing_length_series(&s) / routing_length_closed(s.n_total, s.d).ok()?)
        })
        .collect();
    out.push(check(
        9,
        "series / closed routing length, M = 4 16 64",
        list(&ratios),
        "[1, 1.4], M = 4 within [1, 1.05]",
        ratios.len() == 3
            && ratios.iter().all(|x| (1.0..=1.4).contains(x))
            && (1.0..=1.05).contains(&ratios[0]),
    ));

    let worst: Vec<f64> = matches.iter().map(|x| x.worst_return_loss).collect();
    let res: Vec<f64> = r
        .l_s1_values
        .iter()
        .filter_map(|&l| {
            resonance_frequency(
                &ApertureGeometry {
                    l_s1: l,
                    ..r.geometry
                },
                r.optimize.resonance_window,
                &cal,
            )
            .ok()
        })
        .collect();
    let monotone = res.len() == r.l_s1_values.len() && res.windows(2).all(|w| w[1] < w[0]);
    out.push(check(
        10,
        "matched worst return loss (both starts); resonance falls with l_s1",
        format!(
            "{} dB; {}",
            list(&worst),
            if monotone { "falling" } else { "not monotone" }
        ),
        ">= 20 dB; strictly falling",
        worst.len() == 2 && worst.iter().all(|w| *w >= 20.0) && monotone,
    ));

    let savings: Vec<f64> = [4u32, 16]
        .iter()
        .filter_map(|&mm| {
            let s = spec.with_counts(256, mm).ok()?;
            Some(
                100.0
                    * (1.0 - normalized_area(&s, ApertureCoupled) / normalized_area(&s, Wilkinson)),
            )
        })
        .collect();
    out.push(check(
        11,
        "area saved vs Wilkinson at m = 4 and 16",
        format!("{} %", list(&savings)),
        "20 +/- 10 %, 5 +/- 10 %",
        savings.len() == 2 && (savings[0] - 20.0).abs() <= 10.0 && (savings[1] - 5.0).abs() <= 10.0,
    ));

    let grid = angle_grid(0.1);
    let beam = array_factor(4, 0.5, &SteeringState::broadside(), &grid);
    let steer_ok = [-30.0, 30.0].iter().all(|&t| {
        array_factor(4, 0.5, &SteeringState::steered(t), &grid)
            .map(|p| (p.peak_angle() - t).abs() < 1e-9 && p.side_lobes().iter().all(|l| l.1 < -3.0))
            .unwrap_or(false)
    });
    out.push(match beam {
        Ok(p) => {
            let (null, bw) = (p.first_null.unwrap_or(f64::NAN), p.hpbw.unwrap_or(f64::NAN));
            check(
                12,
                "4-element half-wave cut: first null, HPBW; no grating lobe at +/-30",
                format!("{} deg, {} deg, {}", fmt_sig(null), fmt_sig(bw), steer_ok),
                "30 +/- 1, 30 +/- 5, true",
                (null - 30.0).abs() <= 1.0 && (bw - 30.0).abs() <= 5.0 && steer_ok,
            )
        }
        Err(e) => check(12, "4-element half-wave cut", e.to_string(), "", false),
    });

    let el = |g: f64| ElementSpec {
        g_el: ElementSpec::gain_from_array(g, 16),
        p_sat: 8.0,
        ..r.element
    };
    let lo = eirp(&el(11.0), 16, 0.0);
    let hi = eirp(&el(13.0), 16, 0.0);
    out.push(check(
        13,
        "EIRP for 8 dBm, N = 16, 11-13 dB array gain",
        format!("{} dBm", list(&[lo, hi])),
        "overlaps 26-34 dBm",
        lo <= 34.0 && hi >= 26.0,
    ));

    let flat = frequency_flatness(&spec, ApertureCoupled, r.flatness_band);
    out.push(match flat {
        Ok(dev) => check(
            14,
            "aperture-coupled network flatness over the flatness band",
            format!("{} dB", fmt_sig(dev)),
            "<= 0.5 dB",
            dev <= 0.5,
        ),
        Err(e) => check(
            14,
            "aperture-coupled network flatness",
            e.to_string(),
            "<= 0.5 dB",
            false,
        ),
    });
    out
}
