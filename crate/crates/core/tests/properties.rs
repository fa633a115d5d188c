use num_complex::Complex64;
use proptest::prelude::*;

use pdnlab::aperture::{
    coupling_coefficient, frequency_sweep, transformed_impedance, turn_ratio_nf, turn_ratio_np,
    ApertureGeometry, Calibration,
};
use pdnlab::array_budget::{
    angle_grid, array_factor, dbm_to_mw, eirp, eirp_over_pdc, fill_factor, mw_to_dbm, ElementSpec,
    SteeringState,
};
use pdnlab::netcore::{
    cascade, input_impedance, make_tline, series_element, shunt_element, to_scattering,
    TransmissionLineSpec, TwoPortNetwork,
};
use pdnlab::pdn_topology::{distribution_loss, normalized_area, ArraySpec, TopologyKind};

fn line() -> impl Strategy<Value = TransmissionLineSpec> {
    (10.0..150.0f64, 1.0..10.0f64, 0.0..0.5f64, 0.0..20.0f64)
        .prop_map(|(z0, e, a, l)| TransmissionLineSpec::new(z0, e, a, l).unwrap())
}

fn passive_lumped(f: f64) -> impl Strategy<Value = TwoPortNetwork> {
    (0.0..200.0f64, -200.0..200.0f64, any::<bool>()).prop_map(move |(re, im, series)| {
        if series {
            series_element(Complex64::new(re, im), f).unwrap()
        } else {
            shunt_element(Complex64::new(re / 1e4, im / 1e4), f).unwrap()
        }
    })
}

proptest! {
    #[test]
    fn lines_are_reciprocal_and_passive(spec in line(), f in 1e9..100e9f64) {
        let net = make_tline(&spec, f).unwrap();
        let det = net.determinant();
        prop_assert!((det - 1.0).norm() <= 1e-9 * det.norm().max(1.0));
        let s = to_scattering(&net, 50.0).unwrap();
        prop_assert!(s.max_magnitude() <= 1.0 + 1e-9);
        prop_assert!((s.s12 - s.s21).norm() <= 1e-9);
    }

    #[test]
    fn cascades_of_passive_parts_stay_passive(
        a in passive_lumped(20e9), b in passive_lumped(20e9), spec in line()
    ) {
        let t = make_tline(&spec, 20e9).unwrap();
        let net = cascade(&cascade(&a, &t).unwrap(), &b).unwrap();
        let s = to_scattering(&net, 50.0).unwrap();
        prop_assert!(s.max_magnitude() <= 1.0 + 1e-9);
        prop_assert!((s.s12 - s.s21).norm() <= 1e-9);
    }

    #[test]
    fn identity_is_neutral(spec in line(), f in 1e9..100e9f64) {
        let x = make_tline(&spec, f).unwrap();
        let i = TwoPortNetwork::identity(f).unwrap();
        prop_assert!(cascade(&i, &x).unwrap().max_abs_diff(&x) <= 1e-12);
        prop_assert!(cascade(&x, &i).unwrap().max_abs_diff(&x) <= 1e-12);
    }

    #[test]
    fn splitting_a_line_changes_nothing(spec in line(), f in 1e9..100e9f64, frac in 0.0..1.0f64) {
        let whole = make_tline(&spec, f).unwrap();
        let a = make_tline(&spec.with_length(spec.length * frac), f).unwrap();
        let b = make_tline(&spec.with_length(spec.length * (1.0 - frac)), f).unwrap();
        let joined = cascade(&a, &b).unwrap();
        let scale = whole.b.norm().max(1.0);
        prop_assert!(joined.max_abs_diff(&whole) <= 1e-9 * scale);
    }

    #[test]
    fn matched_lossless_line_shows_its_own_impedance(z0 in 10.0..150.0f64, len in 0.0..30.0f64) {
        let spec = TransmissionLineSpec::lossless(z0, 2.5, len).unwrap();
        let z = input_impedance(&make_tline(&spec, 24e9).unwrap(), z0).unwrap();
        prop_assert!((z - Complex64::new(z0, 0.0)).norm() <= 1e-9 * z0);
    }

    #[test]
    fn loss_grows_with_array_size(m_exp in 0u32..4, dies_exp in 0u32..9, d in 0.5..5.0f64, alpha in 0.0..0.2f64) {
        let m = 1 << m_exp;
        let small = ArraySpec::new(m << dies_exp, m, d, 0.2, alpha, 6.0, 6.0, 19.5e9).unwrap();
        let big = small.with_counts(m << (dies_exp + 1), m).unwrap();
        for kind in [TopologyKind::TJunction, TopologyKind::Wilkinson, TopologyKind::ApertureCoupled] {
            prop_assert!(distribution_loss(&big, kind).total >= distribution_loss(&small, kind).total);
            prop_assert!(normalized_area(&big, kind) > 0.0);
        }
        let w = distribution_loss(&small, TopologyKind::Wilkinson).total;
        let a = distribution_loss(&small, TopologyKind::ApertureCoupled).total;
        prop_assert!(a <= w);
    }

    #[test]
    fn doubling_elements_adds_six_db_of_eirp(n_exp in 0u32..12, p in -10.0..20.0f64, g in -5.0..10.0f64) {
        let el = ElementSpec { p_sat: p, g_el: g, ..ElementSpec::default() };
        let n = 1u32 << n_exp;
        let step = eirp(&el, 2 * n, 0.0) - eirp(&el, n, 0.0);
        prop_assert!((step - 20.0 * 2f64.log10()).abs() <= 1e-9);
    }

    #[test]
    fn fill_factor_is_a_fraction_that_shrinks(loss in 0.0..30.0f64, extra in 0.01..10.0f64, n in 1u32..4096) {
        let (r, n_eff) = fill_factor(loss, n);
        let (r2, _) = fill_factor(loss + extra, n);
        prop_assert!(r > 0.0 && r <= 1.0);
        prop_assert!(r2 < r);
        prop_assert!(n_eff <= n);
        prop_assert!(f64::from(n_eff) >= r * f64::from(n) - 1e-6);
    }

    #[test]
    fn fill_factor_ratio_is_multiplicative(a in 0.0..15.0f64, b in 0.0..15.0f64) {
        let (ra, _) = fill_factor(a, 1);
        let (rb, _) = fill_factor(b, 1);
        let (rab, _) = fill_factor(a + b, 1);
        prop_assert!((ra * rb - rab).abs() <= 1e-12);
    }

    #[test]
    fn dbm_round_trip(dbm in -60.0..60.0f64) {
        prop_assert!((mw_to_dbm(dbm_to_mw(dbm)) - dbm).abs() <= 1e-9);
    }

    #[test]
    fn efficiency_scales_inversely_with_dc_power(e in 0.0..50.0f64, p in 1.0..1e5f64) {
        let x = eirp_over_pdc(e, p);
        prop_assert!(x >= 0.0);
        prop_assert!((eirp_over_pdc(e, 2.0 * p) * 2.0 - x).abs() <= 1e-9 * x.max(1.0));
    }

    #[test]
    fn pattern_peaks_at_zero_db(n in 1u32..33, d in 0.1..0.5f64, t0 in -60.0..60.0f64) {
        let grid = angle_grid(0.5);
        let p = array_factor(n, d, &SteeringState::steered(t0), &grid).unwrap();
        let peak = p.af_db.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(peak.abs() <= 1e-9);
        prop_assert!(p.af_db.iter().all(|v| *v <= 1e-9));
    }

    #[test]
    fn broadside_pattern_is_even(n in 1u32..33, d in 0.1..1.0f64) {
        let grid = angle_grid(0.5);
        let p = array_factor(n, d, &SteeringState::broadside(), &grid).unwrap();
        let k = p.af_db.len();
        for i in 0..k / 2 {
            prop_assert!((p.af_db[i] - p.af_db[k - 1 - i]).abs() <= 1e-6);
        }
    }

    #[test]
    fn transformer_trades_against_slot_length(l1 in 0.1..2.0f64, dl in 0.01..1.0f64, w_t in 0.1..1.0f64, h in 0.05..0.5f64) {
        let l2 = l1 + dl;
        prop_assert!(turn_ratio_np(l2, w_t) > turn_ratio_np(l1, w_t));
        prop_assert!(turn_ratio_nf(l2, h) > turn_ratio_nf(l1, h));
        let cal = Calibration::default();
        prop_assert!(coupling_coefficient(3.0, 0.1, l2, &cal) >= coupling_coefficient(3.0, 0.1, l1, &cal));
        let z = transformed_impedance(12.5, turn_ratio_nf(l1, h), turn_ratio_np(l1, w_t));
        prop_assert!(z > 0.0);
    }

    #[test]
    fn aperture_sweep_is_passive(l_s1 in 0.1..2.0f64, l_s2 in 0.0..3.0f64, stub in 0.5..3.5f64) {
        let g = ApertureGeometry { l_s1, l_s2, l_stub: stub, ..ApertureGeometry::default() };
        let sweep = frequency_sweep(&g, (18e9, 28e9), 21, &Calibration::default()).unwrap();
        for pt in sweep {
            if let Ok(r) = pt.result {
                prop_assert!(r.gamma.norm() <= 1.0 + 1e-9);
                prop_assert!(r.z_in.re >= -1e-9);
            }
        }
    }
}
