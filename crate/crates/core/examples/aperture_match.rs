//! Tunes the aperture-coupled feed for a 22-24 GHz band from both slot-length
//! orderings and prints the matched sweep.
//!
//! ```text
//! cargo run --example aperture_match
//! ```

use pdnlab::aperture::{
    frequency_sweep, optimize_matching, tuning_family, ApertureGeometry, Bounds, CouplingModel,
    OptimizeOptions,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = OptimizeOptions::default();
    let cal = opts.calibration;
    let base = ApertureGeometry::default();
    let cm = CouplingModel::from_geometry(&base, &cal)?;
    println!(
        "default geometry: n_p = {:.3}, n_f = {:.3}, C_c = {:.3}, f_slot = {:.2} GHz",
        cm.n_p,
        cm.n_f,
        cm.c_c,
        cm.f_slot / 1e9
    );

    let band = (22e9, 24e9);
    let transposed = ApertureGeometry {
        l_s1: base.l_s2,
        l_s2: base.l_s1,
        ..base
    };
    for (label, start) in [("as given", base), ("transposed", transposed)] {
        let r = optimize_matching(band, &start, &Bounds::default(), &opts)?;
        let g = r.geometry;
        println!(
            "{label:>10}: {:.2} -> {:.2} dB after {} evaluations; L_S1 {:.3}, L_S2 {:.3}, L_stub {:.3} mm, resonance {:.3} GHz",
            r.initial_return_loss,
            r.worst_return_loss,
            r.evaluations,
            g.l_s1,
            g.l_s2,
            g.l_stub,
            r.resonance / 1e9
        );
    }

    let r = optimize_matching(band, &base, &Bounds::default(), &opts)?;
    for pt in frequency_sweep(&r.geometry, (20e9, 26e9), 13, &cal)? {
        let rl = pt
            .return_loss_db()
            .map_or("singular".to_string(), |v| format!("{v:.2} dB"));
        println!("  {:5.2} GHz  {rl}", pt.freq_hz / 1e9);
    }

    println!("tuning family (L_S1 = W_T, quarter-wave stub):");
    for g in tuning_family(&base, &[0.3, 0.6, 0.9, 1.2], &cal)? {
        let f = CouplingModel::from_geometry(&g, &cal)?.f_slot;
        println!(
            "  L_S1 = {:.2} mm -> slot resonance {:.2} GHz",
            g.l_s1,
            f / 1e9
        );
    }
    Ok(())
}
