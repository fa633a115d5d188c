//! Chain-matrix algebra: a quarter-wave transformer, a lumped match and an
//! ideal Wilkinson divider at and away from its design frequency.
//!
//! ```text
//! cargo run --example two_port_basics
//! ```

use num_complex::Complex64;
use pdnlab::netcore::{
    cascade, ideal_transformer, input_impedance, make_tline, return_loss_db, series_element,
    to_scattering, TransmissionLineSpec, WilkinsonDivider,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = 20e9;
    let eps_eff: f64 = 4.0;
    let quarter = pdnlab::C0_MM_PER_S / (f * eps_eff.sqrt()) / 4.0;

    let line = TransmissionLineSpec::lossless(70.710_678, eps_eff, quarter)?;
    let qw = make_tline(&line, f)?;
    let z = input_impedance(&qw, 100.0)?;
    println!(
        "quarter-wave 70.7 ohm line into 100 ohm: Z_in = {:.4} ohm",
        z
    );

    let lossy = TransmissionLineSpec::new(50.0, eps_eff, 0.05, 10.0)?;
    let s = to_scattering(&make_tline(&lossy, f)?, 50.0)?;
    println!(
        "10 mm of 0.05 dB/mm line: |S21| = {:.4} dB",
        s.insertion_gain_db()
    );

    let match_net = cascade(
        &series_element(Complex64::new(0.0, 50.0), f)?,
        &ideal_transformer(2.0, f)?,
    )?;
    let z = input_impedance(&match_net, 12.5)?;
    println!(
        "j50 ohm then 2:1 transformer into 12.5 ohm: Z_in = {:.4} ohm",
        z
    );

    let wd = WilkinsonDivider::new(50.0, f)?;
    println!(
        "Wilkinson arms {:.2} ohm, isolation resistor {:.0} ohm",
        wd.arm_impedance(),
        wd.isolation_resistance()
    );
    for ghz in [16.0, 18.0, 20.0, 22.0, 24.0] {
        let s = wd.scattering(ghz * 1e9)?;
        let split = 20.0 * s.get(2, 1).norm().log10();
        println!(
            "  {ghz:4.1} GHz: return loss {:6.2} dB, split {:6.3} dB, isolation {:6.2} dB",
            return_loss_db(s.get(1, 1)),
            split,
            -20.0 * s.get(3, 2).norm().log10()
        );
    }
    Ok(())
}
