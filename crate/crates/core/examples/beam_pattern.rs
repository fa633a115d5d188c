//! Array-factor metrics for an ideal and a quantized, perturbed steered beam.
//!
//! ```text
//! cargo run --example beam_pattern
//! ```

use pdnlab::array_budget::{angle_grid, array_factor, SteeringState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = angle_grid(0.05);
    let cases = [
        ("4 el, broadside", 4, SteeringState::broadside()),
        ("4 el, 30 deg", 4, SteeringState::steered(30.0)),
        ("16 el, broadside", 16, SteeringState::broadside()),
        (
            "8 el, 20 deg, 3-bit, 0.5 dB",
            8,
            SteeringState {
                theta0: 20.0,
                phase_bits: 3,
                amp_err_db: 0.5,
                seed: 7,
            },
        ),
    ];
    for (label, n, steering) in cases {
        let p = array_factor(n, 0.5, &steering, &grid)?;
        let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.2}"));
        let worst_lobe = p
            .side_lobes()
            .iter()
            .map(|l| l.1)
            .fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{label:<28} peak {:6.2} deg  HPBW {:>6} deg  null {:>6} deg  peak/null {:>6} dB  side lobe {:.2} dB",
            p.peak_angle(),
            show(p.hpbw),
            show(p.first_null),
            show(p.peak_to_null),
            worst_lobe
        );
    }
    Ok(())
}
