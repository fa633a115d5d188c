//! Routing length, junction count, loss and area of the three distribution
//! topologies as the array grows.
//!
//! ```text
//! cargo run --example topology_compare
//! ```

use pdnlab::pdn_topology::{frequency_flatness, sweep_compare, LineDefaults, TopologyKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let defaults = LineDefaults::default();
    let template = defaults.array(16, 4)?;
    println!(
        "lambda_w = {:.3} mm, lambda_g = {:.3} mm at {:.1} GHz",
        template.lambda_w,
        template.lambda_g,
        template.freq_lo / 1e9
    );
    println!(
        "{:<18} {:>3} {:>5} {:>10} {:>4} {:>9} {:>8}",
        "topology", "m", "N", "route mm", "J", "loss dB", "area"
    );
    for row in sweep_compare(&template, &[16, 64, 256, 1024], &[4, 16]) {
        match row.result {
            Ok(r) => println!(
                "{:<18} {:>3} {:>5} {:>10.1} {:>4} {:>9.3} {:>8.4}",
                r.kind.as_str(),
                r.m_per_die,
                r.n_total,
                r.routing_length,
                r.junctions,
                r.loss_total,
                r.normalized_area
            ),
            Err(e) => println!(
                "{:<18} {:>3} {:>5} {e}",
                row.kind.as_str(),
                row.m_per_die,
                row.n_total
            ),
        }
    }

    let band = (0.9 * template.freq_lo, 1.1 * template.freq_lo);
    for kind in TopologyKind::ALL {
        let dev = frequency_flatness(&template, kind, band)?;
        println!("{:<18} flatness over +/-10 %: {dev:.4} dB", kind.as_str());
    }
    Ok(())
}
