//! EIRP, fill factor, compensation power and EIRP/PDC for a 16-element array
//! as routing loss grows.
//!
//! ```text
//! cargo run --example link_budget
//! ```

use pdnlab::array_budget::{budget, BudgetInputs, ElementSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let element = ElementSpec {
        g_el: ElementSpec::gain_from_array(12.0, 16),
        ..ElementSpec::default()
    };
    println!(
        "per-element gain from a 12 dB array: {:.3} dB",
        element.g_el
    );
    println!(
        "{:>8} {:>6} {:>8} {:>10} {:>8} {:>12}",
        "loss dB", "N_eff", "fill", "EIRP dBm", "eff %", "comp mW"
    );
    for loss in [0.0, 1.0, 2.0, 3.0, 6.0] {
        let r = budget(&BudgetInputs {
            element,
            n: 16,
            routing_loss_db: loss,
            freq_hz: 78.5e9,
            eirp_measured: None,
        })?;
        println!(
            "{loss:>8.1} {:>6} {:>8.4} {:>10.3} {:>8.3} {:>12.2}",
            r.n_eff, r.fill_ratio, r.eirp, r.efficiency_pct, r.comp_power
        );
    }

    let measured = budget(&BudgetInputs {
        element,
        n: 16,
        routing_loss_db: 0.0,
        freq_hz: 78.5e9,
        eirp_measured: Some(30.0),
    })?;
    println!(
        "with 30 dBm measured EIRP: {:.1} % of {:.0} mW",
        measured.efficiency_pct, measured.p_dc_total
    );
    Ok(())
}
