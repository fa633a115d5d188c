//! Prints the comparison table with recomputed EIRP/PDC and flags columns
//! whose published figure does not follow from the other rows.
//!
//! ```text
//! cargo run --example soa_table
//! ```

use pdnlab::array_budget::soa_compare_table;

fn main() {
    println!(
        "{:<10} {:>5} {:>6} {:>9} {:>10} {:>12} {:>8}",
        "column", "N", "EIRP", "PDC/el", "stored %", "recomputed %", "flag"
    );
    for c in soa_compare_table() {
        println!(
            "{:<10} {:>5} {:>6.1} {:>9.0} {:>10.2} {:>12.2} {:>8}",
            c.column,
            c.array_size,
            c.eirp_dbm,
            c.pdc_tx_per_el_mw,
            c.stored_pct,
            c.recomputed_pct,
            if c.discrepancy { "differs" } else { "" }
        );
    }
}
