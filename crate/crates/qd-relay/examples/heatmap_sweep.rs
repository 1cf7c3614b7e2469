//! The headline map: end-to-end fidelity over filter width × jitter for
//! relay depths 1–3, written as CSV/JSON/PPM and sketched here as ASCII.
//!
//! Run: `cargo run --example heatmap_sweep`

use qd_relay::sweep::{apply_preset, emit_outputs, resolve_sweep, run_sweep, ConfigDoc, PresetName};

fn main() -> qd_relay::Result<()> {
    let mut doc = ConfigDoc::default();
    apply_preset(&mut doc, PresetName::Fig2c);
    let spec = resolve_sweep(&doc, None)?;
    let table = run_sweep(&spec)?;

    let out = std::path::Path::new("target/heatmap-example");
    for path in emit_outputs(&table, out)? {
        println!("wrote {}", path.display());
    }

    // coarse ASCII view of the L = 2 slice: darker = lower fidelity
    let ramp: Vec<char> = " .:-=+*#%@".chars().collect();
    let depth = 2;
    println!("\nL = {depth}: fidelity over filter FWHM (→, µeV) × jitter (↓ from top = max, µeV)");
    for i2 in (0..table.axis2_values.len()).rev() {
        let mut line = String::new();
        for i1 in 0..table.axis1_values.len() {
            let f = table.fidelity_at(depth, i1, i2).unwrap();
            let t = ((f - 0.25) / 0.75).clamp(0.0, 1.0);
            line.push(ramp[(t * (ramp.len() - 1) as f64).round() as usize]);
        }
        println!("  δE={:>4.1} |{line}|", table.axis2_values[i2]);
    }
    println!(
        "          +{}+  δE_f from {} to {} µeV",
        "-".repeat(table.axis1_values.len()),
        table.axis1_values.first().unwrap(),
        table.axis1_values.last().unwrap()
    );

    let best = table
        .rows
        .iter()
        .filter(|r| r.depth == depth)
        .max_by(|a, b| a.fidelity.total_cmp(&b.fidelity))
        .unwrap();
    println!(
        "\nbest L = {depth} cell: F = {:.4} at δE_f = {} µeV, δE = {} µeV",
        best.fidelity, best.axis1, best.axis2
    );
    Ok(())
}
