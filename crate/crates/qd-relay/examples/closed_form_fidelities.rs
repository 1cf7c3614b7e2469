//! Closed-form ceiling on the entanglement fidelity of a single emitted
//! pair as fine-structure splitting, multi-photon background, and Purcell
//! enhancement vary.
//!
//! Run: `cargo run --example closed_form_fidelities`

use qd_relay::formulas::{fidelity_max, natural_linewidth, SourceSpectral};

fn main() -> qd_relay::Result<()> {
    println!(
        "natural linewidth at T1 = 270 ps: {:.4} µeV",
        natural_linewidth(270.0)
    );

    println!("\nfidelity ceiling vs fine-structure splitting (T1_X = 270 ps, g2 = 0):");
    println!("{:>8}  {:>10}", "S (µeV)", "fidelity");
    for s in [0.0, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2] {
        let src = SourceSpectral::new(s, 270.0, 120.0, 0.0, 0.0)?;
        println!("{s:>8.2}  {:>10.6}", fidelity_max(&src));
    }

    println!("\nfidelity ceiling vs multi-photon probability (S = 0):");
    println!("{:>8}  {:>10}", "g2", "fidelity");
    for g2 in [0.0, 8e-5, 1e-3, 1e-2, 5e-2] {
        let src = SourceSpectral::new(0.0, 270.0, 120.0, g2, 0.0)?;
        println!("{g2:>8.0e}  {:>10.6}", fidelity_max(&src));
    }

    // shorter lifetime ⇒ wider line ⇒ the same splitting hurts less
    println!("\nPurcell rescue at S = 2 µeV:");
    println!("{:>8}  {:>10}", "P", "fidelity");
    for p in [1.0, 2.0, 5.0, 10.0] {
        let src = SourceSpectral::new(2.0, 270.0 / p, 120.0 / p, 0.0, 0.0)?;
        println!("{p:>8.1}  {:>10.6}", fidelity_max(&src));
    }
    Ok(())
}
