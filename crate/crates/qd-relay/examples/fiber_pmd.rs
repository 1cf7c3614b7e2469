//! Polarization-mode dispersion in deployed fiber: differential group
//! delay vs length, the coherence it costs, and the resulting fidelity
//! fall-off for fast and slow emitters.
//!
//! Run: `cargo run --example fiber_pmd`

use qd_relay::chain::{apply_pmd, concurrence, fidelity_to_bell, TwoQubitState};
use qd_relay::formulas::{fidelity_pmd, pmd_kappa, pmd_tau, PmdAlignment};

fn main() -> qd_relay::Result<()> {
    let d = 0.1; // ps/√km

    println!("differential group delay τ = 2D√l (D = {d} ps/√km):");
    println!("{:>9}  {:>12}  {:>13}", "l (km)", "worst (ps)", "aligned (ps)");
    for l in [1.0, 10.0, 50.0, 200.0] {
        let worst = pmd_tau(d, l, PmdAlignment::WorstCase)?;
        let aligned = pmd_tau(d, l, PmdAlignment::AlignedEqual)?;
        println!("{l:>9.0}  {worst:>12.4}  {aligned:>13.4}");
    }

    let tau = pmd_tau(d, 200.0, PmdAlignment::WorstCase)?;
    println!("\nafter 200 km (τ = {tau:.4} ps):");
    println!("{:>9}  {:>9}  {:>9}", "T1 (ps)", "κ", "fidelity");
    for t1 in [270.0, 120.0, 10.0, 1.0] {
        println!(
            "{t1:>9.0}  {:>9.4}  {:>9.4}",
            pmd_kappa(tau, t1)?,
            fidelity_pmd(tau, t1)?
        );
    }
    println!("(long packets barely notice a few ps of delay; ps-scale packets decohere)");

    // the same channel as a map on the polarization state
    let bell = TwoQubitState::bell_phi_plus();
    println!("\nBell pair through the channel, one photon travelling (T1 = 1 ps):");
    println!("{:>9}  {:>9}  {:>11}", "τ (ps)", "fidelity", "concurrence");
    for tau in [0.0, 1.0, 2.8284, 8.0] {
        let out = apply_pmd(&bell, tau, 1.0)?;
        println!(
            "{tau:>9.3}  {:>9.4}  {:>11.4}",
            fidelity_to_bell(&out),
            concurrence(&out)
        );
    }
    Ok(())
}
