//! Entanglement swapping as a state map: Werner parameters multiply under
//! an ideal Bell measurement, partial photon distinguishability mixes in
//! the separable herald background, and M = 0 hits the classical floor.
//!
//! Run: `cargo run --example bell_swap`

use qd_relay::chain::{bsm_swap, concurrence, fidelity_to_bell, TwoQubitState};

fn main() -> qd_relay::Result<()> {
    // repeated ideal swaps against a fresh Werner(0.95) pair each round
    let p = 14.0 / 15.0; // Werner mixing weight for fidelity 0.95
    let fresh = TwoQubitState::werner(p)?;
    println!("chaining ideal swaps with fresh fidelity-0.95 pairs:");
    println!("{:>7}  {:>9}  {:>11}  {:>9}", "swaps", "fidelity", "concurrence", "herald p");
    println!(
        "{:>7}  {:>9.5}  {:>11.5}  {:>9}",
        0,
        fidelity_to_bell(&fresh),
        concurrence(&fresh),
        "-"
    );
    let mut state = fresh.clone();
    for k in 1..=4 {
        let (next, herald) = bsm_swap(&state, &fresh, 1.0)?;
        state = next;
        println!(
            "{k:>7}  {:>9.5}  {:>11.5}  {herald:>9.4}",
            fidelity_to_bell(&state),
            concurrence(&state)
        );
    }
    println!("(fidelity follows (3·pⁿ⁺¹ + 1)/4: the Werner family is closed under swaps)");

    // photon distinguishability at the measurement
    let bell = TwoQubitState::bell_phi_plus();
    println!("\nswap of two perfect pairs vs photon mode overlap M:");
    println!("{:>6}  {:>9}  {:>11}", "M", "fidelity", "concurrence");
    for m in [1.0, 0.95, 0.8, 0.5, 0.0] {
        let (out, _) = bsm_swap(&bell, &bell, m)?;
        println!(
            "{m:>6.2}  {:>9.5}  {:>11.5}",
            fidelity_to_bell(&out),
            concurrence(&out)
        );
    }
    println!("(at M = 0 the herald carries no entanglement: fidelity ¼, concurrence 0)");
    Ok(())
}
