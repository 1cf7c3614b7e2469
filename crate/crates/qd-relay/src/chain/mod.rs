//! Two-qubit polarization states, quantum-dot pair sources, fiber
//! dephasing, Bell-state-measurement swapping, and the recursive relay
//! chain built from all of the above.

pub mod rate;
pub mod relay;
pub mod source;
pub mod state;
pub mod swap;

pub use rate::{pair_rate, RateParams};
pub use relay::{
    chain_fidelity, BsmDiag, BsmPairing, ChainOutcome, FiberLink, RelayChain,
};
pub use source::{
    pair_state_with_coherence, source_pair_state, QdSource, BASE_T1_X, BASE_T1_XX,
    PURCELL_VALIDITY_LIMIT,
};
pub use state::{apply_pmd, concurrence, fidelity_to_bell, TwoQubitState};
pub use swap::{bsm_swap, bsm_swap_with_policy, BsmNoisePolicy};
