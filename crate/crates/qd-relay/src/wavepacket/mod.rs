//! Two-photon wave-packet engine.
//!
//! [`joint`] holds the lattice representation of cascade amplitudes and the
//! filter / dispersion transforms; [`density`] reduces them to single-photon
//! density matrices; [`overlap`] computes interference visibilities between
//! lattice states; [`kernel`] provides the equivalent closed forms used by
//! parameter sweeps.

pub mod density;
pub mod joint;
pub mod kernel;
pub mod overlap;

pub use density::{reduced_density, TemporalDensity};
pub use joint::{
    cascade_joint_amplitude, product_joint_amplitude, DispersionSpec, FilterSpec, JointAmplitude,
    Photon,
};
pub use kernel::{
    bsm_overlap_cross, bsm_overlap_x, bsm_overlap_xx, overlap_cross, overlap_x, overlap_xx,
    SourceKernel,
};
pub use overlap::mode_overlap;
