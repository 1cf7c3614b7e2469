//! Parameter sweeps: TOML configuration with figure presets, parallel
//! lattice evaluation over the relay chain, and CSV/JSON/PPM emission.

pub mod config;
pub mod output;
pub mod run;

pub use config::{
    apply_preset, parse_config, resolve_sweep, resolve_template, serialize_config, AlignmentName,
    Axis, AxisParam, ChainTemplate, ConfigDoc, FiberSection, FilterSection, NoiseName,
    PairingName, PresetName, SourceSection, SweepSection, SweepSpec,
};
pub use output::{emit_outputs, heatmap_sidecar, to_csv, to_heatmap, to_json};
pub use run::{run_point, run_sweep, ResultRow, ResultTable};
