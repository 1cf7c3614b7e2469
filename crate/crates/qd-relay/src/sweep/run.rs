//! Sweep execution: every (axis1, axis2, depth) cell evaluated through the
//! relay chain, assembled in lattice order so output is deterministic no
//! matter how many threads run.

use rayon::prelude::*;

use crate::chain::{chain_fidelity, pair_rate, ChainOutcome};
use crate::error::{Error, Result};

use super::config::{ChainTemplate, SweepSpec};

/// One evaluated cell.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub axis1: f64,
    pub axis2: f64,
    pub depth: usize,
    pub fidelity: f64,
    pub success_prob: f64,
    pub pair_rate_hz: f64,
}

/// All cells of a sweep, ordered by (depth, axis1 index, axis2 index).
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub axis1_name: String,
    pub axis2_name: String,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Vec<f64>,
    pub depths: Vec<usize>,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// Fidelity at a lattice cell for one depth, if present.
    pub fn fidelity_at(&self, depth: usize, i1: usize, i2: usize) -> Option<f64> {
        let d = self.depths.iter().position(|&x| x == depth)?;
        let n1 = self.axis1_values.len();
        let n2 = self.axis2_values.len();
        if i1 >= n1 || i2 >= n2 {
            return None;
        }
        Some(self.rows[(d * n1 + i1) * n2 + i2].fidelity)
    }
}

fn evaluate_cell(
    template: &ChainTemplate,
    depth: usize,
) -> Result<(ChainOutcome, f64)> {
    let chain = template.build_chain(depth)?;
    let outcome = chain_fidelity(&chain)?;
    let rate = pair_rate(&template.rate, chain.links(), &[outcome.success_prob])?;
    Ok((outcome, rate))
}

fn annotate(e: Error, context: String) -> Error {
    match e {
        Error::Config(m) => Error::Config(format!("{context}: {m}")),
        Error::Domain(m) => Error::Domain(format!("{context}: {m}")),
        Error::Resolution(m) => Error::Resolution(format!("{context}: {m}")),
        Error::Contract(m) => Error::Contract(format!("{context}: {m}")),
        Error::Io(m) => Error::Io(m),
    }
}

/// Evaluates the full lattice for every requested depth. Cells run in
/// parallel on the current rayon pool; assembly order is fixed by index.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    let n1 = spec.axis1.values.len();
    let n2 = spec.axis2.values.len();
    let cells: Vec<(usize, usize, usize)> = spec
        .depths
        .iter()
        .flat_map(|&d| {
            (0..n1).flat_map(move |i1| (0..n2).map(move |i2| (d, i1, i2)))
        })
        .collect();

    let rows: Vec<Result<ResultRow>> = cells
        .par_iter()
        .map(|&(depth, i1, i2)| {
            let v1 = spec.axis1.values[i1];
            let v2 = spec.axis2.values[i2];
            let cell = || -> Result<ResultRow> {
                let t = spec
                    .template
                    .with_axis(spec.axis1.param, v1)?
                    .with_axis(spec.axis2.param, v2)?;
                let (outcome, rate) = evaluate_cell(&t, depth)?;
                Ok(ResultRow {
                    axis1: v1,
                    axis2: v2,
                    depth,
                    fidelity: outcome.fidelity,
                    success_prob: outcome.success_prob,
                    pair_rate_hz: rate,
                })
            };
            cell().map_err(|e| {
                annotate(
                    e,
                    format!(
                        "at {}={v1}, {}={v2}, L={depth}",
                        spec.axis1.param.name(),
                        spec.axis2.param.name()
                    ),
                )
            })
        })
        .collect();

    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(r?);
    }
    Ok(ResultTable {
        axis1_name: spec.axis1.param.name().to_string(),
        axis2_name: spec.axis2.param.name().to_string(),
        axis1_values: spec.axis1.values.clone(),
        axis2_values: spec.axis2.values.clone(),
        depths: spec.depths.clone(),
        rows: out,
    })
}

/// `point` evaluation: the fixed template at each requested depth, with the
/// full chain diagnostics attached.
pub fn run_point(
    template: &ChainTemplate,
    depths: &[usize],
) -> Result<Vec<(usize, ChainOutcome, f64)>> {
    depths
        .iter()
        .map(|&d| {
            let (outcome, rate) =
                evaluate_cell(template, d).map_err(|e| annotate(e, format!("at L={d}")))?;
            Ok((d, outcome, rate))
        })
        .collect()
}
