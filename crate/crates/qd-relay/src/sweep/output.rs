//! Table serialization: CSV with a fixed header, a JSON mirror, and one
//! P6 portable-pixmap heatmap per depth with a plain-text sidecar
//! describing axes and color map.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::run::ResultTable;

/// Each lattice cell becomes a square of this many pixels on a side.
pub const HEATMAP_CELL_PX: usize = 16;
/// Fidelity mapped linearly onto the gray ramp over this fixed range.
pub const HEATMAP_RANGE: (f64, f64) = (0.25, 1.0);

/// CSV: fixed header, one line per row, 9 significant digits.
pub fn to_csv(t: &ResultTable) -> String {
    let mut s = String::with_capacity(64 * (t.rows.len() + 1));
    s.push_str("axis1,axis2,L,fidelity,success_prob,pair_rate_hz\n");
    for r in &t.rows {
        let _ = writeln!(
            s,
            "{:.8e},{:.8e},{},{:.8e},{:.8e},{:.8e}",
            r.axis1, r.axis2, r.depth, r.fidelity, r.success_prob, r.pair_rate_hz
        );
    }
    s
}

#[derive(Serialize)]
struct JsonRow {
    axis1: f64,
    axis2: f64,
    #[serde(rename = "L")]
    depth: usize,
    fidelity: f64,
    success_prob: f64,
    pair_rate_hz: f64,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    axis1_name: &'a str,
    axis2_name: &'a str,
    axis1_values: &'a [f64],
    axis2_values: &'a [f64],
    depths: &'a [usize],
    rows: Vec<JsonRow>,
}

/// JSON mirror of the CSV content plus the axis metadata.
pub fn to_json(t: &ResultTable) -> String {
    let table = JsonTable {
        axis1_name: &t.axis1_name,
        axis2_name: &t.axis2_name,
        axis1_values: &t.axis1_values,
        axis2_values: &t.axis2_values,
        depths: &t.depths,
        rows: t
            .rows
            .iter()
            .map(|r| JsonRow {
                axis1: r.axis1,
                axis2: r.axis2,
                depth: r.depth,
                fidelity: r.fidelity,
                success_prob: r.success_prob,
                pair_rate_hz: r.pair_rate_hz,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&table).expect("plain numeric table serializes")
}

fn gray(fidelity: f64) -> u8 {
    let (lo, hi) = HEATMAP_RANGE;
    let v = ((fidelity - lo) / (hi - lo)).clamp(0.0, 1.0);
    (v * 255.0).round() as u8
}

/// P6 pixmap for one depth. Columns run along axis1 (ascending), rows along
/// axis2 (descending, so the image reads like a plot with axis2 upward).
/// Each cell is a `HEATMAP_CELL_PX`-square block.
pub fn to_heatmap(t: &ResultTable, depth: usize) -> Result<Vec<u8>> {
    if !t.depths.contains(&depth) {
        return Err(Error::Contract(format!(
            "depth {depth} is not part of this table"
        )));
    }
    let n1 = t.axis1_values.len();
    let n2 = t.axis2_values.len();
    if n1 == 0 || n2 == 0 || t.rows.is_empty() {
        return Err(Error::Contract("cannot render an empty table".into()));
    }
    let (w, h) = (n1 * HEATMAP_CELL_PX, n2 * HEATMAP_CELL_PX);
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve(3 * w * h);
    for py in 0..h {
        let i2 = n2 - 1 - py / HEATMAP_CELL_PX;
        for px in 0..w {
            let i1 = px / HEATMAP_CELL_PX;
            let f = t
                .fidelity_at(depth, i1, i2)
                .expect("lattice cell exists by construction");
            let g = gray(f);
            out.extend_from_slice(&[g, g, g]);
        }
    }
    Ok(out)
}

/// Axis annotations and color-map documentation for one heatmap.
pub fn heatmap_sidecar(t: &ResultTable, depth: usize) -> String {
    let n1 = t.axis1_values.len();
    let n2 = t.axis2_values.len();
    let (lo, hi) = HEATMAP_RANGE;
    format!(
        "heatmap_L{depth}.ppm — relay chain depth L = {depth}\n\
         columns (left → right): {} from {} to {} ({} cells)\n\
         rows (top → bottom): {} from {} to {} ({} cells)\n\
         cell size: {HEATMAP_CELL_PX}×{HEATMAP_CELL_PX} px\n\
         color map: linear grayscale, fidelity {lo} → gray 0 (black), \
         fidelity {hi} → gray 255 (white), clamped outside\n",
        t.axis1_name,
        t.axis1_values[0],
        t.axis1_values[n1 - 1],
        n1,
        t.axis2_name,
        t.axis2_values[n2 - 1],
        t.axis2_values[0],
        n2,
    )
}

/// Writes `sweep.csv`, `sweep.json`, and per-depth `heatmap_L*.ppm` +
/// `heatmap_L*.txt` into `out_dir`, returning the paths written.
pub fn emit_outputs(t: &ResultTable, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if t.rows.is_empty() {
        return Err(Error::Contract("refusing to emit an empty table".into()));
    }
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let csv_path = out_dir.join("sweep.csv");
    fs::write(&csv_path, to_csv(t))?;
    written.push(csv_path);
    let json_path = out_dir.join("sweep.json");
    fs::write(&json_path, to_json(t))?;
    written.push(json_path);
    for &d in &t.depths {
        let ppm = out_dir.join(format!("heatmap_L{d}.ppm"));
        fs::write(&ppm, to_heatmap(t, d)?)?;
        written.push(ppm);
        let txt = out_dir.join(format!("heatmap_L{d}.txt"));
        fs::write(&txt, heatmap_sidecar(t, d))?;
        written.push(txt);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::run::ResultRow;

    fn table(n1: usize, n2: usize, depths: Vec<usize>, f: impl Fn(usize, usize) -> f64) -> ResultTable {
        let axis1_values: Vec<f64> = (0..n1).map(|i| i as f64).collect();
        let axis2_values: Vec<f64> = (0..n2).map(|i| 0.1 * i as f64).collect();
        let mut rows = Vec::new();
        for &d in &depths {
            for i1 in 0..n1 {
                for i2 in 0..n2 {
                    rows.push(ResultRow {
                        axis1: axis1_values[i1],
                        axis2: axis2_values[i2],
                        depth: d,
                        fidelity: f(i1, i2),
                        success_prob: 0.5,
                        pair_rate_hz: 4.68e7,
                    });
                }
            }
        }
        ResultTable {
            axis1_name: "purcell".into(),
            axis2_name: "jitter".into(),
            axis1_values,
            axis2_values,
            depths,
            rows,
        }
    }

    #[test]
    fn csv_shape_and_digits() {
        let t = table(1, 1, vec![0], |_, _| 0.931555413516);
        let csv = to_csv(&t);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "axis1,axis2,L,fidelity,success_prob,pair_rate_hz");
        assert_eq!(lines[1], "0.00000000e0,0.00000000e0,0,9.31555414e-1,5.00000000e-1,4.68000000e7");

        let t9 = table(3, 3, vec![1], |i1, i2| 0.5 + 0.01 * (i1 + i2) as f64);
        assert_eq!(to_csv(&t9).lines().count(), 10);
    }

    #[test]
    fn json_mirrors_rows() {
        let t = table(2, 2, vec![1, 2], |i1, _| 0.9 - 0.1 * i1 as f64);
        let v: serde_json::Value = serde_json::from_str(&to_json(&t)).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 8);
        assert_eq!(v["axis1_name"], "purcell");
        assert_eq!(v["rows"][0]["L"], 1);
        assert_eq!(v["rows"][0]["fidelity"], 0.9);
        assert_eq!(v["depths"], serde_json::json!([1, 2]));
    }

    #[test]
    fn heatmap_shape_and_orientation() {
        // fidelity rises with axis2; top row of the image is max axis2 so it
        // must be the brightest.
        let t = table(3, 3, vec![1], |_, i2| 0.25 + 0.25 * i2 as f64);
        let ppm = to_heatmap(&t, 1).unwrap();
        let header = format!("P6\n{} {}\n255\n", 3 * HEATMAP_CELL_PX, 3 * HEATMAP_CELL_PX);
        assert!(ppm.starts_with(header.as_bytes()));
        let body = &ppm[header.len()..];
        assert_eq!(body.len(), 3 * 48 * 48);
        let top = body[0];
        let bottom = body[body.len() - 3];
        assert_eq!(top, gray(0.75));
        assert_eq!(bottom, gray(0.25));
        assert!(top > bottom);
        assert_eq!(gray(0.25), 0);
        assert_eq!(gray(1.0), 255);

        assert!(to_heatmap(&t, 7).is_err());
    }

    #[test]
    fn constant_table_renders_single_color() {
        let t = table(4, 2, vec![2], |_, _| 0.625);
        let ppm = to_heatmap(&t, 2).unwrap();
        let header_len = format!("P6\n{} {}\n255\n", 4 * HEATMAP_CELL_PX, 2 * HEATMAP_CELL_PX).len();
        let body = &ppm[header_len..];
        let g = gray(0.625);
        assert!(body.iter().all(|&b| b == g));
    }

    #[test]
    fn emit_writes_all_files() {
        let dir = std::env::temp_dir().join(format!("qd_relay_out_{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let t = table(2, 2, vec![1, 3], |_, _| 0.5);
        let written = emit_outputs(&t, &dir).unwrap();
        assert_eq!(written.len(), 6); // csv + json + 2×(ppm + txt)
        for p in &written {
            assert!(p.exists(), "{}", p.display());
        }
        let sidecar = std::fs::read_to_string(dir.join("heatmap_L1.txt")).unwrap();
        assert!(sidecar.contains("purcell"));
        assert!(sidecar.contains("grayscale"));
        let empty = ResultTable { rows: Vec::new(), ..t };
        assert!(emit_outputs(&empty, &dir).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
