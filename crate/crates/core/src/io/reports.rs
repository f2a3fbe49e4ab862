//! Companion CSVs of the experiment reports, one row per record.

use std::io::{Result, Write};

use super::points::{num, write_rows};
use crate::experiments::{BoundaryLevel, BridgeReport, CountPoint, CountWindow, MaxDepthTrial, ShapeTrial};
use crate::semiconvex::CellTrial;

pub fn write_cell_trials_csv<W: Write>(out: W, records: &[CellTrial]) -> Result<()> {
    let rows = records.iter().map(|t| {
        vec![t.trial.to_string(), num(t.r), num(t.beta), t.s_value.to_string(), t.n_points.to_string(), num(t.wall_ms)]
    });
    write_rows(out, &["trial", "r", "beta", "s_value", "n_points", "wall_ms"], rows)
}

pub fn write_max_depth_csv<W: Write>(out: W, records: &[MaxDepthTrial]) -> Result<()> {
    let rows = records.iter().map(|t| {
        vec![
            num(t.n),
            t.trial.to_string(),
            t.stream.to_string(),
            t.n_points.to_string(),
            t.max_height.to_string(),
            t.layers.to_string(),
        ]
    });
    write_rows(out, &["n", "trial", "stream", "n_points", "max_height", "layers"], rows)
}

pub fn write_shape_csv<W: Write>(out: W, records: &[ShapeTrial]) -> Result<()> {
    let rows = records.iter().map(|t| {
        vec![
            num(t.m),
            t.trial.to_string(),
            t.stream.to_string(),
            t.n_points.to_string(),
            t.layers.to_string(),
            num(t.sup_error),
            num(t.sup_at[0]),
            num(t.sup_at[1]),
            num(t.alpha_fit),
        ]
    });
    let header = ["m", "trial", "stream", "n_points", "layers", "sup_error", "sup_x1", "sup_x2", "alpha_fit"];
    write_rows(out, &header, rows)
}

/// The rescaled histogram; the prediction is 0 beyond `α h(0)`.
pub fn write_count_curve_csv<W: Write>(out: W, curve: &[CountPoint]) -> Result<()> {
    let rows = curve.iter().map(|c| {
        vec![c.layer.to_string(), num(c.t), num(c.mean_count), num(c.rescaled), num(c.predicted.unwrap_or(0.0))]
    });
    write_rows(out, &["layer", "t", "mean_count", "rescaled", "predicted"], rows)
}

pub fn write_count_windows_csv<W: Write>(out: W, windows: &[CountWindow]) -> Result<()> {
    let rows = windows
        .iter()
        .map(|w| vec![num(w.a), num(w.b), num(w.empirical), num(w.predicted), num(w.relative_error)]);
    write_rows(out, &["a", "b", "empirical", "predicted", "relative_error"], rows)
}

pub fn write_boundary_csv<W: Write>(out: W, levels: &[BoundaryLevel]) -> Result<()> {
    let rows = levels.iter().flat_map(|l| {
        l.mean_counts
            .iter()
            .zip(&l.stderr_counts)
            .enumerate()
            .map(|(i, (m, s))| vec![num(l.n), (i + 1).to_string(), num(*m), num(*s)])
    });
    write_rows(out, &["n", "layer", "mean_count", "stderr"], rows)
}

pub fn write_bridge_csv<W: Write>(out: W, report: &BridgeReport) -> Result<()> {
    let rows = (0..report.counts.len()).map(|t| {
        vec![
            t.to_string(),
            report.counts[t].to_string(),
            report.poisson_max_height[t].to_string(),
            report.iid_max_height[t].to_string(),
        ]
    });
    write_rows(out, &["trial", "count", "poisson_max_height", "iid_max_height"], rows)
}

/// Grid evaluations `x1,…,xd,h` for plotting.
pub fn write_grid_csv<W: Write>(out: W, points: &[[f64; 2]], values: &[f64]) -> Result<()> {
    let rows = points.iter().zip(values).map(|(p, h)| vec![num(p[0]), num(p[1]), num(*h)]);
    write_rows(out, &["x1", "x2", "h"], rows)
}
