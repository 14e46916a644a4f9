//! Juxtaposes DLA slicing estimates with the measured interface dimensions
//! of four turbulent shear flows.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analyze::{Estimate, Results};
use crate::config::Analysis;
use crate::error::{CliError, Result};
use crate::grow::{create_dir, write_file};

/// Quoted uncertainty of the turbulence measurements.
pub const TURBULENCE_ERROR: f64 = 0.04;

/// Interface dimension of one flow, measured on planar (2-D) and linear
/// (1-D) cuts. `None` marks a cell that was not measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub flow: &'static str,
    pub slice_2d: Option<f64>,
    pub slice_1d: Option<f64>,
}

pub const REFERENCE_TABLE: [ReferenceRow; 4] = [
    ReferenceRow {
        flow: "Boundary layer",
        slice_2d: Some(2.38),
        slice_1d: Some(2.40),
    },
    ReferenceRow {
        flow: "Axisymmetric jet",
        slice_2d: Some(2.33),
        slice_1d: Some(2.32),
    },
    ReferenceRow {
        flow: "Plane wake",
        slice_2d: None,
        slice_1d: Some(2.37),
    },
    ReferenceRow {
        flow: "Mixing layer",
        slice_2d: None,
        slice_1d: Some(2.40),
    },
];

/// Which cut a reference column corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Column {
    #[serde(rename = "2-D slicing")]
    Planar,
    #[serde(rename = "1-D slicing")]
    Linear,
}

impl Column {
    /// Codimension of the matching DLA slicing estimate.
    pub fn codim(self) -> usize {
        match self {
            Column::Planar => 1,
            Column::Linear => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Column::Planar => "2-D slicing",
            Column::Linear => "1-D slicing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub flow: &'static str,
    pub column: Column,
    pub reference: Option<f64>,
    /// Codimension of the DLA estimate compared against.
    pub codim: usize,
    pub estimate: f64,
    pub stderr: f64,
    pub delta: Option<f64>,
    pub tolerance: f64,
    pub within: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlaEstimate {
    pub codim: usize,
    pub source: String,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub estimates: Vec<DlaEstimate>,
    pub rows: Vec<ComparisonRow>,
    /// Rows with a reference value.
    pub compared: usize,
    pub within: usize,
    pub mean_abs_delta: Option<f64>,
}

/// `|delta| <= 0.04 + stderr`.
pub fn within_tolerance(delta: f64, stderr: f64) -> bool {
    delta.abs() <= TURBULENCE_ERROR + stderr
}

/// Picks the first 3D slicing estimate of each codimension from the given
/// results files.
pub fn collect_estimates(results: &[(String, Results)]) -> Vec<DlaEstimate> {
    let mut found: Vec<DlaEstimate> = Vec::new();
    for (source, res) in results {
        if res.snapshot.dim != 3 {
            continue;
        }
        for r in &res.results {
            if let Analysis::Slicedim { codim, .. } = r.analysis {
                if !found.iter().any(|e| e.codim == codim) {
                    found.push(DlaEstimate {
                        codim,
                        source: source.clone(),
                        estimate: r.estimate,
                    });
                }
            }
        }
    }
    found.sort_by_key(|e| e.codim);
    found
}

/// Compares each reference cell with the DLA estimate of matching
/// codimension, or with the other one when only one is available.
pub fn build_report(results: &[(String, Results)]) -> Result<Report> {
    let estimates = collect_estimates(results);
    if estimates.is_empty() {
        return Err(CliError::Config(
            "no 3D slicing estimate found in the given results".into(),
        ));
    }
    let pick = |codim: usize| {
        estimates
            .iter()
            .find(|e| e.codim == codim)
            .unwrap_or(&estimates[0])
    };

    let mut rows = Vec::new();
    for row in REFERENCE_TABLE {
        for (column, reference) in [
            (Column::Planar, row.slice_2d),
            (Column::Linear, row.slice_1d),
        ] {
            let dla = pick(column.codim());
            let est = dla.estimate;
            let delta = reference.map(|r| est.d - r);
            rows.push(ComparisonRow {
                flow: row.flow,
                column,
                reference,
                codim: dla.codim,
                estimate: est.d,
                stderr: est.stderr,
                delta,
                tolerance: TURBULENCE_ERROR + est.stderr,
                within: delta.map(|d| within_tolerance(d, est.stderr)),
            });
        }
    }
    let deltas: Vec<f64> = rows.iter().filter_map(|r| r.delta).map(f64::abs).collect();
    Ok(Report {
        version: crate::VERSION.to_string(),
        estimates,
        compared: deltas.len(),
        within: rows.iter().filter(|r| r.within == Some(true)).count(),
        mean_abs_delta: (!deltas.is_empty())
            .then(|| deltas.iter().sum::<f64>() / deltas.len() as f64),
        rows,
    })
}

const DASH: &str = "—";

fn cell(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| DASH.to_string(), |x| format!("{x:.digits$}"))
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for e in &report.estimates {
        let _ = writeln!(
            out,
            "DLA codim-{} slicing: D = {:.3} ± {:.3} ({})",
            e.codim, e.estimate.d, e.estimate.stderr, e.source
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<18} {:<12} {:>6} {:>7} {:>7} {:>7}  within",
        "flow", "column", "table", "DLA", "|Δ|", "tol"
    );
    for r in &report.rows {
        let flag = match r.within {
            Some(true) => "yes",
            Some(false) => "no",
            None => DASH,
        };
        let _ = writeln!(
            out,
            "{:<18} {:<12} {:>6} {:>7.3} {:>7} {:>7.3}  {}",
            r.flow,
            r.column.label(),
            cell(r.reference, 2),
            r.estimate,
            cell(r.delta.map(f64::abs), 3),
            r.tolerance,
            flag
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{}/{} measured cells within 0.04 + stderr; mean |Δ| = {}",
        report.within,
        report.compared,
        cell(report.mean_abs_delta, 3)
    );
    out
}

/// Loads results files, prints the comparison and writes `report.txt` and
/// `report.json` when an output directory is given.
pub fn cmd_report(paths: &[PathBuf], out_dir: Option<&Path>) -> Result<(Report, String)> {
    if paths.is_empty() {
        return Err(CliError::Config(
            "report needs at least one results file".into(),
        ));
    }
    let mut loaded = Vec::new();
    for p in paths {
        loaded.push((p.display().to_string(), Results::load(p)?));
    }
    let report = build_report(&loaded)?;
    let text = render_text(&report);
    if let Some(dir) = out_dir {
        create_dir(dir)?;
        write_file(&dir.join("report.txt"), &text)?;
        let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
        json.push('\n');
        write_file(&dir.join("report.json"), &json)?;
    }
    Ok((report, text))
}
