//! Figure building and result-file reloading. The `--svg` flag and the
//! `render` subcommand share one path: boundary and slice results are
//! reduced to rounded rows (exactly what their CSV carries), and the
//! figure is built from those rows, so rendering inline or from a reloaded
//! file yields byte-identical SVG.

use std::path::Path;

use ccchart_core::boundary::{cylindrical_sweep, planar_sweep, spherical_sweep, TraceSamples};
use ccchart_core::catalog::{omega, preset, Design};
use ccchart_core::model::clarke_inverse;

use crate::outfmt::{round9, CliError, CliResult, RunConfig, CSV_CONFIG_PREFIX};
use crate::svg::{Curve, FigureSpec, MaskLayer};

pub const HEADER_PLANAR: &str = "theta_rad,r_pu";
pub const HEADER_SPHERICAL: &str = "theta_rad,psi_rad,r_pu";
pub const HEADER_SLICE: &str = "phat1,phat2,feasible";

/// Display name of the traced design, recoverable from the config alone so
/// inline rendering and re-rendering from a CSV agree byte for byte.
pub fn design_label(config: &RunConfig) -> String {
    if let Some(name) = config.presets.first() {
        return name.clone();
    }
    if let Some(path) = config.designs.first() {
        return Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.clone());
    }
    "design".to_string()
}

/// Rounded rows of a boundary CSV, one variant per cut.
pub enum BoundaryRows {
    Planar(Vec<(f64, f64)>),
    Spherical(Vec<(f64, f64, f64)>),
    Cylindrical(Vec<(f64, Option<f64>)>),
}

/// A result file reduced to renderable form.
pub enum ParsedResult {
    Boundary { config: RunConfig, rows: BoundaryRows },
    Slice { config: RunConfig, rows: Vec<(f64, f64, bool)> },
}

/// Rounds a freshly computed trace into CSV-exact rows.
pub fn rows_from_trace(samples: &TraceSamples) -> BoundaryRows {
    match samples {
        TraceSamples::Planar { samples } => {
            BoundaryRows::Planar(samples.iter().map(|&(a, r)| (round9(a), round9(r))).collect())
        }
        TraceSamples::Spherical { samples, .. } => BoundaryRows::Spherical(
            samples.iter().map(|&(t, p, r)| (round9(t), round9(p), round9(r))).collect(),
        ),
        TraceSamples::Cylindrical { samples, .. } => BoundaryRows::Cylindrical(
            samples.iter().map(|&(a, r)| (round9(a), r.map(round9))).collect(),
        ),
    }
}

/// Reads back a CSV written by this tool. Exit code 2 when the file is
/// unreadable, 5 when its content is not a renderable result.
pub fn parse_result_file(path: &Path) -> CliResult<ParsedResult> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::missing_file(path, e))?;
    let mut lines = text.lines();
    let config_line = lines
        .next()
        .ok_or_else(|| CliError::malformed_result(path, "empty file"))?;
    let config_json = config_line
        .strip_prefix(CSV_CONFIG_PREFIX)
        .ok_or_else(|| CliError::malformed_result(path, "missing run-config header line"))?;
    let config: RunConfig = serde_json::from_str(config_json)
        .map_err(|e| CliError::malformed_result(path, format!("bad run config: {e}")))?;
    let header = lines
        .next()
        .ok_or_else(|| CliError::malformed_result(path, "missing column header"))?;

    let parse_f64 = |field: &str, line_no: usize| -> CliResult<f64> {
        field.trim().parse::<f64>().map_err(|_| {
            CliError::malformed_result(path, format!("line {line_no}: bad number {field:?}"))
        })
    };

    match header {
        HEADER_PLANAR => {
            let cylindrical = config.mode.as_deref() == Some("cylindrical");
            let mut planar = Vec::new();
            let mut cyl = Vec::new();
            for (i, line) in lines.enumerate() {
                let line_no = i + 3;
                let mut fields = line.split(',');
                let (a, r) = (fields.next().unwrap_or(""), fields.next().unwrap_or(""));
                if fields.next().is_some() {
                    return Err(CliError::malformed_result(path, format!("line {line_no}: too many fields")));
                }
                let angle = parse_f64(a, line_no)?;
                if cylindrical {
                    let radius =
                        if r.trim().is_empty() { None } else { Some(parse_f64(r, line_no)?) };
                    cyl.push((angle, radius));
                } else {
                    planar.push((angle, parse_f64(r, line_no)?));
                }
            }
            let rows = if cylindrical { BoundaryRows::Cylindrical(cyl) } else { BoundaryRows::Planar(planar) };
            Ok(ParsedResult::Boundary { config, rows })
        }
        HEADER_SPHERICAL => {
            let mut rows = Vec::new();
            for (i, line) in lines.enumerate() {
                let line_no = i + 3;
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 3 {
                    return Err(CliError::malformed_result(path, format!("line {line_no}: expected 3 fields")));
                }
                rows.push((
                    parse_f64(fields[0], line_no)?,
                    parse_f64(fields[1], line_no)?,
                    parse_f64(fields[2], line_no)?,
                ));
            }
            Ok(ParsedResult::Boundary { config, rows: BoundaryRows::Spherical(rows) })
        }
        HEADER_SLICE => {
            let mut rows = Vec::new();
            for (i, line) in lines.enumerate() {
                let line_no = i + 3;
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != 3 {
                    return Err(CliError::malformed_result(path, format!("line {line_no}: expected 3 fields")));
                }
                let feasible = match fields[2].trim() {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(CliError::malformed_result(
                            path,
                            format!("line {line_no}: feasible must be 0 or 1, got {other:?}"),
                        ))
                    }
                };
                rows.push((parse_f64(fields[0], line_no)?, parse_f64(fields[1], line_no)?, feasible));
            }
            Ok(ParsedResult::Slice { config, rows })
        }
        other => Err(CliError::malformed_result(path, format!("unknown column header {other:?}"))),
    }
}

const MAIN_COLOR: &str = "#d62728";
const OMEGA_COLOR: &str = "#1f77b4";
const UFIX4_COLOR: &str = "#7f7f7f";
const OMEGA_DASH: &str = "7 4";
const UFIX4_DASH: &str = "2 3";

/// In-plane circle at azimuth `psi` and height `gamma`, in both frames.
fn planar_point(psi: f64, r: f64, gamma: f64) -> [(f64, f64); 2] {
    let x = r * psi.cos();
    let y = r * psi.sin();
    let p = clarke_inverse([x, y, gamma]);
    [(x, y), (p[0], p[1])]
}

/// Meridian point at polar angle `theta`, azimuth `psi`, radius `r`.
fn spherical_point(theta: f64, psi: f64, r: f64) -> [(f64, f64); 2] {
    let in_plane = r * theta.sin();
    let gamma = r * theta.cos();
    let p = clarke_inverse([in_plane * psi.cos(), in_plane * psi.sin(), gamma]);
    [(in_plane, gamma), (p[0], p[1])]
}

fn two_panel_segments(points: Vec<[(f64, f64); 2]>, close: bool) -> [Vec<Vec<(f64, f64)>>; 2] {
    let mut panels = [vec![Vec::new()], vec![Vec::new()]];
    for pt in &points {
        for panel in 0..2 {
            panels[panel][0].push(pt[panel]);
        }
    }
    if close && points.len() > 2 {
        for panel in &mut panels {
            let first = panel[0][0];
            panel[0].push(first);
        }
    }
    panels
}

/// Curve for one design's boundary in the given cut, rounded like CSV rows.
fn reference_curve(
    design: &Design,
    rows: &BoundaryRows,
    config: &RunConfig,
    color: &'static str,
    dash: &'static str,
) -> CliResult<Curve> {
    let n_angles = config.angles.unwrap_or(720);
    let per_panel = match rows {
        BoundaryRows::Planar(_) => {
            let trace = planar_sweep(design, n_angles)?;
            let BoundaryRows::Planar(r) = rows_from_trace(&trace.samples) else { unreachable!() };
            two_panel_segments(
                r.iter().map(|&(psi, radius)| planar_point(psi, radius, 0.0)).collect(),
                true,
            )
        }
        BoundaryRows::Spherical(_) => {
            let psi = config.psi_deg.unwrap_or(0.0).to_radians();
            let trace = spherical_sweep(design, psi, n_angles)?;
            let BoundaryRows::Spherical(r) = rows_from_trace(&trace.samples) else { unreachable!() };
            two_panel_segments(
                r.iter().map(|&(theta, psi, radius)| spherical_point(theta, psi, radius)).collect(),
                false,
            )
        }
        BoundaryRows::Cylindrical(_) => {
            let p_total = config.p_total.unwrap_or(0.0);
            let trace = cylindrical_sweep(design, p_total, n_angles)?;
            let BoundaryRows::Cylindrical(r) = rows_from_trace(&trace.samples) else { unreachable!() };
            cylindrical_segments(&r, p_total)
        }
    };
    Ok(Curve { name: design.name().to_string(), color, dash: Some(dash), width: 1.2, per_panel })
}

/// Splits a swept slice outline at rays that missed the chart; closes the
/// loop only when every ray hit.
fn cylindrical_segments(rows: &[(f64, Option<f64>)], p_total: f64) -> [Vec<Vec<(f64, f64)>>; 2] {
    let gamma = p_total / 3f64.sqrt();
    let mut panels = [Vec::new(), Vec::new()];
    let mut current: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    let mut any_gap = false;
    for &(psi, radius) in rows {
        match radius {
            Some(r) => {
                let pt = planar_point(psi, r, gamma);
                for panel in 0..2 {
                    current[panel].push(pt[panel]);
                }
            }
            None => {
                any_gap = true;
                for panel in 0..2 {
                    if current[panel].len() > 1 {
                        panels[panel].push(std::mem::take(&mut current[panel]));
                    } else {
                        current[panel].clear();
                    }
                }
            }
        }
    }
    for panel in 0..2 {
        if !any_gap && current[panel].len() > 2 {
            let first = current[panel][0];
            current[panel].push(first);
        }
        if current[panel].len() > 1 {
            panels[panel].push(std::mem::take(&mut current[panel]));
        }
    }
    panels
}

fn references(rows: &BoundaryRows, config: &RunConfig) -> CliResult<Vec<Curve>> {
    let ufix4 = preset("ufix4").expect("built-in preset");
    Ok(vec![
        reference_curve(&omega(), rows, config, OMEGA_COLOR, OMEGA_DASH)?,
        reference_curve(&ufix4, rows, config, UFIX4_COLOR, UFIX4_DASH)?,
    ])
}

/// Figure for a boundary trace: the traced design solid over dashed
/// envelope and fixed-wiring references.
pub fn boundary_figure(
    design_name: &str,
    config: &RunConfig,
    rows: &BoundaryRows,
) -> CliResult<FigureSpec> {
    let mut curves = references(rows, config)?;
    let (main_panels, cut, labels) = match rows {
        BoundaryRows::Planar(r) => (
            two_panel_segments(
                r.iter().map(|&(psi, radius)| planar_point(psi, radius, 0.0)).collect(),
                true,
            ),
            "standalone boundary".to_string(),
            [["phat1 (pu)", "phat2 (pu)"], ["p1 (pu)", "p2 (pu)"]],
        ),
        BoundaryRows::Spherical(r) => (
            two_panel_segments(
                r.iter().map(|&(t, p, radius)| spherical_point(t, p, radius)).collect(),
                false,
            ),
            format!("meridian at psi = {} deg", config.psi_deg.unwrap_or(0.0)),
            [["in-plane radius (pu)", "phat3 (pu)"], ["p1 (pu)", "p2 (pu)"]],
        ),
        BoundaryRows::Cylindrical(r) => (
            cylindrical_segments(r, config.p_total.unwrap_or(0.0)),
            format!("slice outline at P_Ttl = {} pu", config.p_total.unwrap_or(0.0)),
            [["phat1 (pu)", "phat2 (pu)"], ["p1 (pu)", "p2 (pu)"]],
        ),
    };
    curves.push(Curve {
        name: design_name.to_string(),
        color: MAIN_COLOR,
        dash: None,
        width: 1.5,
        per_panel: main_panels,
    });
    Ok(FigureSpec {
        config_json: serde_json::to_string(config).expect("config serializes"),
        titles: [
            format!("{design_name} {cut}, transformed frame"),
            format!("{design_name} {cut}, nominal frame"),
        ],
        axis_labels: labels.map(|pair| pair.map(String::from)),
        mask: None,
        curves,
    })
}

/// Figure for a slice mask: filled cells under dashed slice outlines of
/// the references at the same total power.
pub fn slice_figure(
    design_name: &str,
    config: &RunConfig,
    rows: &[(f64, f64, bool)],
) -> CliResult<FigureSpec> {
    let p_total = config.p_total.unwrap_or(0.0);
    let gamma = p_total / 3f64.sqrt();
    let resolution = config.grid.unwrap_or(201).max(2);
    let cell = 2.0 / (resolution - 1) as f64;
    let mut centers: [Vec<(f64, f64)>; 2] = [Vec::new(), Vec::new()];
    for &(x, y, feasible) in rows {
        if feasible {
            let p = clarke_inverse([x, y, gamma]);
            centers[0].push((x, y));
            centers[1].push((p[0], p[1]));
        }
    }
    let ref_rows = BoundaryRows::Cylindrical(Vec::new());
    let curves = references(&ref_rows, config)?;
    Ok(FigureSpec {
        config_json: serde_json::to_string(config).expect("config serializes"),
        titles: [
            format!("{design_name} slice at P_Ttl = {p_total} pu, transformed frame"),
            format!("{design_name} slice at P_Ttl = {p_total} pu, nominal frame"),
        ],
        axis_labels: [
            ["phat1 (pu)".into(), "phat2 (pu)".into()],
            ["p1 (pu)".into(), "p2 (pu)".into()],
        ],
        mask: Some(MaskLayer { cell, per_panel: centers }),
        curves,
    })
}
