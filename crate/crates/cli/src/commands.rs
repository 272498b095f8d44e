//! Subcommand implementations: flag validation, design resolution,
//! computation dispatch into the core library, and file emission. Flag
//! combinations that exist in the grammar but clash with the chosen
//! subcommand exit with code 4; unreadable design files with 2; invalid
//! design JSON with 3; unrenderable result files with 5; everything else
//! that fails (domain errors, I/O) with 1.

use std::path::Path;

use ccchart_core::boundary::{
    cca_boundary_integral, ccv_spherical_integral, cylindrical_sweep, planar_sweep,
    spherical_sweep,
};
use ccchart_core::catalog::{preset, Design};
use ccchart_core::chart::{cca_grid, ccv_grid, size_ratio, ChartMetrics, GridSpec, MetricKind};
use ccchart_core::error::Error as CoreError;
use ccchart_core::model::ConverterDesign;
use ccchart_core::sizing::{optimize_sizing, SizingProblem};
use ccchart_core::slice::slice;
use serde_json::json;

use crate::args::{Command, Common, Mode, Objective, RenderArgs};
use crate::outfmt::{
    out_path, sanitize, sig9, write_json, CliError, CliResult, RunConfig,
};
use crate::render::{
    boundary_figure, design_label, parse_result_file, rows_from_trace, slice_figure,
    BoundaryRows, ParsedResult, HEADER_PLANAR, HEADER_SLICE, HEADER_SPHERICAL,
};
use crate::svg::render as render_svg;

pub fn dispatch(command: Command, threads: Option<usize>) -> CliResult<()> {
    match command {
        Command::Area(c) => run_measure(&c, MetricKind::Area, threads),
        Command::Volume(c) => run_measure(&c, MetricKind::Volume, threads),
        Command::Boundary(c) => run_boundary(&c, threads),
        Command::Slice(c) => run_slice(&c, threads),
        Command::Optimize(c) => run_optimize(&c, threads),
        Command::Ratio(c) => run_ratio(&c, threads),
        Command::Render(r) => run_render(&r),
    }
}

/// Rejects flags the subcommand has no meaning for.
fn reject(cmd: &str, provided: &[(&str, bool)]) -> CliResult<()> {
    for (flag, set) in provided {
        if *set {
            return Err(CliError::conflict(format!("{flag} cannot be used with `{cmd}`")));
        }
    }
    Ok(())
}

fn odd_grid(resolution: usize) -> CliResult<usize> {
    if resolution < 21 || resolution % 2 == 0 {
        return Err(CliError::conflict(format!(
            "--grid must be odd and at least 21 (got {resolution})"
        )));
    }
    Ok(resolution)
}

fn min_angles(n: usize, minimum: usize) -> CliResult<usize> {
    if n < minimum {
        return Err(CliError::conflict(format!("--angles must be at least {minimum} (got {n})")));
    }
    Ok(n)
}

fn load_design_file(path: &Path) -> CliResult<ConverterDesign> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::missing_file(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::bad_schema(path, e))
}

/// Presets first, then design files, preserving flag order within each.
fn resolve_designs(common: &Common) -> CliResult<Vec<Design>> {
    let mut designs = Vec::new();
    for name in &common.preset {
        designs.push(
            preset(name).map_err(|_| CliError::conflict(format!("unknown preset {name:?}")))?,
        );
    }
    for path in &common.design {
        designs.push(Design::Converter(load_design_file(path)?));
    }
    Ok(designs)
}

fn exactly_one(common: &Common, cmd: &str) -> CliResult<Design> {
    let mut designs = resolve_designs(common)?;
    if designs.len() != 1 {
        return Err(CliError::conflict(format!(
            "`{cmd}` needs exactly one design via --preset or --design (got {})",
            designs.len()
        )));
    }
    Ok(designs.pop().expect("checked length"))
}

fn base_config(cmd: &str, c: &Common, threads: Option<usize>) -> RunConfig {
    RunConfig {
        command: cmd.into(),
        presets: c.preset.clone(),
        designs: c.design.iter().map(|p| p.display().to_string()).collect(),
        grid: c.grid,
        angles: c.angles,
        mode: c.mode.map(|m| m.as_str().to_string()),
        psi_deg: c.psi,
        p_total: c.ptotal,
        step: c.step,
        objective: c.objective.map(|o| o.as_str().to_string()),
        legs: c.legs,
        threads,
        out: c.out.display().to_string(),
        svg: c.svg,
        ratio: c.ratio,
    }
}

fn kind_tag(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::Area => "cca",
        MetricKind::Volume => "ccv",
    }
}

/// Both measurements of one chart: rasterized grid and exact-radius sweep.
fn measure(
    design: &Design,
    kind: MetricKind,
    grid_res: usize,
    angles: usize,
) -> CliResult<(ChartMetrics, ChartMetrics)> {
    let grid = GridSpec::new(grid_res, 1.0)?;
    Ok(match kind {
        MetricKind::Area => {
            (cca_grid(design, &grid)?, cca_boundary_integral(design, angles)?)
        }
        MetricKind::Volume => {
            (ccv_grid(design, &grid)?, ccv_spherical_integral(design, angles / 2, angles)?)
        }
    })
}

fn relative_difference(grid: f64, sweep: f64) -> Option<f64> {
    if sweep != 0.0 {
        Some((grid - sweep).abs() / sweep.abs())
    } else if grid == 0.0 {
        Some(0.0)
    } else {
        None
    }
}

fn defaults_for(kind: MetricKind, c: &Common) -> CliResult<(usize, usize)> {
    let (grid_default, angles_default, angles_min) = match kind {
        MetricKind::Area => (801, 720, 90),
        // The sphere is angles/2 x angles, so 360 azimuths give the
        // default 180 x 360 and the polar count stays above its floor.
        MetricKind::Volume => (201, 360, 180),
    };
    let grid_res = odd_grid(c.grid.unwrap_or(grid_default))?;
    let angles = min_angles(c.angles.unwrap_or(angles_default), angles_min)?;
    Ok((grid_res, angles))
}

fn run_measure(c: &Common, kind: MetricKind, threads: Option<usize>) -> CliResult<()> {
    let cmd = match kind {
        MetricKind::Area => "area",
        MetricKind::Volume => "volume",
    };
    reject(
        cmd,
        &[
            ("--mode", c.mode.is_some()),
            ("--psi", c.psi.is_some()),
            ("--ptotal", c.ptotal.is_some()),
            ("--step", c.step.is_some()),
            ("--objective", c.objective.is_some()),
            ("--legs", c.legs.is_some()),
            ("--svg", c.svg),
        ],
    )?;
    let config = base_config(cmd, c, threads);
    let (grid_res, angles) = defaults_for(kind, c)?;
    let designs = resolve_designs(c)?;
    if c.ratio {
        if designs.len() != 2 {
            return Err(CliError::conflict(
                "--ratio compares exactly two designs; pass --preset/--design twice",
            ));
        }
        return write_ratio(&config, &designs[0], &designs[1], kind, grid_res, angles, &c.out);
    }
    if designs.len() != 1 {
        return Err(CliError::conflict(format!(
            "`{cmd}` needs exactly one design (or exactly two with --ratio)"
        )));
    }
    let design = &designs[0];
    let (grid_m, sweep_m) = measure(design, kind, grid_res, angles)?;
    let value = json!({
        "config": serde_json::to_value(&config).expect("config serializes"),
        "design": design.name(),
        "kind": kind_tag(kind),
        "grid": serde_json::to_value(grid_m).expect("metrics serialize"),
        "sweep": serde_json::to_value(sweep_m).expect("metrics serialize"),
        "relative_difference": relative_difference(grid_m.value, sweep_m.value),
    });
    let path = out_path(&c.out, &format!("{}_{}.json", sanitize(design.name()), kind_tag(kind)))?;
    write_json(&path, value)?;
    println!(
        "{} {}: grid {} sweep {}",
        design.name(),
        kind_tag(kind),
        sig9(grid_m.value),
        sig9(sweep_m.value)
    );
    println!("wrote {}", path.display());
    Ok(())
}

/// Rating ratio of the first (numerator) over the second (denominator)
/// design, by both methods.
fn write_ratio(
    config: &RunConfig,
    numerator: &Design,
    denominator: &Design,
    kind: MetricKind,
    grid_res: usize,
    angles: usize,
    out_dir: &Path,
) -> CliResult<()> {
    let (num_grid, num_sweep) = measure(numerator, kind, grid_res, angles)?;
    let (den_grid, den_sweep) = measure(denominator, kind, grid_res, angles)?;
    let eta_grid = size_ratio(&den_grid, &num_grid, kind)?;
    let eta_sweep = size_ratio(&den_sweep, &num_sweep, kind)?;
    let value = json!({
        "config": serde_json::to_value(config).expect("config serializes"),
        "kind": kind_tag(kind),
        "numerator": {
            "design": numerator.name(),
            "grid": serde_json::to_value(num_grid).expect("metrics serialize"),
            "sweep": serde_json::to_value(num_sweep).expect("metrics serialize"),
        },
        "denominator": {
            "design": denominator.name(),
            "grid": serde_json::to_value(den_grid).expect("metrics serialize"),
            "sweep": serde_json::to_value(den_sweep).expect("metrics serialize"),
        },
        "eta_grid": eta_grid,
        "eta_sweep": eta_sweep,
        "relative_difference": (eta_grid - eta_sweep).abs() / eta_sweep,
    });
    let file = format!(
        "ratio_{}_vs_{}_{}.json",
        sanitize(numerator.name()),
        sanitize(denominator.name()),
        kind_tag(kind)
    );
    let path = out_path(out_dir, &file)?;
    write_json(&path, value)?;
    println!(
        "eta({} -> {}): grid {} sweep {}",
        denominator.name(),
        numerator.name(),
        sig9(eta_grid),
        sig9(eta_sweep)
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn run_ratio(c: &Common, threads: Option<usize>) -> CliResult<()> {
    reject(
        "ratio",
        &[
            ("--mode", c.mode.is_some()),
            ("--psi", c.psi.is_some()),
            ("--ptotal", c.ptotal.is_some()),
            ("--step", c.step.is_some()),
            ("--legs", c.legs.is_some()),
            ("--svg", c.svg),
            ("--ratio", c.ratio),
        ],
    )?;
    let kind = match c.objective.unwrap_or(Objective::Cca) {
        Objective::Cca => MetricKind::Area,
        Objective::Ccv => MetricKind::Volume,
    };
    let config = base_config("ratio", c, threads);
    let (grid_res, angles) = defaults_for(kind, c)?;
    let designs = resolve_designs(c)?;
    if designs.len() != 2 {
        return Err(CliError::conflict(
            "`ratio` compares exactly two designs; pass --preset/--design twice",
        ));
    }
    write_ratio(&config, &designs[0], &designs[1], kind, grid_res, angles, &c.out)
}

fn run_boundary(c: &Common, threads: Option<usize>) -> CliResult<()> {
    reject(
        "boundary",
        &[
            ("--grid", c.grid.is_some()),
            ("--step", c.step.is_some()),
            ("--objective", c.objective.is_some()),
            ("--legs", c.legs.is_some()),
            ("--ratio", c.ratio),
        ],
    )?;
    let mode = c.mode.unwrap_or(Mode::Planar);
    match mode {
        Mode::Planar => reject(
            "boundary --mode planar",
            &[("--psi", c.psi.is_some()), ("--ptotal", c.ptotal.is_some())],
        )?,
        Mode::Spherical => {
            reject("boundary --mode spherical", &[("--ptotal", c.ptotal.is_some())])?
        }
        Mode::Cylindrical => reject("boundary --mode cylindrical", &[("--psi", c.psi.is_some())])?,
    }
    let n_angles = min_angles(c.angles.unwrap_or(720), 90)?;
    let design = exactly_one(c, "boundary")?;
    let config = base_config("boundary", c, threads);

    let trace = match mode {
        Mode::Planar => planar_sweep(&design, n_angles)?,
        Mode::Spherical => {
            spherical_sweep(&design, c.psi.unwrap_or(0.0).to_radians(), n_angles)?
        }
        Mode::Cylindrical => cylindrical_sweep(&design, c.ptotal.unwrap_or(0.0), n_angles)?,
    };
    let rows = rows_from_trace(&trace.samples);

    let mut text = config.comment_line();
    text.push('\n');
    match &rows {
        BoundaryRows::Planar(r) => {
            text.push_str(HEADER_PLANAR);
            text.push('\n');
            for &(a, radius) in r {
                text.push_str(&format!("{},{}\n", sig9(a), sig9(radius)));
            }
        }
        BoundaryRows::Spherical(r) => {
            text.push_str(HEADER_SPHERICAL);
            text.push('\n');
            for &(t, p, radius) in r {
                text.push_str(&format!("{},{},{}\n", sig9(t), sig9(p), sig9(radius)));
            }
        }
        BoundaryRows::Cylindrical(r) => {
            text.push_str(HEADER_PLANAR);
            text.push('\n');
            for &(a, radius) in r {
                match radius {
                    Some(x) => text.push_str(&format!("{},{}\n", sig9(a), sig9(x))),
                    None => text.push_str(&format!("{},\n", sig9(a))),
                }
            }
        }
    }
    let stem = format!("{}_boundary_{}", sanitize(design.name()), mode.as_str());
    let csv_path = out_path(&c.out, &format!("{stem}.csv"))?;
    std::fs::write(&csv_path, text)?;
    println!("wrote {}", csv_path.display());

    if c.svg {
        let figure = boundary_figure(&design_label(&config), &config, &rows)?;
        let svg_path = out_path(&c.out, &format!("{stem}.svg"))?;
        std::fs::write(&svg_path, render_svg(&figure))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn run_slice(c: &Common, threads: Option<usize>) -> CliResult<()> {
    reject(
        "slice",
        &[
            ("--angles", c.angles.is_some()),
            ("--mode", c.mode.is_some()),
            ("--psi", c.psi.is_some()),
            ("--step", c.step.is_some()),
            ("--objective", c.objective.is_some()),
            ("--legs", c.legs.is_some()),
            ("--ratio", c.ratio),
        ],
    )?;
    let resolution = odd_grid(c.grid.unwrap_or(201))?;
    let p_total = c.ptotal.unwrap_or(0.0);
    let design = exactly_one(c, "slice")?;
    let config = base_config("slice", c, threads);
    let grid = GridSpec::new(resolution, 1.0)?;
    let mask = slice(&design, p_total, &grid)?;

    let axis = grid.axis();
    let mut rows = Vec::with_capacity(resolution * resolution);
    for (ix, &x) in axis.iter().enumerate() {
        for (iy, &y) in axis.iter().enumerate() {
            rows.push((crate::outfmt::round9(x), crate::outfmt::round9(y), mask.at(ix, iy)));
        }
    }

    let mut text = config.comment_line();
    text.push('\n');
    text.push_str(HEADER_SLICE);
    text.push('\n');
    for &(x, y, feasible) in &rows {
        text.push_str(&format!("{},{},{}\n", sig9(x), sig9(y), feasible as u8));
    }
    let stem = format!("{}_slice", sanitize(design.name()));
    let csv_path = out_path(&c.out, &format!("{stem}.csv"))?;
    std::fs::write(&csv_path, text)?;

    let sidecar = json!({
        "config": serde_json::to_value(&config).expect("config serializes"),
        "design": design.name(),
        "p_ttl": mask.p_total,
        "components": mask.components,
        "holes": mask.holes,
        "cca_of_slice": mask.cca_of_slice,
        "isolated": serde_json::to_value(&mask.isolated).expect("features serialize"),
    });
    let json_path = out_path(&c.out, &format!("{stem}.json"))?;
    write_json(&json_path, sidecar)?;
    println!(
        "{} slice at P_Ttl = {}: {} components, {} holes, area {}, {} isolated features",
        design.name(),
        sig9(p_total),
        mask.components,
        mask.holes,
        sig9(mask.cca_of_slice),
        mask.isolated.len()
    );
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());

    if c.svg {
        let figure = slice_figure(&design_label(&config), &config, &rows)?;
        let svg_path = out_path(&c.out, &format!("{stem}.svg"))?;
        std::fs::write(&svg_path, render_svg(&figure))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn run_optimize(c: &Common, threads: Option<usize>) -> CliResult<()> {
    reject(
        "optimize",
        &[
            ("--preset", !c.preset.is_empty()),
            ("--design", !c.design.is_empty()),
            ("--mode", c.mode.is_some()),
            ("--psi", c.psi.is_some()),
            ("--ptotal", c.ptotal.is_some()),
            ("--ratio", c.ratio),
            ("--svg", c.svg),
        ],
    )?;
    let legs = c.legs.unwrap_or(4);
    if legs == 0 || legs > 12 {
        return Err(CliError::conflict(format!("--legs must be between 1 and 12 (got {legs})")));
    }
    let objective = c.objective.unwrap_or(Objective::Cca);
    let kind = match objective {
        Objective::Cca => MetricKind::Area,
        Objective::Ccv => MetricKind::Volume,
    };
    let config = base_config("optimize", c, threads);
    let mut problem = SizingProblem::new(legs, kind, c.step.unwrap_or(0.02));
    if let Some(angles) = c.angles {
        match kind {
            MetricKind::Area => problem.n_angles = min_angles(angles, 90)?,
            MetricKind::Volume => {
                problem.n_psi = min_angles(angles, 180)?;
                problem.n_theta = angles / 2;
            }
        }
    }
    if let Some(grid) = c.grid {
        problem.validate_resolution = odd_grid(grid)?;
    }
    let outcome = optimize_sizing(&problem).map_err(|e| match e {
        CoreError::InvalidStep { .. } => CliError::conflict(e.to_string()),
        other => CliError::from(other),
    })?;
    let winner = outcome.design(kind);

    let mut design_value =
        serde_json::to_value(&winner).expect("designs serialize");
    design_value
        .as_object_mut()
        .expect("design serializes to an object")
        .insert("config".into(), serde_json::to_value(&config).expect("config serializes"));
    let design_path =
        out_path(&c.out, &format!("{}_design.json", sanitize(winner.name())))?;
    write_json(&design_path, design_value)?;

    let mut csv = config.comment_line();
    csv.push('\n');
    for i in 1..=legs {
        csv.push_str(&format!("alpha{i},"));
    }
    csv.push_str("metric\n");
    for candidate in &outcome.near_ties {
        for alpha in &candidate.alphas {
            csv.push_str(&sig9(*alpha));
            csv.push(',');
        }
        csv.push_str(&sig9(candidate.value));
        csv.push('\n');
    }
    let csv_path = out_path(&c.out, &format!("optimize_{}_top.csv", objective.as_str()))?;
    std::fs::write(&csv_path, csv)?;

    let alphas: Vec<String> = outcome.alphas.iter().map(|&a| sig9(a)).collect();
    println!(
        "best {} split of {} legs: [{}] scoring {} over {} candidates (grid check {})",
        objective.as_str(),
        legs,
        alphas.join(", "),
        sig9(outcome.value),
        outcome.evaluated,
        sig9(outcome.validation.value)
    );
    println!("wrote {}", design_path.display());
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn run_render(r: &RenderArgs) -> CliResult<()> {
    let figure = match parse_result_file(&r.input)? {
        ParsedResult::Boundary { config, rows } => {
            boundary_figure(&design_label(&config), &config, &rows)?
        }
        ParsedResult::Slice { config, rows } => {
            slice_figure(&design_label(&config), &config, &rows)?
        }
    };
    let stem = r
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "result".into());
    let svg_path = out_path(&r.out, &format!("{stem}.svg"))?;
    std::fs::write(&svg_path, render_svg(&figure))?;
    println!("wrote {}", svg_path.display());
    Ok(())
}
