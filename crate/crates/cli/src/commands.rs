//! One function per subcommand.

use std::fs;
use std::io::Read;

use serde::Serialize;

use peelshape::convex::peel;
use peelshape::experiments::{
    estimate_alpha, exp_boundary_layer, exp_layer_counts, exp_limit_shape, sup_grid, AlphaParams, BoundaryConfig,
    Draw, LayerCountsConfig, LimitShapeConfig, ReportHeader, UNBOUNDED_GRID_RADIUS,
};
use peelshape::geometry::PointCloud;
use peelshape::io::{
    layering_svg, parse_points_csv, svg_layer_selection, write_boundary_csv, write_cell_trials_csv,
    write_count_curve_csv, write_grid_csv, write_layering_csv, write_max_depth_csv, write_points_csv, write_rows,
    write_shape_csv, SvgStyle,
};
use peelshape::pde::LimitSolution;
use peelshape::sampling::{sample, SamplerSpec};
use peelshape::semiconvex::{beta_sensitivity, cell_run, semiconvex_peel, AlphaEstimate, CellConfig, Route};
use peelshape::suites::{run_suite, Suite, SuiteOptions, SuiteOutcome};

use crate::cli::{
    AlphaArgs, BoundaryArgs, CellArgs, Command, CountsArgs, Format, Mode, PeelArgs, RouteArg, SampleArgs, ShapeArgs,
    VerifyArgs,
};
use crate::settings::{as_count, density, json_bytes, usage, write_file, Failure, Layered, Outcome, Shared};

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Peel(a) => peel_cmd(a),
        Command::Sample(a) => sample_cmd(a),
        Command::EstimateAlpha(a) => alpha_cmd(a),
        Command::LimitShape(a) => shape_cmd(a),
        Command::LayerCounts(a) => counts_cmd(a),
        Command::BoundaryLayer(a) => boundary_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Cell(a) => cell_cmd(a),
    }
}

/// Merge the shared settings and size the rayon pool.
fn setup(layered: &Layered, common: &crate::cli::Common) -> Outcome<Shared> {
    let shared = layered.common(common)?;
    if let Some(n) = shared.threads {
        if n == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("--threads: {e}")))?;
    }
    Ok(shared)
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Outcome<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn positive(v: f64, flag: &str) -> Outcome<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{flag} must be positive, got {v}")))
    }
}

#[derive(Serialize)]
struct PeelReport<'a> {
    header: ReportHeader,
    input: Option<String>,
    peeling: &'static str,
    n_points: usize,
    layers: usize,
    max_height: usize,
    layer_counts: Vec<usize>,
    layer_of_point: &'a [usize],
}

fn peel_cmd(a: PeelArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["in", "svg", "k", "semiconvex"])?;
    let shared = setup(&layered, &a.common)?;
    let input = layered.path(a.input, "in");
    let svg = layered.path(a.svg, "svg");
    let k = layered.count(a.k, "k")?;
    let semiconvex = layered.switch(a.semiconvex, "semiconvex")?;
    let format = shared.format(Format::Csv, &[Format::Csv, Format::Json, Format::Svg])?;
    if semiconvex && (svg.is_some() || format == Format::Svg) {
        return Err(usage("SVG output draws convex layers only; drop --semiconvex or the SVG request"));
    }

    let text = match &input {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let cloud = parse_points_csv(&text).map_err(|e| match &input {
        Some(path) => usage(format!("{}: {e}", path.display())),
        None => usage(format!("stdin: {e}")),
    })?;
    let mut header = ReportHeader::new("peel", shared.seed);
    header.notes.push("layer n holds the points on the boundary of the n-th peel; their height is n - 1".into());
    let input_name = input.as_ref().map(|p| p.display().to_string());
    let sink = shared.sink("peel", format)?;

    if semiconvex {
        let layering = semiconvex_peel(&cloud)?;
        let bytes = match format {
            Format::Json => json_bytes(&PeelReport {
                header,
                input: input_name,
                peeling: "semiconvex",
                n_points: layering.len(),
                layers: layering.num_layers(),
                max_height: layering.num_layers().saturating_sub(1),
                layer_counts: layering.layer_counts(),
                layer_of_point: layering.layer_of_point(),
            })?,
            _ => {
                let rows =
                    layering.layer_of_point().iter().enumerate().map(|(i, l)| vec![i.to_string(), l.to_string()]);
                let mut buf = Vec::new();
                write_rows(&mut buf, &["point_index", "layer"], rows)?;
                buf
            }
        };
        return sink.write(&bytes);
    }

    let layering = peel(&cloud)?;
    let selection = || svg_layer_selection(layering.num_layers(), k);
    let bytes = match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_layering_csv(&mut buf, &layering)?;
            buf
        }
        Format::Json => json_bytes(&PeelReport {
            header,
            input: input_name,
            peeling: "convex",
            n_points: layering.len(),
            layers: layering.num_layers(),
            max_height: layering.max_height(),
            layer_counts: layering.layer_counts(),
            layer_of_point: layering.layer_of_point(),
        })?,
        Format::Svg => layering_svg(&layering, &selection()?, &SvgStyle::default())?.into_bytes(),
    };
    sink.write(&bytes)?;
    if let Some(path) = svg {
        write_file(&path, layering_svg(&layering, &selection()?, &SvgStyle::default())?.as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SampleReport<'a> {
    header: ReportHeader,
    spec: &'a SamplerSpec,
    n_points: usize,
    points: Vec<&'a [f64]>,
}

fn sample_cmd(a: SampleArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["density", "mode", "n"])?;
    let shared = setup(&layered, &a.common)?;
    let density = density(layered.string(a.density, "density").as_deref())?;
    let mode = layered.choice(a.mode, "mode")?.unwrap_or(Mode::Poisson);
    let n = layered.number(a.n, "n")?.unwrap_or(1000.0);
    let spec = match mode {
        Mode::Poisson => SamplerSpec::poisson(density, positive(n, "n")?, shared.seed),
        Mode::Iid => SamplerSpec::iid(density, as_count(Some(n), "--n", &n.to_string())?, shared.seed),
    };
    let cloud: PointCloud = sample(&spec)?;
    let format = shared.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let bytes = match format {
        Format::Json => json_bytes(&SampleReport {
            header: ReportHeader::new("sample", shared.seed),
            spec: &spec,
            n_points: cloud.len(),
            points: cloud.iter().collect(),
        })?,
        _ => {
            let mut buf = Vec::new();
            write_points_csv(&mut buf, &cloud)?;
            buf
        }
    };
    shared.sink("sample", format)?.write(&bytes)
}

/// The estimate's fields at the top level, followed by the full report.
#[derive(Serialize)]
struct AlphaOutput<'a, R: Serialize> {
    #[serde(flatten)]
    estimate: AlphaEstimate,
    report: &'a R,
}

fn alpha_cmd(a: AlphaArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["route", "n", "trials", "density", "r", "beta", "pitch"])?;
    let shared = setup(&layered, &a.common)?;
    let route = match layered.choice(a.route, "route")?.unwrap_or(RouteArg::Maxdepth) {
        RouteArg::Cell => Route::Cell,
        RouteArg::Maxdepth => Route::MaxDepth,
        RouteArg::Profile => Route::Profile,
    };
    let defaults = AlphaParams::new(route, shared.seed);
    let params = AlphaParams {
        density: density(layered.string(a.density, "density").as_deref())?,
        n_schedule: layered.schedule(a.n, "n")?.unwrap_or(defaults.n_schedule.clone()),
        trials: layered.count(a.trials, "trials")?.unwrap_or(defaults.trials),
        r_schedule: layered.schedule(a.r, "r")?.unwrap_or(defaults.r_schedule.clone()),
        beta: layered.number(a.beta, "beta")?.unwrap_or(defaults.beta),
        pitch: layered.number(a.pitch, "pitch")?.unwrap_or(defaults.pitch),
        ..defaults
    };
    let report = estimate_alpha(&params)?;
    let format = shared.format(Format::Json, &[Format::Json, Format::Csv])?;
    let bytes = match format {
        Format::Csv => csv_bytes(|buf| match (&report.max_depth, &report.shape) {
            (Some(md), _) => write_max_depth_csv(buf, &md.records),
            (_, Some(shape)) => write_shape_csv(buf, &shape.records),
            _ => {
                let rows: Vec<_> = report.cell.iter().flat_map(|run| run.records.iter().cloned()).collect();
                write_cell_trials_csv(buf, &rows)
            }
        })?,
        _ => json_bytes(&AlphaOutput { estimate: report.estimate, report: &report })?,
    };
    shared.sink("estimate-alpha", format)?.write(&bytes)
}

fn shape_cmd(a: ShapeArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["density", "m", "trials", "alpha", "pitch", "grid-radius", "grid-out"])?;
    let shared = setup(&layered, &a.common)?;
    let density = density(layered.string(a.density, "density").as_deref())?;
    let m_schedule = layered.schedule(a.m, "m")?.unwrap_or_else(|| vec![1e3, 1e4, 1e5]);
    let trials = layered.count(a.trials, "trials")?.unwrap_or(20);
    let alpha = layered.number(a.alpha, "alpha")?.unwrap_or(4.0 / 3.0);
    let cfg = LimitShapeConfig {
        pitch: layered.number(a.pitch, "pitch")?.unwrap_or(0.02),
        grid_radius: layered.number(a.grid_radius, "grid-radius")?,
        ..LimitShapeConfig::new(density, m_schedule, trials, shared.seed, alpha)
    };
    let grid_out = layered.path(a.grid_out, "grid-out");
    let report = exp_limit_shape(&cfg)?;
    let format = shared.format(Format::Json, &[Format::Json, Format::Csv])?;
    let bytes = match format {
        Format::Csv => csv_bytes(|buf| write_shape_csv(buf, &report.records))?,
        _ => json_bytes(&report)?,
    };
    shared.sink("limit-shape", format)?.write(&bytes)?;
    if let Some(path) = grid_out {
        let radius = cfg.grid_radius.or(cfg.density.support_radius()).unwrap_or(UNBOUNDED_GRID_RADIUS);
        let grid = sup_grid(&cfg.density, cfg.pitch, radius)?;
        let solution = LimitSolution::new(cfg.density.clone())?;
        let values: Vec<f64> = grid.iter().map(|x| solution.eval(x)).collect::<peelshape::Result<_>>()?;
        write_file(&path, &csv_bytes(|buf| write_grid_csv(buf, &grid, &values))?)?;
    }
    Ok(())
}

fn counts_cmd(a: CountsArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["density", "n", "trials", "alpha"])?;
    let shared = setup(&layered, &a.common)?;
    let density = density(layered.string(a.density, "density").as_deref())?;
    let n = positive(layered.number(a.n, "n")?.unwrap_or(1e5), "n")?;
    let trials = layered.count(a.trials, "trials")?.unwrap_or(10);
    let alpha = layered.number(a.alpha, "alpha")?.unwrap_or(4.0 / 3.0);
    let report = exp_layer_counts(&LayerCountsConfig::new(density, n, trials, shared.seed, alpha))?;
    let format = shared.format(Format::Json, &[Format::Json, Format::Csv])?;
    let bytes = match format {
        Format::Csv => csv_bytes(|buf| write_count_curve_csv(buf, &report.curve))?,
        _ => json_bytes(&report)?,
    };
    shared.sink("layer-counts", format)?.write(&bytes)
}

fn boundary_cmd(a: BoundaryArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["density", "n", "trials", "layers", "factor"])?;
    let shared = setup(&layered, &a.common)?;
    let density = density(layered.string(a.density, "density").as_deref())?;
    let n_schedule = layered.schedule(a.n, "n")?.unwrap_or_else(|| vec![1e4, 1e5]);
    let trials = layered.count(a.trials, "trials")?.unwrap_or(100);
    let defaults = BoundaryConfig::new(density, n_schedule, trials, shared.seed);
    let cfg = BoundaryConfig {
        layers: layered.count(a.layers, "layers")?.unwrap_or(defaults.layers),
        factor: layered.number(a.factor, "factor")?.unwrap_or(defaults.factor),
        draw: Draw::Iid,
        ..defaults
    };
    let report = exp_boundary_layer(&cfg)?;
    let format = shared.format(Format::Json, &[Format::Json, Format::Csv])?;
    let bytes = match format {
        Format::Csv => csv_bytes(|buf| write_boundary_csv(buf, &report.levels))?,
        _ => json_bytes(&report)?,
    };
    shared.sink("boundary-layer", format)?.write(&bytes)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    header: ReportHeader,
    options: SuiteOptions,
    outcomes: &'a [SuiteOutcome],
}

fn verify_cmd(a: VerifyArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["suite", "n", "cases"])?;
    let shared = setup(&layered, &a.common)?;
    let suites: Vec<Suite> = match layered.string(a.suite, "suite") {
        None => Suite::ALL.to_vec(),
        Some(list) if list.trim() == "all" => Suite::ALL.to_vec(),
        Some(list) => list.split(',').map(str::parse).collect::<peelshape::Result<_>>()?,
    };
    let defaults = SuiteOptions::default();
    let options = SuiteOptions {
        max_n: layered.count(a.n, "n")?.unwrap_or(defaults.max_n),
        cases: layered.count(a.cases, "cases")?.unwrap_or(defaults.cases),
        seed: shared.seed,
    };
    let outcomes: Vec<SuiteOutcome> = suites.iter().map(|&s| run_suite(s, &options)).collect::<peelshape::Result<_>>()?;
    let format = shared.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let bytes = match format {
        Format::Json => json_bytes(&VerifyReport {
            header: ReportHeader::new("verify", shared.seed),
            options,
            outcomes: &outcomes,
        })?,
        _ => {
            let rows = outcomes.iter().map(|o| {
                let status = if o.ok() { "pass" } else { "fail" };
                vec![o.suite.name().to_string(), o.cases.to_string(), o.passed.to_string(), status.to_string()]
            });
            let mut buf = Vec::new();
            write_rows(&mut buf, &["suite", "cases", "passed", "status"], rows)?;
            buf
        }
    };
    shared.sink("verify", format)?.write(&bytes)?;
    match outcomes.iter().find(|o| !o.ok()) {
        Some(o) => Err(Failure::Verify(format!(
            "suite {} failed: {}",
            o.suite.name(),
            o.failure.as_deref().unwrap_or("no detail")
        ))),
        None => Ok(()),
    }
}

fn cell_cmd(a: CellArgs) -> Outcome {
    let layered = Layered::load(&a.common, &["r", "beta", "trials", "shell-pitch", "offset", "beta-sensitivity"])?;
    let shared = setup(&layered, &a.common)?;
    let cfg = CellConfig {
        shell_pitch: layered.number(a.shell_pitch, "shell-pitch")?,
        offset: layered.number(a.offset, "offset")?.unwrap_or(0.0),
        ..CellConfig::new(
            layered.number(a.r, "r")?.unwrap_or(40.0),
            layered.number(a.beta, "beta")?.unwrap_or(3.0),
            layered.count(a.trials, "trials")?.unwrap_or(50),
            shared.seed,
        )
    };
    let format = shared.format(Format::Json, &[Format::Json, Format::Csv])?;
    let bytes = if layered.switch(a.beta_sensitivity, "beta-sensitivity")? {
        let report = beta_sensitivity(&cfg)?;
        match format {
            Format::Csv => csv_bytes(|buf| {
                let rows: Vec<_> =
                    report.at_beta.records.iter().chain(&report.at_beta_plus_one.records).cloned().collect();
                write_cell_trials_csv(buf, &rows)
            })?,
            _ => json_bytes(&serde_json::json!({
                "header": ReportHeader::new("cell_beta_sensitivity", shared.seed),
                "report": report,
            }))?,
        }
    } else {
        let run = cell_run(&cfg)?;
        match format {
            Format::Csv => csv_bytes(|buf| write_cell_trials_csv(buf, &run.records))?,
            _ => json_bytes(&AlphaOutput {
                estimate: run.estimate,
                report: &serde_json::json!({
                    "header": ReportHeader::new("cell", shared.seed),
                    "config": run.config,
                    "records": run.records,
                }),
            })?,
        }
    };
    shared.sink("cell", format)?.write(&bytes)
}
