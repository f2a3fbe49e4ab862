use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quick_xml::events::Event;
use quick_xml::Reader;
use serde_json::Value;

fn peelshape(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peelshape"))
        .args(args)
        .env_remove("PEELSHAPE_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Every `data-layer` value of a well-formed SVG document.
fn svg_layers(text: &str) -> BTreeSet<usize> {
    let mut reader = Reader::from_str(text);
    let mut layers = BTreeSet::new();
    let mut saw_root = false;
    loop {
        match reader.read_event().expect("well-formed XML") {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) => {
                saw_root |= e.name().as_ref() == b"svg";
                for attr in e.attributes() {
                    let attr = attr.expect("well-formed attribute");
                    if attr.key.as_ref() == b"data-layer" {
                        layers.insert(String::from_utf8(attr.value.to_vec()).unwrap().parse().unwrap());
                    }
                }
            }
            _ => {}
        }
    }
    assert!(saw_root);
    layers
}

#[test]
fn help_and_version_exit_zero() {
    let help = peelshape(&["--help"]);
    assert_eq!(code(&help), 0);
    let text = stdout(&help);
    for cmd in ["peel", "sample", "estimate-alpha", "limit-shape", "layer-counts", "boundary-layer", "verify", "cell"] {
        assert!(text.contains(cmd), "--help lists {cmd}");
    }
    assert_eq!(code(&peelshape(&["--version"])), 0);
    let sub = peelshape(&["peel", "--help"]);
    assert_eq!(code(&sub), 0);
    for flag in ["--seed", "--out", "--format", "--dim", "--threads", "--config", "--svg", "--k"] {
        assert!(stdout(&sub).contains(flag), "peel --help lists {flag}");
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["no-such-command"],
        vec!["peel", "--no-such-flag"],
        vec!["sample", "--dim", "4"],
        vec!["sample", "--dim", "3"],
        vec!["verify", "--suite", "nonsense", "--cases", "1"],
        vec!["sample", "--format", "svg"],
        vec!["peel", "--in", "/definitely/not/here.csv"],
        vec!["estimate-alpha", "--n", "5:1:3"],
    ] {
        let out = peelshape(&args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} explains itself on stderr");
    }
}

#[test]
fn peel_writes_layers_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let layers = dir.path().join("layers.csv");
    let svg = dir.path().join("layers.svg");
    fs::write(&points, "x1,x2\n0,0\n1,0\n1,1\n0,1\n0.5,0.5\n").unwrap();
    let out = peelshape(&["peel", "--in", path_str(&points), "--out", path_str(&layers), "--svg", path_str(&svg)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read_to_string(&layers).unwrap(), "point_index,layer\n0,1\n1,1\n2,1\n3,1\n4,2\n");
    assert_eq!(svg_layers(&fs::read_to_string(&svg).unwrap()), BTreeSet::from([1, 2]));
}

#[test]
fn svg_draws_exactly_the_requested_layers() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let sampled = peelshape(&["sample", "--mode", "iid", "--n", "600", "--seed", "4", "--out", path_str(&points)]);
    assert_eq!(code(&sampled), 0);
    let json = peelshape(&["peel", "--in", path_str(&points), "--format", "json"]);
    let report: Value = serde_json::from_slice(&json.stdout).unwrap();
    let total = report["layers"].as_u64().unwrap() as usize;
    assert!(total > 20);

    let default = stdout(&peelshape(&["peel", "--in", path_str(&points), "--format", "svg"]));
    let drawn = svg_layers(&default);
    assert!(drawn.len() <= 10);
    let step = total.div_ceil(10);
    assert_eq!(drawn, (1..=total).step_by(step).collect());

    let every_third = stdout(&peelshape(&["peel", "--in", path_str(&points), "--format", "svg", "--k", "3"]));
    assert_eq!(svg_layers(&every_third), (1..=total).step_by(3).collect());
}

#[test]
fn semiconvex_peel_nests_a_point_above_a_valley() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    // Every parabola through a point above the two outer ones, between their
    // abscissas, contains one of them.
    fs::write(&points, "-1,1\n1,1\n0,3\n0.1,5\n").unwrap();
    let out = peelshape(&["peel", "--semiconvex", "--in", path_str(&points)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "point_index,layer\n0,1\n1,1\n2,2\n3,2\n");
    fs::write(&points, "0,1\n0,-2\n").unwrap();
    assert_eq!(code(&peelshape(&["peel", "--semiconvex", "--in", path_str(&points)])), 1);
}

#[test]
fn verify_passes_small_suites() {
    let out = peelshape(&["verify", "--suite", "dpp,affine,semidpp,correspondence,F,barrier", "--n", "16", "--cases", "4"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("suite,cases,passed,status"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",pass")).count(), 6);
}

#[test]
fn estimate_alpha_reports_alpha_hat() {
    let out = peelshape(&["estimate-alpha", "--route", "maxdepth", "--n", "200:800:3", "--trials", "3", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["alpha_hat"].as_f64().unwrap().is_finite());
    assert!(v["stderr"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["trials"], 3);
    assert_eq!(v["route"], "maxdepth");
    assert_eq!(v["report"]["header"]["seed"], 5);
    assert!(v["report"]["header"]["build_id"].as_str().unwrap().starts_with("0.1.0-"));
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# cell run\nr = 3\nbeta = 2\ntrials = 3\nseed = 9\n").unwrap();
    let from_config: Value =
        serde_json::from_slice(&peelshape(&["cell", "--config", path_str(&cfg)]).stdout).unwrap();
    assert_eq!(from_config["trials"], 3);
    assert_eq!(from_config["report"]["config"]["seed"], 9);
    let overridden: Value =
        serde_json::from_slice(&peelshape(&["cell", "--config", path_str(&cfg), "--trials", "2"]).stdout).unwrap();
    assert_eq!(overridden["trials"], 2);
    assert_eq!(overridden["report"]["config"]["r"], 3.0);

    fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(code(&peelshape(&["cell", "--config", path_str(&cfg)])), 1);
}

#[test]
fn out_dir_variable_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_peelshape"))
            .args(["sample", "--n", "300", "--seed", seed])
            .env("PEELSHAPE_OUT_DIR", dir.path())
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        assert!(out.stdout.is_empty());
        fs::read(dir.path().join("sample.csv")).unwrap()
    };
    let a = run("11");
    assert_eq!(a, run("11"));
    assert_ne!(a, run("12"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("x1,x2\n") && !text.contains('\r'));
}

#[test]
fn density_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let density = dir.path().join("density.cfg");
    fs::write(&density, "kind = gaussian\nmean = 3, 0\ncovariance = 1, 0, 0, 1\n").unwrap();
    let out = peelshape(&["sample", "--mode", "iid", "--n", "2000", "--density", path_str(&density)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let xs: Vec<f64> = stdout(&out).lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs.len(), 2000);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    // Standard error of the mean is 1/sqrt(2000) ~ 0.022.
    assert!((mean - 3.0).abs() < 0.15, "mean {mean}");
}

#[test]
fn experiment_commands_emit_csv() {
    let shape = peelshape(&["limit-shape", "--m", "200,800", "--trials", "2", "--pitch", "0.2", "--format", "csv"]);
    assert_eq!(code(&shape), 0, "{}", String::from_utf8_lossy(&shape.stderr));
    assert_eq!(stdout(&shape).lines().count(), 5);
    let counts = peelshape(&["layer-counts", "--n", "2000", "--trials", "2", "--format", "csv"]);
    assert_eq!(code(&counts), 0, "{}", String::from_utf8_lossy(&counts.stderr));
    let boundary = peelshape(&["boundary-layer", "--n", "1000", "--trials", "2", "--layers", "5"]);
    assert_eq!(code(&boundary), 0, "{}", String::from_utf8_lossy(&boundary.stderr));
    let v: Value = serde_json::from_slice(&boundary.stdout).unwrap();
    assert_eq!(v["levels"][0]["mean_counts"].as_array().unwrap().len(), 5);
    let cell = peelshape(&["cell", "--r", "4", "--trials", "3", "--format", "csv"]);
    assert_eq!(stdout(&cell).lines().next(), Some("trial,r,beta,s_value,n_points,wall_ms"));
}
