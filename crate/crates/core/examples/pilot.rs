//! Pilot runs that fix the Monte Carlo thresholds used by the acceptance
//! suite. Seeds here are disjoint from the ones the acceptance suite uses.
//!
//! Usage: `cargo run --release --example pilot -- [part ...]` with parts
//! among `depth`, `shape`, `counts`, `boundary`, `cell`, `bridge`, `suites`.

use std::time::Instant;

use peelshape::experiments::*;
use peelshape::pde::RadialDensity;
use peelshape::semiconvex::cell_estimate;

const SEED: u64 = 0x5eed_2026;

fn main() -> peelshape::Result<()> {
    let parts: Vec<String> = std::env::args().skip(1).collect();
    let want = |p: &str| parts.is_empty() || parts.iter().any(|q| q == p);
    let ball = RadialDensity::uniform_ball(2);
    let alpha = 4.0 / 3.0;
    if want("depth") {
        let t = Instant::now();
        let schedule = vec![1e3, 10f64.powf(3.5), 1e4, 10f64.powf(4.5), 1e5];
        let r = exp_max_depth_scaling(&MaxDepthConfig::new(ball.clone(), schedule, 20, SEED))?;
        for l in &r.levels {
            println!("depth n={:.0} mean={:.2} se={:.2} alpha={:.4}±{:.4}", l.n, l.mean, l.stderr, l.alpha_hat, l.alpha_stderr);
        }
        let fit = r.fit.unwrap();
        println!("depth slope={:.4}±{:.4} ({:.1}s)", fit.slope, fit.slope_stderr, t.elapsed().as_secs_f64());
    }
    if want("shape") {
        let t = Instant::now();
        let r = exp_limit_shape(&LimitShapeConfig::new(ball.clone(), vec![1e3, 1e4, 1e5], 20, SEED, alpha))?;
        let top = alpha * r.peak;
        for l in &r.levels {
            println!(
                "shape m={:.0} median={:.4} ({:.4} of alpha h0) mean={:.4} profile alpha={:.4}±{:.4}",
                l.m, l.median_sup_error, l.median_sup_error / top, l.mean_sup_error, l.alpha_hat, l.alpha_stderr
            );
        }
        println!("shape grid={} ({:.1}s)", r.grid_points, t.elapsed().as_secs_f64());
    }
    if want("counts") {
        for density in [ball.clone(), RadialDensity::gaussian(2)] {
            let t = Instant::now();
            let r = exp_layer_counts(&LayerCountsConfig::new(density.clone(), 1e5, 10, SEED, alpha))?;
            println!("counts {} bulk_l1={:.4} trials={:?}", density.kind_name(), r.bulk_l1, r.trial_bulk_l1);
            for w in &r.windows {
                println!("  window [{:.3},{:.3}] emp={:.4} pred={:.4} rel={:.4}", w.a, w.b, w.empirical, w.predicted, w.relative_error);
            }
            println!("  ({:.1}s)", t.elapsed().as_secs_f64());
        }
    }
    if want("boundary") {
        let t = Instant::now();
        let r = exp_boundary_layer(&BoundaryConfig::new(ball.clone(), vec![1e4, 1e5], 100, SEED))?;
        for l in &r.levels {
            println!("boundary n={:.0} counts={:?} ratio={:?}", l.n, &l.mean_counts[..6], l.ratio);
        }
        println!("  ({:.1}s)", t.elapsed().as_secs_f64());
    }
    if want("cell") {
        for r in [20.0, 40.0, 80.0] {
            let t = Instant::now();
            let run = cell_estimate(r, 3.0, 20, SEED)?;
            println!("cell r={r} alpha={:.4}±{:.4} ({:.1}s)", run.estimate.alpha_hat, run.estimate.stderr, t.elapsed().as_secs_f64());
        }
    }
    if want("bridge") {
        let t = Instant::now();
        let cfg = BridgeConfig { density: ball, intensity: 2000.0, trials: 200, seed: SEED };
        let r = poisson_iid_bridge(&cfg)?;
        println!("bridge D={:.4} crit={:.4} reject={} ({:.1}s)", r.ks.statistic, r.ks.critical, r.ks.reject, t.elapsed().as_secs_f64());
    }
    if want("suites") {
        for suite in peelshape::suites::Suite::ALL {
            let t = Instant::now();
            let cases = if suite == peelshape::suites::Suite::F { 1000 } else { 200 };
            let opts = peelshape::suites::SuiteOptions { max_n: 48, cases, seed: SEED };
            let out = peelshape::suites::run_suite(suite, &opts)?;
            println!("suite {suite}: {}/{} {:?} ({:.1}s)", out.passed, out.cases, out.failure, t.elapsed().as_secs_f64());
        }
    }
    Ok(())
}
