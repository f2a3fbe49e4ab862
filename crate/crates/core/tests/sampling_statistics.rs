//! Statistical self-tests of the samplers and replay determinism of the
//! experiment runners.

use peelshape::experiments::{
    exp_boundary_layer, exp_layer_counts, exp_limit_shape, exp_max_depth_scaling, poisson_iid_bridge, BoundaryConfig,
    BridgeConfig, LayerCountsConfig, LimitShapeConfig, MaxDepthConfig,
};
use peelshape::io::{write_boundary_csv, write_count_curve_csv, write_max_depth_csv, write_shape_csv};
use peelshape::pde::RadialDensity;
use peelshape::sampling::{sample, sample_trial, SampleDomain, SampleMode, SamplerSpec};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn poisson_counts_have_the_right_mean() {
    let spec = SamplerSpec::poisson(RadialDensity::uniform_ball(2), 50.0, 17);
    let draws = 1000;
    let total: usize = (0..draws).map(|k| sample_trial(&spec, k).unwrap().len()).sum();
    let mean = total as f64 / draws as f64;
    let sigma = (50.0 / draws as f64).sqrt();
    assert!((mean - 50.0).abs() < 5.0 * sigma, "mean count {mean}");
}

fn chi_square(observed: &[usize], expected: f64) -> f64 {
    observed.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn uniform_disc_passes_chi_square() {
    // Uniform on the disc: |x|² and the polar angle are independent uniforms.
    let spec = SamplerSpec::poisson(RadialDensity::uniform_ball(2), 1000.0, 23);
    let cloud = sample(&spec).unwrap();
    let n = cloud.len();
    let bins = 10;
    let (mut radial, mut angular) = (vec![0; bins], vec![0; bins]);
    for p in cloud.iter() {
        let r2 = p[0] * p[0] + p[1] * p[1];
        assert!(r2 < 1.0);
        radial[((r2 * bins as f64) as usize).min(bins - 1)] += 1;
        let u = (p[1].atan2(p[0]) + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
        angular[((u * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let critical = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.99);
    let expected = n as f64 / bins as f64;
    assert!(chi_square(&radial, expected) < critical, "{radial:?}");
    assert!(chi_square(&angular, expected) < critical, "{angular:?}");
}

#[test]
fn gaussian_radii_pass_chi_square() {
    // For the standard planar Gaussian, exp(-|x|²/2) is uniform on (0, 1).
    let cloud = sample(&SamplerSpec::iid(RadialDensity::gaussian(2), 2000, 29)).unwrap();
    let bins = 10;
    let mut counts = vec![0; bins];
    for p in cloud.iter() {
        let u = (-0.5 * (p[0] * p[0] + p[1] * p[1])).exp();
        counts[((u * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let critical = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.99);
    assert!(chi_square(&counts, 200.0) < critical, "{counts:?}");
}

#[test]
fn degenerate_and_exact_sizes() {
    let ball = RadialDensity::uniform_ball(2);
    assert!(sample(&SamplerSpec::poisson(ball.clone(), 0.0, 1)).unwrap().is_empty());
    assert_eq!(sample(&SamplerSpec::iid(ball.clone(), 7, 1)).unwrap().len(), 7);
    assert!(sample(&SamplerSpec::poisson(ball, -1.0, 1)).is_err());
    let square = SamplerSpec {
        mode: SampleMode::Iid { n: 500 },
        domain: SampleDomain::ConvexPolygon { vertices: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]] },
        seed: 3,
    };
    let cloud = sample(&square).unwrap();
    assert_eq!(cloud.len(), 500);
    assert!(cloud.iter().all(|p| (0.0..=2.0).contains(&p[0]) && (0.0..=1.0).contains(&p[1])));
}

#[test]
fn clouds_replay_exactly() {
    let spec = SamplerSpec::poisson(RadialDensity::gaussian(2), 300.0, 99);
    for stream in [0, 5, 1 << 32] {
        assert_eq!(sample_trial(&spec, stream).unwrap(), sample_trial(&spec, stream).unwrap());
    }
    assert_ne!(sample_trial(&spec, 0).unwrap(), sample_trial(&spec, 1).unwrap());
    let other_seed = SamplerSpec { seed: 100, ..spec.clone() };
    assert_ne!(sample(&spec).unwrap(), sample(&other_seed).unwrap());
}

#[test]
fn reports_replay_bit_for_bit() {
    let ball = RadialDensity::uniform_ball(2);
    let csv = |f: &dyn Fn(&mut Vec<u8>) -> std::io::Result<()>| {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        buf
    };

    let md = MaxDepthConfig::new(ball.clone(), vec![300.0, 900.0], 4, 8);
    let (a, b) = (exp_max_depth_scaling(&md).unwrap(), exp_max_depth_scaling(&md).unwrap());
    assert_eq!(a, b);
    assert_eq!(csv(&|w| write_max_depth_csv(w, &a.records)), csv(&|w| write_max_depth_csv(w, &b.records)));
    assert_eq!(a.records.len(), 8);

    let shape = LimitShapeConfig { pitch: 0.1, ..LimitShapeConfig::new(ball.clone(), vec![400.0], 3, 8, 4.0 / 3.0) };
    let (a, b) = (exp_limit_shape(&shape).unwrap(), exp_limit_shape(&shape).unwrap());
    assert_eq!(csv(&|w| write_shape_csv(w, &a.records)), csv(&|w| write_shape_csv(w, &b.records)));

    let counts = LayerCountsConfig::new(ball.clone(), 2000.0, 2, 8, 4.0 / 3.0);
    let (a, b) = (exp_layer_counts(&counts).unwrap(), exp_layer_counts(&counts).unwrap());
    assert_eq!(csv(&|w| write_count_curve_csv(w, &a.curve)), csv(&|w| write_count_curve_csv(w, &b.curve)));

    let boundary = BoundaryConfig::new(ball, vec![1000.0], 3, 8);
    let (a, b) = (exp_boundary_layer(&boundary).unwrap(), exp_boundary_layer(&boundary).unwrap());
    assert_eq!(csv(&|w| write_boundary_csv(w, &a.levels)), csv(&|w| write_boundary_csv(w, &b.levels)));
}

#[test]
fn poisson_conditioned_on_its_count_is_iid() {
    let cfg = BridgeConfig { density: RadialDensity::uniform_ball(2), intensity: 2000.0, trials: 200, seed: 0xb41d };
    let report = poisson_iid_bridge(&cfg).unwrap();
    assert_eq!(report.counts.len(), 200);
    assert!(!report.ks.reject, "KS statistic {} above {}", report.ks.statistic, report.ks.critical);
}
