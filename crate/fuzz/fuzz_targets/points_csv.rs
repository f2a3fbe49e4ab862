#![no_main]

use libfuzzer_sys::fuzz_target;
use peelshape::io::{parse_points_csv, write_points_csv};

fuzz_target!(|data: &str| {
    let Ok(cloud) = parse_points_csv(data) else { return };
    assert!(cloud.flat().iter().all(|v| v.is_finite()));
    // Writing and reading back must reproduce every coordinate bit for bit.
    let mut buf = Vec::new();
    write_points_csv(&mut buf, &cloud).unwrap();
    let again = parse_points_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(again.dim(), cloud.dim());
    let bits = |c: &[f64]| c.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(again.flat()), bits(cloud.flat()));
});
