#![no_main]

use libfuzzer_sys::fuzz_target;
use peelshape::io::parse_density_config;

fuzz_target!(|data: &str| {
    if let Ok(density) = parse_density_config(data) {
        assert!(density.validate().is_ok());
        let _ = density.support_radius();
    }
});
