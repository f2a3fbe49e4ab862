#![no_main]

use libfuzzer_sys::fuzz_target;
use peelshape::io::parse_layering_csv;

fuzz_target!(|data: &str| {
    if let Ok(layers) = parse_layering_csv(data) {
        assert!(layers.len() <= data.lines().count());
    }
});
