#![no_main]

use libfuzzer_sys::fuzz_target;
use peelshape::io::{parse_schedule, MAX_SCHEDULE_LEN};

fuzz_target!(|data: &str| {
    if let Ok(values) = parse_schedule(data) {
        assert!(!values.is_empty() && values.len() <= MAX_SCHEDULE_LEN);
        assert!(values.iter().all(|v| *v > 0.0 && v.is_finite()));
        assert!(values.windows(2).all(|w| w[0] < w[1]));
    }
});
