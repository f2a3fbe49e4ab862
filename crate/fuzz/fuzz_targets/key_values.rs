#![no_main]

use libfuzzer_sys::fuzz_target;
use peelshape::io::parse_key_values;

fuzz_target!(|data: &str| {
    let Ok(kv) = parse_key_values(data) else { return };
    for key in kv.keys() {
        assert!(kv.get(key).is_some());
        let _ = kv.number(key);
        let _ = kv.integer(key);
        let _ = kv.list(key);
        let _ = kv.schedule(key);
    }
});
