#![no_main]
use libfuzzer_sys::fuzz_target;
use twolink::io::{parse_angle, parse_config_arg};

fuzz_target!(|data: &str| {
    if let Ok(c) = parse_config_arg(data) {
        assert!(c.x.is_finite() && c.y.is_finite());
    }
    let _ = parse_angle(data);
});
