#![no_main]
use libfuzzer_sys::fuzz_target;
use twolink::environment::parse_environment;

fuzz_target!(|data: &str| {
    if let Ok(env) = parse_environment(data) {
        let _ = env.serialize();
    }
});
