#![no_main]
use libfuzzer_sys::fuzz_target;
use twolink::io::parse_path_json;

fuzz_target!(|data: &str| {
    if let Ok(doc) = parse_path_json(data) {
        let again = parse_path_json(&doc.to_json()).expect("own output parses");
        assert_eq!(again.path, doc.path);
    }
});
