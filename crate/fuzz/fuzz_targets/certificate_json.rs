#![no_main]

use libfuzzer_sys::fuzz_target;
use slocc::json::{certificate_from_json, certificate_to_json, parse_document};
use slocc::ExactScalar;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = parse_document(text) else {
        return;
    };
    if let Ok(seq) = certificate_from_json::<ExactScalar>(&v) {
        assert_eq!(
            certificate_from_json::<ExactScalar>(&certificate_to_json(&seq)).unwrap(),
            seq
        );
    }
});
