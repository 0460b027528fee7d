#![no_main]

use libfuzzer_sys::fuzz_target;
use slocc::json::{parse_document, state_from_json, state_to_json};
use slocc::{ExactScalar, FloatScalar};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = parse_document(text) else {
        return;
    };
    if let Ok(s) = state_from_json::<ExactScalar>(&v) {
        assert_eq!(
            state_from_json::<ExactScalar>(&state_to_json(&s)).unwrap(),
            s
        );
    }
    let _ = state_from_json::<FloatScalar>(&v);
});
