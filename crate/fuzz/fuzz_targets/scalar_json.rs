#![no_main]

use libfuzzer_sys::fuzz_target;
use slocc::json::{parse_scalar_str, JsonScalar};
use slocc::{ExactScalar, FloatScalar};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_scalar_str(text);
    let Ok(v) = serde_json::from_str::<serde_json::Value>(text) else {
        return;
    };
    if let Ok(x) = ExactScalar::from_json(&v) {
        assert_eq!(ExactScalar::from_json(&x.to_json()).unwrap(), x);
    }
    let _ = FloatScalar::from_json(&v);
});
