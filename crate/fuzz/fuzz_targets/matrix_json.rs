#![no_main]

use libfuzzer_sys::fuzz_target;
use slocc::elo::{compose_ops, decompose_invertible};
use slocc::json::{matrix_from_json, parse_document};
use slocc::ExactScalar;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = parse_document(text) else {
        return;
    };
    let Ok(m) = matrix_from_json::<ExactScalar>(&v) else {
        return;
    };
    if m.is_square() && m.rows() <= 8 {
        if let Ok(ops) = decompose_invertible(&m) {
            assert_eq!(compose_ops(&ops, m.rows()).unwrap(), m);
        }
    }
});
