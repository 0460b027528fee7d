#![no_main]

use libfuzzer_sys::fuzz_target;
use slocc::classify::verify_certificate;
use slocc::elo::{apply_sequence, inverse_sequence};
use slocc::json::{certificate_from_json, parse_document, state_from_json};
use slocc::ExactScalar;

// Input: {"state": <state>, "certificate": <certificate>}
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = parse_document(text) else {
        return;
    };
    let (Some(s), Some(c)) = (v.get("state"), v.get("certificate")) else {
        return;
    };
    let (Ok(s), Ok(seq)) = (
        state_from_json::<ExactScalar>(s),
        certificate_from_json::<ExactScalar>(c),
    ) else {
        return;
    };
    if s.dims().iter().product::<usize>() > 256 || seq.len() > 64 {
        return;
    }
    let Ok(t) = apply_sequence(&s, &seq) else {
        return;
    };
    assert!(verify_certificate(&s, &t, &seq));
    assert_eq!(apply_sequence(&t, &inverse_sequence(&seq)).unwrap(), s);
});
