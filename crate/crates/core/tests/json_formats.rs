mod common;

use common::*;
use serde_json::json;
use slocc::classify::{classify_three_qubit, slocc_equivalent, ThreeQubitClass};
use slocc::gje::{mfrf_reduce, DEFAULT_MAX_PASSES};
use slocc::json::{
    certificate_from_json, classification_from_json, classification_to_json, matrix_from_json,
    matrix_to_json, parse_document, parse_scalar_str, reduction_to_json, state_from_json,
    state_to_json, verdict_from_json, verdict_to_json, JsonScalar,
};
use slocc::zoo::{ghz, lme_elementary, w};
use slocc::{ExactScalar, FloatScalar, Matrix};

#[test]
fn exact_scalar_forms() {
    assert_eq!(ExactScalar::from_json(&json!("3/4")).unwrap(), frac(3, 4));
    assert_eq!(ExactScalar::from_json(&json!(-2)).unwrap(), int(-2));
    let i = ExactScalar::from_json(&json!({"order": 4, "coeffs": ["0", "1"]})).unwrap();
    assert_eq!(i, ExactScalar::root_of_unity(4, 1).unwrap());
    assert_eq!(ExactScalar::from_json(&i.to_json()).unwrap(), i);
    assert!(ExactScalar::from_json(&json!(0.5)).is_err());
    assert!(ExactScalar::from_json(&json!("1/0")).is_err());
    assert!(ExactScalar::from_json(&json!({"order": 4, "coeffs": ["1"], "extra": 1})).is_err());
    assert_eq!(parse_scalar_str("\u{2212}1/2").unwrap(), frac(-1, 2));
}

#[test]
fn float_scalar_forms() {
    let z = FloatScalar::from_json(&json!([0.5, -1.0])).unwrap();
    assert_eq!(z, FloatScalar::new(0.5, -1.0));
    assert_eq!(
        FloatScalar::from_json(&json!("1/4")).unwrap(),
        FloatScalar::new(0.25, 0.0)
    );
    assert_eq!(FloatScalar::from_json(&z.to_json()).unwrap(), z);
}

#[test]
fn state_rejections() {
    let ok = json!({"dims": [2, 2], "terms": [{"idx": [0, 1], "amp": "1"}]});
    assert!(state_from_json::<E>(&ok).is_ok());
    for bad in [
        json!({"dims": [2, 2], "terms": []}),
        json!({"dims": [2, 2], "terms": [{"idx": [0, 2], "amp": "1"}]}),
        json!({"dims": [2, 2], "terms": [{"idx": [0], "amp": "1"}]}),
        json!({"dims": [2, 2], "terms": [{"idx": [0, 1], "amp": "1"}, {"idx": [0, 1], "amp": "2"}]}),
        json!({"dims": [2, 2], "terms": [{"idx": [0, 1], "amp": "0"}]}),
        json!({"terms": [{"idx": [0, 1], "amp": "1"}]}),
        json!([1, 2]),
    ] {
        assert!(state_from_json::<E>(&bad).is_err(), "{bad}");
    }
}

#[test]
fn certificate_rejections() {
    let ok = json!([{"site": 1, "op": "L", "args": [0, "2", 1]}, {"site": 2, "op": "F", "args": [0, 1]}]);
    assert_eq!(certificate_from_json::<E>(&ok).unwrap().len(), 2);
    for bad in [
        json!([{"site": 0, "op": "F", "args": [0, 1]}]),
        json!([{"site": 1, "op": "S", "args": [0, "0"]}]),
        json!([{"site": 1, "op": "L", "args": [1, "2", 1]}]),
        json!([{"site": 1, "op": "X", "args": []}]),
        json!({"site": 1}),
    ] {
        assert!(certificate_from_json::<E>(&bad).is_err(), "{bad}");
    }
}

#[test]
fn matrix_forms() {
    let m = Matrix::from_rows(vec![vec![int(1), frac(1, 2)], vec![int(0), int(-3)]]).unwrap();
    assert_eq!(matrix_from_json::<E>(&matrix_to_json(&m)).unwrap(), m);
    let rows = json!({"rows": [["1", "1/2"], ["0", "-3"]]});
    assert_eq!(matrix_from_json::<E>(&rows).unwrap(), m);
    assert!(matrix_from_json::<E>(&json!([["1", "2"], ["3"]])).is_err());
}

#[test]
fn results_roundtrip() {
    let s = lme_elementary(3, &int(-1)).unwrap();
    let r = mfrf_reduce(&s, DEFAULT_MAX_PASSES).unwrap();
    let v = reduction_to_json(&r);
    assert_eq!(state_from_json::<E>(&v["reduced"]).unwrap(), r.reduced);
    assert_eq!(
        certificate_from_json::<E>(&v["certificate"]).unwrap(),
        r.certificate
    );
    assert_eq!(v["converged"], true);

    for (a, b) in [
        (s.clone(), ghz(3, 2).unwrap()),
        (ghz(3, 2).unwrap(), w(3).unwrap()),
    ] {
        let verdict = slocc_equivalent(&a, &b).unwrap();
        assert_eq!(
            verdict_from_json::<E>(&verdict_to_json(&verdict)).unwrap(),
            verdict
        );
    }

    let c = classify_three_qubit(&w(3).unwrap()).unwrap();
    let (class, cert) = classification_from_json::<E>(&classification_to_json(&c)).unwrap();
    assert_eq!(class, ThreeQubitClass::W);
    assert_eq!(cert, c.certificate);
}

#[test]
fn documents_roundtrip_through_text() {
    let s = ghz(3, 2).unwrap();
    let text = state_to_json(&s).to_string();
    assert_eq!(
        state_from_json::<E>(&parse_document(&text).unwrap()).unwrap(),
        s
    );
    assert!(parse_document("{").is_err());
}
