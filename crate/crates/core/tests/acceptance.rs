//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p slocc --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slocc::classify::{
    classify_three_qubit, schmidt_number, site_ranks, slocc_equivalent, verify_certificate,
    ThreeQubitClass, Verdict,
};
use slocc::elo::{
    apply, apply_sequence, compose_ops, compose_to_matrix, decompose_invertible, inverse_sequence,
    EloSequence,
};
use slocc::gje::{canonicalize, fully_reduce_bipartite, mfrf_reduce, DEFAULT_MAX_PASSES};
use slocc::zoo::{dicke, ghz, hankel_state, hypergraph_named, lme_elementary, w, Hypergraph};
use slocc::{Matrix, MultiState};

const SEED: u64 = 0x5eed;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn reduce(s: &MultiState<E>) -> MultiState<E> {
    mfrf_reduce(s, DEFAULT_MAX_PASSES)
        .expect("reduction")
        .reduced
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let m = Matrix::from_rows(vec![
        vec![int(1), int(0), int(0)],
        vec![int(2), int(1), int(0)],
        vec![int(0), int(4), int(5)],
    ])
    .unwrap();
    let printed_inverse = Matrix::from_rows(vec![
        vec![int(1), int(0), int(0)],
        vec![int(-2), int(1), int(0)],
        vec![frac(8, 5), frac(-4, 5), frac(1, 5)],
    ])
    .unwrap();
    let ops = decompose_invertible(&m).unwrap();
    let recomposes = compose_ops(&ops, 3).unwrap() == m;
    let inv = inverse_sequence(&EloSequence::on_site(1, ops));
    let inverse_ok = compose_to_matrix(&inv, 3).unwrap() == printed_inverse;
    let printed: String = inv.iter().map(|o| o.op.to_string()).collect();
    let printed_ok = printed == "S(2,1/5)L(1,\u{2212}4,2)L(0,\u{2212}2,1)".replace('\u{2212}', "-");

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut random_ok = 0;
    for _ in 0..1000 {
        let d = rng.gen_range(1..=5);
        let a = random_invertible(&mut rng, d);
        let ops = decompose_invertible(&a).unwrap();
        if compose_ops(&ops, d).unwrap() == a {
            random_ok += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        recomposes && inverse_ok && printed_ok && random_ok == 1000 && within(t, 5),
        format!("M ok={recomposes}, inverse {printed} ok={inverse_ok}, random {random_ok}/1000, {t:.2?} (limit 5s)"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut fixed = 0;
    let mut good = 0;
    let mut failures = Vec::new();
    for class in ThreeQubitClass::ALL {
        let rep = class.representative::<E>();
        if classify_three_qubit(&rep).is_ok_and(|c| c.class == class) {
            fixed += 1;
        }
        for _ in 0..500 {
            let (s, _) = scramble(&mut rng, &rep, 15);
            match classify_three_qubit(&s) {
                Ok(c)
                    if c.class == class
                        && c.certificate
                            .as_ref()
                            .is_some_and(|cert| verify_certificate(&s, &rep, cert)) =>
                {
                    good += 1
                }
                other => failures.push(format!("{class}: {s} -> {:?}", other.map(|c| c.class))),
            }
        }
    }
    let t = start.elapsed();
    outcome(
        fixed == 6 && good == 3000 && within(t, 30),
        format!(
            "fixed points {fixed}/6, scrambles {good}/3000, {t:.2?} (limit 30s){}",
            failures
                .first()
                .map(|f| format!(", first failure {f}"))
                .unwrap_or_default()
        ),
    )
}

fn criterion_3() -> Outcome {
    let g = ghz(3, 2).unwrap();
    let wst = w(3).unwrap();
    match slocc_equivalent(&g, &wst) {
        Ok(Verdict::Inequivalent { witness }) => {
            let verified = witness.verify(&g, &wst).unwrap_or(false);
            outcome(
                verified && witness.is_rigorous(),
                format!("witness {:?}, recomputed={verified}", witness.evidence),
            )
        }
        other => outcome(
            false,
            format!("verdict {:?}", other.map(|v| v.is_equivalent())),
        ),
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let target = ket_state(&[3, 3, 3], &["000", "111", "222", "012", "021"]);
    let target_canonical = canonicalize(&target).0.canonical_scaled();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut hits = 0;
    let mut observed = std::collections::BTreeSet::new();
    for _ in 0..100 {
        let red = reduce(&qutrit_rrf_instance(&mut rng));
        if red == target || red == target_canonical {
            hits += 1;
        }
        observed.insert(red.to_string());
    }
    let t = start.elapsed();
    outcome(
        hits == 100 && within(t, 10),
        format!(
            "{hits}/100 reached {target} (canonical {target_canonical}); observed {observed:?}; {t:.2?} (limit 10s)"
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let phases = [
        E::root_of_unity(8, 1).unwrap(),
        E::root_of_unity(3, 1).unwrap(),
        int(-1),
    ];
    let mut good = 0;
    let mut bad = Vec::new();
    for n in 2..=7 {
        let g = ghz(n, 2).unwrap();
        for phase in &phases {
            let lme = lme_elementary(n, phase).unwrap();
            match slocc_equivalent(&lme, &g) {
                Ok(Verdict::Equivalent { certificate })
                    if verify_certificate(&lme, &g, &certificate) =>
                {
                    good += 1
                }
                _ => bad.push(format!("N={n} phase={phase}")),
            }
        }
    }
    let t = start.elapsed();
    outcome(
        good == 18 && within(t, 20),
        format!("{good}/18 equivalent with verified certificates, {t:.2?} (limit 20s) {bad:?}"),
    )
}

fn criterion_6() -> Outcome {
    let mu = hypergraph_named(Hypergraph::Mu).unwrap();
    let cases = [
        (Hypergraph::V1, v1_sequence()),
        (Hypergraph::V4, v4_sequence()),
        (Hypergraph::V18, v18_sequence()),
    ];
    let mut printed = Vec::new();
    for (h, seq) in &cases {
        printed.push((
            h.name(),
            verify_certificate(&hypergraph_named(*h).unwrap(), &mu, seq),
        ));
    }
    let forms: Vec<MultiState<E>> = [
        Hypergraph::V1,
        Hypergraph::V4,
        Hypergraph::V18,
        Hypergraph::Mu,
    ]
    .iter()
    .map(|h| reduce(&hypergraph_named(*h).unwrap()))
    .collect();
    let identical = forms.iter().all(|f| *f == forms[0]);
    outcome(
        printed.iter().all(|(_, ok)| *ok) && identical,
        format!(
            "printed sequences {printed:?}; common MFRF {} identical={identical}",
            forms[0]
        ),
    )
}

fn criterion_7() -> Outcome {
    let h3 = hypergraph_named(Hypergraph::H3Qutrit).unwrap();
    let g = ghz(3, 3).unwrap();
    let red = reduce(&h3);
    let canonical = red == canonicalize(&g).0;
    let verdict = match slocc_equivalent(&h3, &g) {
        Ok(Verdict::Equivalent { certificate }) => verify_certificate(&h3, &g, &certificate),
        _ => false,
    };
    outcome(
        canonical && verdict,
        format!("MFRF {red}, equals GHZ(3,3)={canonical}, verified equivalence={verdict}"),
    )
}

fn criterion_8() -> Outcome {
    let h4 = hypergraph_named(Hypergraph::H4Ququart).unwrap();
    let target = ket_state(&[4, 4, 4], &["000", "111", "212", "221", "333"]);
    let expected = canonicalize(&target).0.canonical_scaled();
    let red = reduce(&h4);
    let ghz_form = reduce(&ghz(3, 4).unwrap());
    let verdict = slocc_equivalent(&h4, &ghz(3, 4).unwrap());
    let inequivalent = matches!(&verdict, Ok(Verdict::Inequivalent { .. }));
    outcome(
        red == expected && red != ghz_form && inequivalent,
        format!(
            "MFRF {red}, expected {expected}, GHZ(3,4) form {ghz_form}, verdict inequivalent={inequivalent}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let w3 = canonicalize(&w(3).unwrap()).0;
    let w4 = canonicalize(&w(4).unwrap()).0;
    let d2 = canonicalize(&dicke(3, 3, 2).unwrap()).0;
    let (mut a, mut b, mut c, mut d) = (0, 0, 0, 0);
    for _ in 0..50 {
        let (c0, c1, c2) = (
            nonzero_rational(&mut rng),
            nonzero_rational(&mut rng),
            nonzero_rational(&mut rng),
        );
        let z = int(0);
        if reduce(&hankel_state(3, 2, &[c0.clone(), c1.clone(), z.clone(), z.clone()]).unwrap())
            == w3
        {
            a += 1;
        }
        let four = [c0.clone(), c1.clone(), z.clone(), z.clone(), z.clone()];
        if reduce(&hankel_state(4, 2, &four).unwrap()) == w4 {
            b += 1;
        }
        let mut qutrit = vec![c0, c1, c2];
        qutrit.extend(std::iter::repeat_n(z, 4));
        if reduce(&hankel_state(3, 3, &qutrit).unwrap()) == d2 {
            c += 1;
        }
        let q = nonzero_rational(&mut rng);
        let mut powers = vec![int(1)];
        for k in 1..7 {
            let next = &powers[k - 1] * &q;
            powers.push(next);
        }
        let rank_one = schmidt_number(&hankel_state(3, 3, &powers).unwrap(), &[1]).unwrap() == 1
            && schmidt_number(&hankel_state(4, 2, &powers[..5]).unwrap(), &[1]).unwrap() == 1;
        if rank_one {
            d += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        a == 50 && b == 50 && c == 50 && d == 50 && within(t, 10),
        format!("(a) {a}/50 (b) {b}/50 (c) {c}/50 (d) {d}/50, {t:.2?} (limit 10s)"),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let shapes: [&[usize]; 6] = [
        &[2, 2],
        &[2, 3],
        &[2, 2, 2],
        &[3, 3, 3],
        &[2, 3, 4],
        &[2, 2, 2, 2],
    ];

    let (mut checked, mut replay) = (0, 0);
    for k in 0..60 {
        let dims = shapes[k % shapes.len()];
        let a = random_state(&mut rng, dims);
        let (b, seq) = scramble(&mut rng, &a, 10);
        checked += 1;
        replay += verify_certificate(&a, &b, &seq) as usize;
        let red = mfrf_reduce(&b, DEFAULT_MAX_PASSES).unwrap();
        checked += 1;
        replay += verify_certificate(&b, &red.reduced, &red.certificate) as usize;
        if dims.iter().product::<usize>() <= 8 {
            if let Ok(Verdict::Equivalent { certificate }) = slocc_equivalent(&a, &b) {
                checked += 1;
                replay += verify_certificate(&a, &b, &certificate) as usize;
            }
        }
    }
    let replay_ok = replay == checked;

    let mut rank_ok = true;
    let mut applied = 0;
    while applied < 10_000 {
        let n = rng.gen_range(2..=4);
        let dims: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=4)).collect();
        if dims.iter().product::<usize>() > 64 {
            continue;
        }
        let mut s = random_state(&mut rng, &dims);
        let ranks = site_ranks(&s);
        for _ in 0..50 {
            s = apply(&s, &random_op(&mut rng, &dims)).unwrap();
            applied += 1;
        }
        rank_ok &= site_ranks(&s) == ranks;
    }

    let mut unfold_ok = true;
    for k in 0..500 {
        let dims = shapes[k % shapes.len()];
        let s = random_state(&mut rng, dims);
        let op = random_op(&mut rng, dims);
        let lhs = apply(&s, &op).unwrap().unfold(op.site).unwrap();
        let rhs = op
            .op
            .matrix(dims[op.site - 1])
            .unwrap()
            .mul(&s.unfold(op.site).unwrap())
            .unwrap();
        unfold_ok &= lhs == rhs;
    }

    let mut roundtrip_ok = true;
    for k in 0..500 {
        let dims = shapes[k % shapes.len()];
        let s = random_state(&mut rng, dims);
        let seq = random_sequence(&mut rng, dims, 15);
        let back =
            apply_sequence(&apply_sequence(&s, &seq).unwrap(), &inverse_sequence(&seq)).unwrap();
        roundtrip_ok &= back == s;
    }

    let mut pivots_ok = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let ints: Vec<Vec<i128>> = (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| {
                        if rng.gen_bool(0.4) {
                            0
                        } else {
                            rng.gen_range(-4..=4)
                        }
                    })
                    .collect()
            })
            .collect();
        if ints.iter().flatten().all(|&x| x == 0) {
            pivots_ok += 1;
            continue;
        }
        let coeffs = ints.iter().flatten().map(|&x| int(x as i64)).collect();
        let s = MultiState::from_dense(vec![r, c], coeffs).unwrap();
        let red = fully_reduce_bipartite(&s).unwrap();
        let pivots = red.profile.site_pivots[0].len();
        let identity_block = red.reduced.nnz() == pivots
            && red
                .reduced
                .terms()
                .iter()
                .all(|(idx, a)| idx[0] == idx[1] && a == &int(1));
        if pivots == integer_rank(ints) && identity_block {
            pivots_ok += 1;
        }
    }

    let pass = replay_ok && rank_ok && unfold_ok && roundtrip_ok && pivots_ok == 1000;
    outcome(
        pass,
        format!(
            "certificate replay {replay}/{checked}, rank invariance over {applied} ops={rank_ok}, apply/unfold={unfold_ok}, inverse roundtrip={roundtrip_ok}, bipartite pivots {pivots_ok}/1000",
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("elementary-matrix factorization", criterion_1),
        ("three-qubit classification", criterion_2),
        ("GHZ vs W inequivalence", criterion_3),
        ("three-qutrit worked example", criterion_4),
        ("LME to GHZ", criterion_5),
        ("four-qubit hypergraph equivalences", criterion_6),
        ("three-qutrit hypergraph", criterion_7),
        ("three-ququart hypergraph", criterion_8),
        ("Hankel / Dicke family", criterion_9),
        ("property suite", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
