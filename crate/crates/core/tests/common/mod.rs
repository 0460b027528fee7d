#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slocc::elo::{apply_sequence, ElementaryOp, EloSequence, SitedOp};
use slocc::{ExactScalar, Matrix, MultiState};

pub type E = ExactScalar;

pub fn int(v: i64) -> E {
    E::from_i64(v)
}

pub fn frac(p: i64, q: i64) -> E {
    E::from_frac(p, q).unwrap()
}

pub fn kets(dims: &[usize], kets: &[&[usize]]) -> MultiState<E> {
    MultiState::from_kets(dims.to_vec(), kets).unwrap()
}

/// Parses kets written as digit strings, e.g. "012".
pub fn ket_state(dims: &[usize], kets: &[&str]) -> MultiState<E> {
    let terms = kets.iter().map(|k| {
        let idx: Vec<usize> = k.bytes().map(|b| usize::from(b - b'0')).collect();
        (idx, int(1))
    });
    MultiState::from_terms(dims.to_vec(), terms).unwrap()
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> E {
    let p = *[-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5].choose(rng).unwrap();
    frac(p, rng.gen_range(1..=4))
}

pub fn any_rational(rng: &mut ChaCha8Rng) -> E {
    if rng.gen_bool(0.3) {
        int(0)
    } else {
        nonzero_rational(rng)
    }
}

pub fn random_op(rng: &mut ChaCha8Rng, dims: &[usize]) -> SitedOp<E> {
    let site = rng.gen_range(1..=dims.len());
    let d = dims[site - 1];
    let i = rng.gen_range(0..d);
    let mut j = rng.gen_range(0..d - 1);
    if j >= i {
        j += 1;
    }
    let op = match rng.gen_range(0..3) {
        0 => ElementaryOp::swap(i, j).unwrap(),
        1 => ElementaryOp::scale(i, nonzero_rational(rng)).unwrap(),
        _ => ElementaryOp::add_mul(i, nonzero_rational(rng), j).unwrap(),
    };
    op.at(site)
}

pub fn random_sequence(rng: &mut ChaCha8Rng, dims: &[usize], max_len: usize) -> EloSequence<E> {
    let len = rng.gen_range(1..=max_len);
    EloSequence::from_ops((0..len).map(|_| random_op(rng, dims)).collect())
}

pub fn scramble(
    rng: &mut ChaCha8Rng,
    s: &MultiState<E>,
    max_len: usize,
) -> (MultiState<E>, EloSequence<E>) {
    let seq = random_sequence(rng, s.dims(), max_len);
    (apply_sequence(s, &seq).unwrap(), seq)
}

pub fn random_state(rng: &mut ChaCha8Rng, dims: &[usize]) -> MultiState<E> {
    let total: usize = dims.iter().product();
    loop {
        let coeffs: Vec<E> = (0..total).map(|_| any_rational(rng)).collect();
        if let Ok(s) = MultiState::from_dense(dims.to_vec(), coeffs) {
            return s;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<E> {
    Matrix::from_rows(
        (0..rows)
            .map(|_| (0..cols).map(|_| any_rational(rng)).collect())
            .collect(),
    )
    .unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Matrix<E> {
    loop {
        let m = random_matrix(rng, d, d);
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                a[i][j] = (a[i][j] * a[rank][c] - a[i][c] * a[rank][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// The six-term three-qutrit form produced by the qutrit worked example.
pub fn qutrit_six_term() -> MultiState<E> {
    ket_state(&[3, 3, 3], &["000", "011", "022", "102", "110", "201"])
}

/// A nonzero rational from a wide range, so that polynomial coincidences
/// between several draws are negligible.
pub fn generic_rational(rng: &mut ChaCha8Rng) -> E {
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-1000..=1000);
    }
    frac(p, rng.gen_range(1..=97))
}

/// A random instance of the qutrit echelon form with generic entries a..i.
pub fn qutrit_rrf_instance(rng: &mut ChaCha8Rng) -> MultiState<E> {
    let mut r = || generic_rational(rng);
    let z = int(0);
    let o = int(1);
    let rows = [
        [
            o.clone(),
            r(),
            r(),
            r(),
            z.clone(),
            r(),
            r(),
            r(),
            z.clone(),
        ],
        [
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            o.clone(),
            r(),
            r(),
            r(),
            z.clone(),
        ],
        [
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
            o,
        ],
    ];
    MultiState::from_dense(vec![3, 3, 3], rows.into_iter().flatten().collect()).unwrap()
}

pub fn l(site: usize, i: usize, lambda: E, j: usize) -> SitedOp<E> {
    ElementaryOp::add_mul(i, lambda, j).unwrap().at(site)
}

pub fn s(site: usize, k: usize, lambda: E) -> SitedOp<E> {
    ElementaryOp::scale(k, lambda).unwrap().at(site)
}

pub fn f(site: usize, i: usize, j: usize) -> SitedOp<E> {
    ElementaryOp::swap(i, j).unwrap().at(site)
}

/// Reference sequences mapping V1, V4 and V18 onto mu, in application order.
pub fn v1_sequence() -> EloSequence<E> {
    EloSequence::from_ops(vec![l(4, 0, int(-1), 1), l(3, 1, int(1), 0)])
}

pub fn v4_sequence() -> EloSequence<E> {
    EloSequence::from_ops(vec![
        l(4, 0, int(-1), 1),
        l(3, 0, int(-1), 1),
        s(4, 1, int(-1)),
        s(1, 1, int(-1)),
        f(2, 0, 1),
        f(3, 0, 1),
        f(4, 0, 1),
        f(1, 0, 1),
    ])
}

pub fn v18_sequence() -> EloSequence<E> {
    EloSequence::from_ops(vec![
        l(1, 0, int(-1), 1),
        s(1, 1, frac(-1, 2)),
        l(1, 1, int(-1), 0),
        l(4, 0, int(-1), 1),
        l(3, 0, int(-1), 1),
        l(1, 1, int(1), 0),
        l(2, 0, int(-1), 1),
        s(4, 1, int(-1)),
    ])
}
