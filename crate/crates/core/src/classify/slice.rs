//! Slice-determinant invariants.
//!
//! For two sites p, q of equal dimension d, the slices A_m (indexed by the
//! levels m of the remaining sites) give a homogeneous degree-d form
//! P(x) = det(sum_m x_m A_m). Local operations at p and q rescale P and
//! operations elsewhere act on x linearly, so the dimensions of the spans of
//! the k-th partial derivatives of P are invariant.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::exactnum::Scalar;
use crate::linalg::Matrix;
use crate::state::MultiState;

const MAX_VARIABLES: usize = 16;
const MAX_DIM: usize = 5;

type Poly<S> = BTreeMap<Vec<u8>, S>;

/// Derivative-span dimensions of the slice determinant at a pair of sites.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceInvariant {
    /// One-based sites.
    pub sites: (usize, usize),
    /// Entry k is the dimension of the span of the k-th order partials.
    pub spans: Vec<usize>,
}

fn mul_linear<S: Scalar>(p: &Poly<S>, form: &[S]) -> Poly<S> {
    let mut out: Poly<S> = BTreeMap::new();
    for (mono, c) in p {
        for (v, a) in form.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut m = mono.clone();
            m[v] += 1;
            let term = c.mul(a);
            let slot = out.entry(m).or_insert_with(S::zero);
            *slot = slot.add(&term).flush();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn determinant_form<S: Scalar>(entries: &[Vec<Vec<S>>], vars: usize) -> Poly<S> {
    let d = entries.len();
    let mut total: Poly<S> = BTreeMap::new();
    for perm in (0..d).permutations(d) {
        let inversions = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut p: Poly<S> = BTreeMap::new();
        p.insert(
            vec![0; vars],
            if inversions % 2 == 0 {
                S::one()
            } else {
                S::one().neg()
            },
        );
        for (i, &j) in perm.iter().enumerate() {
            p = mul_linear(&p, &entries[i][j]);
            if p.is_empty() {
                break;
            }
        }
        for (m, c) in p {
            let slot = total.entry(m).or_insert_with(S::zero);
            *slot = slot.add(&c).flush();
        }
    }
    total.retain(|_, c| !c.is_zero());
    total
}

fn differentiate<S: Scalar>(p: &Poly<S>, v: usize) -> Poly<S> {
    let mut out = BTreeMap::new();
    for (mono, c) in p {
        if mono[v] == 0 {
            continue;
        }
        let mut m = mono.clone();
        m[v] -= 1;
        out.insert(m, c.mul(&S::from_i64(mono[v] as i64)));
    }
    out
}

fn span_dimension<S: Scalar>(polys: &[Poly<S>]) -> usize {
    let monos: Vec<&Vec<u8>> = polys
        .iter()
        .flat_map(|p| p.keys())
        .sorted()
        .dedup()
        .collect();
    if monos.is_empty() {
        return 0;
    }
    let rows = polys
        .iter()
        .map(|p| {
            monos
                .iter()
                .map(|m| p.get(*m).cloned().unwrap_or_else(S::zero))
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

/// Invariant for sites `p`, `q` (one based, distinct, equal dimension).
/// Returns `None` when the sizes make the computation impractical.
pub fn slice_invariant<S: Scalar>(
    state: &MultiState<S>,
    p: usize,
    q: usize,
) -> Option<SliceInvariant> {
    let dims = state.dims();
    let (kp, kq) = (p.checked_sub(1)?, q.checked_sub(1)?);
    if kp == kq
        || kp >= dims.len()
        || kq >= dims.len()
        || dims[kp] != dims[kq]
        || dims[kp] > MAX_DIM
    {
        return None;
    }
    let d = dims[kp];
    let rest: Vec<usize> = (0..dims.len()).filter(|&k| k != kp && k != kq).collect();
    let vars: usize = rest.iter().map(|&k| dims[k]).product();
    if vars > MAX_VARIABLES {
        return None;
    }
    let mut entries = vec![vec![vec![S::zero(); vars]; d]; d];
    for (f, c) in state.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let idx = state.multi_index(f);
        let m = rest.iter().fold(0, |acc, &k| acc * dims[k] + idx[k]);
        entries[idx[kp]][idx[kq]][m] = c.clone();
    }
    let det = determinant_form(&entries, vars);
    let mut spans = vec![usize::from(!det.is_empty())];
    for k in 1..d {
        let partials: Vec<Poly<S>> = (0..vars)
            .combinations_with_replacement(k)
            .map(|vs| vs.iter().fold(det.clone(), |p, &v| differentiate(&p, v)))
            .filter(|p| !p.is_empty())
            .collect();
        spans.push(span_dimension(&partials));
    }
    Some(SliceInvariant {
        sites: (p, q),
        spans,
    })
}

/// Invariants for every pair of sites of equal dimension.
pub fn slice_invariants<S: Scalar>(state: &MultiState<S>) -> Vec<SliceInvariant> {
    let n = state.num_sites();
    (1..=n)
        .tuple_combinations()
        .filter_map(|(p, q)| slice_invariant(state, p, q))
        .collect()
}
