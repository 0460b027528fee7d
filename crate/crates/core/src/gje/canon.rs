//! Level relabelling and amplitude normalization.

use std::cmp::Ordering;

use itertools::Itertools;

use crate::elo::{apply_in_place, ElementaryOp, EloSequence};
use crate::exactnum::Scalar;
use crate::state::MultiState;

/// Upper bound on the number of tied level permutations examined.
pub const PERMUTATION_CAP: usize = 200_000;

/// Per-site level permutations (`perm[old] = new`) that minimize the level sum
/// of the support. Ties between equally frequent levels are enumerated while
/// the total stays under the cap; otherwise they keep their original order.
fn candidate_permutations<S: Scalar>(state: &MultiState<S>) -> Vec<Vec<Vec<usize>>> {
    let support: Vec<Vec<usize>> = state
        .support()
        .into_iter()
        .map(|f| state.multi_index(f))
        .collect();
    let mut per_site: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut total: usize = 1;
    let mut groups_per_site = Vec::new();
    for (k, &d) in state.dims().iter().enumerate() {
        let mut freq = vec![0usize; d];
        for e in &support {
            freq[e[k]] += 1;
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|a, b| freq[*b].cmp(&freq[*a]).then(a.cmp(b)));
        let groups: Vec<Vec<usize>> = order
            .chunk_by(|a, b| freq[*a] == freq[*b])
            .map(|g| g.to_vec())
            .collect();
        for g in &groups {
            total = total.saturating_mul((1..=g.len()).product::<usize>().max(1));
        }
        groups_per_site.push(groups);
    }
    let enumerate = total <= PERMUTATION_CAP;
    for (k, groups) in groups_per_site.iter().enumerate() {
        let d = state.dims()[k];
        let group_orders: Vec<Vec<Vec<usize>>> = groups
            .iter()
            .map(|g| {
                if enumerate {
                    g.iter().copied().permutations(g.len()).collect()
                } else {
                    vec![g.clone()]
                }
            })
            .collect();
        let perms = group_orders
            .into_iter()
            .multi_cartesian_product()
            .map(|parts| {
                let mut perm = vec![0; d];
                for (new, old) in parts.into_iter().flatten().enumerate() {
                    perm[old] = new;
                }
                perm
            })
            .collect();
        per_site.push(perms);
    }
    let chosen: Vec<Vec<Vec<usize>>> = per_site.into_iter().multi_cartesian_product().collect();
    let key = |perms: &Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        let mut s: Vec<Vec<usize>> = support
            .iter()
            .map(|e| e.iter().enumerate().map(|(k, &l)| perms[k][l]).collect())
            .collect();
        s.sort();
        s
    };
    let keyed: Vec<(Vec<Vec<usize>>, Vec<Vec<usize>>)> =
        chosen.into_iter().map(|p| (key(&p), p)).collect();
    let best = keyed
        .iter()
        .map(|(k, _)| k)
        .min()
        .cloned()
        .unwrap_or_default();
    keyed
        .into_iter()
        .filter(|(k, _)| *k == best)
        .map(|(_, p)| p)
        .collect()
}

fn push<S: Scalar>(
    state: &mut MultiState<S>,
    seq: &mut EloSequence<S>,
    site0: usize,
    op: ElementaryOp<S>,
) {
    apply_in_place(state, site0, &op);
    seq.push(op.at(site0 + 1));
}

fn permute<S: Scalar>(state: &mut MultiState<S>, seq: &mut EloSequence<S>, perms: &[Vec<usize>]) {
    for (k, perm) in perms.iter().enumerate() {
        let d = perm.len();
        let mut target = vec![0; d];
        for (old, &new) in perm.iter().enumerate() {
            target[new] = old;
        }
        let mut cur: Vec<usize> = (0..d).collect();
        for pos in 0..d {
            if cur[pos] != target[pos] {
                let q = cur
                    .iter()
                    .position(|&x| x == target[pos])
                    .expect("permutation");
                cur.swap(pos, q);
                push(
                    state,
                    seq,
                    k,
                    ElementaryOp::Swap {
                        i: pos.min(q),
                        j: pos.max(q),
                    },
                );
            }
        }
    }
}

/// Rescales levels so that as many amplitudes as possible become one.
pub(crate) fn canon_scale<S: Scalar>(state: &mut MultiState<S>, seq: &mut EloSequence<S>) {
    let n = state.num_sites();
    let mut remaining: Vec<Vec<usize>> = state
        .support()
        .into_iter()
        .map(|f| state.multi_index(f))
        .collect();
    let mut order: Vec<(Vec<usize>, usize)> = Vec::new();
    while !remaining.is_empty() {
        let mut pick = None;
        'outer: for (pos, e) in remaining.iter().enumerate().rev() {
            for k in 0..n {
                let private = remaining
                    .iter()
                    .enumerate()
                    .all(|(q, o)| q == pos || o[k] != e[k]);
                if private {
                    pick = Some((pos, k));
                    break 'outer;
                }
            }
        }
        match pick {
            Some((pos, k)) => {
                let e = remaining.remove(pos);
                order.push((e, k));
            }
            None => {
                remaining.pop();
            }
        }
    }
    for (e, k) in order.into_iter().rev() {
        let f = state.flat_index(&e).expect("in range");
        let x = state.coeffs()[f].clone();
        if !x.is_one() {
            let lambda = x.inv().expect("nonzero amplitude");
            push(state, seq, k, ElementaryOp::Scale { k: e[k], lambda });
        }
    }
}

fn dense_cmp<S: Scalar>(a: &MultiState<S>, b: &MultiState<S>) -> Ordering {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        match x.canonical_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Relabels levels so the support is lexicographically minimal and rescales
/// amplitudes to one where possible. Returns the new state and the
/// operations applied.
pub fn canonicalize<S: Scalar>(state: &MultiState<S>) -> (MultiState<S>, EloSequence<S>) {
    let mut best: Option<(MultiState<S>, EloSequence<S>)> = None;
    for perms in candidate_permutations(state) {
        let mut s = state.clone();
        let mut seq = EloSequence::new();
        permute(&mut s, &mut seq, &perms);
        canon_scale(&mut s, &mut seq);
        if best
            .as_ref()
            .is_none_or(|(b, _)| dense_cmp(&s, b) == Ordering::Less)
        {
            best = Some((s, seq));
        }
    }
    best.unwrap_or_else(|| (state.clone(), EloSequence::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elo::apply_sequence;
    use crate::exactnum::ExactScalar;

    fn st(dims: &[usize], kets: &[(&[usize], i64)]) -> MultiState<ExactScalar> {
        MultiState::from_terms(
            dims.to_vec(),
            kets.iter()
                .map(|(i, c)| (i.to_vec(), ExactScalar::from_i64(*c))),
        )
        .unwrap()
    }

    #[test]
    fn relabels_and_rescales() {
        let s = st(&[2, 2, 2], &[(&[1, 1, 0], 3), (&[0, 1, 1], -2)]);
        let (c, seq) = canonicalize(&s);
        assert_eq!(c, st(&[2, 2, 2], &[(&[0, 0, 0], 1), (&[1, 0, 1], 1)]));
        assert_eq!(apply_sequence(&s, &seq).unwrap(), c);
    }

    #[test]
    fn w_state_is_canonical() {
        let w = st(
            &[2, 2, 2],
            &[(&[0, 0, 1], 1), (&[0, 1, 0], 1), (&[1, 0, 0], 1)],
        );
        let (c, seq) = canonicalize(&w);
        assert_eq!(c, w);
        assert!(seq.is_empty());
    }
}
