//! Candidate reductions evaluated in each pass of the reducer.

use std::collections::{HashMap, HashSet};

use super::{diagonalize, jordan_2x2, rref_site, similarity_on_blocks};
use crate::elo::{apply_in_place, matrix_action, ElementaryOp, EloSequence};
use crate::error::Result;
use crate::exactnum::Scalar;
use crate::linalg::Matrix;
use crate::state::MultiState;

const PIVOT_SWEEP_ROUNDS: usize = 12;

/// A state together with the operations that produced it.
#[derive(Clone)]
pub(crate) struct Work<S> {
    pub state: MultiState<S>,
    pub seq: EloSequence<S>,
}

/// An add-multiple move L(i, lambda, j) at zero-based `site0`.
#[derive(Clone)]
struct Move<S> {
    site0: usize,
    i: usize,
    lambda: S,
    j: usize,
}

impl<S: Scalar> Work<S> {
    fn new(state: MultiState<S>) -> Self {
        Work {
            state,
            seq: EloSequence::new(),
        }
    }

    fn apply_move(&mut self, m: &Move<S>) {
        let op = ElementaryOp::AddMul {
            i: m.i,
            lambda: m.lambda.clone(),
            j: m.j,
        };
        apply_in_place(&mut self.state, m.site0, &op);
        self.seq.push(op.at(m.site0 + 1));
    }

    fn apply_seq(&mut self, seq: EloSequence<S>) {
        for op in &seq {
            apply_in_place(&mut self.state, op.site - 1, &op.op);
        }
        self.seq.extend(seq);
    }

    fn rref(&mut self, site: usize) -> Result<()> {
        let (s, seq) = rref_site(&self.state, site)?;
        self.state = s;
        self.seq.extend(seq);
        Ok(())
    }

    /// Echelon forms at site 1, site N, then the middle sites.
    fn rref_sweep(&mut self) -> Result<()> {
        let n = self.state.num_sites();
        let mut order = vec![1];
        if n > 1 {
            order.push(n);
        }
        order.extend(2..n);
        for site in order {
            self.rref(site)?;
        }
        Ok(())
    }
}

/// Change in the number of nonzero amplitudes caused by a move.
fn delta_nnz<S: Scalar>(state: &MultiState<S>, m: &Move<S>) -> isize {
    let s = state.stride(m.site0);
    let c = state.coeffs();
    let mut delta = 0isize;
    for f in state.fiber_bases(m.site0) {
        let src = &c[f + m.i * s];
        if src.is_zero() {
            continue;
        }
        let old = &c[f + m.j * s];
        let new = old.add(&m.lambda.mul(src)).flush();
        delta += (!new.is_zero()) as isize - (!old.is_zero()) as isize;
    }
    delta
}

/// Moves that cancel one nonzero amplitude against another differing at a
/// single site.
fn elimination_moves<S: Scalar>(state: &MultiState<S>) -> Vec<Move<S>> {
    let dims = state.dims();
    let c = state.coeffs();
    let mut seen: HashMap<(usize, usize, usize), Vec<S>> = HashMap::new();
    let mut moves = Vec::new();
    for e in state.support() {
        let idx = state.multi_index(e);
        for (k, &d) in dims.iter().enumerate() {
            let s = state.stride(k);
            for l in 0..d {
                if l == idx[k] {
                    continue;
                }
                let f = e + l * s - idx[k] * s;
                if c[f].is_zero() {
                    continue;
                }
                let lambda = c[f].div(&c[e]).expect("nonzero").neg();
                let bucket = seen.entry((k, idx[k], l)).or_default();
                if bucket.contains(&lambda) {
                    continue;
                }
                bucket.push(lambda.clone());
                moves.push(Move {
                    site0: k,
                    i: idx[k],
                    lambda,
                    j: l,
                });
            }
        }
    }
    moves
}

/// Greedy elimination: take the move that removes the most amplitudes; on a
/// plateau, look for a pair of moves that together make progress.
fn descend<S: Scalar>(w: &mut Work<S>) {
    loop {
        let moves = elimination_moves(&w.state);
        let deltas: Vec<isize> = moves.iter().map(|m| delta_nnz(&w.state, m)).collect();
        if let Some((pos, _)) = deltas
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < 0)
            .min_by_key(|(p, &d)| (d, *p))
        {
            w.apply_move(&moves[pos]);
            continue;
        }
        let mut best: Option<(isize, usize, Work<S>, Move<S>)> = None;
        for (pos, m) in moves.iter().enumerate() {
            if deltas[pos] > 0 {
                continue;
            }
            let mut probe = Work::new(w.state.clone());
            probe.apply_move(m);
            for m2 in elimination_moves(&probe.state) {
                let total = deltas[pos] + delta_nnz(&probe.state, &m2);
                if total < 0 && best.as_ref().is_none_or(|b| total < b.0) {
                    best = Some((total, pos, probe.clone(), m2));
                }
            }
        }
        match best {
            Some((_, pos, _, m2)) => {
                let m1 = moves[pos].clone();
                w.apply_move(&m1);
                w.apply_move(&m2);
            }
            None => return,
        }
    }
}

/// Flat indices of the leading entries of the site-1 unfolding.
fn site1_pivots<S: Scalar>(state: &MultiState<S>) -> Vec<usize> {
    let d1 = state.dims()[0];
    let cols = state.coeffs().len() / d1;
    (0..d1)
        .filter_map(|r| {
            (0..cols)
                .find(|&c| !state.coeffs()[r * cols + c].is_zero())
                .map(|c| r * cols + c)
        })
        .collect()
}

/// For each site-1 pivot, clear the other nonzero entries of its fibers,
/// visiting sites in `order` (zero based).
fn pivot_sweep<S: Scalar>(w: &mut Work<S>, order: &[usize]) {
    let pivots = site1_pivots(&w.state);
    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    for _ in 0..PIVOT_SWEEP_ROUNDS {
        let mut changed = false;
        for &p in &pivots {
            let pidx = w.state.multi_index(p);
            for &k in order {
                let s = w.state.stride(k);
                for l in 0..w.state.dims()[k] {
                    if l == pidx[k] {
                        continue;
                    }
                    let q = p + l * s - pidx[k] * s;
                    let c = w.state.coeffs();
                    if pivot_set.contains(&q) || c[q].is_zero() || c[p].is_zero() {
                        continue;
                    }
                    let lambda = c[q].div(&c[p]).expect("nonzero").neg();
                    w.apply_move(&Move {
                        site0: k,
                        i: pidx[k],
                        lambda,
                        j: l,
                    });
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn embed<S: Scalar>(d: usize, levels: &[usize], sub: &Matrix<S>) -> Matrix<S> {
    let mut m = Matrix::identity(d);
    for (a, &i) in levels.iter().enumerate() {
        for (b, &j) in levels.iter().enumerate() {
            m.set(i, j, sub.get(a, b).clone());
        }
    }
    m
}

fn restrict<S: Scalar>(m: &Matrix<S>, levels: &[usize]) -> Matrix<S> {
    let mut out = Matrix::zeros(levels.len(), levels.len());
    for (a, &i) in levels.iter().enumerate() {
        for (b, &j) in levels.iter().enumerate() {
            out.set(a, b, m.get(i, j).clone());
        }
    }
    out
}

/// Levels on which `a` acts as the identity, if `a` vanishes elsewhere.
fn identity_levels<S: Scalar>(a: &Matrix<S>) -> Option<Vec<usize>> {
    let d = a.rows();
    let levels: Vec<usize> = (0..d).filter(|&i| a.get(i, i).is_one()).collect();
    for i in 0..d {
        for j in 0..d {
            if (i != j || !levels.contains(&i)) && !a.get(i, j).is_zero() {
                return None;
            }
        }
    }
    Some(levels)
}

/// Block-pencil candidates: make one block the identity on a subspace, then
/// bring the restriction of another block to Jordan or diagonal form there.
fn pencil_candidates<S: Scalar>(state: &MultiState<S>) -> Vec<Work<S>> {
    let n = state.num_sites();
    let dims = state.dims();
    let mut out = Vec::new();
    if n < 3 || dims[0] != dims[n - 1] {
        return out;
    }
    let d = dims[0];
    let Ok(blocks) = state.blocks() else {
        return out;
    };
    for (m, a) in blocks.iter().enumerate() {
        let (base, levels) = match a.inverse() {
            Ok(ainv) => {
                let mut w = Work::new(state.clone());
                match matrix_action(&ainv, 1) {
                    Ok(seq) => w.apply_seq(seq),
                    Err(_) => continue,
                }
                (w, (0..d).collect::<Vec<_>>())
            }
            Err(_) => match identity_levels(a) {
                Some(levels) if levels.len() >= 2 => (Work::new(state.clone()), levels),
                _ => continue,
            },
        };
        let Ok(base_blocks) = base.state.blocks() else {
            continue;
        };
        let mut subspaces: Vec<Vec<usize>> = Vec::new();
        for x in 0..levels.len() {
            for y in x + 1..levels.len() {
                subspaces.push(vec![levels[x], levels[y]]);
            }
        }
        if levels.len() > 2 {
            subspaces.push(levels.clone());
        }
        for sub in &subspaces {
            for (m2, b) in base_blocks.iter().enumerate() {
                if m2 == m {
                    continue;
                }
                let r = restrict(b, sub);
                let sim = if sub.len() == 2 {
                    jordan_2x2(&r).map(|(s, _)| s)
                } else {
                    diagonalize(&r).map(|(s, _)| s)
                };
                let Ok(sim) = sim else {
                    continue;
                };
                if sim.is_identity() {
                    continue;
                }
                let Ok((t, seq)) = similarity_on_blocks(&base.state, &embed(d, sub, &sim)) else {
                    continue;
                };
                let mut w = Work {
                    state: t,
                    seq: base.seq.clone(),
                };
                w.seq.extend(seq);
                descend(&mut w);
                out.push(w);
            }
        }
    }
    out
}

/// Runs every candidate pipeline on `state` and returns the sparsest
/// result (earliest on ties).
pub(crate) fn best_candidate<S: Scalar>(state: &MultiState<S>) -> Result<Work<S>> {
    let n = state.num_sites();
    let mut sweep_order = vec![n - 1];
    sweep_order.extend(0..n - 1);

    let mut cands = Vec::new();

    let mut w = Work::new(state.clone());
    descend(&mut w);
    cands.push(w);

    let mut w = Work::new(state.clone());
    w.rref_sweep()?;
    descend(&mut w);
    cands.push(w);

    let mut w = Work::new(state.clone());
    w.rref(1)?;
    pivot_sweep(&mut w, &sweep_order);
    descend(&mut w);
    cands.push(w);

    let mut w = Work::new(state.clone());
    w.rref_sweep()?;
    w.rref(1)?;
    pivot_sweep(&mut w, &sweep_order);
    descend(&mut w);
    cands.push(w);

    cands.extend(pencil_candidates(state));

    let best = cands
        .into_iter()
        .enumerate()
        .min_by_key(|(pos, w)| (w.state.nnz(), *pos))
        .map(|(_, w)| w)
        .expect("at least one candidate");
    Ok(best)
}
