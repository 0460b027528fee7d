//! Generalized Gauss-Jordan reduction of multipartite states.
//!
//! Every transformation is recorded as an [`EloSequence`], so each reduced
//! form comes with a certificate that can be replayed on the input.

mod canon;
mod search;

use serde::Serialize;

use crate::elo::{apply_sequence, matrix_action, ElementaryOp, EloSequence};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::linalg::Matrix;
use crate::state::MultiState;

pub use canon::canonicalize;

/// Default bound on the number of reduction passes.
pub const DEFAULT_MAX_PASSES: usize = 32;

/// Rank structure of a reduced state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotProfile {
    /// For each site, the (row, column) pivot positions of the reduced
    /// unfolding at that site.
    pub site_pivots: Vec<Vec<(usize, usize)>>,
    /// Rank of the unfolding at each site.
    pub site_ranks: Vec<usize>,
    /// Ranks of the d_1 x d_N blocks, in block order.
    pub block_ranks: Vec<usize>,
    /// Indices of nonzero amplitudes that could not be normalized to one.
    pub free_parameters: Vec<Vec<usize>>,
}

/// Outcome of a reduction: the reduced state, a certificate mapping the
/// input to it up to a global scale, and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult<S: Scalar> {
    pub reduced: MultiState<S>,
    pub certificate: EloSequence<S>,
    pub profile: PivotProfile,
    /// True when the last pass left the state unchanged.
    pub converged: bool,
    pub passes: usize,
}

pub fn profile<S: Scalar>(state: &MultiState<S>) -> PivotProfile {
    let n = state.num_sites();
    let mut site_pivots = Vec::with_capacity(n);
    let mut site_ranks = Vec::with_capacity(n);
    for site in 1..=n {
        let e = state.unfold(site).expect("site in range").rref();
        site_ranks.push(e.pivots.len());
        site_pivots.push(e.pivots.iter().copied().enumerate().collect());
    }
    let block_ranks = if n >= 2 {
        state
            .blocks()
            .expect("at least two sites")
            .iter()
            .map(Matrix::rank)
            .collect()
    } else {
        Vec::new()
    };
    let free_parameters = state
        .terms()
        .into_iter()
        .filter(|(_, c)| !c.is_one())
        .map(|(idx, _)| idx)
        .collect();
    PivotProfile {
        site_pivots,
        site_ranks,
        block_ranks,
        free_parameters,
    }
}

/// Brings the unfolding at `site` to reduced row echelon form.
pub fn rref_site<S: Scalar>(
    state: &MultiState<S>,
    site: usize,
) -> Result<(MultiState<S>, EloSequence<S>)> {
    let mut m = state.unfold(site)?;
    let mut seq = EloSequence::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            m.swap_rows(r, p);
            seq.push(ElementaryOp::swap(r, p)?.at(site));
        }
        let pv = m.get(r, c).clone();
        if !pv.is_one() {
            let lambda = pv.inv()?;
            m.scale_row(r, &lambda);
            seq.push(ElementaryOp::scale(r, lambda)?.at(site));
        }
        for i in 0..m.rows() {
            if i != r && !m.get(i, c).is_zero() {
                let lambda = m.get(i, c).neg();
                m.add_row_multiple(r, &lambda, i);
                seq.push(ElementaryOp::add_mul(r, lambda, i)?.at(site));
            }
        }
        r += 1;
    }
    let out = MultiState::fold(state.dims().to_vec(), site, &m)?;
    Ok((out, seq))
}

/// Reduces a bipartite state to [[I_m, 0], [0, 0]], m the Schmidt number.
pub fn fully_reduce_bipartite<S: Scalar>(state: &MultiState<S>) -> Result<ReductionResult<S>> {
    if state.num_sites() != 2 {
        return Err(Error::InvalidDims(format!(
            "bipartite reduction needs 2 subsystems, got {}",
            state.num_sites()
        )));
    }
    let (s1, mut seq) = rref_site(state, 1)?;
    let (s2, seq2) = rref_site(&s1, 2)?;
    seq.extend(seq2);
    Ok(ReductionResult {
        profile: profile(&s2),
        reduced: s2,
        certificate: seq,
        converged: true,
        passes: 1,
    })
}

/// Applies the similarity A_m -> s A_m s^{-1} to every block, by acting with
/// `s` on site 1 and with (s^{-1})^T on site N.
pub fn similarity_on_blocks<S: Scalar>(
    state: &MultiState<S>,
    s: &Matrix<S>,
) -> Result<(MultiState<S>, EloSequence<S>)> {
    let n = state.num_sites();
    if n < 2 {
        return Err(Error::InvalidDims(
            "similarity needs at least two subsystems".into(),
        ));
    }
    let dims = state.dims();
    if dims[0] != dims[n - 1] {
        return Err(Error::DimMismatch(format!(
            "first and last local dimensions differ ({} vs {})",
            dims[0],
            dims[n - 1]
        )));
    }
    if s.rows() != dims[0] || s.cols() != dims[0] {
        return Err(Error::DimMismatch(format!(
            "{}x{} similarity for local dimension {}",
            s.rows(),
            s.cols(),
            dims[0]
        )));
    }
    let sinv_t = s.inverse()?.transpose();
    let seq = matrix_action(s, 1)?.then(matrix_action(&sinv_t, n)?);
    let out = apply_sequence(state, &seq)?;
    Ok((out, seq))
}

fn eigenvector<S: Scalar>(b: &Matrix<S>, lambda: &S) -> Vec<Vec<S>> {
    let mut shifted = b.clone();
    for i in 0..b.rows() {
        let v = shifted.get(i, i).sub(lambda);
        shifted.set(i, i, v);
    }
    shifted.kernel()
}

fn from_columns<S: Scalar>(cols: &[Vec<S>]) -> Matrix<S> {
    let n = cols[0].len();
    let mut m = Matrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, v) in c.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    m
}

/// Similarity bringing a 2x2 block to Jordan form: returns (s, j) with
/// s * block * s^{-1} = j.
pub fn jordan_2x2<S: Scalar>(block: &Matrix<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    if block.rows() != 2 || block.cols() != 2 {
        return Err(Error::DimMismatch("jordan_2x2 needs a 2x2 block".into()));
    }
    let roots = S::roots(&block.char_poly()?);
    let total: usize = roots.iter().map(|r| r.1).sum();
    if total < 2 {
        return Err(Error::IrrationalSpectrum);
    }
    if roots.len() == 1 {
        let lambda = roots[0].0.clone();
        let mut j = Matrix::identity(2).scale(&lambda);
        let mut shifted = block.clone();
        for i in 0..2 {
            let v = shifted.get(i, i).sub(&lambda);
            shifted.set(i, i, v);
        }
        if shifted.is_zero() {
            return Ok((Matrix::identity(2), block.clone()));
        }
        let e0 = vec![S::one(), S::zero()];
        let e1 = vec![S::zero(), S::one()];
        let v2 = if shifted.get(0, 0).is_zero() && shifted.get(1, 0).is_zero() {
            e1
        } else {
            e0
        };
        let v1 = vec![
            shifted
                .get(0, 0)
                .mul(&v2[0])
                .add(&shifted.get(0, 1).mul(&v2[1])),
            shifted
                .get(1, 0)
                .mul(&v2[0])
                .add(&shifted.get(1, 1).mul(&v2[1])),
        ];
        j.set(0, 1, S::one());
        let v = from_columns(&[v1, v2]);
        return Ok((v.inverse()?, j));
    }
    let mut eig: Vec<S> = roots.into_iter().map(|r| r.0).collect();
    let triangular = block.get(0, 1).is_zero() || block.get(1, 0).is_zero();
    if triangular {
        eig = vec![block.get(0, 0).clone(), block.get(1, 1).clone()];
    } else {
        eig.sort_by(|a, b| b.canonical_cmp(a));
    }
    let cols: Vec<Vec<S>> = eig
        .iter()
        .map(|l| {
            eigenvector(block, l)
                .into_iter()
                .next()
                .expect("eigenvalue has an eigenvector")
        })
        .collect();
    let v = from_columns(&cols);
    let mut j = Matrix::zeros(2, 2);
    j.set(0, 0, eig[0].clone());
    j.set(1, 1, eig[1].clone());
    Ok((v.inverse()?, j))
}

/// Diagonalizing similarity of a square block whose characteristic
/// polynomial splits over the working field: returns (s, eigenvalues) with
/// s * block * s^{-1} diagonal.
pub fn diagonalize<S: Scalar>(block: &Matrix<S>) -> Result<(Matrix<S>, Vec<S>)> {
    if !block.is_square() {
        return Err(Error::NotSquare {
            rows: block.rows(),
            cols: block.cols(),
        });
    }
    let n = block.rows();
    let mut roots = S::roots(&block.char_poly()?);
    if roots.iter().map(|r| r.1).sum::<usize>() < n {
        return Err(Error::IrrationalSpectrum);
    }
    roots.sort_by(|a, b| b.0.canonical_cmp(&a.0));
    let mut cols = Vec::with_capacity(n);
    let mut eig = Vec::with_capacity(n);
    for (l, mult) in roots {
        let basis = eigenvector(block, &l);
        if basis.len() != mult {
            return Err(Error::InvalidOp("block is not diagonalizable".into()));
        }
        for v in basis {
            cols.push(v);
            eig.push(l.clone());
        }
    }
    Ok((from_columns(&cols).inverse()?, eig))
}

/// Reduces a state toward its most-fully-reduced form.
///
/// Each pass builds several candidate reductions (plain greedy
/// elimination, echelon sweeps, pivot-driven cross-block elimination and
/// block-pencil similarities), keeps the sparsest, and canonicalizes level
/// order and scaling. Reduction stops when a pass changes nothing or after
/// `max_passes` passes, in which case `converged` is false.
pub fn mfrf_reduce<S: Scalar>(
    state: &MultiState<S>,
    max_passes: usize,
) -> Result<ReductionResult<S>> {
    let mut cur = state.clone();
    let mut cert = EloSequence::new();
    let mut converged = false;
    let mut passes = 0;
    while passes < max_passes {
        passes += 1;
        let best = search::best_candidate(&cur)?;
        let (canon_state, canon_seq) = canonicalize(&best.state);
        cert.extend(best.seq);
        cert.extend(canon_seq);
        if canon_state == cur {
            converged = true;
            break;
        }
        cur = canon_state;
    }
    let reduced = cur.canonical_scaled();
    let replay = apply_sequence(state, &cert)?;
    if !replay.equal_up_to_scale(&reduced) {
        return Err(Error::InvariantViolation(
            "reduction certificate does not reproduce the reduced state".into(),
        ));
    }
    Ok(ReductionResult {
        profile: profile(&reduced),
        reduced,
        certificate: cert,
        converged,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ExactScalar;

    type E = ExactScalar;
    type St = MultiState<E>;

    fn x(v: i64) -> E {
        E::from_i64(v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<E> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| x(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bipartite_identity_block() {
        let s = St::from_terms(
            vec![3, 3],
            vec![
                (vec![0, 0], x(2)),
                (vec![0, 1], x(1)),
                (vec![1, 0], x(4)),
                (vec![1, 1], x(2)),
                (vec![2, 2], x(5)),
            ],
        )
        .unwrap();
        let r = fully_reduce_bipartite(&s).unwrap();
        assert_eq!(
            r.reduced.coefficient_matrix(),
            mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])
        );
        assert_eq!(r.certificate.apply(&s).unwrap(), r.reduced);
        assert_eq!(r.profile.site_ranks, vec![2, 2]);
    }

    #[test]
    fn jordan_forms() {
        let (s, j) = jordan_2x2(&mat(&[&[2, 3], &[0, 5]])).unwrap();
        assert_eq!(j, mat(&[&[2, 0], &[0, 5]]));
        let b = mat(&[&[2, 3], &[0, 5]]);
        assert_eq!(s.mul(&b).unwrap().mul(&s.inverse().unwrap()).unwrap(), j);

        let (_, j) = jordan_2x2(&mat(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(j, mat(&[&[1, 0], &[0, -1]]));

        let b = mat(&[&[3, 1], &[-1, 1]]);
        let (s, j) = jordan_2x2(&b).unwrap();
        assert_eq!(j, mat(&[&[2, 1], &[0, 2]]));
        assert_eq!(s.mul(&b).unwrap().mul(&s.inverse().unwrap()).unwrap(), j);

        assert_eq!(
            jordan_2x2(&mat(&[&[0, -1], &[1, 0]])),
            Err(Error::IrrationalSpectrum)
        );
    }

    #[test]
    fn diagonalize_3x3() {
        let b = mat(&[&[2, 0, 0], &[1, 3, 0], &[0, 0, 3]]);
        let (s, eig) = diagonalize(&b).unwrap();
        let d = s.mul(&b).unwrap().mul(&s.inverse().unwrap()).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                if i == k {
                    assert_eq!(d.get(i, k), &eig[i]);
                } else {
                    assert!(d.get(i, k).is_zero());
                }
            }
        }
        assert!(diagonalize(&mat(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]])).is_err());
    }

    #[test]
    fn similarity_conjugates_blocks() {
        let s = St::from_terms(
            vec![2, 2, 2],
            vec![
                (vec![0, 0, 0], x(1)),
                (vec![1, 0, 1], x(1)),
                (vec![0, 1, 1], x(3)),
                (vec![1, 1, 0], x(2)),
            ],
        )
        .unwrap();
        let sim = mat(&[&[1, 2], &[1, 3]]);
        let (t, seq) = similarity_on_blocks(&s, &sim).unwrap();
        let sinv = sim.inverse().unwrap();
        for (a, b) in s.blocks().unwrap().iter().zip(t.blocks().unwrap()) {
            assert_eq!(sim.mul(a).unwrap().mul(&sinv).unwrap(), b);
        }
        assert_eq!(seq.apply(&s).unwrap(), t);
    }

    #[test]
    fn ghz_is_a_fixed_point() {
        let g = St::from_kets(vec![2, 2, 2], &[&[0, 0, 0], &[1, 1, 1]]).unwrap();
        let r = mfrf_reduce(&g, DEFAULT_MAX_PASSES).unwrap();
        assert_eq!(r.reduced, g);
        assert!(r.converged);
        assert_eq!(r.passes, 1);
        assert!(r.certificate.is_empty());
    }
}
