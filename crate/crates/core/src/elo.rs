//! Elementary local operations and their sequences.
//!
//! Levels are zero based and sites are one based. A sequence is applied
//! left to right: the first listed operation acts first.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{combined_order, Scalar};
use crate::linalg::Matrix;
use crate::state::MultiState;

/// An elementary row operation on the level space of one subsystem.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementaryOp<S> {
    /// F(i, j): exchange levels i and j. Stored with i < j.
    Swap { i: usize, j: usize },
    /// S(k, lambda): multiply level k by a nonzero lambda.
    Scale { k: usize, lambda: S },
    /// L(i, lambda, j): add lambda times level i to level j, i.e. the matrix
    /// I + lambda |j><i|.
    AddMul { i: usize, lambda: S, j: usize },
}

impl<S: Scalar> ElementaryOp<S> {
    pub fn swap(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidOp(format!(
                "F({i},{j}) swaps a level with itself"
            )));
        }
        Ok(ElementaryOp::Swap {
            i: i.min(j),
            j: i.max(j),
        })
    }

    pub fn scale(k: usize, lambda: S) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(ElementaryOp::Scale { k, lambda })
    }

    pub fn add_mul(i: usize, lambda: S, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidOp(format!(
                "L({i},_,{j}) needs distinct levels"
            )));
        }
        Ok(ElementaryOp::AddMul { i, lambda, j })
    }

    fn max_level(&self) -> usize {
        match self {
            ElementaryOp::Swap { i, j } => *i.max(j),
            ElementaryOp::Scale { k, .. } => *k,
            ElementaryOp::AddMul { i, j, .. } => *i.max(j),
        }
    }

    /// Checks the operation is well formed for local dimension `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        let m = self.max_level();
        if m >= d {
            return Err(Error::LevelOutOfRange { level: m, dim: d });
        }
        match self {
            ElementaryOp::Swap { i, j } if i >= j => {
                Err(Error::InvalidOp(format!("F({i},{j}) is not canonical")))
            }
            ElementaryOp::Scale { lambda, .. } if lambda.is_zero() => Err(Error::ZeroScale),
            ElementaryOp::AddMul { i, j, .. } if i == j => Err(Error::InvalidOp(format!(
                "L({i},_,{j}) needs distinct levels"
            ))),
            _ => Ok(()),
        }
    }

    fn scalar(&self) -> Option<&S> {
        match self {
            ElementaryOp::Swap { .. } => None,
            ElementaryOp::Scale { lambda, .. } | ElementaryOp::AddMul { lambda, .. } => {
                Some(lambda)
            }
        }
    }

    /// The d x d matrix of the operation.
    pub fn matrix(&self, d: usize) -> Result<Matrix<S>> {
        self.validate(d)?;
        let mut m = Matrix::identity(d);
        match self {
            ElementaryOp::Swap { i, j } => {
                m.swap_rows(*i, *j);
            }
            ElementaryOp::Scale { k, lambda } => m.set(*k, *k, lambda.clone()),
            ElementaryOp::AddMul { i, lambda, j } => m.set(*j, *i, lambda.clone()),
        }
        Ok(m)
    }

    pub fn inverse(&self) -> Self {
        match self {
            ElementaryOp::Swap { i, j } => ElementaryOp::Swap { i: *i, j: *j },
            ElementaryOp::Scale { k, lambda } => ElementaryOp::Scale {
                k: *k,
                lambda: lambda.inv().expect("scale factors are nonzero"),
            },
            ElementaryOp::AddMul { i, lambda, j } => ElementaryOp::AddMul {
                i: *i,
                lambda: lambda.neg(),
                j: *j,
            },
        }
    }

    pub fn at(self, site: usize) -> SitedOp<S> {
        SitedOp { site, op: self }
    }
}

impl<S: Scalar> fmt::Display for ElementaryOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryOp::Swap { i, j } => write!(f, "F({i},{j})"),
            ElementaryOp::Scale { k, lambda } => write!(f, "S({k},{lambda})"),
            ElementaryOp::AddMul { i, lambda, j } => write!(f, "L({i},{lambda},{j})"),
        }
    }
}

/// An elementary operation together with the (one based) site it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct SitedOp<S> {
    pub site: usize,
    pub op: ElementaryOp<S>,
}

impl<S: Scalar> SitedOp<S> {
    pub fn inverse(&self) -> Self {
        SitedOp {
            site: self.site,
            op: self.op.inverse(),
        }
    }

    /// Checks the operation against the dimensions of a state.
    pub fn validate(&self, dims: &[usize]) -> Result<()> {
        if self.site == 0 || self.site > dims.len() {
            return Err(Error::SiteOutOfRange {
                site: self.site,
                n: dims.len(),
            });
        }
        self.op.validate(dims[self.site - 1])
    }
}

impl<S: Scalar> fmt::Display for SitedOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.op, self.site)
    }
}

/// An ordered list of sited operations, applied first to last.
#[derive(Clone, Debug, PartialEq)]
pub struct EloSequence<S> {
    ops: Vec<SitedOp<S>>,
}

impl<S> Default for EloSequence<S> {
    fn default() -> Self {
        EloSequence { ops: Vec::new() }
    }
}

impl<S: Scalar> EloSequence<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ops(ops: Vec<SitedOp<S>>) -> Self {
        EloSequence { ops }
    }

    /// Places unsited operations on a single site, keeping their order.
    pub fn on_site(site: usize, ops: impl IntoIterator<Item = ElementaryOp<S>>) -> Self {
        EloSequence {
            ops: ops.into_iter().map(|op| op.at(site)).collect(),
        }
    }

    pub fn push(&mut self, op: SitedOp<S>) {
        self.ops.push(op);
    }

    pub fn extend(&mut self, other: EloSequence<S>) {
        self.ops.extend(other.ops);
    }

    pub fn then(mut self, other: EloSequence<S>) -> Self {
        self.extend(other);
        self
    }

    pub fn ops(&self) -> &[SitedOp<S>] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<SitedOp<S>> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SitedOp<S>> {
        self.ops.iter()
    }

    /// The sequence that undoes this one.
    pub fn inverse(&self) -> Self {
        EloSequence {
            ops: self.ops.iter().rev().map(SitedOp::inverse).collect(),
        }
    }

    pub fn apply(&self, state: &MultiState<S>) -> Result<MultiState<S>> {
        apply_sequence(state, self)
    }

    pub fn validate(&self, dims: &[usize]) -> Result<()> {
        self.ops.iter().try_for_each(|op| op.validate(dims))
    }
}

impl<S: Scalar> fmt::Display for EloSequence<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|o| o.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl<S: Scalar> FromIterator<SitedOp<S>> for EloSequence<S> {
    fn from_iter<I: IntoIterator<Item = SitedOp<S>>>(iter: I) -> Self {
        EloSequence {
            ops: iter.into_iter().collect(),
        }
    }
}

impl<'a, S> IntoIterator for &'a EloSequence<S> {
    type Item = &'a SitedOp<S>;
    type IntoIter = std::slice::Iter<'a, SitedOp<S>>;
    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

/// Applies `op` at zero-based `site0` without validation.
pub(crate) fn apply_in_place<S: Scalar>(
    state: &mut MultiState<S>,
    site0: usize,
    op: &ElementaryOp<S>,
) {
    let s = state.stride(site0);
    let bases: Vec<usize> = state.fiber_bases(site0).collect();
    let c = state.coeffs_mut();
    match op {
        ElementaryOp::Swap { i, j } => {
            for f in bases {
                c.swap(f + i * s, f + j * s);
            }
        }
        ElementaryOp::Scale { k, lambda } => {
            for f in bases {
                let idx = f + k * s;
                if !c[idx].is_zero() {
                    c[idx] = c[idx].mul(lambda).flush();
                }
            }
        }
        ElementaryOp::AddMul { i, lambda, j } => {
            if lambda.is_zero() {
                return;
            }
            for f in bases {
                let src = &c[f + i * s];
                if src.is_zero() {
                    continue;
                }
                let v = c[f + j * s].add(&lambda.mul(src)).flush();
                c[f + j * s] = v;
            }
        }
    }
}

/// Applies one sited operation.
pub fn apply<S: Scalar>(state: &MultiState<S>, op: &SitedOp<S>) -> Result<MultiState<S>> {
    op.validate(state.dims())?;
    if let Some(l) = op.op.scalar() {
        combined_order([l].into_iter().chain(state.coeffs()))?;
    }
    let mut out = state.clone();
    apply_in_place(&mut out, op.site - 1, &op.op);
    Ok(out)
}

pub fn apply_sequence<S: Scalar>(
    state: &MultiState<S>,
    seq: &EloSequence<S>,
) -> Result<MultiState<S>> {
    seq.validate(state.dims())?;
    let scalars: Vec<&S> = seq.iter().filter_map(|o| o.op.scalar()).collect();
    combined_order(scalars.into_iter().chain(state.coeffs()))?;
    let mut out = state.clone();
    for op in seq {
        apply_in_place(&mut out, op.site - 1, &op.op);
    }
    Ok(out)
}

pub fn inverse<S: Scalar>(op: &SitedOp<S>) -> SitedOp<S> {
    op.inverse()
}

pub fn inverse_sequence<S: Scalar>(seq: &EloSequence<S>) -> EloSequence<S> {
    seq.inverse()
}

/// Product E_1 E_2 ... E_k of the operations' matrices, in listed order.
pub fn compose_ops<S: Scalar>(ops: &[ElementaryOp<S>], d: usize) -> Result<Matrix<S>> {
    let mut m = Matrix::identity(d);
    for op in ops {
        m = m.mul(&op.matrix(d)?)?;
    }
    Ok(m)
}

/// Product of the matrices of a single-site sequence, in listed order.
pub fn compose_to_matrix<S: Scalar>(seq: &EloSequence<S>, d: usize) -> Result<Matrix<S>> {
    if let Some(first) = seq.ops.first() {
        if seq.ops.iter().any(|o| o.site != first.site) {
            return Err(Error::MixedSites);
        }
    }
    let ops: Vec<ElementaryOp<S>> = seq.ops.iter().map(|o| o.op.clone()).collect();
    compose_ops(&ops, d)
}

/// Writes an invertible matrix as a product E_1 E_2 ... E_k of elementary
/// matrices, found by Gauss-Jordan elimination with first-nonzero pivoting.
/// The result has at most d^2 + d factors.
pub fn decompose_invertible<S: Scalar>(m: &Matrix<S>) -> Result<Vec<ElementaryOp<S>>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let d = m.rows();
    let mut a = m.clone();
    // reducing ops R_1, ..., R_k with R_k ... R_1 m = I
    let mut reducing = Vec::new();
    for c in 0..d {
        let p = (c..d)
            .find(|&i| !a.get(i, c).is_zero())
            .ok_or(Error::SingularMatrix)?;
        if p != c {
            a.swap_rows(c, p);
            reducing.push(ElementaryOp::Swap { i: c, j: p });
        }
        for i in c + 1..d {
            if !a.get(i, c).is_zero() {
                let lambda = a.get(i, c).div(a.get(c, c))?.neg();
                a.add_row_multiple(c, &lambda, i);
                reducing.push(ElementaryOp::AddMul { i: c, lambda, j: i });
            }
        }
        let pv = a.get(c, c).clone();
        if !pv.is_one() {
            let lambda = pv.inv()?;
            a.scale_row(c, &lambda);
            reducing.push(ElementaryOp::Scale { k: c, lambda });
        }
        for i in 0..c {
            if !a.get(i, c).is_zero() {
                let lambda = a.get(i, c).neg();
                a.add_row_multiple(c, &lambda, i);
                reducing.push(ElementaryOp::AddMul { i: c, lambda, j: i });
            }
        }
    }
    // m = R_1^{-1} R_2^{-1} ... R_k^{-1}
    Ok(reducing.iter().map(ElementaryOp::inverse).collect())
}

/// A sequence whose application multiplies the level index of `site` by
/// `m`, i.e. maps c to (m acting on that site) c.
pub fn matrix_action<S: Scalar>(m: &Matrix<S>, site: usize) -> Result<EloSequence<S>> {
    let mut ops = decompose_invertible(m)?;
    ops.reverse();
    Ok(EloSequence::on_site(site, ops))
}
