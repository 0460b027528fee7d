//! Multipartite state vectors and their matrix views.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{combined_order, Scalar};
use crate::linalg::Matrix;

/// Upper bound on the number of amplitudes of a state.
pub const MAX_AMPLITUDES: usize = 1 << 22;

/// A nonzero tensor in C^{d_1} x ... x C^{d_N}, stored densely with the last
/// index varying fastest.
#[derive(Clone, PartialEq)]
pub struct MultiState<S> {
    dims: Vec<usize>,
    coeffs: Vec<S>,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("at least one subsystem required".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDims(format!(
            "local dimension {d} is below 2"
        )));
    }
    let mut total: usize = 1;
    for &d in dims {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_AMPLITUDES)
            .ok_or_else(|| Error::InvalidDims(format!("{dims:?} has too many amplitudes")))?;
    }
    Ok(total)
}

impl<S: Scalar> MultiState<S> {
    /// Builds a state from `(multi-index, amplitude)` pairs. Repeated indices
    /// are summed.
    pub fn from_terms(
        dims: Vec<usize>,
        terms: impl IntoIterator<Item = (Vec<usize>, S)>,
    ) -> Result<Self> {
        let total = check_dims(&dims)?;
        let mut coeffs = vec![S::zero(); total];
        let mut any = false;
        for (idx, amp) in terms {
            any = true;
            let f = flat_index(&dims, &idx)?;
            coeffs[f] = coeffs[f].add(&amp).flush();
        }
        if !any {
            return Err(Error::ZeroState);
        }
        Self::from_dense(dims, coeffs)
    }

    pub fn from_dense(dims: Vec<usize>, coeffs: Vec<S>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if coeffs.len() != total {
            return Err(Error::DimMismatch(format!(
                "{} amplitudes given for dims {dims:?}",
                coeffs.len()
            )));
        }
        if coeffs.iter().all(S::is_zero) {
            return Err(Error::ZeroState);
        }
        combined_order(&coeffs)?;
        Ok(MultiState { dims, coeffs })
    }

    /// `|i i ... i>` summed over the listed kets, each with amplitude one.
    pub fn from_kets(dims: Vec<usize>, kets: &[&[usize]]) -> Result<Self> {
        Self::from_terms(dims, kets.iter().map(|k| (k.to_vec(), S::one())))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [S] {
        &mut self.coeffs
    }

    pub fn get(&self, idx: &[usize]) -> Result<&S> {
        Ok(&self.coeffs[flat_index(&self.dims, idx)?])
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        flat_index(&self.dims, idx)
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        multi_index(&self.dims, flat)
    }

    /// Number of nonzero amplitudes.
    pub fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonzero amplitudes in lexicographic order of their indices.
    pub fn terms(&self) -> Vec<(Vec<usize>, S)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, c)| (multi_index(&self.dims, f), c.clone()))
            .collect()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, _)| f)
            .collect()
    }

    pub fn field_order(&self) -> u32 {
        combined_order(&self.coeffs).expect("validated on construction")
    }

    pub(crate) fn site_index(&self, site: usize) -> Result<usize> {
        if site == 0 || site > self.dims.len() {
            return Err(Error::SiteOutOfRange {
                site,
                n: self.dims.len(),
            });
        }
        Ok(site - 1)
    }

    /// Distance in the flat layout between consecutive levels of `site0`
    /// (zero based).
    pub(crate) fn stride(&self, site0: usize) -> usize {
        self.dims[site0 + 1..].iter().product()
    }

    /// Flat indices whose level at `site0` is zero.
    pub(crate) fn fiber_bases(&self, site0: usize) -> impl Iterator<Item = usize> + '_ {
        let s = self.stride(site0);
        let block = s * self.dims[site0];
        let outer = self.coeffs.len() / block;
        (0..outer).flat_map(move |o| (0..s).map(move |i| o * block + i))
    }

    /// Matricization with rows indexed by the level of `site` and columns by
    /// the remaining indices in lexicographic order (rightmost fastest).
    pub fn unfold(&self, site: usize) -> Result<Matrix<S>> {
        let k = self.site_index(site)?;
        let d = self.dims[k];
        let cols = self.coeffs.len() / d;
        let s = self.stride(k);
        let mut data = Vec::with_capacity(self.coeffs.len());
        for l in 0..d {
            for c in 0..cols {
                let (outer, inner) = (c / s, c % s);
                data.push(self.coeffs[outer * d * s + l * s + inner].clone());
            }
        }
        Ok(Matrix::from_data(d, cols, data))
    }

    /// Inverse of [`MultiState::unfold`].
    pub fn fold(dims: Vec<usize>, site: usize, m: &Matrix<S>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if site == 0 || site > dims.len() {
            return Err(Error::SiteOutOfRange {
                site,
                n: dims.len(),
            });
        }
        let k = site - 1;
        let d = dims[k];
        if m.rows() != d || m.cols() * d != total {
            return Err(Error::DimMismatch(format!(
                "{}x{} matrix does not unfold {dims:?} at site {site}",
                m.rows(),
                m.cols()
            )));
        }
        let s: usize = dims[k + 1..].iter().product();
        let mut coeffs = vec![S::zero(); total];
        for l in 0..d {
            for c in 0..m.cols() {
                let (outer, inner) = (c / s, c % s);
                coeffs[outer * d * s + l * s + inner] = m.get(l, c).clone();
            }
        }
        Self::from_dense(dims, coeffs)
    }

    /// Coefficient matrix: rows by the first index, columns by the rest.
    pub fn coefficient_matrix(&self) -> Matrix<S> {
        self.unfold(1).expect("site 1 exists")
    }

    /// Matricization with rows indexed by the sites in `rows` (one based) and
    /// columns by the remaining sites, both in lexicographic order.
    pub fn matricize(&self, rows: &[usize]) -> Result<Matrix<S>> {
        let n = self.dims.len();
        let mut row_sites = Vec::new();
        for &s in rows {
            let k = self.site_index(s)?;
            if row_sites.contains(&k) {
                return Err(Error::InvalidCut(format!("site {s} listed twice")));
            }
            row_sites.push(k);
        }
        row_sites.sort_unstable();
        let col_sites: Vec<usize> = (0..n).filter(|k| !row_sites.contains(k)).collect();
        let nr: usize = row_sites.iter().map(|&k| self.dims[k]).product();
        let nc: usize = col_sites.iter().map(|&k| self.dims[k]).product();
        let mut m = Matrix::zeros(nr, nc);
        for (f, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = multi_index(&self.dims, f);
            let r = row_sites
                .iter()
                .fold(0, |acc, &k| acc * self.dims[k] + idx[k]);
            let col = col_sites
                .iter()
                .fold(0, |acc, &k| acc * self.dims[k] + idx[k]);
            m.set(r, col, c.clone());
        }
        Ok(m)
    }

    /// Multi-indices of the middle sites 2..N-1, in lexicographic order.
    pub fn block_labels(&self) -> Vec<Vec<usize>> {
        let n = self.dims.len();
        let mid = if n > 2 { &self.dims[1..n - 1] } else { &[][..] };
        let count: usize = mid.iter().product();
        (0..count).map(|f| multi_index(mid, f)).collect()
    }

    /// The d_1 x d_N matrices A_m with entries c_{i_1, m, i_N}, one per
    /// multi-index m of the middle sites. Requires at least two sites.
    pub fn blocks(&self) -> Result<Vec<Matrix<S>>> {
        let n = self.dims.len();
        if n < 2 {
            return Err(Error::InvalidDims(
                "blocks need at least two subsystems".into(),
            ));
        }
        let d1 = self.dims[0];
        let dn = self.dims[n - 1];
        let count = self.coeffs.len() / (d1 * dn);
        Ok((0..count)
            .map(|m| {
                let mut data = Vec::with_capacity(d1 * dn);
                for i in 0..d1 {
                    for j in 0..dn {
                        data.push(self.coeffs[i * count * dn + m * dn + j].clone());
                    }
                }
                Matrix::from_data(d1, dn, data)
            })
            .collect())
    }

    /// The state divided by its first nonzero amplitude.
    pub fn canonical_scaled(&self) -> Self {
        let first = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("states are nonzero");
        if first.is_one() {
            return self.clone();
        }
        let inv = first.inv().expect("nonzero");
        MultiState {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(&inv).flush()).collect(),
        }
    }

    /// Whether `other = mu * self` for some nonzero scalar mu.
    pub fn equal_up_to_scale(&self, other: &Self) -> bool {
        self.dims == other.dims && self.canonical_scaled() == other.canonical_scaled()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiState<T> {
        MultiState {
            dims: self.dims.clone(),
            coeffs: self.coeffs.iter().map(|c| f(c).flush()).collect(),
        }
    }
}

pub fn flat_index(dims: &[usize], idx: &[usize]) -> Result<usize> {
    if idx.len() != dims.len() || idx.iter().zip(dims).any(|(i, d)| i >= d) {
        return Err(Error::IndexOutOfRange {
            index: idx.to_vec(),
            dims: dims.to_vec(),
        });
    }
    Ok(idx.iter().zip(dims).fold(0, |acc, (i, d)| acc * d + i))
}

pub fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for (slot, d) in idx.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    idx
}

fn ket(dims: &[usize], idx: &[usize]) -> String {
    if dims.iter().all(|&d| d <= 10) {
        idx.iter().map(|i| i.to_string()).collect()
    } else {
        idx.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl<S: Scalar> fmt::Display for MultiState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(idx, c)| {
                let k = ket(&self.dims, &idx);
                if c.is_one() {
                    format!("|{k}>")
                } else {
                    format!("({c})|{k}>")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for MultiState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {self}", self.dims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ExactScalar;

    type St = MultiState<ExactScalar>;

    fn x(v: i64) -> ExactScalar {
        ExactScalar::from_i64(v)
    }

    #[test]
    fn rejects_zero_and_bad_indices() {
        assert_eq!(St::from_terms(vec![2, 2], vec![]), Err(Error::ZeroState));
        assert_eq!(
            St::from_terms(vec![2, 2], vec![(vec![0, 0], x(1)), (vec![0, 0], x(-1))]),
            Err(Error::ZeroState)
        );
        assert!(matches!(
            St::from_terms(vec![2, 2], vec![(vec![0, 2], x(1))]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            St::from_terms(vec![2, 1], vec![(vec![0, 0], x(1))]),
            Err(Error::InvalidDims(_))
        ));
    }

    #[test]
    fn unfold_layout() {
        // c_{ijk} = 100 i + 10 j + k
        let dims = vec![2, 3, 2];
        let terms = (0..12).map(|f| {
            let idx = multi_index(&dims, f);
            let v = 100 * idx[0] + 10 * idx[1] + idx[2];
            (idx, x(v as i64 + 1))
        });
        let s = St::from_terms(dims.clone(), terms).unwrap();
        let m2 = s.unfold(2).unwrap();
        assert_eq!((m2.rows(), m2.cols()), (3, 4));
        // row j=1, columns (i,k) = (0,0),(0,1),(1,0),(1,1)
        let want: Vec<ExactScalar> = [11, 12, 111, 112].iter().map(|&v| x(v)).collect();
        assert_eq!(m2.row(1), &want[..]);
        for site in 1..=3 {
            let m = s.unfold(site).unwrap();
            assert_eq!(St::fold(dims.clone(), site, &m).unwrap(), s);
        }
    }

    #[test]
    fn blocks_layout() {
        let s = St::from_kets(vec![2, 2, 2], &[&[0, 0, 0], &[1, 1, 1], &[0, 1, 1]]).unwrap();
        let b = s.blocks().unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(*b[0].get(0, 0), x(1));
        assert_eq!(*b[1].get(1, 1), x(1));
        assert_eq!(*b[1].get(0, 1), x(1));
        assert_eq!(s.block_labels(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn matricize_cut() {
        let s = St::from_kets(vec![2, 2, 2, 2], &[&[0, 0, 0, 0], &[1, 1, 1, 1]]).unwrap();
        let m = s.matricize(&[1, 3]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(*m.get(3, 3), x(1));
    }

    #[test]
    fn scale_equivalence() {
        let a = St::from_terms(vec![2, 2], vec![(vec![0, 1], x(3)), (vec![1, 0], x(6))]).unwrap();
        let b = St::from_terms(vec![2, 2], vec![(vec![0, 1], x(-1)), (vec![1, 0], x(-2))]).unwrap();
        assert!(a.equal_up_to_scale(&b));
        assert_eq!(a.canonical_scaled().get(&[1, 0]).unwrap(), &x(2));
    }

    #[test]
    fn display() {
        let s = St::from_terms(vec![2, 2], vec![(vec![0, 1], x(3)), (vec![1, 1], x(1))]).unwrap();
        assert_eq!(s.to_string(), "(3)|01> + |11>");
    }
}
