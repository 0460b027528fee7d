//! Scalars: exact cyclotomic numbers and a tolerance-based float backend.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::Result;

mod cyclo;
pub(crate) mod field;
mod float;
pub mod roots;

pub use cyclo::ExactScalar;
pub use field::{cyclotomic_poly, euler_phi, MAX_ORDER};
pub use float::{set_zero_tolerance, zero_tolerance, FloatScalar};

/// Least common multiple of cyclotomic orders, failing past the cap.
pub fn combined_order<'a, S: Scalar>(values: impl IntoIterator<Item = &'a S>) -> Result<u32> {
    use num_integer::Integer;
    let mut l: u64 = 1;
    for v in values {
        l = l.lcm(&(v.field_order() as u64));
        if l > MAX_ORDER as u64 {
            return Err(crate::error::Error::OrderCapExceeded {
                order: l,
                cap: MAX_ORDER,
            });
        }
    }
    Ok(field::canonical_order(l as u32))
}

/// Arbitrary-precision rational with positive denominator in lowest terms.
pub type Rational = BigRational;

/// The arithmetic interface shared by the exact and floating-point backends.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// Whether equality and zero tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn from_exact(x: &ExactScalar) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v.into()))
    }

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn conj(&self) -> Self;
    fn approx(&self) -> Complex64;

    /// Deterministic total order used to break ties between canonical forms.
    fn canonical_cmp(&self, other: &Self) -> Ordering;

    /// Roots of `poly` (lowest degree first) that lie in the field generated
    /// by its coefficients, each with its multiplicity.
    fn roots(poly: &[Self]) -> Vec<(Self, usize)>;

    /// Cyclotomic order of the smallest field holding the value (1 for the
    /// float backend).
    fn field_order(&self) -> u32 {
        1
    }

    /// Snap values that count as zero to an exact zero.
    fn flush(self) -> Self {
        self
    }
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn from_rational(q: &Rational) -> Self {
        ExactScalar::rational(q.clone())
    }
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        ExactScalar::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        self.negated()
    }
    fn inv(&self) -> Result<Self> {
        ExactScalar::inv(self)
    }
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
    fn approx(&self) -> Complex64 {
        ExactScalar::approx(self)
    }
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        ExactScalar::canonical_cmp(self, other)
    }
    fn roots(poly: &[Self]) -> Vec<(Self, usize)> {
        roots::exact_roots(poly)
    }
    fn field_order(&self) -> u32 {
        self.order()
    }
}
