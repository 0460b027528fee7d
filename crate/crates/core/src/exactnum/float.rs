use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{roots, ExactScalar, Rational, Scalar};
use crate::error::{Error, Result};

static ZERO_TOL_BITS: AtomicU64 = AtomicU64::new(1e-10f64.to_bits());

/// Process-wide zero tolerance of the float backend.
pub fn zero_tolerance() -> f64 {
    f64::from_bits(ZERO_TOL_BITS.load(AtomicOrdering::Relaxed))
}

pub fn set_zero_tolerance(tol: f64) {
    ZERO_TOL_BITS.store(tol.abs().to_bits(), AtomicOrdering::Relaxed);
}

/// Double-precision complex scalar. Values within the zero tolerance of each
/// other compare equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct FloatScalar(pub Complex64);

impl FloatScalar {
    pub fn new(re: f64, im: f64) -> Self {
        FloatScalar(Complex64::new(re, im))
    }

    /// e^{i phi}.
    pub fn phase(phi: f64) -> Self {
        FloatScalar(Complex64::from_polar(1.0, phi))
    }
}

impl PartialEq for FloatScalar {
    fn eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.0.norm()).max(other.0.norm());
        (self.0 - other.0).norm() <= zero_tolerance() * scale
    }
}

impl fmt::Display for FloatScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im == 0.0 {
            write!(f, "{}", z.re)
        } else {
            write!(f, "{}{:+}i", z.re, z.im)
        }
    }
}

impl From<Complex64> for FloatScalar {
    fn from(z: Complex64) -> Self {
        FloatScalar(z)
    }
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= zero_tolerance() * 1f64.max(a.abs()).max(b.abs()) {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

impl Scalar for FloatScalar {
    const EXACT: bool = false;

    fn zero() -> Self {
        FloatScalar::new(0.0, 0.0)
    }
    fn one() -> Self {
        FloatScalar::new(1.0, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        FloatScalar::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_exact(x: &ExactScalar) -> Self {
        FloatScalar(x.approx())
    }
    fn is_zero(&self) -> bool {
        self.0.norm() <= zero_tolerance()
    }
    fn is_one(&self) -> bool {
        (self.0 - Complex64::new(1.0, 0.0)).norm() <= zero_tolerance()
    }
    fn add(&self, rhs: &Self) -> Self {
        FloatScalar(self.0 + rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        FloatScalar(self.0 - rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        FloatScalar(self.0 * rhs.0)
    }
    fn neg(&self) -> Self {
        FloatScalar(-self.0)
    }
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FloatScalar(self.0.inv()))
    }
    fn conj(&self) -> Self {
        FloatScalar(self.0.conj())
    }
    fn approx(&self) -> Complex64 {
        self.0
    }
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        cmp_f64(self.0.re, other.0.re).then_with(|| cmp_f64(self.0.im, other.0.im))
    }
    fn roots(poly: &[Self]) -> Vec<(Self, usize)> {
        let p: Vec<Complex64> = poly.iter().map(|c| c.0).collect();
        roots::float_roots(&p, zero_tolerance())
            .into_iter()
            .map(|(z, m)| (FloatScalar(z), m))
            .collect()
    }
    fn flush(self) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            self
        }
    }
}
