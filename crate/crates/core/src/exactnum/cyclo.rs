use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{canonical_order, field, CycloField, MAX_ORDER};
use super::Rational;
use crate::error::{Error, Result};

/// An exact element of a cyclotomic field Q(zeta_n).
///
/// The representation is unique: `order` is the smallest canonical n whose
/// field contains the value, and `coeffs` are the power-basis coordinates
/// modulo the n-th cyclotomic polynomial. Rationals have order 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    order: u32,
    coeffs: Vec<Rational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(q: Rational) -> Self {
        ExactScalar {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::rational(Rational::from_integer(v.into()))
    }

    pub fn from_frac(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rational(Rational::new(p.into(), q.into())))
    }

    /// zeta_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self> {
        check_order(n as u64)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![Rational::zero(); n as usize];
        coeffs[e] = Rational::one();
        Self::from_poly(n, &coeffs)
    }

    /// The element sum_j coeffs[j] zeta_n^j. Any number of coefficients is
    /// accepted; exponents are taken modulo n.
    pub fn from_poly(n: u32, coeffs: &[Rational]) -> Result<Self> {
        check_order(n as u64)?;
        let c = canonical_order(n);
        let f = field(c);
        let mut out = vec![Rational::zero(); f.phi];
        for (j, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let j = j % n as usize;
            if c == n {
                add_power(&mut out, &f, j, a);
            } else {
                // zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
                let m = c as usize;
                let e = if m == 1 { 0 } else { j * m.div_ceil(2) % m };
                if j % 2 == 1 {
                    add_power(&mut out, &f, e, &-a.clone());
                } else {
                    add_power(&mut out, &f, e, a);
                }
            }
        }
        Ok(Self::normalized(c, out))
    }

    /// Canonical cyclotomic order of the smallest field containing the value.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coordinates with respect to `zeta_order`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// The value expressed over Q(zeta_n), where `order()` divides n.
    pub fn coeffs_in(&self, n: u32) -> Result<Vec<Rational>> {
        check_order(n as u64)?;
        let n = canonical_order(n);
        if !n.is_multiple_of(self.order) {
            return Err(Error::InvalidOrder(n as u64));
        }
        Ok(self.lift(n))
    }

    fn lift(&self, n: u32) -> Vec<Rational> {
        if n == self.order {
            return self.coeffs.clone();
        }
        let f = field(n);
        let step = (n / self.order) as usize;
        let mut out = vec![Rational::zero(); f.phi];
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                add_power(&mut out, &f, j * step, a);
            }
        }
        out
    }

    fn common_order(&self, other: &Self) -> Result<u32> {
        let l = (self.order as u64).lcm(&(other.order as u64));
        check_order(l)?;
        Ok(canonical_order(l as u32))
    }

    fn normalized(order: u32, coeffs: Vec<Rational>) -> Self {
        if order == 1 || coeffs[1..].iter().all(Zero::is_zero) {
            let mut coeffs = coeffs;
            coeffs.truncate(1);
            return ExactScalar { order: 1, coeffs };
        }
        let f = field(order);
        for sub in &f.subfields {
            let conj = galois(&f, &coeffs, sub.generator as usize);
            if conj == coeffs {
                let picked: Vec<&Rational> = sub.pick.iter().map(|&r| &coeffs[r]).collect();
                let smaller: Vec<Rational> = sub
                    .inv
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&picked)
                            .fold(Rational::zero(), |acc, (a, b)| acc + a * *b)
                    })
                    .collect();
                return Self::normalized(sub.sub, smaller);
            }
        }
        ExactScalar { order, coeffs }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.order == 1 && other.order == 1 {
            return Ok(Self::rational(&self.coeffs[0] + &other.coeffs[0]));
        }
        let n = self.common_order(other)?;
        let a = self.lift(n);
        let b = other.lift(n);
        let sum = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(Self::normalized(n, sum))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.negated())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.order == 1 && other.order == 1 {
            return Ok(Self::rational(&self.coeffs[0] * &other.coeffs[0]));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        if other.order == 1 {
            return Ok(self.scaled(&other.coeffs[0]));
        }
        if self.order == 1 {
            return Ok(other.scaled(&self.coeffs[0]));
        }
        let n = self.common_order(other)?;
        let a = self.lift(n);
        let b = other.lift(n);
        let f = field(n);
        let mut prod = vec![Rational::zero(); 2 * f.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Rational> = prod[..f.phi].to_vec();
        for (k, c) in prod.iter().enumerate().skip(f.phi) {
            if !c.is_zero() {
                add_power(&mut out, &f, k, c);
            }
        }
        Ok(Self::normalized(n, out))
    }

    fn scaled(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ExactScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        ExactScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Image under the automorphism zeta -> zeta^t, t coprime to the order.
    pub fn galois_conjugate(&self, t: u32) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        let f = field(self.order);
        let conj = galois(&f, &self.coeffs, t as usize % self.order as usize);
        Self::normalized(self.order, conj)
    }

    pub fn conj(&self) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        self.galois_conjugate(self.order - 1)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> Rational {
        if self.order == 1 {
            return self.coeffs[0].clone();
        }
        let mut acc = self.clone();
        for t in 2..self.order {
            if t.gcd(&self.order) == 1 {
                acc = &acc * &self.galois_conjugate(t);
            }
        }
        acc.as_rational()
            .cloned()
            .expect("norm of a cyclotomic element is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Self::rational(self.coeffs[0].recip()));
        }
        // x^{-1} = prod_{sigma != id} sigma(x) / N(x)
        let mut acc = Self::one();
        for t in 2..self.order {
            if t.gcd(&self.order) == 1 {
                acc = &acc * &self.galois_conjugate(t);
            }
        }
        let n = (&acc * self)
            .as_rational()
            .cloned()
            .expect("norm of a cyclotomic element is rational");
        Ok(acc.scaled(&n.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn approx(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| {
                let t = std::f64::consts::TAU * k as f64 / n;
                Complex64::new(t.cos(), t.sin()) * a.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Total order used for canonical tie-breaking: by field order, then
    /// lexicographically on coordinates.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

pub(crate) fn check_order(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if n > MAX_ORDER as u64 {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: MAX_ORDER,
        });
    }
    Ok(())
}

fn add_power(out: &mut [Rational], f: &CycloField, k: usize, a: &Rational) {
    let row = &f.powers[k % f.order as usize];
    for (o, &r) in out.iter_mut().zip(row) {
        match r {
            0 => {}
            1 => *o += a,
            -1 => *o -= a,
            _ => *o += a * Rational::from_integer(BigInt::from(r)),
        }
    }
}

fn galois(f: &CycloField, coeffs: &[Rational], t: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); f.phi];
    for (j, a) in coeffs.iter().enumerate() {
        if !a.is_zero() {
            add_power(&mut out, f, j * t, a);
        }
    }
    out
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_i64(v)
    }
}

impl From<Rational> for ExactScalar {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return write!(f, "{}", fmt_rational(&self.coeffs[0]));
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let base = format!("z{}", self.order);
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{}", fmt_rational(&mag))?,
                (1, true) => write!(f, "{base}")?,
                (1, false) => write!(f, "{}*{base}", fmt_rational(&mag))?,
                (_, true) => write!(f, "{base}^{k}")?,
                (_, false) => write!(f, "{}*{base}^{k}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Operator impls panic only if the combined order exceeds the cap; use the
// `checked_*` methods when mixing orders from untrusted input.
impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_add(rhs).expect("cyclotomic order cap")
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_sub(rhs).expect("cyclotomic order cap")
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_mul(rhs).expect("cyclotomic order cap")
    }
}

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by a nonzero scalar")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.negated()
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.negated()
    }
}
