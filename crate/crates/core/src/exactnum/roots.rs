//! Univariate polynomials over a scalar backend and root finding.
//!
//! Polynomials are coefficient vectors, lowest degree first.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactScalar, Rational, Scalar};

pub fn trim<S: Scalar>(p: &mut Vec<S>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub fn degree<S: Scalar>(p: &[S]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval<S: Scalar>(p: &[S], x: &S) -> S {
    p.iter().rev().fold(S::zero(), |acc, c| acc.mul(x).add(c))
}

pub fn derivative<S: Scalar>(p: &[S]) -> Vec<S> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.mul(&S::from_i64(k as i64)))
        .collect()
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divmod<S: Scalar>(a: &[S], b: &[S]) -> (Vec<S>, Vec<S>) {
    let db = degree(b).expect("nonzero divisor");
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut r: Vec<S> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![S::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].mul(&lead_inv);
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[dr - db + i] = r[dr - db + i].sub(&c.mul(bc)).flush();
        }
        r[dr] = S::zero();
        q[dr - db] = c;
        trim(&mut r);
    }
    (q, r)
}

fn monic<S: Scalar>(p: &[S]) -> Vec<S> {
    let d = degree(p).expect("nonzero polynomial");
    let inv = p[d].inv().expect("nonzero leading coefficient");
    p[..=d].iter().map(|c| c.mul(&inv)).collect()
}

/// Monic greatest common divisor.
pub fn gcd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut x: Vec<S> = a.to_vec();
    let mut y: Vec<S> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let (_, r) = divmod(&x, &y);
        x = y;
        y = r;
    }
    if degree(&x).is_none() {
        return x;
    }
    monic(&x)
}

fn multiplicity<S: Scalar>(p: &[S], r: &S) -> usize {
    let mut q = p.to_vec();
    let mut k = 0;
    while degree(&q).is_some_and(|d| d > 0) && eval(&q, r).is_zero() {
        q = derivative(&q);
        k += 1;
    }
    k
}

fn ceval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c)
}

fn cderiv(p: &[Complex64]) -> Vec<Complex64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

/// All complex roots of a polynomial with nonzero leading coefficient,
/// listed with repetition.
pub fn complex_roots(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let a: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-a[0]];
    }
    if n == 2 {
        let disc = (a[1] * a[1] - a[0] * 4.0).sqrt();
        let q = if (a[1].conj() * disc).re >= 0.0 {
            -(a[1] + disc) / 2.0
        } else {
            -(a[1] - disc) / 2.0
        };
        if q.norm() == 0.0 {
            return vec![Complex64::zero(), Complex64::zero()];
        }
        return vec![q, a[0] / q];
    }
    let da = cderiv(&a);
    let radius = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    // Aberth-Ehrlich iteration
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let pv = ceval(&a, z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / ceval(&da, z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Roots with multiplicities, merging roots closer than about sqrt(tol).
pub fn float_roots(p: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut q = p.to_vec();
    while q.last().is_some_and(|c| c.norm() <= tol * scale.max(1.0)) {
        q.pop();
    }
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    let merge = tol.sqrt().max(1e-7);
    for z in complex_roots(&q) {
        if let Some(slot) = out
            .iter_mut()
            .find(|(w, _)| (w - z).norm() <= merge * (1.0 + w.norm()))
        {
            let m = slot.1 as f64;
            slot.0 = (slot.0 * m + z) / (m + 1.0);
            slot.1 += 1;
        } else {
            out.push((z, 1));
        }
    }
    out
}

/// Best rational approximation to `x` within `tol`, taken from the continued
/// fraction convergents of `x`.
pub fn reconstruct(x: &Rational, tol: &Rational) -> Rational {
    let (mut h0, mut h1) = (num_bigint::BigInt::zero(), num_bigint::BigInt::one());
    let (mut k0, mut k1) = (num_bigint::BigInt::one(), num_bigint::BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..400 {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let conv = Rational::new(h2.clone(), k2.clone());
        if (&conv - x).abs() <= *tol {
            return conv;
        }
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return conv;
        }
        rest = frac.recip();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    x.clone()
}

fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|t| t.gcd(&n) == 1).collect()
}

fn solve_complex(mut m: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].norm().total_cmp(&m[j][c].norm()))?;
        if m[p][c].norm() < 1e-12 {
            return None;
        }
        m.swap(c, p);
        rhs.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            if f.norm() == 0.0 {
                continue;
            }
            for k in c..n {
                let v = m[c][k];
                m[i][k] -= f * v;
            }
            let v = rhs[c];
            rhs[i] -= f * v;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
        x[i] = (rhs[i] - s) / m[i][i];
    }
    Some(x)
}

fn pow10(e: i32) -> Rational {
    let t = Rational::from_integer(num_bigint::BigInt::from(10).pow(e.unsigned_abs()));
    if e < 0 {
        t.recip()
    } else {
        t
    }
}

fn round_bits(x: &Rational, bits: u32) -> Rational {
    let scale = num_bigint::BigInt::one() << bits;
    let scaled = (x * Rational::from_integer(scale.clone()))
        .round()
        .to_integer();
    Rational::new(scaled, scale)
}

/// Try to turn approximate power-basis coordinates into an exact root of
/// the squarefree polynomial `g` over Q(zeta_n).
fn refine(g: &[ExactScalar], n: u32, approx: &[f64]) -> Option<ExactScalar> {
    let dg = derivative(g);
    let guess: Vec<Rational> = approx
        .iter()
        .map(|&a| Rational::from_float(a).unwrap_or_default())
        .collect();
    let mut s = ExactScalar::from_poly(n, &guess).ok()?;
    let mut digits = 9;
    for _ in 0..4 {
        let tol = pow10(-digits);
        let coords = s.coeffs_in(n).ok()?;
        let cand: Vec<Rational> = coords
            .iter()
            .map(|c| reconstruct(c, &(&tol * (Rational::one() + c.abs()))))
            .collect();
        let c = ExactScalar::from_poly(n, &cand).ok()?;
        if eval(g, &c).is_zero() {
            return Some(c);
        }
        let d = eval(&dg, &s);
        if d.is_zero() {
            return None;
        }
        let next = &s - &(&eval(g, &s) / &d);
        digits = (digits * 2).min(400);
        // keep the iterate's size proportional to the precision gained
        let bits = (digits as u32) * 4 + 32;
        let rounded: Vec<Rational> = next
            .coeffs_in(n)
            .ok()?
            .iter()
            .map(|c| round_bits(c, bits))
            .collect();
        s = ExactScalar::from_poly(n, &rounded).ok()?;
        if !s.approx().is_finite() || s.approx().norm() > 1e300 {
            return None;
        }
    }
    None
}

const MAX_COMBOS: usize = 20_000;

/// Roots of `poly` lying in Q(zeta_n), n the order generated by the
/// coefficients, found by numeric isolation and verified exactly.
pub fn exact_roots(poly: &[ExactScalar]) -> Vec<(ExactScalar, usize)> {
    let mut p = poly.to_vec();
    trim(&mut p);
    let Some(deg) = degree(&p) else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let p = monic(&p);
    let g0 = gcd(&p, &derivative(&p));
    let g = if degree(&g0).unwrap_or(0) > 0 {
        divmod(&p, &g0).0
    } else {
        p.clone()
    };
    let dg = degree(&g).unwrap_or(0);
    let n = g.iter().fold(1u64, |acc, c| acc.lcm(&(c.order() as u64))) as u32;

    let mut found: Vec<ExactScalar> = Vec::new();
    if dg == 1 {
        found.push(g[0].negated());
    } else {
        let ts = units(n);
        let reps: Vec<u32> = ts
            .iter()
            .copied()
            .filter(|&t| n <= 2 || 2 * t < n)
            .collect();
        let numeric: Vec<Vec<Complex64>> = reps
            .iter()
            .map(|&t| {
                let gt: Vec<Complex64> = g.iter().map(|c| c.galois_conjugate(t).approx()).collect();
                complex_roots(&gt)
            })
            .collect();
        let zeta = |e: u64| {
            Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * (e % n as u64) as f64 / n as f64,
            )
        };
        let m = ts.len();
        let others = reps.len() - 1;
        let combos = dg
            .checked_pow(others as u32)
            .unwrap_or(usize::MAX)
            .min(MAX_COMBOS);
        'roots: for z in &numeric[0] {
            for code in 0..combos {
                let mut choice = Vec::with_capacity(reps.len());
                choice.push(*z);
                let mut c = code;
                for roots in &numeric[1..] {
                    choice.push(roots[c % dg]);
                    c /= dg;
                }
                let mut rows = Vec::with_capacity(m);
                let mut rhs = Vec::with_capacity(m);
                for (t, w) in reps.iter().zip(&choice) {
                    rows.push(
                        (0..m)
                            .map(|j| zeta(j as u64 * *t as u64))
                            .collect::<Vec<_>>(),
                    );
                    rhs.push(*w);
                    if n > 2 {
                        let u = n - t;
                        rows.push((0..m).map(|j| zeta(j as u64 * u as u64)).collect());
                        rhs.push(w.conj());
                    }
                }
                let Some(a) = solve_complex(rows, rhs) else {
                    continue;
                };
                if a.iter().any(|x| x.im.abs() > 1e-6 * (1.0 + x.re.abs())) {
                    continue;
                }
                let re: Vec<f64> = a.iter().map(|x| x.re).collect();
                if let Some(r) = refine(&g, n, &re) {
                    if !found.contains(&r) {
                        found.push(r);
                    }
                    if found.len() == dg {
                        break 'roots;
                    }
                    continue 'roots;
                }
            }
        }
    }
    found
        .into_iter()
        .map(|r| {
            let k = multiplicity(&p, &r);
            (r, k)
        })
        .collect()
}
