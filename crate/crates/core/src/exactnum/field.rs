//! Tables for the cyclotomic fields Q(zeta_n).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Largest cyclotomic order the library will construct.
pub const MAX_ORDER: u32 = 256;

/// Q(zeta_{2m}) = Q(zeta_m) for odd m, so orders congruent to 2 mod 4 are
/// replaced by their odd half.
pub fn canonical_order(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

pub fn euler_phi(n: u32) -> usize {
    let mut result = n as usize;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p as usize;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m as usize;
    }
    result
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 = prod_{d | n} Phi_d(x)
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = exact_div(&num, &den);
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &b) in den.iter().enumerate() {
                rem[k + i] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Data needed to test membership in, and convert into, the subfield
/// Q(zeta_sub) of Q(zeta_n).
pub(crate) struct Subfield {
    pub sub: u32,
    /// Generator of Gal(Q(zeta_n) / Q(zeta_sub)), as an exponent map.
    pub generator: u32,
    /// Rows of the power-basis coordinates used for the conversion.
    pub pick: Vec<usize>,
    /// Inverse of the picked square block.
    pub inv: Vec<Vec<Rational>>,
}

pub(crate) struct CycloField {
    pub order: u32,
    pub phi: usize,
    /// `powers[k]` holds zeta_n^k in the power basis, for k in 0..n.
    pub powers: Vec<Vec<i64>>,
    pub subfields: Vec<Subfield>,
}

impl CycloField {
    fn build(n: u32) -> CycloField {
        let phi = euler_phi(n);
        let poly = cyclotomic_poly(n);
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic poly
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
            if top != 0 {
                for i in 0..phi {
                    next[i] -= top * poly[i];
                }
            }
            cur = next;
        }
        let mut field = CycloField {
            order: n,
            phi,
            powers,
            subfields: Vec::new(),
        };
        if n > 1 {
            for p in prime_factors(n) {
                let sub = canonical_order(n / p);
                if sub == 1 || sub == n {
                    continue;
                }
                field.subfields.push(field.subfield(n / p, sub));
            }
        }
        field
    }

    fn subfield(&self, m: u32, sub: u32) -> Subfield {
        let n = self.order;
        let h = self.phi / euler_phi(m);
        let generator = (1..n)
            .find(|&t| t % m == 1 % m && t.gcd(&n) == 1 && mult_order(t, n) as usize == h)
            .expect("galois subgroup is cyclic");
        let step = n / sub;
        let sphi = euler_phi(sub);
        let cols: Vec<&Vec<i64>> = (0..sphi)
            .map(|j| &self.powers[(j as u32 * step % n) as usize])
            .collect();
        // choose linearly independent rows greedily
        let mut pick = Vec::new();
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        for r in 0..self.phi {
            let row: Vec<Rational> = cols
                .iter()
                .map(|c| Rational::from_integer(c[r].into()))
                .collect();
            if independent(&basis, &row) {
                basis.push(row);
                pick.push(r);
                if pick.len() == sphi {
                    break;
                }
            }
        }
        let inv = invert(basis);
        Subfield {
            sub,
            generator,
            pick,
            inv,
        }
    }
}

fn mult_order(t: u32, n: u32) -> u32 {
    let mut x = t % n;
    let mut k = 1;
    while x != 1 % n {
        x = x * t % n;
        k += 1;
    }
    k
}

fn independent(basis: &[Vec<Rational>], row: &[Rational]) -> bool {
    let mut rows: Vec<Vec<Rational>> = basis.to_vec();
    rows.push(row.to_vec());
    rank(rows) == basis.len() + 1
}

fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..ncols {
                    let v = &f * &rows[r][k];
                    rows[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

fn invert(m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).expect("invertible");
        a.swap(c, p);
        let pv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &pv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let v = &f * &a[c][k];
                    a[i][k] -= v;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

/// Shared table for Q(zeta_n); `n` must be canonical and within the cap.
pub(crate) fn field(n: u32) -> Arc<CycloField> {
    let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = map.lock().expect("field cache").get(&n) {
        return f.clone();
    }
    let built = Arc::new(CycloField::build(n));
    map.lock()
        .expect("field cache")
        .entry(n)
        .or_insert(built)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        // first polynomial with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(256), 128);
        assert_eq!(euler_phi(255), 128);
    }

    #[test]
    fn powers_wrap_around() {
        let f = field(8);
        assert_eq!(f.powers[4], vec![-1, 0, 0, 0]);
        assert_eq!(f.powers[7], vec![0, 0, 0, -1]);
    }

    #[test]
    fn subfields_of_24() {
        let f = field(24);
        let subs: Vec<u32> = f.subfields.iter().map(|s| s.sub).collect();
        assert_eq!(subs, vec![12, 8]);
    }
}
