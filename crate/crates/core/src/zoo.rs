//! Generators for the named state families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{ExactScalar, MAX_ORDER};
use crate::json::parse_scalar_str;
use crate::linalg::Matrix;
use crate::state::MultiState;

type E = ExactScalar;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidDims(msg()))
    }
}

fn from_fn(dims: Vec<usize>, f: impl Fn(&[usize]) -> Result<E>) -> Result<MultiState<E>> {
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    let total = total.ok_or_else(|| Error::InvalidDims(format!("{dims:?} is too large")))?;
    let coeffs = (0..total)
        .map(|flat| f(&crate::state::multi_index(&dims, flat)))
        .collect::<Result<Vec<_>>>()?;
    MultiState::from_dense(dims, coeffs)
}

/// Sum of |k>^N over the d levels.
pub fn ghz(n: usize, d: usize) -> Result<MultiState<E>> {
    ensure(n >= 2 && d >= 2, || {
        format!("ghz needs N >= 2 and d >= 2, got N={n} d={d}")
    })?;
    let kets: Vec<Vec<usize>> = (0..d).map(|k| vec![k; n]).collect();
    MultiState::from_terms(vec![d; n], kets.into_iter().map(|k| (k, E::one())))
}

/// Sum of all weight-one qubit basis vectors.
pub fn w(n: usize) -> Result<MultiState<E>> {
    ensure(n >= 3, || format!("w needs N >= 3, got {n}"))?;
    MultiState::from_terms(
        vec![2; n],
        (0..n).map(|k| {
            let mut idx = vec![0; n];
            idx[k] = 1;
            (idx, E::one())
        }),
    )
}

/// Qudit states whose amplitudes depend only on the level sum, equal to one
/// when the sum is `excitations`.
pub fn dicke(n: usize, d: usize, excitations: usize) -> Result<MultiState<E>> {
    let mut coeffs = vec![E::zero(); n * (d - 1).max(1) + 1];
    ensure(excitations < coeffs.len(), || {
        format!("at most {} excitations", coeffs.len() - 1)
    })?;
    coeffs[excitations] = E::one();
    hankel_state(n, d, &coeffs)
}

/// N-qubit state with every amplitude one except |1...1>, which is `phase`.
pub fn lme_elementary(n: usize, phase: &E) -> Result<MultiState<E>> {
    ensure(n >= 2, || format!("lme needs N >= 2, got {n}"))?;
    if phase.is_zero() {
        return Err(Error::ZeroScale);
    }
    let total = 1usize << n;
    let mut coeffs = vec![E::one(); total];
    coeffs[total - 1] = phase.clone();
    MultiState::from_dense(vec![2; n], coeffs)
}

/// Amplitude at (i_1, ..., i_N) is `coeffs[i_1 + ... + i_N]`.
pub fn hankel_state(n: usize, d: usize, coeffs: &[E]) -> Result<MultiState<E>> {
    ensure(n >= 2 && d >= 2, || {
        format!("hankel needs N >= 2 and d >= 2, got N={n} d={d}")
    })?;
    let expected = n * (d - 1) + 1;
    if coeffs.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: coeffs.len(),
        });
    }
    from_fn(vec![d; n], |idx| {
        Ok(coeffs[idx.iter().sum::<usize>()].clone())
    })
}

/// Named hypergraph states and the canonical four-qubit target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Hypergraph {
    V1,
    V4,
    V18,
    #[serde(rename = "MU")]
    Mu,
    #[serde(rename = "H3_QUTRIT")]
    H3Qutrit,
    #[serde(rename = "H4_QUQUART")]
    H4Ququart,
}

impl Hypergraph {
    pub const ALL: [Hypergraph; 6] = [
        Hypergraph::V1,
        Hypergraph::V4,
        Hypergraph::V18,
        Hypergraph::Mu,
        Hypergraph::H3Qutrit,
        Hypergraph::H4Ququart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hypergraph::V1 => "V1",
            Hypergraph::V4 => "V4",
            Hypergraph::V18 => "V18",
            Hypergraph::Mu => "MU",
            Hypergraph::H3Qutrit => "H3_QUTRIT",
            Hypergraph::H4Ququart => "H4_QUQUART",
        }
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase();
        match up.as_str() {
            "H3" => return Ok(Hypergraph::H3Qutrit),
            "H4" => return Ok(Hypergraph::H4Ququart),
            _ => {}
        }
        Hypergraph::ALL
            .into_iter()
            .find(|h| h.name() == up)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

fn qubit_kets(kets: &[&str]) -> Result<MultiState<E>> {
    let terms = kets.iter().map(|k| {
        let idx = k.bytes().map(|b| usize::from(b - b'0')).collect::<Vec<_>>();
        (idx, E::one())
    });
    MultiState::from_terms(vec![2; kets[0].len()], terms)
}

/// The hypergraph state with amplitudes omega^(i_1 i_2 i_3), omega = exp(2 pi i / d).
fn qudit_hypergraph(d: usize) -> Result<MultiState<E>> {
    from_fn(vec![d; 3], |idx| {
        E::root_of_unity(d as u32, (idx[0] * idx[1] * idx[2] % d) as i64)
    })
}

pub fn hypergraph_named(name: Hypergraph) -> Result<MultiState<E>> {
    match name {
        Hypergraph::Mu => qubit_kets(&["0000", "1100", "1111"]),
        Hypergraph::V1 => qubit_kets(&["0000", "0001", "1100", "1111"]),
        Hypergraph::V4 => qubit_kets(&["0000", "0001", "0010", "1111"]),
        Hypergraph::V18 => from_fn(vec![2; 4], |i| {
            let flip = i[0] == 1 && i[1] == 1 && !(i[2] == 1 && i[3] == 1);
            Ok(E::from_i64(if flip { -1 } else { 1 }))
        }),
        Hypergraph::H3Qutrit => qudit_hypergraph(3),
        Hypergraph::H4Ququart => qudit_hypergraph(4),
    }
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let (mut base, mut exp) = (a % p, (p - 1) / 2);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Exact square root of a prime inside a cyclotomic field.
fn sqrt_prime(p: u64) -> Result<E> {
    if p == 2 {
        return E::root_of_unity(8, 1)?.checked_add(&E::root_of_unity(8, -1)?);
    }
    let mut g = E::zero();
    for a in 1..p {
        let term = E::root_of_unity(p as u32, a as i64)?;
        g = if legendre(a, p) == 1 {
            g.checked_add(&term)?
        } else {
            g.checked_sub(&term)?
        };
    }
    if p % 4 == 1 {
        Ok(g)
    } else {
        g.checked_mul(&E::root_of_unity(4, -1)?)
    }
}

fn sqrt_exact(d: usize) -> Result<E> {
    let mut rest = d as u64;
    let mut root = E::one();
    let mut p = 2u64;
    while rest > 1 {
        if p * p > rest {
            p = rest;
        }
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        for _ in 0..k / 2 {
            root = root.checked_mul(&E::from_i64(p as i64))?;
        }
        if k % 2 == 1 {
            root = root.checked_mul(&sqrt_prime(p)?)?;
        }
        p += 1;
    }
    Ok(root)
}

/// The unitary discrete Fourier transform F[m][n] = omega^(mn) / sqrt(d).
pub fn fourier_matrix(d: usize) -> Result<Matrix<E>> {
    ensure(d >= 2, || format!("fourier_matrix needs d >= 2, got {d}"))?;
    if d > MAX_ORDER as usize {
        return Err(Error::UnrepresentableScale(d));
    }
    let unrepresentable = |e: Error| match e {
        Error::OrderCapExceeded { .. } | Error::InvalidOrder(_) => Error::UnrepresentableScale(d),
        other => other,
    };
    let scale = sqrt_exact(d)
        .and_then(|r| r.inv())
        .map_err(unrepresentable)?;
    let rows = (0..d)
        .map(|m| {
            (0..d)
                .map(|n| {
                    E::root_of_unity(d as u32, (m * n % d) as i64)
                        .and_then(|w| w.checked_mul(&scale))
                        .map_err(unrepresentable)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

/// A state family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Ghz {
        n: usize,
        d: usize,
    },
    W {
        n: usize,
    },
    Dicke {
        n: usize,
        d: usize,
        excitations: usize,
    },
    Lme {
        n: usize,
        phase: E,
    },
    Hypergraph(Hypergraph),
    Hankel {
        n: usize,
        d: usize,
        coeffs: Vec<E>,
    },
}

/// Family names with their parameter synopsis.
pub const FAMILIES: &[(&str, &str)] = &[
    ("ghz", "N d"),
    ("w", "N"),
    ("dicke", "N d excitations"),
    ("lme", "N phase"),
    ("hypergraph", "V1|V4|V18|MU|H3_QUTRIT|H4_QUQUART"),
    ("hankel", "N d c_0 ... c_{N(d-1)}"),
];

fn int_param(params: &[&str], pos: usize) -> Result<usize> {
    let raw = params
        .get(pos)
        .ok_or_else(|| Error::Parse(format!("missing parameter {}", pos + 1)))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("expected a nonnegative integer, got {raw:?}")))
}

fn arity(params: &[&str], n: usize) -> Result<()> {
    if params.len() == n {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: n,
            got: params.len(),
        })
    }
}

impl StateSpec {
    /// Parses a family name and its positional parameters. Scalars use the
    /// JSON scalar syntax without quotes, e.g. `-1`, `1/2` or
    /// `{"order":8,"coeffs":["0","1"]}`.
    pub fn parse(family: &str, params: &[&str]) -> Result<Self> {
        match family.to_ascii_lowercase().as_str() {
            "ghz" => {
                arity(params, 2)?;
                Ok(StateSpec::Ghz {
                    n: int_param(params, 0)?,
                    d: int_param(params, 1)?,
                })
            }
            "w" => {
                arity(params, 1)?;
                Ok(StateSpec::W {
                    n: int_param(params, 0)?,
                })
            }
            "dicke" => {
                arity(params, 3)?;
                Ok(StateSpec::Dicke {
                    n: int_param(params, 0)?,
                    d: int_param(params, 1)?,
                    excitations: int_param(params, 2)?,
                })
            }
            "lme" => {
                arity(params, 2)?;
                Ok(StateSpec::Lme {
                    n: int_param(params, 0)?,
                    phase: parse_scalar_str(params[1])?,
                })
            }
            "hypergraph" => {
                arity(params, 1)?;
                Ok(StateSpec::Hypergraph(params[0].parse()?))
            }
            "hankel" => {
                let n = int_param(params, 0)?;
                let d = int_param(params, 1)?;
                let coeffs = params[2..]
                    .iter()
                    .map(|s| parse_scalar_str(s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(StateSpec::Hankel { n, d, coeffs })
            }
            other => match other.parse::<Hypergraph>() {
                Ok(h) if params.is_empty() => Ok(StateSpec::Hypergraph(h)),
                _ => Err(Error::UnknownFamily(family.to_string())),
            },
        }
    }

    pub fn build(&self) -> Result<MultiState<E>> {
        match self {
            StateSpec::Ghz { n, d } => ghz(*n, *d),
            StateSpec::W { n } => w(*n),
            StateSpec::Dicke { n, d, excitations } => dicke(*n, *d, *excitations),
            StateSpec::Lme { n, phase } => lme_elementary(*n, phase),
            StateSpec::Hypergraph(h) => hypergraph_named(*h),
            StateSpec::Hankel { n, d, coeffs } => hankel_state(*n, *d, coeffs),
        }
    }
}
