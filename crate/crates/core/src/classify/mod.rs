//! Equivalence verdicts, the three-qubit classifier and rank witnesses.

mod slice;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use slice::{slice_invariant, slice_invariants, SliceInvariant};

use crate::elo::{apply_sequence, inverse_sequence, ElementaryOp, EloSequence};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::gje::{mfrf_reduce, ReductionResult, DEFAULT_MAX_PASSES};
use crate::state::MultiState;

/// Number of perturbed re-reductions tried before declaring MFRF mismatch.
pub const CROSS_RETRIES: usize = 3;

/// Rank of the unfolding across `cut` (one-based sites on one side).
pub fn schmidt_number<S: Scalar>(state: &MultiState<S>, cut: &[usize]) -> Result<usize> {
    let n = state.num_sites();
    if cut.is_empty() || cut.len() >= n {
        return Err(Error::InvalidCut(format!(
            "{cut:?} is not a nontrivial bipartition of {n} sites"
        )));
    }
    Ok(state.matricize(cut)?.rank())
}

/// Rank of the single-site unfolding at every site.
pub fn site_ranks<S: Scalar>(state: &MultiState<S>) -> Vec<usize> {
    (1..=state.num_sites())
        .map(|s| state.unfold(s).expect("site in range").rank())
        .collect()
}

/// SLOCC classes of three qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ThreeQubitClass {
    #[serde(rename = "PRODUCT")]
    Product,
    #[serde(rename = "BISEP_A_BC")]
    BisepABc,
    #[serde(rename = "BISEP_B_AC")]
    BisepBAc,
    #[serde(rename = "BISEP_C_AB")]
    BisepCAb,
    #[serde(rename = "W")]
    W,
    #[serde(rename = "GHZ")]
    Ghz,
}

impl ThreeQubitClass {
    pub const ALL: [ThreeQubitClass; 6] = [
        ThreeQubitClass::Product,
        ThreeQubitClass::BisepABc,
        ThreeQubitClass::BisepBAc,
        ThreeQubitClass::BisepCAb,
        ThreeQubitClass::W,
        ThreeQubitClass::Ghz,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ThreeQubitClass::Product => "PRODUCT",
            ThreeQubitClass::BisepABc => "BISEP_A_BC",
            ThreeQubitClass::BisepBAc => "BISEP_B_AC",
            ThreeQubitClass::BisepCAb => "BISEP_C_AB",
            ThreeQubitClass::W => "W",
            ThreeQubitClass::Ghz => "GHZ",
        }
    }

    /// The canonical tensor of the class.
    pub fn representative<S: Scalar>(self) -> MultiState<S> {
        let kets: &[&[usize]] = match self {
            ThreeQubitClass::Product => &[&[0, 0, 0]],
            ThreeQubitClass::BisepABc => &[&[0, 0, 0], &[0, 1, 1]],
            ThreeQubitClass::BisepBAc => &[&[0, 0, 0], &[1, 0, 1]],
            ThreeQubitClass::BisepCAb => &[&[0, 0, 0], &[1, 1, 0]],
            ThreeQubitClass::W => &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]],
            ThreeQubitClass::Ghz => &[&[0, 0, 0], &[1, 1, 1]],
        };
        MultiState::from_kets(vec![2, 2, 2], kets).expect("valid kets")
    }
}

impl fmt::Display for ThreeQubitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for ThreeQubitClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ThreeQubitClass::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown three-qubit class {s:?}")))
    }
}

/// A class label and, when the reducer reached the representative, the
/// sequence mapping the input onto it up to a global scale.
#[derive(Clone, Debug)]
pub struct Classification<S: Scalar> {
    pub class: ThreeQubitClass,
    pub certificate: Option<EloSequence<S>>,
    pub reduction: ReductionResult<S>,
}

/// Classifies a three-qubit state by reducing it and matching the result
/// against the six canonical tensors. States of the GHZ class whose pencil
/// spectrum leaves the scalar field are recognised by their invariants and
/// returned without a certificate.
pub fn classify_three_qubit<S: Scalar>(state: &MultiState<S>) -> Result<Classification<S>> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::InvalidDims(format!(
            "three-qubit classification needs dims [2, 2, 2], got {:?}",
            state.dims()
        )));
    }
    let reduction = mfrf_reduce(state, DEFAULT_MAX_PASSES)?;
    for class in ThreeQubitClass::ALL {
        if reduction.reduced == class.representative() {
            let certificate = Some(reduction.certificate.clone());
            return Ok(Classification {
                class,
                certificate,
                reduction,
            });
        }
    }
    let ghz_like = site_ranks(state) == [2, 2, 2]
        && slice_invariant(state, 1, 3).is_some_and(|inv| inv.spans == [1, 2]);
    if ghz_like {
        return Ok(Classification {
            class: ThreeQubitClass::Ghz,
            certificate: None,
            reduction,
        });
    }
    Err(Error::UnrecognizedMfrf)
}

/// The invariant that separates two inequivalent states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The per-site unfolding ranks differ.
    SiteRanks,
    /// A slice-determinant derivative span differs.
    SliceDeterminant {
        a: SliceInvariant,
        b: SliceInvariant,
    },
    /// Both reductions converged to different canonical tensors. This relies
    /// on the reducer being confluent and is not a proof.
    MfrfMismatch { mfrf_a: String, mfrf_b: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankWitness {
    pub site_ranks_a: Vec<usize>,
    pub site_ranks_b: Vec<usize>,
    #[serde(flatten)]
    pub evidence: Evidence,
}

impl RankWitness {
    /// Whether the witness rests on an exact invariant.
    pub fn is_rigorous(&self) -> bool {
        !matches!(self.evidence, Evidence::MfrfMismatch { .. })
    }

    /// Recomputes the named invariant for both states and checks that it
    /// matches the recorded values and that they differ.
    pub fn verify<S: Scalar>(&self, a: &MultiState<S>, b: &MultiState<S>) -> Result<bool> {
        let (ra, rb) = (site_ranks(a), site_ranks(b));
        if ra != self.site_ranks_a || rb != self.site_ranks_b {
            return Ok(false);
        }
        Ok(match &self.evidence {
            Evidence::SiteRanks => ra != rb,
            Evidence::SliceDeterminant { a: ia, b: ib } => {
                let (p, q) = ia.sites;
                ia.sites == ib.sites
                    && ia.spans != ib.spans
                    && slice_invariant(a, p, q).as_ref() == Some(ia)
                    && slice_invariant(b, p, q).as_ref() == Some(ib)
            }
            Evidence::MfrfMismatch { mfrf_a, mfrf_b } => {
                let fa = mfrf_reduce(a, DEFAULT_MAX_PASSES)?.reduced.to_string();
                let fb = mfrf_reduce(b, DEFAULT_MAX_PASSES)?.reduced.to_string();
                fa == *mfrf_a && fb == *mfrf_b && fa != fb
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<S: Scalar> {
    /// The certificate maps the first state onto the second up to scale.
    Equivalent {
        certificate: EloSequence<S>,
    },
    Inequivalent {
        witness: RankWitness,
    },
    Unknown {
        reason: String,
    },
}

impl<S: Scalar> Verdict<S> {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn is_inequivalent(&self) -> bool {
        matches!(self, Verdict::Inequivalent { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }
}

/// True iff applying `seq` to `a` gives `b` up to a nonzero global scale.
pub fn verify_certificate<S: Scalar>(
    a: &MultiState<S>,
    b: &MultiState<S>,
    seq: &EloSequence<S>,
) -> bool {
    if a.dims() != b.dims() || seq.validate(a.dims()).is_err() {
        return false;
    }
    apply_sequence(a, seq).is_ok_and(|out| out.equal_up_to_scale(b))
}

fn checked_certificate<S: Scalar>(
    a: &MultiState<S>,
    b: &MultiState<S>,
    certificate: EloSequence<S>,
) -> Result<Verdict<S>> {
    if verify_certificate(a, b, &certificate) {
        Ok(Verdict::Equivalent { certificate })
    } else {
        Err(Error::InvariantViolation(
            "composed equivalence certificate failed replay".into(),
        ))
    }
}

/// A fixed invertible perturbation used to restart a reduction from a
/// different point of the orbit.
fn perturbation<S: Scalar>(dims: &[usize], round: usize) -> EloSequence<S> {
    let mut seq = EloSequence::new();
    let t = S::from_i64(round as i64);
    for (k, &d) in dims.iter().enumerate() {
        for i in 0..d - 1 {
            seq.push(
                ElementaryOp::AddMul {
                    i,
                    lambda: t.clone(),
                    j: i + 1,
                }
                .at(k + 1),
            );
            seq.push(
                ElementaryOp::AddMul {
                    i: i + 1,
                    lambda: S::one(),
                    j: i,
                }
                .at(k + 1),
            );
        }
    }
    seq
}

/// Decides SLOCC equivalence of `a` and `b` with the default pass limit.
pub fn slocc_equivalent<S: Scalar>(a: &MultiState<S>, b: &MultiState<S>) -> Result<Verdict<S>> {
    slocc_equivalent_with(a, b, DEFAULT_MAX_PASSES)
}

/// Decides SLOCC equivalence. Exact invariants are checked first; then both
/// states are reduced and their canonical forms compared. Differing forms are
/// re-reduced from perturbed starting points; a mismatch is reported only if
/// every re-reduction reproduces the same forms, otherwise the verdict is
/// Unknown.
pub fn slocc_equivalent_with<S: Scalar>(
    a: &MultiState<S>,
    b: &MultiState<S>,
    max_passes: usize,
) -> Result<Verdict<S>> {
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch(format!(
            "{:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let (ranks_a, ranks_b) = (site_ranks(a), site_ranks(b));
    let witness = |evidence| RankWitness {
        site_ranks_a: ranks_a.clone(),
        site_ranks_b: ranks_b.clone(),
        evidence,
    };
    if ranks_a != ranks_b {
        return Ok(Verdict::Inequivalent {
            witness: witness(Evidence::SiteRanks),
        });
    }
    for (ia, ib) in slice_invariants(a).into_iter().zip(slice_invariants(b)) {
        if ia.spans != ib.spans {
            return Ok(Verdict::Inequivalent {
                witness: witness(Evidence::SliceDeterminant { a: ia, b: ib }),
            });
        }
    }

    let ra = mfrf_reduce(a, max_passes)?;
    let rb = mfrf_reduce(b, max_passes)?;
    if ra.reduced == rb.reduced {
        let cert = ra
            .certificate
            .clone()
            .then(inverse_sequence(&rb.certificate));
        return checked_certificate(a, b, cert);
    }
    if !ra.converged || !rb.converged {
        return Ok(Verdict::Unknown {
            reason: format!(
                "reduction did not converge within {max_passes} passes ({} / {})",
                if ra.converged {
                    "converged"
                } else {
                    "unconverged"
                },
                if rb.converged {
                    "converged"
                } else {
                    "unconverged"
                },
            ),
        });
    }

    let mut stable = true;
    for round in 1..=CROSS_RETRIES {
        let p = perturbation::<S>(a.dims(), round);
        let b2 = apply_sequence(b, &p)?;
        let rb2 = mfrf_reduce(&b2, max_passes)?;
        if rb2.reduced == ra.reduced {
            let back = inverse_sequence(&p.clone().then(rb2.certificate));
            return checked_certificate(a, b, ra.certificate.clone().then(back));
        }
        let a2 = apply_sequence(a, &p)?;
        let ra2 = mfrf_reduce(&a2, max_passes)?;
        if ra2.reduced == rb.reduced {
            let cert = p
                .then(ra2.certificate)
                .then(inverse_sequence(&rb.certificate));
            return checked_certificate(a, b, cert);
        }
        stable &= rb2.reduced == rb.reduced && ra2.reduced == ra.reduced;
    }
    if !stable {
        return Ok(Verdict::Unknown {
            reason: "canonical forms differ and depend on the starting point of the reduction"
                .into(),
        });
    }

    Ok(Verdict::Inequivalent {
        witness: witness(Evidence::MfrfMismatch {
            mfrf_a: ra.reduced.to_string(),
            mfrf_b: rb.reduced.to_string(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elo::SitedOp;
    use crate::exactnum::ExactScalar;

    type E = ExactScalar;

    fn kets(dims: &[usize], k: &[&[usize]]) -> MultiState<E> {
        MultiState::from_kets(dims.to_vec(), k).unwrap()
    }

    fn ghz() -> MultiState<E> {
        kets(&[2, 2, 2], &[&[0, 0, 0], &[1, 1, 1]])
    }

    fn w() -> MultiState<E> {
        kets(&[2, 2, 2], &[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
    }

    #[test]
    fn schmidt_numbers() {
        assert_eq!(schmidt_number(&ghz(), &[1]).unwrap(), 2);
        assert_eq!(schmidt_number(&kets(&[2, 2], &[&[0, 0]]), &[1]).unwrap(), 1);
        assert!(schmidt_number(&ghz(), &[]).is_err());
        assert!(schmidt_number(&ghz(), &[1, 2, 3]).is_err());
    }

    #[test]
    fn representatives_classify_to_themselves() {
        for class in ThreeQubitClass::ALL {
            let c = classify_three_qubit(&class.representative::<E>()).unwrap();
            assert_eq!(c.class, class);
            assert!(c.certificate.unwrap().is_empty());
        }
    }

    #[test]
    fn biseparable_example() {
        let s = kets(&[2, 2, 2], &[&[0, 0, 0], &[0, 1, 1]]);
        assert_eq!(
            classify_three_qubit(&s).unwrap().class,
            ThreeQubitClass::BisepABc
        );
    }

    #[test]
    fn irrational_ghz_class_falls_back_to_invariants() {
        // |000> + |011> + |101> + 2|110> gives a pencil with eigenvalues +-sqrt(2).
        let s = MultiState::from_terms(
            vec![2, 2, 2],
            vec![
                (vec![0, 0, 0], E::from_i64(1)),
                (vec![0, 1, 1], E::from_i64(1)),
                (vec![1, 0, 1], E::from_i64(1)),
                (vec![1, 1, 0], E::from_i64(2)),
            ],
        )
        .unwrap();
        assert_eq!(
            classify_three_qubit(&s).unwrap().class,
            ThreeQubitClass::Ghz
        );
    }

    #[test]
    fn ghz_w_inequivalent() {
        let v = slocc_equivalent(&ghz(), &w()).unwrap();
        let Verdict::Inequivalent { witness } = v else {
            panic!("expected inequivalent");
        };
        assert!(witness.is_rigorous());
        assert!(witness.verify(&ghz(), &w()).unwrap());
    }

    #[test]
    fn rank_mismatch_witness() {
        let p = kets(&[2, 2, 2], &[&[0, 0, 0]]);
        let Verdict::Inequivalent { witness } = slocc_equivalent(&p, &ghz()).unwrap() else {
            panic!("expected inequivalent");
        };
        assert_eq!(witness.evidence, Evidence::SiteRanks);
        assert_eq!(witness.site_ranks_a, vec![1, 1, 1]);
    }

    #[test]
    fn scrambled_state_is_equivalent() {
        let seq = EloSequence::from_ops(vec![
            SitedOp {
                site: 1,
                op: ElementaryOp::add_mul(0, E::from_i64(2), 1).unwrap(),
            },
            SitedOp {
                site: 3,
                op: ElementaryOp::scale(1, E::from_i64(-3)).unwrap(),
            },
            SitedOp {
                site: 2,
                op: ElementaryOp::add_mul(1, E::from_i64(1), 0).unwrap(),
            },
        ]);
        let b = apply_sequence(&w(), &seq).unwrap();
        let Verdict::Equivalent { certificate } = slocc_equivalent(&w(), &b).unwrap() else {
            panic!("expected equivalent");
        };
        assert!(verify_certificate(&w(), &b, &certificate));
    }

    #[test]
    fn certificate_checks() {
        assert!(verify_certificate(&ghz(), &ghz(), &EloSequence::new()));
        assert!(!verify_certificate(&ghz(), &w(), &EloSequence::new()));
    }

    #[test]
    fn dims_must_match() {
        assert!(slocc_equivalent(&ghz(), &kets(&[2, 2], &[&[0, 0]])).is_err());
    }
}
