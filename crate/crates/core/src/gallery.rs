//! Named instances: the δ-basis spaces, the free-group ball with its
//! three indicator generators, the lexicographic counterexamples, and a
//! truncation explorer for countable generating rules.

use crate::cone::{Cone, PositiveSet};
use crate::error::{Error, Result};
use crate::majorize::{norm_p, norm_p_lex2, MajorizedSpace, NormValue};
use crate::coherence::{check_coherent, verify_incoherence_witness};
use crate::ratlin::{RVector, Rat};

/// A declarative expectation, checkable against the instance's space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    /// p_M(v) = Σ|vᵢ| on a deterministic sample sweep.
    NormIsL1,
    Coherent,
    /// check_coherent says Incoherent and the given witness verifies.
    IncoherentWithWitness { witness: RVector },
    /// Lex-plane norm value and attainment for a specific vector.
    Lex2Norm {
        v: RVector,
        value: NormValue,
        attained: bool,
    },
    /// The witness combination f = Σ t_j m_j is pointwise nonnegative,
    /// nonzero, and equals 1 at the identity-word coordinate.
    PointwiseWitnessFunction { coeffs: RVector },
}

impl Expectation {
    pub fn name(&self) -> String {
        match self {
            Expectation::NormIsL1 => "norm equals the l1 sum".into(),
            Expectation::Coherent => "coherent".into(),
            Expectation::IncoherentWithWitness { .. } => "incoherent with verified witness".into(),
            Expectation::Lex2Norm { v, .. } => format!("lex norm of {v:?}"),
            Expectation::PointwiseWitnessFunction { .. } => {
                "witness combination is a nonnegative function".into()
            }
        }
    }

    pub fn check(&self, space: &MajorizedSpace) -> Result<bool> {
        match self {
            Expectation::NormIsL1 => {
                for v in l1_sample_sweep(space.dim()) {
                    let l1: Rat = {
                        let mut acc = Rat::zero();
                        for x in v.iter() {
                            acc += &x.abs();
                        }
                        acc
                    };
                    if norm_p(space, &v)?.value != NormValue::Finite(l1) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Expectation::Coherent => Ok(check_coherent(space)?.is_coherent()),
            Expectation::IncoherentWithWitness { witness } => Ok(!check_coherent(space)?
                .is_coherent()
                && verify_incoherence_witness(space, witness)?),
            Expectation::Lex2Norm { v, value, attained } => {
                let got = norm_p_lex2(space.set(), v)?;
                Ok(got.value == *value && got.attained == *attained)
            }
            Expectation::PointwiseWitnessFunction { coeffs } => {
                let f = space.set().combine(coeffs)?;
                Ok(f.iter().all(|x| !x.is_negative())
                    && !f.is_zero()
                    && *f.get(0) == Rat::one())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct GalleryInstance {
    pub name: String,
    pub space: MajorizedSpace,
    pub expected: Vec<Expectation>,
}

impl GalleryInstance {
    /// Runs every expectation; returns (expectation name, passed) pairs.
    pub fn check_all(&self) -> Result<Vec<(String, bool)>> {
        self.expected
            .iter()
            .map(|e| Ok((e.name(), e.check(&self.space)?)))
            .collect()
    }
}

/// Deterministic sample vectors with mixed-sign rational entries.
fn l1_sample_sweep(dim: usize) -> Vec<RVector> {
    (0..10)
        .map(|i| {
            RVector::new(
                (0..dim)
                    .map(|j| {
                        let numer = ((3 * i + 5 * j + 7) % 9) as i64 - 4;
                        let denom = 1 + ((i + j) % 3) as i64;
                        Rat::new(numer, denom).expect("nonzero denominator")
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Orthant in dimension n with M = {δ₁,…,δ_n}; p_M is the ℓ¹ norm.
pub fn make_delta_instance(n: usize) -> Result<GalleryInstance> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let set = PositiveSet::new((0..n).map(|i| RVector::unit(n, i)).collect())?;
    let space = MajorizedSpace::new(Cone::orthant(n), set)?;
    Ok(GalleryInstance {
        name: format!("delta-{n}"),
        space,
        expected: vec![Expectation::NormIsL1, Expectation::Coherent],
    })
}

// Letters of the free group on two generators; inverses pair 0↔1, 2↔3.
// The ordering a < a⁻¹ < b < b⁻¹ fixes the coordinate layout.
const LETTERS: [u8; 4] = [0, 1, 2, 3];

fn inverse(letter: u8) -> u8 {
    letter ^ 1
}

/// Reduced words of length ≤ radius, breadth-first, each length block in
/// lexicographic order; the empty word is index 0.
pub fn reduced_words(radius: usize) -> Vec<Vec<u8>> {
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in &LETTERS {
                if w.last().copied() == Some(inverse(l)) {
                    continue;
                }
                let mut ext = w.clone();
                ext.push(l);
                next.push(ext);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}

fn indicator<F: Fn(&[u8]) -> bool>(words: &[Vec<u8>], pred: F) -> RVector {
    RVector::new(
        words
            .iter()
            .map(|w| if pred(w) { Rat::one() } else { Rat::zero() })
            .collect(),
    )
}

/// Pointwise-ordered coordinate space on the radius-L ball of the free
/// group F₂, with M the restrictions of {1_{a⁻¹A}, 1_{bA}, 1_A} for
/// A = words starting with a. Note a⁻¹A is every word not starting with
/// a⁻¹ and bA is every word starting with "ba". The combination with
/// coefficients (1,−1,−1) is the nonnegative function that is 1 off the
/// a/ba/a⁻¹ prefixes, which makes M incoherent.
pub fn make_f2_ball_instance(radius: usize) -> Result<GalleryInstance> {
    if radius < 2 {
        return Err(Error::InvalidInput(
            "radius must be at least 2 so that bA meets the ball".into(),
        ));
    }
    let words = reduced_words(radius);
    let m_a_inv_a = indicator(&words, |w| w.first().copied() != Some(1));
    let m_b_a = indicator(&words, |w| w.len() >= 2 && w[0] == 2 && w[1] == 0);
    let m_a = indicator(&words, |w| w.first().copied() == Some(0));
    let dim = words.len();
    let set = PositiveSet::new(vec![m_a_inv_a, m_b_a, m_a])?;
    let space = MajorizedSpace::new(Cone::orthant(dim), set)?;
    let witness = RVector::from_ints(&[1, -1, -1]);
    Ok(GalleryInstance {
        name: format!("f2-ball-{radius}"),
        space,
        expected: vec![
            Expectation::IncoherentWithWitness {
                witness: witness.clone(),
            },
            Expectation::PointwiseWitnessFunction { coeffs: witness },
        ],
    })
}

/// The two lexicographic counterexamples: a single off-axis generator
/// whose norm has an open infimum, and the incoherent pair.
pub fn make_lex_instances() -> Result<Vec<GalleryInstance>> {
    let point = MajorizedSpace::new(
        Cone::lex2(),
        PositiveSet::new(vec![RVector::from_ints(&[1, 0])])?,
    )?;
    let pair = MajorizedSpace::new(
        Cone::lex2(),
        PositiveSet::new(vec![RVector::from_ints(&[1, 1]), RVector::from_ints(&[0, 1])])?,
    )?;
    Ok(vec![
        GalleryInstance {
            name: "lex-point".into(),
            space: point,
            expected: vec![
                Expectation::Lex2Norm {
                    v: RVector::from_ints(&[0, 1]),
                    value: NormValue::Finite(Rat::zero()),
                    attained: false,
                },
                Expectation::Lex2Norm {
                    v: RVector::from_ints(&[1, 0]),
                    value: NormValue::Finite(Rat::one()),
                    attained: true,
                },
            ],
        },
        GalleryInstance {
            name: "lex-pair".into(),
            space: pair,
            expected: vec![Expectation::IncoherentWithWitness {
                witness: RVector::from_ints(&[1, -2]),
            }],
        },
    ])
}

/// p_{M_k}(v) for the cumulative truncations M_k = {m₁,…,m_k} of a
/// generating rule, k = 1…count. The sequence is nonincreasing because
/// C_{M_k} only grows; this is asserted, and no limit is claimed.
pub fn truncation_sequence(
    rule: &dyn Fn(usize) -> RVector,
    count: usize,
    v: &RVector,
) -> Result<Vec<NormValue>> {
    let dim = v.dim();
    let orthant = Cone::orthant(dim);
    let mut ms: Vec<RVector> = Vec::new();
    let mut out = Vec::with_capacity(count);
    for k in 1..=count {
        let mk = rule(k);
        if mk.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: mk.dim(),
            });
        }
        if mk.iter().any(Rat::is_negative) || mk.is_zero() {
            return Err(Error::InvalidInput(format!(
                "rule output {k} is not a nonzero positive vector"
            )));
        }
        ms.push(mk);
        let space = MajorizedSpace::new(orthant.clone(), PositiveSet::new(ms.clone())?)?;
        let value = norm_p(&space, v)?.value;
        if let Some(prev) = out.last() {
            assert!(value <= *prev, "truncation sequence must be nonincreasing");
        }
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_instances_pass() {
        for n in [1, 2, 5] {
            let inst = make_delta_instance(n).unwrap();
            for (name, ok) in inst.check_all().unwrap() {
                assert!(ok, "{} failed: {name}", inst.name);
            }
        }
    }

    #[test]
    fn word_enumeration_counts_and_order() {
        let w2 = reduced_words(2);
        assert_eq!(w2.len(), 1 + 4 + 12);
        assert_eq!(reduced_words(3).len(), 17 + 36);
        assert_eq!(w2[0], Vec::<u8>::new());
        assert_eq!(w2[1], vec![0]); // a
        assert_eq!(w2[4], vec![3]); // b⁻¹
        assert_eq!(w2[5], vec![0, 0]); // aa
        // no cancelling neighbours anywhere
        for w in &w2 {
            for pair in w.windows(2) {
                assert_ne!(pair[1], inverse(pair[0]));
            }
        }
    }

    #[test]
    fn f2_ball_passes_for_small_radii() {
        for radius in [2, 3] {
            let inst = make_f2_ball_instance(radius).unwrap();
            for (name, ok) in inst.check_all().unwrap() {
                assert!(ok, "{} failed: {name}", inst.name);
            }
        }
        assert!(make_f2_ball_instance(1).is_err());
    }

    #[test]
    fn f2_witness_function_values() {
        let inst = make_f2_ball_instance(2).unwrap();
        let f = inst
            .space
            .set()
            .combine(&RVector::from_ints(&[1, -1, -1]))
            .unwrap();
        let words = reduced_words(2);
        for (i, w) in words.iter().enumerate() {
            let starts_a = w.first().copied() == Some(0);
            let starts_a_inv = w.first().copied() == Some(1);
            let starts_ba = w.len() >= 2 && w[0] == 2 && w[1] == 0;
            let expected = if starts_a || starts_a_inv || starts_ba {
                Rat::zero()
            } else {
                Rat::one()
            };
            assert_eq!(*f.get(i), expected, "word {w:?}");
        }
    }

    #[test]
    fn lex_instances_pass() {
        for inst in make_lex_instances().unwrap() {
            for (name, ok) in inst.check_all().unwrap() {
                assert!(ok, "{} failed: {name}", inst.name);
            }
        }
    }

    #[test]
    fn truncation_delta_rule_stabilizes() {
        let rule = |k: usize| RVector::unit(4, k - 1);
        let mut v = RVector::zeros(4);
        v.set(0, Rat::one());
        v.set(1, Rat::one());
        let seq = truncation_sequence(&rule, 4, &v).unwrap();
        assert_eq!(
            seq,
            vec![
                NormValue::Infinite,
                NormValue::Finite(Rat::int(2)),
                NormValue::Finite(Rat::int(2)),
                NormValue::Finite(Rat::int(2)),
            ]
        );
    }

    #[test]
    fn truncation_zero_vector() {
        let rule = |k: usize| RVector::unit(3, (k - 1) % 3);
        let seq = truncation_sequence(&rule, 3, &RVector::zeros(3)).unwrap();
        assert!(seq.iter().all(|x| *x == NormValue::Finite(Rat::zero())));
    }

    #[test]
    fn truncation_shrinking_second_coordinate() {
        // m_k = δ₁ + (1/k)δ₂. The cumulative truncation already contains
        // m₁ = δ₁ + δ₂, which dominates δ₂ at cost 1, so the sequence is
        // constantly 1 (smaller 1/k coordinates only make later
        // generators worse for covering δ₂).
        let rule = |k: usize| {
            RVector::new(vec![Rat::one(), Rat::new(1, k as i64).unwrap()])
        };
        let seq = truncation_sequence(&rule, 5, &RVector::unit(2, 1)).unwrap();
        assert!(seq.iter().all(|x| *x == NormValue::Finite(Rat::one())));
    }
}
