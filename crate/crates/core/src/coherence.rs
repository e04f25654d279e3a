//! Coherency of a positive set M and its certificates.
//!
//! M is coherent when Σ t_j m_j ∈ K forces Σ t_j ≥ 0. The decision runs
//! one homogeneous feasibility LP: a feasible point is an incoherence
//! witness, and the Farkas multipliers of an infeasible run assemble
//! into a dual functional φ with φ·m_j = 1 that is nonnegative on the
//! cone — each direction independently re-checkable by substitution.

use serde::{Deserialize, Serialize};

use crate::cone::{Cone, ConeKind, PositiveSet};
use crate::error::{Error, Result};
use crate::lp::{solve, LpStatus, VarBound};
use crate::majorize::{norm_p, norm_p_lex2, GrowLp, MajorizedSpace, NormValue};
use crate::ratlin::{RVector, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CoherenceVerdict {
    /// Σ t_j m_j ∈ K with Σ t_j < 0.
    Incoherent { witness: RVector },
    /// φ·m_j = 1 on M and φ is nonnegative on the cone; for halfspace
    /// cones the multipliers λ ≥ 0 exhibit φ = Aᵀλ directly.
    Coherent {
        phi: RVector,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        multipliers: Option<RVector>,
    },
}

impl CoherenceVerdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, CoherenceVerdict::Coherent { .. })
    }
}

/// Exact check of an incoherence witness: Σ t_j m_j ∈ K and Σ t_j < 0.
pub fn verify_incoherence_witness(space: &MajorizedSpace, t: &RVector) -> Result<bool> {
    if t.dim() != space.set().len() {
        return Err(Error::DimensionMismatch {
            expected: space.set().len(),
            got: t.dim(),
        });
    }
    if !t.sum().is_negative() {
        return Ok(false);
    }
    space.cone().contains(&space.set().combine(t)?)
}

/// Exact check of a coherence certificate: φ·m_j = 1 for every m_j, and
/// φ nonnegative on the positive vectors it must dominate. For closed
/// polyhedral cones that is dual-cone membership; for Lex2 positivity is
/// required on K ∩ E_M (all of K when some generator leaves the axis).
pub fn verify_coherence_certificate(space: &MajorizedSpace, phi: &RVector) -> Result<bool> {
    if phi.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: phi.dim(),
        });
    }
    for m in space.set().vectors() {
        if phi.dot(m)? != Rat::one() {
            return Ok(false);
        }
    }
    if space.cone().is_lex2() {
        let off_axis = space
            .set()
            .vectors()
            .iter()
            .any(|m| m.get(0).is_positive());
        return Ok(if off_axis {
            // E_M is the whole plane; positivity on the open lex cone
            // forces the second component to vanish.
            phi.get(1).is_zero() && !phi.get(0).is_negative()
        } else {
            // E_M is the axis {v₁ = 0}; only the second component acts.
            !phi.get(1).is_negative()
        });
    }
    space.cone().dual_contains(phi)
}

/// Decides coherency with a substitution-checked certificate either way.
pub fn check_coherent(space: &MajorizedSpace) -> Result<CoherenceVerdict> {
    let verdict = match space.cone().kind() {
        ConeKind::Lex2 => check_coherent_lex2(space.set()),
        ConeKind::Halfspace(_) | ConeKind::Generators(_) => check_coherent_polyhedral(space)?,
    };
    match &verdict {
        CoherenceVerdict::Incoherent { witness } => {
            assert!(
                verify_incoherence_witness(space, witness)?,
                "incoherence witness fails substitution"
            );
        }
        CoherenceVerdict::Coherent { phi, .. } => {
            assert!(
                verify_coherence_certificate(space, phi)?,
                "coherence certificate fails substitution"
            );
        }
    }
    Ok(verdict)
}

fn check_coherent_polyhedral(space: &MajorizedSpace) -> Result<CoherenceVerdict> {
    let k = space.set().len();
    let mmat = space.set().as_matrix();

    match space.cone().kind() {
        ConeKind::Halfspace(a) => {
            // Feasibility of {t free : (A·M)t ≥ 0, −Σt ≥ 1}; duplicated
            // membership rows are merged first, remembering one original
            // row index each so Farkas multipliers map back onto A.
            let am = {
                let mut rows = Vec::with_capacity(a.rows());
                for i in 0..a.rows() {
                    let ai = a.row(i);
                    rows.push(RVector::new(
                        (0..k).map(|j| ai.dot(&mmat.col(j)).expect("dims")).collect(),
                    ));
                }
                rows
            };
            let mut reps: Vec<(RVector, usize)> = Vec::new();
            for (i, row) in am.iter().enumerate() {
                if !reps.iter().any(|(r, _)| r == row) {
                    reps.push((row.clone(), i));
                }
            }
            let mut lp = GrowLp::new();
            lp.add_vars(k, VarBound::Free);
            for (row, _) in &reps {
                lp.ge(row.entries().to_vec(), Rat::zero());
            }
            lp.ge(vec![-Rat::one(); k], Rat::one());
            let lp = lp.build_min(vec![Rat::zero(); k])?;
            let sol = solve(&lp)?;
            match sol.status {
                LpStatus::Optimal => Ok(CoherenceVerdict::Incoherent {
                    witness: sol.point.expect("optimal has a point"),
                }),
                LpStatus::Unbounded => unreachable!("zero objective"),
                LpStatus::Infeasible => {
                    let y = sol.farkas.expect("infeasible has a Farkas vector");
                    let mu = y.get(reps.len()).clone();
                    assert!(mu.is_positive(), "Farkas strictness yields μ > 0");
                    let mut lambda = RVector::zeros(a.rows());
                    for (idx, (_, orig)) in reps.iter().enumerate() {
                        lambda.set(*orig, y.get(idx) / &mu);
                    }
                    let phi = a.transpose().matvec(&lambda)?;
                    Ok(CoherenceVerdict::Coherent {
                        phi,
                        multipliers: Some(lambda),
                    })
                }
            }
        }
        ConeKind::Generators(gens) => {
            // Feasibility of {t free, s ≥ 0 : Mt = Gs, −Σt ≥ 1}; the
            // equality-pair Farkas multipliers fold into a signed λ per
            // coordinate, and φ = λ/μ lands in K* by construction.
            let mut lp = GrowLp::new();
            lp.add_vars(k, VarBound::Free);
            let s0 = lp.add_vars(gens.len(), VarBound::NonNegative);
            let mut pair_rows = Vec::with_capacity(space.dim());
            for coord in 0..space.dim() {
                let mut row = vec![Rat::zero(); lp.num_vars()];
                for j in 0..k {
                    row[j] = mmat.get(coord, j).clone();
                }
                for (l, g) in gens.iter().enumerate() {
                    row[s0 + l] = -g.get(coord);
                }
                pair_rows.push((2 * coord, 2 * coord + 1));
                lp.eq(row, Rat::zero());
            }
            let sum_row_idx = 2 * space.dim();
            let mut neg_sum = vec![-Rat::one(); k];
            neg_sum.resize(lp.num_vars(), Rat::zero());
            lp.ge(neg_sum, Rat::one());
            let lp = lp.build_min(vec![Rat::zero(); k])?;
            let sol = solve(&lp)?;
            match sol.status {
                LpStatus::Optimal => {
                    let point = sol.point.expect("optimal has a point");
                    Ok(CoherenceVerdict::Incoherent {
                        witness: RVector::new(point.entries()[..k].to_vec()),
                    })
                }
                LpStatus::Unbounded => unreachable!("zero objective"),
                LpStatus::Infeasible => {
                    let y = sol.farkas.expect("infeasible has a Farkas vector");
                    let mu = y.get(sum_row_idx).clone();
                    assert!(mu.is_positive(), "Farkas strictness yields μ > 0");
                    let lambda = RVector::new(
                        pair_rows
                            .iter()
                            .map(|&(ge, le)| &(y.get(ge) - y.get(le)) / &mu)
                            .collect(),
                    );
                    Ok(CoherenceVerdict::Coherent {
                        phi: lambda,
                        multipliers: None,
                    })
                }
            }
        }
        ConeKind::Lex2 => unreachable!("dispatched in check_coherent"),
    }
}

/// Lex-plane coherency in closed form. With m_j = (a_j, b_j):
/// coherent iff all a_j share one positive value (any Σt m ∈ K then has
/// first coordinate a·Σt), or all a_j = 0 with one shared b (second
/// coordinate does the same job on the axis). Otherwise a two-element
/// cancellation produces a witness.
fn check_coherent_lex2(m: &PositiveSet) -> CoherenceVerdict {
    let a: Vec<&Rat> = m.vectors().iter().map(|v| v.get(0)).collect();
    let b: Vec<&Rat> = m.vectors().iter().map(|v| v.get(1)).collect();
    let k = m.len();

    if a.iter().all(|x| **x == *a[0]) {
        if a[0].is_positive() {
            let phi = RVector::new(vec![a[0].recip().expect("positive"), Rat::zero()]);
            return CoherenceVerdict::Coherent {
                phi,
                multipliers: None,
            };
        }
        // all first coordinates zero: lex-positivity forces b_j > 0
        if b.iter().all(|x| **x == *b[0]) {
            let phi = RVector::new(vec![Rat::zero(), b[0].recip().expect("positive")]);
            return CoherenceVerdict::Coherent {
                phi,
                multipliers: None,
            };
        }
        let p = (0..k).max_by_key(|&j| b[j]).expect("nonempty");
        let q = (0..k).min_by_key(|&j| b[j]).expect("nonempty");
        let mut t = RVector::zeros(k);
        t.set(p, b[q] / b[p]); // lands exactly on 0, sum b_q/b_p − 1 < 0
        t.set(q, -Rat::one());
        return CoherenceVerdict::Incoherent { witness: t };
    }

    // First coordinates differ, so a_max > a_min ≥ 0: cancel to a
    // strictly positive first coordinate with negative coefficient sum.
    let p = (0..k).max_by_key(|&j| a[j]).expect("nonempty");
    let q = (0..k).min_by_key(|&j| a[j]).expect("nonempty");
    let c = (a[q] / a[p] + Rat::one()) / Rat::int(2); // in (a_q/a_p, 1)
    let mut t = RVector::zeros(k);
    t.set(p, c);
    t.set(q, -Rat::one());
    CoherenceVerdict::Incoherent { witness: t }
}

fn p_value(space: &MajorizedSpace, v: &RVector) -> Result<NormValue> {
    if space.cone().is_lex2() {
        Ok(norm_p_lex2(space.set(), v)?.value)
    } else {
        Ok(norm_p(space, v)?.value)
    }
}

/// Outcome of the additivity check (p_M additive on C_M ⟺ coherent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdditivityReport {
    /// Coherent and p_M(Σ t_j m_j) = Σ t_j held on every probe.
    CoherentAdditive,
    /// Coherent but some probe broke additivity — signals a bug.
    CoherentViolated {
        index: usize,
        value: NormValue,
        sum: Rat,
    },
    /// Incoherent and a strict violation p_M < Σ t was exhibited.
    IncoherentViolated {
        probe: RVector,
        value: NormValue,
        sum: Rat,
    },
    /// Incoherent yet no probe violated additivity — signals a bug,
    /// since the witness-derived probe always must.
    IncoherentUnviolated,
}

impl AdditivityReport {
    pub fn passed(&self) -> bool {
        matches!(
            self,
            AdditivityReport::CoherentAdditive | AdditivityReport::IncoherentViolated { .. }
        )
    }
}

/// Probes additivity of p_M on C_M with nonnegative coefficient vectors.
/// On incoherent instances the negative part of the witness is appended
/// as a probe: Σt m ∈ K and Σt < 0 give p(Mt⁻) ≤ p(Mt⁺) ≤ Σt⁺ < Σt⁻,
/// so a strict violation is always exhibited.
pub fn additivity_check(space: &MajorizedSpace, samples: &[RVector]) -> Result<AdditivityReport> {
    for (i, t) in samples.iter().enumerate() {
        if t.dim() != space.set().len() || t.iter().any(Rat::is_negative) {
            return Err(Error::InvalidInput(format!(
                "probe {i} is not a nonnegative coefficient vector over M"
            )));
        }
    }
    let verdict = check_coherent(space)?;
    match verdict {
        CoherenceVerdict::Coherent { .. } => {
            for (index, t) in samples.iter().enumerate() {
                let value = p_value(space, &space.set().combine(t)?)?;
                if value != NormValue::Finite(t.sum()) {
                    return Ok(AdditivityReport::CoherentViolated {
                        index,
                        value,
                        sum: t.sum(),
                    });
                }
            }
            Ok(AdditivityReport::CoherentAdditive)
        }
        CoherenceVerdict::Incoherent { witness } => {
            let t_minus = RVector::new(
                witness
                    .iter()
                    .map(|x| if x.is_negative() { -x } else { Rat::zero() })
                    .collect(),
            );
            let mut probes: Vec<&RVector> = samples.iter().collect();
            probes.push(&t_minus);
            for t in probes {
                let value = p_value(space, &space.set().combine(t)?)?;
                if value < NormValue::Finite(t.sum()) {
                    return Ok(AdditivityReport::IncoherentViolated {
                        probe: t.clone(),
                        value,
                        sum: t.sum(),
                    });
                }
            }
            Ok(AdditivityReport::IncoherentUnviolated)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingReport {
    Pass,
    Fail { index: usize, detail: String },
}

/// For coherent M, checks the isometric-embedding facts on coefficient
/// pairs: equal images force equal coefficient sums (via the certificate
/// functional), and p_M(Σ t_j m_j) = ‖t‖₁ exactly.
pub fn embedding_check(
    space: &MajorizedSpace,
    pairs: &[(RVector, RVector)],
) -> Result<EmbeddingReport> {
    let verdict = check_coherent(space)?;
    if !verdict.is_coherent() {
        return Err(Error::InvalidInput(
            "embedding check requires a coherent set".into(),
        ));
    }
    for (index, (t, t2)) in pairs.iter().enumerate() {
        for side in [t, t2] {
            if side.dim() != space.set().len() || side.iter().any(Rat::is_negative) {
                return Err(Error::InvalidInput(format!(
                    "pair {index} is not a nonnegative coefficient pair over M"
                )));
            }
        }
        let img = space.set().combine(t)?;
        let img2 = space.set().combine(t2)?;
        if img == img2 && t.sum() != t2.sum() {
            return Ok(EmbeddingReport::Fail {
                index,
                detail: "equal images with distinct coefficient sums".into(),
            });
        }
        for (side, image) in [(t, &img), (t2, &img2)] {
            if p_value(space, image)? != NormValue::Finite(side.sum()) {
                return Ok(EmbeddingReport::Fail {
                    index,
                    detail: format!("p_M(Σ t m) ≠ ‖t‖₁ for t = {side:?}"),
                });
            }
        }
    }
    Ok(EmbeddingReport::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairScan {
    pub verdicts: Vec<CoherenceVerdict>,
    pub first_incoherent: Option<usize>,
}

/// Runs check_coherent on each two-element set {v, w}. In the
/// Archimedean regime — pairs on a common base slice φ(v) = φ(w) = 1 of
/// a closed cone — every pair is coherent; the lexicographic plane
/// supplies incoherent pairs. Pairs where one vector strictly dominates
/// a multiple of the other are incoherent even under closed cones, so
/// callers probing the Archimedean direction must normalize.
pub fn pair_coherence_scan(cone: &Cone, pairs: &[(RVector, RVector)]) -> Result<PairScan> {
    let mut verdicts = Vec::with_capacity(pairs.len());
    let mut first_incoherent = None;
    for (i, (v, w)) in pairs.iter().enumerate() {
        if v.is_zero() || w.is_zero() || !cone.contains(v)? || !cone.contains(w)? {
            return Err(Error::InvalidInput(format!(
                "pair {i} is not a pair of nonzero positive vectors"
            )));
        }
        let set = PositiveSet::new(vec![v.clone(), w.clone()])?;
        let space = MajorizedSpace::new(cone.clone(), set)?;
        let verdict = check_coherent(&space)?;
        if first_incoherent.is_none() && !verdict.is_coherent() {
            first_incoherent = Some(i);
        }
        verdicts.push(verdict);
    }
    Ok(PairScan {
        verdicts,
        first_incoherent,
    })
}
