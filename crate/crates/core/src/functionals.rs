//! Linear functionals on (E_M, p_M): operator norms over the p_M unit
//! ball, positivity on the ideal, and the continuity bound
//! |ψ·v| ≤ sup_M ψ · p_M(v).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve, LpStatus, VarBound};
use crate::majorize::{in_ideal, norm_p, GrowLp, MajorizedSpace, NormValue};
use crate::ratlin::{RMatrix, RVector, Rat};

/// ψ acting by inner product on the ambient space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional {
    covector: RVector,
}

impl Functional {
    pub fn new(covector: RVector) -> Self {
        Functional { covector }
    }

    pub fn covector(&self) -> &RVector {
        &self.covector
    }

    pub fn apply(&self, v: &RVector) -> Result<Rat> {
        self.covector.dot(v)
    }
}

/// Columns [M | σ·I] so that the matrix maps (t, v) to Σ t_j m_j + σv.
fn ball_columns(space: &MajorizedSpace, sigma: i64) -> RMatrix {
    let n = space.dim();
    let k = space.set().len();
    let mmat = space.set().as_matrix();
    let mut c = RMatrix::zeros(n, k + n);
    for i in 0..n {
        for j in 0..k {
            c.set(i, j, mmat.get(i, j).clone());
        }
        c.set(i, k + i, Rat::int(sigma));
    }
    c
}

/// Constraints of the p_M unit ball over variables (t ≥ 0, v free):
/// Σ t_j ≤ 1, Σ t_j m_j − v ∈ K, Σ t_j m_j + v ∈ K.
fn ball_lp(space: &MajorizedSpace, objective_on_v: &RVector) -> Result<crate::lp::LinearProgram> {
    let n = space.dim();
    let k = space.set().len();
    let mut lp = GrowLp::new();
    lp.add_vars(k, VarBound::NonNegative);
    lp.add_vars(n, VarBound::Free);
    let mut neg_sum = vec![-Rat::one(); k];
    neg_sum.resize(k + n, Rat::zero());
    lp.ge(neg_sum, -Rat::one());
    let zero = RVector::zeros(n);
    lp.require_in_cone(space.cone(), &ball_columns(space, -1), &zero)?;
    lp.require_in_cone(space.cone(), &ball_columns(space, 1), &zero)?;
    lp.dedup();
    let mut objective = vec![Rat::zero(); k];
    objective.extend(objective_on_v.entries().iter().cloned());
    lp.build_min(objective)
}

/// Operator norm of ψ on (E_M, p_M): the exact maximum of ψ·v over the
/// unit ball {v : p_M(v) ≤ 1}. The ball is closed polyhedral and
/// bounded (p_M is a norm on E_M for a proper closed cone), so the
/// maximum is attained.
pub fn op_norm(space: &MajorizedSpace, psi: &Functional) -> Result<Rat> {
    if psi.covector().dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: psi.covector().dim(),
        });
    }
    if space.cone().is_lex2() {
        return Err(Error::InvalidInput(
            "operator norm requires a closed polyhedral cone".into(),
        ));
    }
    let lp = ball_lp(space, &psi.covector().neg())?;
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(-sol.value.expect("optimal has a value")),
        LpStatus::Infeasible => unreachable!("the origin is always in the ball"),
        LpStatus::Unbounded => unreachable!("the p_M ball is bounded"),
    }
}

/// max_j ψ·m_j over the finite set M.
pub fn sup_over_m(psi: &Functional, m: &crate::cone::PositiveSet) -> Result<Rat> {
    let mut best: Option<Rat> = None;
    for mj in m.vectors() {
        let v = psi.apply(mj)?;
        if best.as_ref().map(|b| v > *b).unwrap_or(true) {
            best = Some(v);
        }
    }
    Ok(best.expect("positive sets are nonempty"))
}

/// Whether ψ ≥ 0 on E_M ∩ K: the exact minimum of ψ·v over
/// {v ∈ K : p_M(v) ≤ 1} is nonnegative.
pub fn is_positive_on_ideal(space: &MajorizedSpace, psi: &Functional) -> Result<bool> {
    if psi.covector().dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            got: psi.covector().dim(),
        });
    }
    if space.cone().is_lex2() {
        return Err(Error::InvalidInput(
            "positivity check requires a closed polyhedral cone".into(),
        ));
    }
    let n = space.dim();
    let k = space.set().len();
    let mut lp = GrowLp::new();
    lp.add_vars(k, VarBound::NonNegative);
    lp.add_vars(n, VarBound::Free);
    let mut neg_sum = vec![-Rat::one(); k];
    neg_sum.resize(k + n, Rat::zero());
    lp.ge(neg_sum, -Rat::one());
    let zero = RVector::zeros(n);
    lp.require_in_cone(space.cone(), &ball_columns(space, -1), &zero)?;
    lp.require_in_cone(space.cone(), &ball_columns(space, 1), &zero)?;
    // v itself in K
    let mut vcols = RMatrix::zeros(n, k + n);
    for i in 0..n {
        vcols.set(i, k + i, Rat::one());
    }
    lp.require_in_cone(space.cone(), &vcols, &zero)?;
    lp.dedup();
    let mut objective = vec![Rat::zero(); k];
    objective.extend(psi.covector().entries().iter().cloned());
    let lp = lp.build_min(objective)?;
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(!sol.value.expect("optimal has a value").is_negative()),
        LpStatus::Infeasible => unreachable!("the origin is always feasible"),
        LpStatus::Unbounded => unreachable!("the p_M ball is bounded"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContinuityReport {
    Pass,
    OutsideIdeal { index: usize },
    Violated { index: usize, lhs: Rat, rhs: Rat },
}

/// For ψ positive on E_M, checks |ψ·v| ≤ sup_M ψ · p_M(v) on each sample.
pub fn continuity_bound_check(
    space: &MajorizedSpace,
    psi: &Functional,
    samples: &[RVector],
) -> Result<ContinuityReport> {
    if !is_positive_on_ideal(space, psi)? {
        return Err(Error::InvalidInput(
            "continuity bound requires ψ positive on E_M".into(),
        ));
    }
    let sup = sup_over_m(psi, space.set())?;
    for (index, v) in samples.iter().enumerate() {
        if !in_ideal(space, v)? {
            return Ok(ContinuityReport::OutsideIdeal { index });
        }
        let pm = match norm_p(space, v)?.value {
            NormValue::Finite(r) => r,
            NormValue::Infinite => return Ok(ContinuityReport::OutsideIdeal { index }),
        };
        let lhs = psi.apply(v)?.abs();
        let rhs = &sup * &pm;
        if lhs > rhs {
            return Ok(ContinuityReport::Violated { index, lhs, rhs });
        }
    }
    Ok(ContinuityReport::Pass)
}
