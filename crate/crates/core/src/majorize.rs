//! The majorized subspace E_M and its norms.
//!
//! Given a proper cone K and a finite positive set M, E_M is the set of
//! vectors v with ±v ≤ Σ t_j m_j for some t ≥ 0, and p_M(v) is the
//! infimum of Σ t_j over such dominating combinations. For closed
//! polyhedral cones the infimum is an LP minimum and is attained; the
//! lexicographic plane gets a dedicated evaluator that reports
//! attainment explicitly, since its infima can be open.

use serde::{Deserialize, Serialize};

use crate::cone::{validate_positive_set, Cone, ConeKind, ConeSpec, PositiveSet, SetValidation};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus, VarBound};
use crate::ratlin::{RMatrix, RVector, Rat};

/// The pair (E_M, p_M): a proper ambient cone plus a validated positive
/// set. Construction enforces properness and 0 ∉ co(M).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorizedSpace {
    cone: Cone,
    m: PositiveSet,
}

impl MajorizedSpace {
    pub fn new(cone: Cone, m: PositiveSet) -> Result<Self> {
        if m.dim() != cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim(),
                got: m.dim(),
            });
        }
        if !cone.is_proper()? {
            return Err(Error::InvalidInput("cone is not proper".into()));
        }
        match validate_positive_set(&cone, &m)? {
            SetValidation::Ok => Ok(MajorizedSpace { cone, m }),
            SetValidation::NotInCone { index } => Err(Error::InvalidInput(format!(
                "M[{index}] is not in the cone"
            ))),
            SetValidation::ZeroInConvexHull { weights } => Err(Error::InvalidInput(format!(
                "0 lies in co(M) with weights {weights:?}"
            ))),
        }
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn set(&self) -> &PositiveSet {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// u = Σ_{m ∈ M} m, the principal-ideal order unit of E_M.
    pub fn unit(&self) -> RVector {
        let mut u = RVector::zeros(self.dim());
        for m in self.m.vectors() {
            u = u.add(m).expect("uniform dims");
        }
        u
    }

    fn check_dim(&self, v: &RVector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        Ok(())
    }
}

/// Wire form of a MajorizedSpace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub dimension: usize,
    pub cone: ConeSpec,
    #[serde(rename = "M")]
    pub m: Vec<Vec<Rat>>,
}

impl InstanceSpec {
    pub fn to_space(&self) -> Result<MajorizedSpace> {
        let cone = Cone::from_spec(&self.cone, self.dimension)?;
        let m = PositiveSet::new(self.m.iter().map(|v| RVector::new(v.clone())).collect())?;
        MajorizedSpace::new(cone, m)
    }

    pub fn from_space(space: &MajorizedSpace) -> Self {
        InstanceSpec {
            dimension: space.dim(),
            cone: space.cone().to_spec(),
            m: space
                .set()
                .vectors()
                .iter()
                .map(|v| v.entries().to_vec())
                .collect(),
        }
    }
}

/// A norm value; Infinite means the vector lies outside E_M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormValue {
    Finite(Rat),
    Infinite,
}

impl NormValue {
    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            NormValue::Finite(r) => Some(r),
            NormValue::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NormValue::Finite(_))
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use NormValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl std::fmt::Display for NormValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormValue::Finite(r) => write!(f, "{r}"),
            NormValue::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NormValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        if raw == "infinite" {
            return Ok(NormValue::Infinite);
        }
        raw.parse::<Rat>()
            .map(NormValue::Finite)
            .map_err(serde::de::Error::custom)
    }
}

/// p_M evaluation: value plus, when finite, the coefficient witness t
/// with Σ t_j = value and Σ t_j m_j ± v ∈ K.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: NormValue,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<RVector>,
}

/// Lex-plane p_M: the exact infimum plus whether it is attained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lex2Norm {
    pub value: NormValue,
    pub attained: bool,
}

/// Incremental LP assembly over a growing variable set. Rows are stored
/// at the width current when added and zero-padded on build, which is
/// sound because later variables (generator multipliers) never occur in
/// earlier rows.
pub(crate) struct GrowLp {
    bounds: Vec<VarBound>,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
}

impl GrowLp {
    pub fn new() -> Self {
        GrowLp {
            bounds: Vec::new(),
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn add_vars(&mut self, n: usize, bound: VarBound) -> usize {
        let start = self.bounds.len();
        self.bounds.extend(std::iter::repeat(bound).take(n));
        start
    }

    pub fn num_vars(&self) -> usize {
        self.bounds.len()
    }

    pub fn ge(&mut self, row: Vec<Rat>, rhs: Rat) {
        assert!(row.len() <= self.bounds.len());
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn eq(&mut self, row: Vec<Rat>, rhs: Rat) {
        let neg: Vec<Rat> = row.iter().map(|x| -x).collect();
        self.ge(row, rhs.clone());
        self.ge(neg, -rhs);
    }

    /// Forces C·x + d ∈ K, where x ranges over the first C.cols()
    /// variables. Halfspace cones contribute inequality rows; generator
    /// cones a fresh nonnegative multiplier block with equality rows.
    pub fn require_in_cone(&mut self, cone: &Cone, c: &RMatrix, d: &RVector) -> Result<()> {
        if c.rows() != cone.dim() || d.dim() != cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim(),
                got: c.rows(),
            });
        }
        match cone.kind() {
            ConeKind::Halfspace(a) => {
                for i in 0..a.rows() {
                    let ai = a.row(i);
                    let coeffs: Vec<Rat> =
                        (0..c.cols()).map(|j| ai.dot(&c.col(j)).expect("dims")).collect();
                    self.ge(coeffs, -ai.dot(d).expect("dims"));
                }
            }
            ConeKind::Generators(gens) => {
                let s0 = self.add_vars(gens.len(), VarBound::NonNegative);
                for coord in 0..cone.dim() {
                    let mut row = vec![Rat::zero(); self.bounds.len()];
                    for j in 0..c.cols() {
                        row[j] = c.get(coord, j).clone();
                    }
                    for (l, g) in gens.iter().enumerate() {
                        row[s0 + l] = -g.get(coord);
                    }
                    self.eq(row, -d.get(coord));
                }
            }
            ConeKind::Lex2 => {
                return Err(Error::InvalidInput(
                    "lexicographic cone membership is not LP-expressible".into(),
                ))
            }
        }
        Ok(())
    }

    /// Removes duplicated (row, rhs) pairs; harmless for primal answers
    /// and a large saving on instances with many repeated coordinates.
    pub fn dedup(&mut self) {
        let width = self.bounds.len();
        for row in &mut self.rows {
            row.resize(width, Rat::zero());
        }
        let mut keep: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (row, r) in self.rows.drain(..).zip(self.rhs.drain(..)) {
            if keep.iter().any(|(kr, kv)| *kr == row && *kv == r) {
                continue;
            }
            keep.push((row.clone(), r.clone()));
            rows.push(row);
            rhs.push(r);
        }
        self.rows = rows;
        self.rhs = rhs;
    }

    pub fn build_min(self, mut objective: Vec<Rat>) -> Result<LinearProgram> {
        let width = self.bounds.len();
        objective.resize(width, Rat::zero());
        let rows = self
            .rows
            .into_iter()
            .map(|mut r| {
                r.resize(width, Rat::zero());
                RVector::new(r)
            })
            .collect();
        LinearProgram::new(
            RVector::new(objective),
            RMatrix::from_rows(rows, width)?,
            RVector::new(self.rhs),
            self.bounds,
        )
    }
}

/// The p_M feasibility/minimization LP over t ≥ 0:
/// Σ t_j m_j − v ∈ K and Σ t_j m_j + v ∈ K, objective Σ t_j.
pub(crate) fn norm_lp(space: &MajorizedSpace, v: &RVector) -> Result<LinearProgram> {
    let k = space.set().len();
    let mmat = space.set().as_matrix();
    let mut lp = GrowLp::new();
    lp.add_vars(k, VarBound::NonNegative);
    lp.require_in_cone(space.cone(), &mmat, &v.neg())?;
    lp.require_in_cone(space.cone(), &mmat, v)?;
    lp.dedup();
    lp.build_min(vec![Rat::one(); k])
}

/// Membership of v in E_M: some t ≥ 0 with Σ t_j m_j ± v ∈ K.
pub fn in_ideal(space: &MajorizedSpace, v: &RVector) -> Result<bool> {
    space.check_dim(v)?;
    if space.cone().is_lex2() {
        // Some generator with positive first coordinate majorizes any
        // first coordinate; otherwise E_M is the v₁ = 0 axis.
        let some_first = space
            .set()
            .vectors()
            .iter()
            .any(|m| m.get(0).is_positive());
        return Ok(some_first || v.get(0).is_zero());
    }
    let k = space.set().len();
    let mmat = space.set().as_matrix();
    let mut lp = GrowLp::new();
    lp.add_vars(k, VarBound::NonNegative);
    lp.require_in_cone(space.cone(), &mmat, &v.neg())?;
    lp.require_in_cone(space.cone(), &mmat, v)?;
    lp.dedup();
    let lp = lp.build_min(vec![Rat::zero(); k])?;
    Ok(solve(&lp)?.status == LpStatus::Optimal)
}

/// Checks a claimed p_M witness by direct substitution: t ≥ 0,
/// Σ t_j = value, and Σ t_j m_j ± v ∈ K.
pub fn verify_norm_witness(
    space: &MajorizedSpace,
    v: &RVector,
    t: &RVector,
    value: &Rat,
) -> Result<bool> {
    space.check_dim(v)?;
    if t.dim() != space.set().len() {
        return Err(Error::DimensionMismatch {
            expected: space.set().len(),
            got: t.dim(),
        });
    }
    if t.iter().any(Rat::is_negative) || t.sum() != *value {
        return Ok(false);
    }
    let w = space.set().combine(t)?;
    Ok(space.cone().contains(&w.sub(v)?)? && space.cone().contains(&w.add(v)?)?)
}

/// p_M over a closed polyhedral cone: the exact LP minimum, with the
/// optimal coefficient vector as a substitution-checked witness.
pub fn norm_p(space: &MajorizedSpace, v: &RVector) -> Result<NormResult> {
    space.check_dim(v)?;
    if space.cone().is_lex2() {
        return Err(Error::InvalidInput(
            "lexicographic instance: use norm_p_lex2".into(),
        ));
    }
    let lp = norm_lp(space, v)?;
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Infeasible => Ok(NormResult {
            value: NormValue::Infinite,
            witness: None,
        }),
        LpStatus::Unbounded => unreachable!("Σt over t ≥ 0 is bounded below by 0"),
        LpStatus::Optimal => {
            let full = sol.point.expect("optimal has a point");
            let t = RVector::new(full.entries()[..space.set().len()].to_vec());
            let value = sol.value.expect("optimal has a value");
            assert!(
                verify_norm_witness(space, v, &t, &value)?,
                "solver returned a witness that fails substitution"
            );
            Ok(NormResult {
                value: NormValue::Finite(value),
                witness: Some(t),
            })
        }
    }
}

/// p_M in the lexicographic plane by exact case analysis.
///
/// Writing m_j = (a_j, b_j) (all lex-positive) and W = Σ t_j m_j, the
/// feasibility W ± v ∈ K_lex splits on W₁ vs |v₁|: W₁ > |v₁| is always
/// feasible, W₁ = |v₁| needs W₂ ≥ θ with θ = v₂·sign(v₁) (θ = |v₂| when
/// v₁ = 0), W₁ < |v₁| never. The infimum is therefore |v₁|/max a_j,
/// attained iff the second-coordinate threshold is reachable on the
/// argmax generators.
pub fn norm_p_lex2(m: &PositiveSet, v: &RVector) -> Result<Lex2Norm> {
    if m.dim() != 2 || v.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: if m.dim() != 2 { m.dim() } else { v.dim() },
        });
    }
    for (j, mj) in m.vectors().iter().enumerate() {
        if !crate::cone::lex2_nonneg(mj) || mj.is_zero() {
            return Err(Error::InvalidInput(format!(
                "M[{j}] is not lex-positive"
            )));
        }
    }
    let v1 = v.get(0);
    let v2 = v.get(1);
    let a_max = m
        .vectors()
        .iter()
        .map(|mj| mj.get(0).clone())
        .max()
        .expect("nonempty M");

    if !a_max.is_positive() {
        // Every generator sits on the axis: W₁ ≡ 0, so E_M = {v₁ = 0}
        // and the second coordinates (all positive here) do the work.
        if !v1.is_zero() {
            return Ok(Lex2Norm {
                value: NormValue::Infinite,
                attained: false,
            });
        }
        if v2.is_zero() {
            return Ok(Lex2Norm {
                value: NormValue::Finite(Rat::zero()),
                attained: true,
            });
        }
        let b_max = m
            .vectors()
            .iter()
            .map(|mj| mj.get(1).clone())
            .max()
            .expect("nonempty M");
        return Ok(Lex2Norm {
            value: NormValue::Finite(v2.abs() / b_max),
            attained: true,
        });
    }

    if v1.is_zero() {
        // Any W₁ > 0 dominates the second coordinate; infimum 0,
        // attained only by the zero vector itself.
        return Ok(Lex2Norm {
            value: NormValue::Finite(Rat::zero()),
            attained: v2.is_zero(),
        });
    }

    // Infimum |v₁|/a_max; equality W₁ = |v₁| forces support on the
    // argmax generators, where the best reachable W₂ is value·max b.
    let value = &v1.abs() / &a_max;
    let theta = if v1.is_positive() { v2.clone() } else { -v2 };
    let b_on_argmax = m
        .vectors()
        .iter()
        .filter(|mj| *mj.get(0) == a_max)
        .map(|mj| mj.get(1).clone())
        .max()
        .expect("argmax is nonempty");
    let attained = &value * &b_on_argmax >= theta;
    Ok(Lex2Norm {
        value: NormValue::Finite(value),
        attained,
    })
}

/// Order-unit norm ‖v‖_u = min{t ≥ 0 : tu − v ∈ K and tu + v ∈ K};
/// Infinite when no multiple of u dominates ±v.
pub fn order_unit_norm(cone: &Cone, u: &RVector, v: &RVector) -> Result<NormValue> {
    if u.dim() != cone.dim() || v.dim() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: if u.dim() != cone.dim() { u.dim() } else { v.dim() },
        });
    }
    if u.is_zero() || !cone.contains(u)? {
        return Err(Error::InvalidInput("u must be a nonzero positive vector".into()));
    }
    if cone.is_lex2() {
        return Err(Error::InvalidInput(
            "order-unit norm requires a closed polyhedral cone".into(),
        ));
    }
    let ucol = RMatrix::from_cols(std::slice::from_ref(u), cone.dim())?;
    let mut lp = GrowLp::new();
    lp.add_vars(1, VarBound::NonNegative);
    lp.require_in_cone(cone, &ucol, &v.neg())?;
    lp.require_in_cone(cone, &ucol, v)?;
    lp.dedup();
    let lp = lp.build_min(vec![Rat::one()])?;
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Infeasible => Ok(NormValue::Infinite),
        LpStatus::Unbounded => unreachable!("t ≥ 0 bounds the objective below"),
        LpStatus::Optimal => {
            let t = sol.value.expect("optimal has a value");
            let w = u.scale(&t);
            assert!(
                cone.contains(&w.sub(v)?)? && cone.contains(&w.add(v)?)?,
                "solver returned an order-unit witness that fails substitution"
            );
            Ok(NormValue::Finite(t))
        }
    }
}

/// Outcome of the principal-ideal two-sided chain check
/// ‖v‖_u ≤ p_M(v) ≤ p_M(u)·‖v‖_u with u = Σ m_j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainReport {
    Pass,
    OutsideIdeal {
        index: usize,
    },
    Violated {
        index: usize,
        unit_norm: Rat,
        pm: Rat,
        pm_unit: Rat,
    },
}

/// Verifies the principal-ideal inequality chain on each sample; with a
/// singleton M the chain collapses to exact equality p_M = ‖·‖_u.
pub fn principal_ideal_identity_check(
    space: &MajorizedSpace,
    samples: &[RVector],
) -> Result<ChainReport> {
    let u = space.unit();
    let pm_unit = match norm_p(space, &u)?.value {
        NormValue::Finite(r) => r,
        NormValue::Infinite => unreachable!("u ∈ E_M by construction"),
    };
    for (index, v) in samples.iter().enumerate() {
        let pm = match norm_p(space, v)?.value {
            NormValue::Finite(r) => r,
            NormValue::Infinite => return Ok(ChainReport::OutsideIdeal { index }),
        };
        let unit_norm = match order_unit_norm(space.cone(), &u, v)? {
            NormValue::Finite(r) => r,
            // v ∈ E_M makes u a dominating unit for v, so this is dead.
            NormValue::Infinite => return Ok(ChainReport::OutsideIdeal { index }),
        };
        let upper = &pm_unit * &unit_norm;
        if !(unit_norm <= pm && pm <= upper) {
            return Ok(ChainReport::Violated {
                index,
                unit_norm,
                pm,
                pm_unit,
            });
        }
        if space.set().len() == 1 && unit_norm != pm {
            return Ok(ChainReport::Violated {
                index,
                unit_norm,
                pm,
                pm_unit,
            });
        }
    }
    Ok(ChainReport::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseRepresentation {
    /// c = Σ t_j m_j with t ≥ 0.
    InCone { t: RVector },
    NotInCone,
}

/// Representation of c in the cone C_M generated by M, when one exists.
/// The returned t minimizes Σ t_j, so for coherent M the coefficient sum
/// is the base scale of c.
pub fn base_representation(space: &MajorizedSpace, c: &RVector) -> Result<BaseRepresentation> {
    space.check_dim(c)?;
    let k = space.set().len();
    let mmat = space.set().as_matrix();
    let mut lp = GrowLp::new();
    lp.add_vars(k, VarBound::NonNegative);
    for coord in 0..space.dim() {
        lp.eq(mmat.row(coord).entries().to_vec(), c.get(coord).clone());
    }
    lp.dedup();
    let lp = lp.build_min(vec![Rat::one(); k])?;
    let sol = solve(&lp)?;
    match sol.status {
        LpStatus::Infeasible => Ok(BaseRepresentation::NotInCone),
        LpStatus::Unbounded => unreachable!("Σt over t ≥ 0 is bounded below"),
        LpStatus::Optimal => {
            let t = sol.point.expect("optimal has a point");
            assert_eq!(&space.set().combine(&t)?, c, "representation fails substitution");
            Ok(BaseRepresentation::InCone { t })
        }
    }
}

/// Convex combination Σ w_j m_j of the base B = co(M); rejects weights
/// that are not a probability vector.
pub fn base_point(space: &MajorizedSpace, weights: &RVector) -> Result<RVector> {
    if weights.iter().any(Rat::is_negative) || weights.sum() != Rat::one() {
        return Err(Error::InvalidInput("weights must be convex".into()));
    }
    space.set().combine(weights)
}
