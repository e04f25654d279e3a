//! Cone representations and the order queries they induce.
//!
//! A cone fixes the partial order via x ≤ y ⟺ y − x ∈ K. Three
//! representations are supported: halfspace systems {x : A·x ≥ 0},
//! generator lists (all nonnegative combinations), and the 2-D
//! lexicographic cone, the canonical non-Archimedean counterexample.
//! Queries stay in the native representation; generator cones fall back
//! to exact LP feasibility instead of any H/V conversion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve, LpBuilder, LpStatus, VarBound};
use crate::ratlin::{rank, RMatrix, RVector, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeKind {
    /// {x : A·x ≥ 0}; an empty row system means the whole space.
    Halfspace(RMatrix),
    /// All nonnegative combinations of the (nonzero) generators.
    Generators(Vec<RVector>),
    /// {0} ∪ {x ∈ R² : first nonzero coordinate > 0}.
    Lex2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    kind: ConeKind,
    dim: usize,
}

/// Wire form of a cone; the ambient dimension comes from the enclosing
/// instance (an empty halfspace system carries no dimension of its own).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConeSpec {
    Halfspace { matrix: Vec<Vec<Rat>> },
    Generators { vectors: Vec<Vec<Rat>> },
    Lex2,
}

impl Cone {
    pub fn halfspace(a: RMatrix, dim: usize) -> Result<Self> {
        if a.cols() != dim && a.rows() > 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: a.cols(),
            });
        }
        let a = if a.rows() == 0 { RMatrix::zeros(0, dim) } else { a };
        Ok(Cone {
            kind: ConeKind::Halfspace(a),
            dim,
        })
    }

    pub fn generators(gens: Vec<RVector>, dim: usize) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidInput("generator cone needs generators".into()));
        }
        for g in &gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
            if g.is_zero() {
                return Err(Error::InvalidInput("zero generator".into()));
            }
        }
        Ok(Cone {
            kind: ConeKind::Generators(gens),
            dim,
        })
    }

    pub fn lex2() -> Self {
        Cone {
            kind: ConeKind::Lex2,
            dim: 2,
        }
    }

    /// The nonnegative orthant as a halfspace system.
    pub fn orthant(dim: usize) -> Self {
        Cone::halfspace(RMatrix::identity(dim), dim).expect("square system")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn is_lex2(&self) -> bool {
        matches!(self.kind, ConeKind::Lex2)
    }

    /// Closed polyhedral representations, i.e. everything but Lex2.
    pub fn is_closed_polyhedral(&self) -> bool {
        !self.is_lex2()
    }

    pub fn from_spec(spec: &ConeSpec, dim: usize) -> Result<Self> {
        match spec {
            ConeSpec::Halfspace { matrix } => {
                let rows: Vec<RVector> = matrix
                    .iter()
                    .map(|r| RVector::new(r.clone()))
                    .collect();
                Cone::halfspace(RMatrix::from_rows(rows, dim)?, dim)
            }
            ConeSpec::Generators { vectors } => Cone::generators(
                vectors.iter().map(|v| RVector::new(v.clone())).collect(),
                dim,
            ),
            ConeSpec::Lex2 => {
                if dim != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, got: dim });
                }
                Ok(Cone::lex2())
            }
        }
    }

    pub fn to_spec(&self) -> ConeSpec {
        match &self.kind {
            ConeKind::Halfspace(a) => ConeSpec::Halfspace {
                matrix: (0..a.rows()).map(|i| a.row(i).entries().to_vec()).collect(),
            },
            ConeKind::Generators(g) => ConeSpec::Generators {
                vectors: g.iter().map(|v| v.entries().to_vec()).collect(),
            },
            ConeKind::Lex2 => ConeSpec::Lex2,
        }
    }

    fn check_dim(&self, x: &RVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// Exact membership x ∈ K.
    pub fn contains(&self, x: &RVector) -> Result<bool> {
        self.check_dim(x)?;
        match &self.kind {
            ConeKind::Halfspace(a) => Ok(a.matvec(x)?.iter().all(|v| !v.is_negative())),
            ConeKind::Generators(gens) => {
                // Feasibility of x = Σ sᵢ gᵢ with s ≥ 0.
                let mut builder = LpBuilder::new(vec![VarBound::NonNegative; gens.len()]);
                for coord in 0..self.dim {
                    let row =
                        RVector::new(gens.iter().map(|g| g.get(coord).clone()).collect());
                    builder.eq(row, x.get(coord).clone());
                }
                let lp = builder.build(RVector::zeros(gens.len()))?;
                Ok(solve(&lp)?.status == LpStatus::Optimal)
            }
            ConeKind::Lex2 => Ok(lex2_nonneg(x)),
        }
    }

    /// x ≤ y in the order induced by this cone.
    pub fn leq(&self, x: &RVector, y: &RVector) -> Result<bool> {
        self.contains(&y.sub(x)?)
    }

    /// K ∩ (−K) = {0}.
    pub fn is_proper(&self) -> Result<bool> {
        match &self.kind {
            ConeKind::Halfspace(a) => Ok(rank(a) == self.dim),
            ConeKind::Generators(gens) => {
                // Not proper iff some s, s' ≥ 0 with Σsᵢ = 1 satisfy
                // G(s + s') = 0, i.e. a nonzero combination lands in −K.
                let k = gens.len();
                let mut builder = LpBuilder::new(vec![VarBound::NonNegative; 2 * k]);
                for coord in 0..self.dim {
                    let mut row = Vec::with_capacity(2 * k);
                    for g in gens {
                        row.push(g.get(coord).clone());
                    }
                    for g in gens {
                        row.push(g.get(coord).clone());
                    }
                    builder.eq(RVector::new(row), Rat::zero());
                }
                let mut norm_row = vec![Rat::one(); k];
                norm_row.extend(vec![Rat::zero(); k]);
                builder.eq(RVector::new(norm_row), Rat::one());
                let lp = builder.build(RVector::zeros(2 * k))?;
                Ok(solve(&lp)?.status == LpStatus::Infeasible)
            }
            ConeKind::Lex2 => Ok(true),
        }
    }

    /// Membership of a covector in the dual cone K*.
    ///
    /// Halfspace: feasibility of φ = Aᵀλ with λ ≥ 0. Generators: φ·gᵢ ≥ 0
    /// for every generator. Lex2: the closed dual is {(c, 0) : c ≥ 0}.
    pub fn dual_contains(&self, phi: &RVector) -> Result<bool> {
        self.check_dim(phi)?;
        match &self.kind {
            ConeKind::Halfspace(a) => {
                let r = a.rows();
                let mut builder = LpBuilder::new(vec![VarBound::NonNegative; r]);
                let at = a.transpose();
                for coord in 0..self.dim {
                    builder.eq(at.row(coord), phi.get(coord).clone());
                }
                let lp = builder.build(RVector::zeros(r))?;
                Ok(solve(&lp)?.status == LpStatus::Optimal)
            }
            ConeKind::Generators(gens) => {
                for g in gens {
                    if phi.dot(g)?.is_negative() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            ConeKind::Lex2 => Ok(phi.get(1).is_zero() && !phi.get(0).is_negative()),
        }
    }
}

/// Lex order positivity: zero, or first nonzero coordinate positive.
pub fn lex2_nonneg(x: &RVector) -> bool {
    if !x.get(0).is_zero() {
        return x.get(0).is_positive();
    }
    !x.get(1).is_negative()
}

/// The finite set M generating C_M; constructed only through
/// [`validate_positive_set`]-passing data (see `MajorizedSpace`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveSet {
    vectors: Vec<RVector>,
}

impl PositiveSet {
    pub fn new(vectors: Vec<RVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidInput("positive set must be nonempty".into()));
        }
        let dim = vectors[0].dim();
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        Ok(PositiveSet { vectors })
    }

    pub fn vectors(&self) -> &[RVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    /// Matrix whose columns are the elements of M.
    pub fn as_matrix(&self) -> RMatrix {
        RMatrix::from_cols(&self.vectors, self.dim()).expect("uniform dims")
    }

    /// Σ t_j m_j for a coefficient vector over M.
    pub fn combine(&self, t: &RVector) -> Result<RVector> {
        if t.dim() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: t.dim(),
            });
        }
        let mut acc = RVector::zeros(self.dim());
        for (coef, m) in t.iter().zip(&self.vectors) {
            acc = acc.add(&m.scale(coef))?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetValidation {
    Ok,
    /// M[index] is not a positive vector of the cone.
    NotInCone { index: usize },
    /// 0 = Σ t_j m_j with the given convex weights.
    ZeroInConvexHull { weights: RVector },
}

/// Checks that M lies in the cone and that 0 ∉ co(M), the two conditions
/// under which C_M is a proper cone generated by M.
pub fn validate_positive_set(cone: &Cone, m: &PositiveSet) -> Result<SetValidation> {
    if m.dim() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: m.dim(),
        });
    }
    for (i, v) in m.vectors().iter().enumerate() {
        if !cone.contains(v)? {
            return Ok(SetValidation::NotInCone { index: i });
        }
    }
    // 0 ∈ co(M)? Feasibility of Σ t_j m_j = 0, Σ t_j = 1, t ≥ 0.
    let k = m.len();
    let mut builder = LpBuilder::new(vec![VarBound::NonNegative; k]);
    let mat = m.as_matrix();
    for coord in 0..m.dim() {
        builder.eq(mat.row(coord), Rat::zero());
    }
    builder.eq(RVector::new(vec![Rat::one(); k]), Rat::one());
    let lp = builder.build(RVector::zeros(k))?;
    let sol = solve(&lp)?;
    if sol.status == LpStatus::Optimal {
        return Ok(SetValidation::ZeroInConvexHull {
            weights: sol.point.expect("optimal has a point"),
        });
    }
    Ok(SetValidation::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> RVector {
        RVector::from_ints(x)
    }

    #[test]
    fn orthant_membership() {
        let k = Cone::orthant(2);
        assert!(k.contains(&v(&[1, 0])).unwrap());
        assert!(!k.contains(&v(&[1, -1])).unwrap());
        assert!(k.contains(&v(&[0, 0])).unwrap());
        assert!(k.contains(&RVector::from_ints(&[1])).is_err());
    }

    #[test]
    fn lex2_membership() {
        let k = Cone::lex2();
        assert!(k.contains(&v(&[1, -100])).unwrap());
        assert!(!k.contains(&v(&[0, -1])).unwrap());
        assert!(k.contains(&v(&[0, 3])).unwrap());
        assert!(k.contains(&v(&[0, 0])).unwrap());
    }

    #[test]
    fn leq_examples() {
        let k = Cone::orthant(2);
        assert!(k.leq(&v(&[0, 0]), &v(&[1, 2])).unwrap());
        assert!(!k.leq(&v(&[2, 0]), &v(&[1, 2])).unwrap());
        // Non-Archimedean: n·(0,1) ≤ (1,0) for every n.
        let lex = Cone::lex2();
        for n in 1i64..=100 {
            assert!(lex.leq(&v(&[0, n]), &v(&[1, 0])).unwrap());
        }
    }

    #[test]
    fn properness() {
        assert!(Cone::orthant(3).is_proper().unwrap());
        let halfplane = Cone::halfspace(RMatrix::from_ints(&[&[1, 0]], 2), 2).unwrap();
        assert!(!halfplane.is_proper().unwrap());
        assert!(Cone::lex2().is_proper().unwrap());

        let improper =
            Cone::generators(vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])], 2).unwrap();
        assert!(!improper.is_proper().unwrap());
        let proper = Cone::generators(vec![v(&[1, 0]), v(&[1, 1])], 2).unwrap();
        assert!(proper.is_proper().unwrap());
    }

    #[test]
    fn generator_membership_matches_halfspace_orthant() {
        let h = Cone::orthant(2);
        let g = Cone::generators(vec![v(&[1, 0]), v(&[0, 1])], 2).unwrap();
        let samples = [
            v(&[1, 0]),
            v(&[0, 0]),
            v(&[2, 3]),
            v(&[-1, 2]),
            v(&[1, -1]),
            v(&[-2, -2]),
        ];
        for x in &samples {
            assert_eq!(h.contains(x).unwrap(), g.contains(x).unwrap(), "{x:?}");
        }
    }

    #[test]
    fn dual_membership() {
        let k = Cone::orthant(2);
        assert!(k.dual_contains(&v(&[1, 1])).unwrap());
        assert!(!k.dual_contains(&v(&[1, -1])).unwrap());
        let g = Cone::generators(vec![v(&[1, 0]), v(&[1, 1])], 2).unwrap();
        assert!(g.dual_contains(&v(&[0, 1])).unwrap());
        assert!(!g.dual_contains(&v(&[-1, 0])).unwrap());
        assert!(Cone::lex2().dual_contains(&v(&[3, 0])).unwrap());
        assert!(!Cone::lex2().dual_contains(&v(&[1, 1])).unwrap());
    }

    #[test]
    fn positive_set_validation() {
        let k = Cone::orthant(2);
        let ok = PositiveSet::new(vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(validate_positive_set(&k, &ok).unwrap(), SetValidation::Ok);

        let bad = PositiveSet::new(vec![v(&[1, -1])]).unwrap();
        assert_eq!(
            validate_positive_set(&k, &bad).unwrap(),
            SetValidation::NotInCone { index: 0 }
        );

        // Whole plane via an empty halfspace system: 0 is a midpoint of M.
        let whole = Cone::halfspace(RMatrix::zeros(0, 2), 2).unwrap();
        let sym = PositiveSet::new(vec![v(&[1, 0]), v(&[-1, 0])]).unwrap();
        match validate_positive_set(&whole, &sym).unwrap() {
            SetValidation::ZeroInConvexHull { weights } => {
                assert_eq!(weights.sum(), Rat::one());
                assert!(sym.combine(&weights).unwrap().is_zero());
            }
            other => panic!("expected hull violation, got {other:?}"),
        }
    }

    #[test]
    fn leq_order_axioms_sampled() {
        let cones = [
            Cone::orthant(2),
            Cone::generators(vec![v(&[1, 0]), v(&[1, 2])], 2).unwrap(),
            Cone::lex2(),
        ];
        let pts = [v(&[0, 0]), v(&[1, 2]), v(&[2, 2]), v(&[-1, 3]), v(&[1, -4])];
        for k in &cones {
            for x in &pts {
                assert!(k.leq(x, x).unwrap(), "reflexive");
                for y in &pts {
                    for z in &pts {
                        if k.leq(x, y).unwrap() && k.leq(y, z).unwrap() {
                            assert!(k.leq(x, z).unwrap(), "transitive");
                        }
                    }
                    if k.leq(x, y).unwrap() {
                        // translation and positive-scale compatibility
                        let shift = v(&[3, -2]);
                        assert!(k
                            .leq(&x.add(&shift).unwrap(), &y.add(&shift).unwrap())
                            .unwrap());
                        let c = Rat::new(5, 2).unwrap();
                        assert!(k.leq(&x.scale(&c), &y.scale(&c)).unwrap());
                        // antisymmetry on proper cones
                        if k.leq(y, x).unwrap() {
                            assert_eq!(x, y);
                        }
                    }
                }
            }
        }
    }
}
