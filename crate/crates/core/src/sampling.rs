//! Seeded random generators for property suites: proper cones, positive
//! sets, ideal vectors, small LPs, and base-normalized positive pairs.
//! Everything is driven by a caller-supplied ChaCha stream so reports
//! are reproducible from the seed alone.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{Cone, ConeKind, PositiveSet};
use crate::error::{Error, Result};
use crate::lp::{solve, LinearProgram, LpStatus, VarBound};
use crate::majorize::MajorizedSpace;
use crate::ratlin::{rank, solve_linear, LinearSolve, RMatrix, RVector, Rat};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational in [−4, 4] with denominator at most 3.
pub fn rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-4..=4), rng.gen_range(1..=3)).expect("nonzero denominator")
}

/// Rational in [0, 4] with denominator at most 3.
pub fn nonneg_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(0..=4), rng.gen_range(1..=3)).expect("nonzero denominator")
}

pub fn vector(rng: &mut ChaCha8Rng, dim: usize) -> RVector {
    RVector::new((0..dim).map(|_| rat(rng)).collect())
}

/// Random proper cone: either a full-rank square halfspace system or a
/// small generator family, resampled until proper.
pub fn proper_cone(rng: &mut ChaCha8Rng, dim: usize) -> Cone {
    loop {
        if rng.gen_bool(0.5) {
            let a = RMatrix::from_rows((0..dim).map(|_| vector(rng, dim)).collect(), dim)
                .expect("uniform dims");
            if rank(&a) == dim {
                return Cone::halfspace(a, dim).expect("dims match");
            }
        } else {
            let count = rng.gen_range(1..=dim + 1);
            let gens: Vec<RVector> = (0..count)
                .map(|_| loop {
                    let g = vector(rng, dim);
                    if !g.is_zero() {
                        break g;
                    }
                })
                .collect();
            let cone = Cone::generators(gens, dim).expect("nonzero generators");
            if cone.is_proper().expect("no dim errors") {
                return cone;
            }
        }
    }
}

/// Nonzero element of K, sampled in the native representation.
pub fn positive_vector(rng: &mut ChaCha8Rng, cone: &Cone) -> RVector {
    match cone.kind() {
        ConeKind::Halfspace(a) => loop {
            // x = A⁻¹y for y ≥ 0; the sampler only builds square
            // full-rank systems, so the solve is unique.
            let y = RVector::new((0..a.rows()).map(|_| nonneg_rat(rng)).collect());
            if y.is_zero() {
                continue;
            }
            match solve_linear(a, &y).expect("square system") {
                LinearSolve::Unique(x) => return x,
                _ => unreachable!("sampled halfspace systems are invertible"),
            }
        },
        ConeKind::Generators(gens) => loop {
            let s: Vec<Rat> = (0..gens.len()).map(|_| nonneg_rat(rng)).collect();
            if s.iter().all(Rat::is_zero) {
                continue;
            }
            let mut acc = RVector::zeros(cone.dim());
            for (c, g) in s.iter().zip(gens) {
                acc = acc.add(&g.scale(c)).expect("uniform dims");
            }
            // properness makes a positive combination of nonzero
            // generators nonzero
            return acc;
        },
        ConeKind::Lex2 => {
            let a = nonneg_rat(rng);
            let b = if a.is_zero() {
                Rat::new(rng.gen_range(1..=4), rng.gen_range(1..=3)).expect("nonzero")
            } else {
                rat(rng)
            };
            RVector::new(vec![a, b])
        }
    }
}

/// Random (E_M, p_M) instance over a random proper cone.
pub fn instance(rng: &mut ChaCha8Rng, dim: usize, set_size: usize) -> MajorizedSpace {
    loop {
        let cone = proper_cone(rng, dim);
        let m: Vec<RVector> = (0..set_size).map(|_| positive_vector(rng, &cone)).collect();
        let set = PositiveSet::new(m).expect("nonempty");
        if let Ok(space) = MajorizedSpace::new(cone, set) {
            return space;
        }
    }
}

/// Element of E_M: a signed combination Σ c_j m_j, which ±Σ|c_j| m_j
/// dominates.
pub fn ideal_vector(rng: &mut ChaCha8Rng, space: &MajorizedSpace) -> RVector {
    let mut acc = RVector::zeros(space.dim());
    for m in space.set().vectors() {
        acc = acc.add(&m.scale(&rat(rng))).expect("uniform dims");
    }
    acc
}

/// Random small LP with integer data, mixed bounds.
pub fn small_lp(rng: &mut ChaCha8Rng, vars: usize, rows: usize) -> LinearProgram {
    let int = |rng: &mut ChaCha8Rng| Rat::int(rng.gen_range(-3..=3));
    let objective = RVector::new((0..vars).map(|_| int(rng)).collect());
    let a = RMatrix::from_rows(
        (0..rows)
            .map(|_| RVector::new((0..vars).map(|_| int(rng)).collect()))
            .collect(),
        vars,
    )
    .expect("uniform dims");
    let b = RVector::new((0..rows).map(|_| int(rng)).collect());
    let bounds = (0..vars)
        .map(|_| {
            if rng.gen_bool(0.5) {
                VarBound::Free
            } else {
                VarBound::NonNegative
            }
        })
        .collect();
    LinearProgram::new(objective, a, b, bounds).expect("dims match")
}

/// A functional strictly positive on K \ {0}: for a square full-rank
/// halfspace system, φ = Aᵀ1; for generators, any φ with φ·gᵢ ≥ 1,
/// which exists because proper cones are pointed.
pub fn strictly_positive_functional(cone: &Cone) -> Result<RVector> {
    match cone.kind() {
        ConeKind::Halfspace(a) => {
            if rank(a) != cone.dim() || a.rows() != cone.dim() {
                return Err(Error::InvalidInput(
                    "need a square full-rank halfspace system".into(),
                ));
            }
            a.transpose().matvec(&RVector::new(vec![Rat::one(); a.rows()]))
        }
        ConeKind::Generators(gens) => {
            let dim = cone.dim();
            let rows: Vec<RVector> = gens.to_vec();
            let lp = LinearProgram::new(
                RVector::zeros(dim),
                RMatrix::from_rows(rows, dim)?,
                RVector::new(vec![Rat::one(); gens.len()]),
                vec![VarBound::Free; dim],
            )?;
            let sol = solve(&lp)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::InvalidInput(
                    "cone admits no strictly positive functional (not pointed)".into(),
                ));
            }
            Ok(sol.point.expect("optimal has a point"))
        }
        ConeKind::Lex2 => Err(Error::InvalidInput(
            "the lexicographic cone has no strictly positive functional".into(),
        )),
    }
}

/// Positive pair normalized onto a common base slice φ(v) = φ(w) = 1
/// for a strictly positive φ — the Archimedean regime in which every
/// two-element set is coherent.
pub fn normalized_positive_pair(rng: &mut ChaCha8Rng, cone: &Cone) -> Result<(RVector, RVector)> {
    let phi = strictly_positive_functional(cone)?;
    let pick = |rng: &mut ChaCha8Rng| -> Result<RVector> {
        let x = positive_vector(rng, cone);
        let scale = phi.dot(&x)?;
        assert!(scale.is_positive(), "φ is strictly positive on K \\ {{0}}");
        Ok(x.scale(&scale.recip()?))
    };
    Ok((pick(rng)?, pick(rng)?))
}
