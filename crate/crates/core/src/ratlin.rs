//! Exact rational scalars, vectors, matrices and linear-system solving.
//!
//! Everything downstream (simplex pivots, cone membership, norm values)
//! is computed over these types, so all comparisons in the crate are
//! exact equalities rather than tolerances.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept normalized
/// (positive denominator, gcd(|num|, den) = 1, zero is 0/1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::InvalidInput(format!("not a rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rat::from_big(parse_int(n)?, parse_int(d)?),
            None => Ok(Rat(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);

impl Div for Rat {
    type Output = Rat;
    /// Panics on a zero divisor; use [`Rat::checked_div`] for fallible division.
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

// Rationals travel as JSON strings "p/q"; bare integers are accepted on input.
impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct RatVisitor;

impl Visitor<'_> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
        v.parse().map_err(|e| E::custom(format!("{e}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
        Ok(Rat::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
        Ok(Rat(BigRational::from_integer(BigInt::from(v))))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        deserializer.deserialize_any(RatVisitor)
    }
}

/// Dense vector of rationals.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RVector {
    entries: Vec<Rat>,
}

impl RVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RVector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        RVector {
            entries: vec![Rat::zero(); dim],
        }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RVector {
            entries: v.iter().map(|&x| Rat::int(x)).collect(),
        }
    }

    /// Standard basis vector e_i in the given dimension.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = Rat::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Rat) {
        self.entries[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn dot(&self, other: &RVector) -> Result<Rat> {
        self.check_dim(other.dim())?;
        let mut acc = Rat::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += &(a * b);
        }
        Ok(acc)
    }

    pub fn add(&self, other: &RVector) -> Result<RVector> {
        self.check_dim(other.dim())?;
        Ok(RVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &RVector) -> Result<RVector> {
        self.check_dim(other.dim())?;
        Ok(RVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn scale(&self, c: &Rat) -> RVector {
        RVector::new(self.entries.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> RVector {
        RVector::new(self.entries.iter().map(|a| -a).collect())
    }

    pub fn sum(&self) -> Rat {
        let mut acc = Rat::zero();
        for a in &self.entries {
            acc += a;
        }
        acc
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.entries.iter()
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim() != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// Dense row-major matrix of rationals. Zero rows are allowed (an empty
/// halfspace system describes the whole space).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<RVector>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.dim(),
                });
            }
            data.extend(r.entries);
        }
        Ok(RMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn from_ints(rows: &[&[i64]], cols: usize) -> Self {
        Self::from_rows(rows.iter().map(|r| RVector::from_ints(r)).collect(), cols)
            .expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rat) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> RVector {
        RVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> RVector {
        RVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn matvec(&self, x: &RVector) -> Result<RVector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: x.dim(),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Rat::zero();
            for j in 0..self.cols {
                acc += &(self.get(i, j) * x.get(j));
            }
            out.push(acc);
        }
        Ok(RVector::new(out))
    }

    /// Columns are the given vectors.
    pub fn from_cols(cols: &[RVector], dim: usize) -> Result<Self> {
        let rows: Vec<RVector> = (0..dim)
            .map(|i| {
                RVector::new(
                    cols.iter()
                        .map(|c| {
                            if c.dim() != dim {
                                Rat::zero()
                            } else {
                                c.get(i).clone()
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        for c in cols {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        RMatrix::from_rows(rows, cols.len())
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Outcome of an exact linear solve A·x = b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolve {
    Unique(RVector),
    NoSolution,
    /// Consistent but rank-deficient; infinitely many solutions.
    Underdetermined,
}

/// Reduced row echelon form; returns the pivot column of each pivot row.
fn rref(m: &mut RMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row >= m.rows() {
            break;
        }
        let Some(r) = (pivot_row..m.rows()).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if r != pivot_row {
            for j in 0..m.cols() {
                let a = m.get(r, j).clone();
                let b = m.get(pivot_row, j).clone();
                m.set(r, j, b);
                m.set(pivot_row, j, a);
            }
        }
        let inv = m.get(pivot_row, col).recip().expect("pivot is nonzero");
        for j in 0..m.cols() {
            let v = m.get(pivot_row, j) * &inv;
            m.set(pivot_row, j, v);
        }
        for r in 0..m.rows() {
            if r == pivot_row || m.get(r, col).is_zero() {
                continue;
            }
            let factor = m.get(r, col).clone();
            for j in 0..m.cols() {
                let v = m.get(r, j) - &(m.get(pivot_row, j) * &factor);
                m.set(r, j, v);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Exact solve of A·x = b over the rationals.
pub fn solve_linear(a: &RMatrix, b: &RVector) -> Result<LinearSolve> {
    if a.rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.dim(),
        });
    }
    // Augmented [A | b], reduced in place.
    let mut aug = RMatrix::zeros(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols(), b.get(i).clone());
    }
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&a.cols()) {
        return Ok(LinearSolve::NoSolution);
    }
    if pivots.len() < a.cols() {
        return Ok(LinearSolve::Underdetermined);
    }
    let mut x = RVector::zeros(a.cols());
    for (row, &col) in pivots.iter().enumerate() {
        x.set(col, aug.get(row, a.cols()).clone());
    }
    Ok(LinearSolve::Unique(x))
}

/// Exact rank over the rationals.
pub fn rank(a: &RMatrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of the nullspace {x : A·x = 0}.
pub fn nullspace(a: &RMatrix) -> Vec<RVector> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..a.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = RVector::zeros(a.cols());
        v.set(free, Rat::one());
        for (row, &col) in pivots.iter().enumerate() {
            v.set(col, -m.get(row, free));
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(r(1, 3) + r(1, 6), r(1, 2));
        assert_eq!(r(2, 4), r(1, 2));
        assert_eq!(r(7, 3) * r(3, 7), Rat::one());
        assert_eq!(r(1, 2) - r(1, 2), Rat::zero());
        assert!(Rat::new(1, 0).is_err());
        assert!(Rat::one().checked_div(&Rat::zero()).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("-3/7".parse::<Rat>().unwrap(), r(-3, 7));
        assert_eq!("5".parse::<Rat>().unwrap(), Rat::int(5));
        assert_eq!("4/-6".parse::<Rat>().unwrap(), r(-2, 3));
        assert_eq!(r(-2, 3).to_string(), "-2/3");
        assert_eq!(Rat::int(5).to_string(), "5");
        assert!("a/b".parse::<Rat>().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let v: Rat = serde_json::from_str("\"-3/7\"").unwrap();
        assert_eq!(v, r(-3, 7));
        let v: Rat = serde_json::from_str("5").unwrap();
        assert_eq!(v, Rat::int(5));
        assert_eq!(serde_json::to_string(&r(-3, 7)).unwrap(), "\"-3/7\"");
    }

    #[test]
    fn solve_identity() {
        let a = RMatrix::identity(2);
        let b = RVector::from_ints(&[1, -2]);
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolve::Unique(RVector::from_ints(&[1, -2]))
        );
    }

    #[test]
    fn solve_inconsistent() {
        let a = RMatrix::from_ints(&[&[1, 1], &[1, 1]], 2);
        let b = RVector::from_ints(&[1, 2]);
        assert_eq!(solve_linear(&a, &b).unwrap(), LinearSolve::NoSolution);
    }

    #[test]
    fn solve_diagonal() {
        let a = RMatrix::from_ints(&[&[2, 0], &[0, 4]], 2);
        let b = RVector::from_ints(&[1, 1]);
        let expected = RVector::new(vec![r(1, 2), r(1, 4)]);
        assert_eq!(solve_linear(&a, &b).unwrap(), LinearSolve::Unique(expected));
    }

    #[test]
    fn solve_underdetermined() {
        let a = RMatrix::from_ints(&[&[1, 2], &[2, 4]], 2);
        let b = RVector::from_ints(&[1, 2]);
        assert_eq!(solve_linear(&a, &b).unwrap(), LinearSolve::Underdetermined);
        assert!(solve_linear(&a, &RVector::from_ints(&[1])).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RMatrix::identity(3)), 3);
        assert_eq!(rank(&RMatrix::zeros(2, 3)), 0);
        assert_eq!(rank(&RMatrix::from_ints(&[&[1, 2], &[2, 4]], 2)), 1);
    }

    #[test]
    fn nullspace_examples() {
        let ns = nullspace(&RMatrix::from_ints(&[&[1, 2], &[2, 4]], 2));
        assert_eq!(ns.len(), 1);
        let a = RMatrix::from_ints(&[&[1, 2], &[2, 4]], 2);
        assert!(a.matvec(&ns[0]).unwrap().is_zero());
        assert!(nullspace(&RMatrix::identity(3)).is_empty());
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()),
                            a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() + (-a.clone()), Rat::zero());
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.recip().unwrap(), Rat::one());
            }
        }

        #[test]
        fn solve_satisfies_system(rows in 1usize..=5, cols in 1usize..=5,
                                  seed in proptest::collection::vec(-6i64..=6, 64)) {
            let mut it = seed.into_iter().cycle();
            let mut a = RMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, Rat::int(it.next().unwrap()));
                }
            }
            let b = RVector::new((0..rows).map(|_| Rat::int(it.next().unwrap())).collect());
            if let LinearSolve::Unique(x) = solve_linear(&a, &b).unwrap() {
                prop_assert_eq!(a.matvec(&x).unwrap(), b);
            }
        }

        #[test]
        fn rank_equals_transpose_rank(rows in 1usize..=8, cols in 1usize..=8,
                                      seed in proptest::collection::vec(-4i64..=4, 64)) {
            let mut it = seed.into_iter().cycle();
            let mut a = RMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a.set(i, j, Rat::int(it.next().unwrap()));
                }
            }
            prop_assert_eq!(rank(&a), rank(&a.transpose()));
        }
    }
}
