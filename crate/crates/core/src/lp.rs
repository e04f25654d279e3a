//! Exact rational linear programming.
//!
//! Problems are stated as `min c·x  s.t.  A·x ≥ b` with per-variable
//! bounds (free or nonnegative). The solver is a dense two-phase primal
//! simplex with Bland's rule, so it terminates on every input. Optimal
//! solutions come with dual row multipliers, infeasible ones with a
//! Farkas certificate; [`verify_solution`] re-checks either by direct
//! substitution without trusting the solver.
//!
//! [`brute_force_solve`] is an independent oracle for small instances:
//! it enumerates basic points (and recession directions) directly in
//! the original variable space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratlin::{nullspace, solve_linear, LinearSolve, RMatrix, RVector, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarBound {
    Free,
    NonNegative,
}

/// `min objective·x  s.t.  a·x ≥ b`, with `bounds[j]` constraining x_j.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: RVector,
    pub a: RMatrix,
    pub b: RVector,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    pub fn new(objective: RVector, a: RMatrix, b: RVector, bounds: Vec<VarBound>) -> Result<Self> {
        if objective.dim() != a.cols() || bounds.len() != a.cols() {
            return Err(Error::DimensionMismatch {
                expected: a.cols(),
                got: objective.dim(),
            });
        }
        if b.dim() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.dim(),
            });
        }
        Ok(LinearProgram {
            objective,
            a,
            b,
            bounds,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `point`, `value`, `duals` are present exactly when
/// Optimal; `farkas` when Infeasible (the brute-force oracle reports
/// status and value only, without certificates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Option<RVector>,
    pub value: Option<Rat>,
    pub duals: Option<RVector>,
    pub farkas: Option<RVector>,
}

impl LpSolution {
    fn optimal(point: RVector, value: Rat, duals: RVector) -> Self {
        LpSolution {
            status: LpStatus::Optimal,
            point: Some(point),
            value: Some(value),
            duals: Some(duals),
            farkas: None,
        }
    }

    fn infeasible(farkas: Option<RVector>) -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            point: None,
            value: None,
            duals: None,
            farkas,
        }
    }

    fn unbounded() -> Self {
        LpSolution {
            status: LpStatus::Unbounded,
            point: None,
            value: None,
            duals: None,
            farkas: None,
        }
    }
}

/// Which original variable (if any) a standard-form column stands for.
#[derive(Debug, Clone, Copy)]
enum ColKind {
    /// Nonnegative original variable j.
    Var(usize),
    /// Positive part of free variable j.
    PosPart(usize),
    /// Negative part of free variable j.
    NegPart(usize),
    /// Slack of an internal row; contributes nothing to the point.
    Slack,
}

struct Tableau {
    /// rows[i][j], the current B⁻¹-transformed column entries.
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    /// Reduced-cost row for the running phase.
    red: Vec<Rat>,
    /// Basis column per row; artificial of internal row i is `ncols + i`.
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let piv = self.rows[r][e].clone();
        let inv = piv.recip().expect("pivot entry is nonzero");
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for j in 0..self.ncols {
                let v = &self.rows[i][j] - &(&self.rows[r][j] * &f);
                self.rows[i][j] = v;
            }
            self.rhs[i] = &self.rhs[i] - &(&self.rhs[r] * &f);
        }
        if !self.red[e].is_zero() {
            let f = self.red[e].clone();
            for j in 0..self.ncols {
                let v = &self.red[j] - &(&self.rows[r][j] * &f);
                self.red[j] = v;
            }
        }
        self.basis[r] = e;
    }

    /// Bland's rule: smallest-index entering column, smallest basis id on
    /// ratio ties. Returns false when no entering column exists (optimal),
    /// errors... never; `None` leaving row means unbounded.
    fn run(&mut self) -> SimplexOutcome {
        loop {
            let Some(e) = (0..self.ncols).find(|&j| self.red[j].is_negative()) else {
                return SimplexOutcome::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][e];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((bi, best)) => {
                        if ratio < *best || (ratio == *best && self.basis[i] < self.basis[*bi]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return SimplexOutcome::Unbounded,
            }
        }
    }
}

#[derive(PartialEq, Eq)]
enum SimplexOutcome {
    Optimal,
    Unbounded,
}

struct StandardForm {
    kinds: Vec<ColKind>,
    /// Objective per standard-form column.
    cost: Vec<Rat>,
    /// Original (untransformed) column data over internal rows.
    col_data: Vec<RVector>,
    /// Row sign applied to original row i (`false` = negated).
    positive_rhs: Vec<bool>,
}

fn build_standard_form(lp: &LinearProgram) -> (StandardForm, Tableau) {
    let m = lp.num_rows();
    let n = lp.num_vars();

    // Internal row i is ±(original row i), signed so its rhs is >= 0 with
    // the slack able to serve as the initial basic variable when rhs
    // comes from b_i <= 0; rows with b_i > 0 start with an artificial.
    let positive_rhs: Vec<bool> = (0..m).map(|i| lp.b.get(i).is_positive()).collect();
    let row_sign =
        |i: usize| -> Rat { if positive_rhs[i] { Rat::one() } else { -Rat::one() } };

    let mut kinds = Vec::new();
    let mut cost = Vec::new();
    let mut col_data = Vec::new();
    for j in 0..n {
        let col: Vec<Rat> = (0..m).map(|i| lp.a.get(i, j) * &row_sign(i)).collect();
        match lp.bounds[j] {
            VarBound::NonNegative => {
                kinds.push(ColKind::Var(j));
                cost.push(lp.objective.get(j).clone());
                col_data.push(RVector::new(col));
            }
            VarBound::Free => {
                kinds.push(ColKind::PosPart(j));
                cost.push(lp.objective.get(j).clone());
                col_data.push(RVector::new(col.clone()));
                kinds.push(ColKind::NegPart(j));
                cost.push(-lp.objective.get(j));
                col_data.push(RVector::new(col.into_iter().map(|v| -v).collect()));
            }
        }
    }
    for i in 0..m {
        kinds.push(ColKind::Slack);
        cost.push(Rat::zero());
        let mut col = RVector::zeros(m);
        col.set(i, -row_sign(i));
        col_data.push(col);
    }

    let ncols = kinds.len();
    let rows: Vec<Vec<Rat>> = (0..m)
        .map(|i| (0..ncols).map(|j| col_data[j].get(i).clone()).collect())
        .collect();
    let rhs: Vec<Rat> = (0..m).map(|i| lp.b.get(i) * &row_sign(i)).collect();
    let basis: Vec<usize> = (0..m)
        .map(|i| {
            if positive_rhs[i] {
                ncols + i // artificial
            } else {
                // slack column of internal row i
                n + lp.bounds.iter().filter(|b| **b == VarBound::Free).count() + i
            }
        })
        .collect();

    let tableau = Tableau {
        rows,
        rhs,
        red: vec![Rat::zero(); ncols],
        basis,
        ncols,
    };
    (
        StandardForm {
            kinds,
            cost,
            col_data,
            positive_rhs,
        },
        tableau,
    )
}

/// Dual multipliers of the current basis: solves Bᵀy = c_B over the
/// surviving internal rows, then maps back to original row indexing
/// (deleted redundant rows get multiplier 0, negated rows flip sign).
fn basis_duals(
    sf: &StandardForm,
    t: &Tableau,
    costs: &dyn Fn(usize) -> Rat,
    orig_rows: &[usize],
    total_rows: usize,
) -> RVector {
    let m = t.rows.len();
    let mut bt = RMatrix::zeros(m, m);
    let mut cb = RVector::zeros(m);
    for (r, &col) in t.basis.iter().enumerate() {
        cb.set(r, costs(col));
        for i in 0..m {
            let entry = if col >= t.ncols {
                // artificial of internal row (col - ncols): column e_that_row
                if orig_rows[i] == col - t.ncols {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            } else {
                sf.col_data[col].get(orig_rows[i]).clone()
            };
            // Bᵀ: row r of Bᵀ is column r of B
            bt.set(r, i, entry);
        }
    }
    let y = match solve_linear(&bt, &cb).expect("square system") {
        LinearSolve::Unique(y) => y,
        _ => unreachable!("basis matrix is nonsingular"),
    };
    let mut out = RVector::zeros(total_rows);
    for (i, &orig) in orig_rows.iter().enumerate() {
        let v = if sf.positive_rhs[orig] {
            y.get(i).clone()
        } else {
            -y.get(i)
        };
        out.set(orig, v);
    }
    out
}

/// Exact simplex solve with certificates.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    let m = lp.num_rows();
    let n = lp.num_vars();
    let (sf, mut t) = build_standard_form(lp);
    let mut orig_rows: Vec<usize> = (0..m).collect();

    // Phase 1: minimize the artificial sum when any row started with one.
    if t.basis.iter().any(|&b| b >= t.ncols) {
        for j in 0..t.ncols {
            let mut red = Rat::zero();
            for (i, &b) in t.basis.iter().enumerate() {
                if b >= t.ncols {
                    red -= &t.rows[i][j];
                }
            }
            t.red[j] = red;
        }
        let outcome = t.run();
        debug_assert!(outcome == SimplexOutcome::Optimal, "phase 1 is bounded below");
        let mut art_sum = Rat::zero();
        for (i, &b) in t.basis.iter().enumerate() {
            if b >= t.ncols {
                art_sum += &t.rhs[i];
            }
        }
        if art_sum.is_positive() {
            let farkas = basis_duals(
                &sf,
                &t,
                &|col| if col >= t.ncols { Rat::one() } else { Rat::zero() },
                &orig_rows,
                m,
            );
            return Ok(LpSolution::infeasible(Some(farkas)));
        }
        // Drive remaining (degenerate) artificials out of the basis;
        // rows they cannot leave are redundant and get dropped.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= t.ncols {
                match (0..t.ncols).find(|&j| !t.rows[r][j].is_zero() && !t.basis.contains(&j)) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        orig_rows.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2 over the true objective.
    for j in 0..t.ncols {
        let mut red = sf.cost[j].clone();
        for (i, &b) in t.basis.iter().enumerate() {
            red -= &(&sf.cost[b] * &t.rows[i][j]);
        }
        t.red[j] = red;
    }
    match t.run() {
        SimplexOutcome::Unbounded => Ok(LpSolution::unbounded()),
        SimplexOutcome::Optimal => {
            let mut point = RVector::zeros(n);
            for (i, &b) in t.basis.iter().enumerate() {
                match sf.kinds[b] {
                    ColKind::Var(j) | ColKind::PosPart(j) => {
                        let v = point.get(j) + &t.rhs[i];
                        point.set(j, v);
                    }
                    ColKind::NegPart(j) => {
                        let v = point.get(j) - &t.rhs[i];
                        point.set(j, v);
                    }
                    ColKind::Slack => {}
                }
            }
            let value = lp.objective.dot(&point)?;
            let duals = basis_duals(&sf, &t, &|col| sf.cost[col].clone(), &orig_rows, m);
            Ok(LpSolution::optimal(point, value, duals))
        }
    }
}

/// Re-checks every certificate in `sol` by direct substitution.
///
/// Optimal: primal feasibility, value = c·x, dual feasibility of the row
/// multipliers and exact strong duality yᵀb = value. Infeasible: the
/// Farkas conditions y ≥ 0, yᵀA = 0 on free / ≤ 0 on nonnegative
/// variables, yᵀb > 0. Unbounded carries no certificate and only the
/// absence of the other fields is checked.
pub fn verify_solution(lp: &LinearProgram, sol: &LpSolution) -> bool {
    match sol.status {
        LpStatus::Optimal => {
            let (Some(point), Some(value), Some(duals)) = (&sol.point, &sol.value, &sol.duals)
            else {
                return false;
            };
            if point.dim() != lp.num_vars() || duals.dim() != lp.num_rows() {
                return false;
            }
            let Ok(ax) = lp.a.matvec(point) else {
                return false;
            };
            for i in 0..lp.num_rows() {
                if ax.get(i) < lp.b.get(i) {
                    return false;
                }
            }
            for (j, bound) in lp.bounds.iter().enumerate() {
                if *bound == VarBound::NonNegative && point.get(j).is_negative() {
                    return false;
                }
            }
            if lp.objective.dot(point).ok().as_ref() != Some(value) {
                return false;
            }
            if duals.iter().any(Rat::is_negative) {
                return false;
            }
            let Ok(yta) = lp.a.transpose().matvec(duals) else {
                return false;
            };
            for (j, bound) in lp.bounds.iter().enumerate() {
                let cj = lp.objective.get(j);
                match bound {
                    VarBound::Free => {
                        if yta.get(j) != cj {
                            return false;
                        }
                    }
                    VarBound::NonNegative => {
                        if yta.get(j) > cj {
                            return false;
                        }
                    }
                }
            }
            duals.dot(&lp.b).ok().as_ref() == Some(value)
        }
        LpStatus::Infeasible => {
            let Some(farkas) = &sol.farkas else {
                return false;
            };
            if farkas.dim() != lp.num_rows() || farkas.iter().any(Rat::is_negative) {
                return false;
            }
            let Ok(yta) = lp.a.transpose().matvec(farkas) else {
                return false;
            };
            for (j, bound) in lp.bounds.iter().enumerate() {
                match bound {
                    VarBound::Free => {
                        if !yta.get(j).is_zero() {
                            return false;
                        }
                    }
                    VarBound::NonNegative => {
                        if yta.get(j).is_positive() {
                            return false;
                        }
                    }
                }
            }
            farkas.dot(&lp.b).map(|v| v.is_positive()).unwrap_or(false)
        }
        LpStatus::Unbounded => {
            sol.point.is_none() && sol.value.is_none() && sol.duals.is_none()
        }
    }
}

/// Incremental construction of a `LinearProgram` in `A·x ≥ b` form.
///
/// Equality constraints are encoded as a ≥/≤ row pair; the returned row
/// indices let callers fold the corresponding Farkas multipliers back
/// into a single signed multiplier (λ = y₊ − y₋).
pub struct LpBuilder {
    num_vars: usize,
    bounds: Vec<VarBound>,
    rows: Vec<RVector>,
    rhs: Vec<Rat>,
}

impl LpBuilder {
    pub fn new(bounds: Vec<VarBound>) -> Self {
        LpBuilder {
            num_vars: bounds.len(),
            bounds,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `row·x ≥ rhs`; returns the row index.
    pub fn ge(&mut self, row: RVector, rhs: Rat) -> usize {
        assert_eq!(row.dim(), self.num_vars);
        self.rows.push(row);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    /// Adds `row·x = rhs` as a (≥, ≤) row pair; returns both indices.
    pub fn eq(&mut self, row: RVector, rhs: Rat) -> (usize, usize) {
        let ge = self.ge(row.clone(), rhs.clone());
        let le = self.ge(row.neg(), -rhs);
        (ge, le)
    }

    pub fn build(self, objective: RVector) -> Result<LinearProgram> {
        LinearProgram::new(
            objective,
            RMatrix::from_rows(self.rows, self.num_vars)?,
            RVector::new(self.rhs),
            self.bounds,
        )
    }
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        let remaining = k - acc.len();
        for i in start..=n.saturating_sub(remaining) {
            acc.push(i);
            rec(i + 1, n, k, acc, f);
            acc.pop();
        }
    }
    if k > n {
        return;
    }
    let mut acc = Vec::with_capacity(k);
    rec(0, n, k, &mut acc, &mut f);
}

/// Independent oracle: enumerates basic points of the combined system
/// (constraint rows plus nonnegativity rows) and recession directions
/// over the same bases. Any lineality in the feasible set is pinned to
/// zero first so that basic points are guaranteed to exist.
///
/// Runtime is combinatorial in the guard bounds (≤ 8 variables,
/// ≤ 12 rows); certificates are not produced.
pub fn brute_force_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    if n > 8 || m > 12 {
        return Err(Error::SizeGuard(format!(
            "brute force limited to 8 variables and 12 rows, got {n} x {m}"
        )));
    }

    // Combined system R x >= r.
    let mut rows: Vec<RVector> = (0..m).map(|i| lp.a.row(i)).collect();
    let mut rhs: Vec<Rat> = lp.b.iter().cloned().collect();
    for (j, bound) in lp.bounds.iter().enumerate() {
        if *bound == VarBound::NonNegative {
            rows.push(RVector::unit(n, j));
            rhs.push(Rat::zero());
        }
    }

    // Pin the lineality space to zero (feasibility and, whenever the
    // objective is constant along it, the optimal value are unchanged).
    let lineality = nullspace(&RMatrix::from_rows(rows.clone(), n)?);
    let objective_moves_along_lineality = lineality
        .iter()
        .any(|d| !lp.objective.dot(d).expect("dims match").is_zero());
    for d in &lineality {
        rows.push(d.clone());
        rhs.push(Rat::zero());
        rows.push(d.neg());
        rhs.push(Rat::zero());
    }
    let nrows = rows.len();
    let feasible = |x: &RVector| -> bool {
        rows.iter()
            .zip(&rhs)
            .all(|(row, ri)| row.dot(x).expect("dims match") >= *ri)
    };

    let mut best: Option<(RVector, Rat)> = None;
    let mut any_vertex = false;
    combinations(nrows, n, |subset| {
        let a = RMatrix::from_rows(subset.iter().map(|&i| rows[i].clone()).collect(), n)
            .expect("dims match");
        let b = RVector::new(subset.iter().map(|&i| rhs[i].clone()).collect());
        if let Ok(LinearSolve::Unique(x)) = solve_linear(&a, &b) {
            if feasible(&x) {
                any_vertex = true;
                let v = lp.objective.dot(&x).expect("dims match");
                if best.as_ref().map(|(_, bv)| v < *bv).unwrap_or(true) {
                    best = Some((x, v));
                }
            }
        }
    });
    if !any_vertex {
        return Ok(LpSolution::infeasible(None));
    }
    if objective_moves_along_lineality {
        return Ok(LpSolution::unbounded());
    }

    // Extreme rays of the (pointed) recession cone: n-1 tight rows.
    let recession = |d: &RVector| -> bool {
        rows.iter()
            .all(|row| !row.dot(d).expect("dims match").is_negative())
    };
    let mut unbounded = false;
    if n >= 1 {
        combinations(nrows, n - 1, |subset| {
            if unbounded {
                return;
            }
            let a = RMatrix::from_rows(subset.iter().map(|&i| rows[i].clone()).collect(), n)
                .expect("dims match");
            let ns = nullspace(&a);
            if ns.len() != 1 {
                return;
            }
            for d in [ns[0].clone(), ns[0].neg()] {
                if recession(&d) && lp.objective.dot(&d).expect("dims match").is_negative() {
                    unbounded = true;
                }
            }
        });
    }
    if unbounded {
        return Ok(LpSolution::unbounded());
    }

    let (point, value) = best.expect("feasible basic point exists");
    Ok(LpSolution {
        status: LpStatus::Optimal,
        point: Some(point),
        value: Some(value),
        duals: None,
        farkas: None,
    })
}
