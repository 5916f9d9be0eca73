//! Exact rational linear programming and the maximal-lottery solver.
//!
//! The simplex works on arbitrary-precision rationals throughout, so optima
//! and supports are exact. Pivoting follows Bland's rule, which rules out
//! cycling and makes results deterministic: identical inputs give identical
//! outputs. Speed is a non-goal; these programs have a handful of variables.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::prefs::MarginMatrix;
use crate::universe::{FeasibleSet, Universe};

/// Exact rational scalar used across the crate.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Constraint { coeffs, sense, rhs }
    }
}

/// Maximize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        solution: Vec<Rational>,
        value: Rational,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // each row: coefficients then rhs
    obj: Vec<Rational>,       // reduced costs, rhs slot holds -(objective value)
    basis: Vec<usize>,        // basic variable of each row
    cols: usize,              // number of variable columns
}

impl Tableau {
    fn rhs(row: &[Rational]) -> &Rational {
        row.last().expect("row has an rhs slot")
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let factor = self.rows[r][c].clone();
        debug_assert!(!factor.is_zero());
        for x in self.rows[r].iter_mut() {
            *x /= factor.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= f.clone() * p;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, p) in self.obj.iter_mut().zip(&pivot_row) {
                *x -= f.clone() * p;
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations until optimal or unbounded, using Bland's
    /// rule: lowest eligible entering column, lowest basic index on ratio
    /// ties.
    fn run(&mut self, eligible: impl Fn(usize) -> bool) -> Option<()> {
        loop {
            let entering = (0..self.cols).find(|&j| eligible(j) && self.obj[j] > Rational::zero());
            let Some(c) = entering else {
                return Some(()); // optimal
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][c] > Rational::zero() {
                    let ratio = Self::rhs(&self.rows[r]).clone() / self.rows[r][c].clone();
                    let better = match &leave {
                        None => true,
                        Some((br, best)) => {
                            ratio < *best || (ratio == *best && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return None, // unbounded in direction c
            }
        }
    }
}

/// Solves the program exactly with two-phase simplex.
pub fn simplex_solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    let n = lp.objective.len();
    for (index, con) in lp.constraints.iter().enumerate() {
        if con.coeffs.len() != n {
            return Err(LpError::DimensionMismatch {
                index,
                got: con.coeffs.len(),
                expected: n,
            });
        }
    }

    // Normalize to rhs >= 0 and count auxiliary columns.
    let mut slacks = 0usize;
    let mut arts = 0usize;
    let normalized: Vec<(Vec<Rational>, Sense, Rational)> = lp
        .constraints
        .iter()
        .map(|con| {
            let (coeffs, sense, rhs) = if con.rhs < Rational::zero() {
                let flipped = match con.sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
                (
                    con.coeffs.iter().map(|c| -c.clone()).collect(),
                    flipped,
                    -con.rhs.clone(),
                )
            } else {
                (con.coeffs.clone(), con.sense, con.rhs.clone())
            };
            match sense {
                Sense::Le => slacks += 1,
                Sense::Ge => {
                    slacks += 1;
                    arts += 1;
                }
                Sense::Eq => arts += 1,
            }
            (coeffs, sense, rhs)
        })
        .collect();

    let cols = n + slacks + arts;
    let art_start = n + slacks;
    let mut rows = Vec::with_capacity(normalized.len());
    let mut basis = Vec::with_capacity(normalized.len());
    let mut next_slack = n;
    let mut next_art = art_start;
    for (coeffs, sense, rhs) in &normalized {
        let mut row = vec![Rational::zero(); cols + 1];
        row[..n].clone_from_slice(coeffs);
        *row.last_mut().unwrap() = rhs.clone();
        match sense {
            Sense::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut t = Tableau {
        rows,
        obj: vec![Rational::zero(); cols + 1],
        basis,
        cols,
    };

    if arts > 0 {
        // Phase 1: maximize -(sum of artificials).
        for j in art_start..cols {
            t.obj[j] = -Rational::one();
        }
        let art_rows: Vec<usize> = (0..t.rows.len())
            .filter(|&r| t.basis[r] >= art_start)
            .collect();
        for r in art_rows {
            let row = t.rows[r].clone();
            for (x, p) in t.obj.iter_mut().zip(&row) {
                *x += p.clone();
            }
        }
        t.run(|_| true)
            .expect("phase 1 objective is bounded by zero");
        if !Tableau::rhs(&t.obj).is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot remaining artificials out of the basis or drop their rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art_start {
                match (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue; // redundant constraint
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2: maximize the real objective, artificial columns frozen out.
    t.obj = vec![Rational::zero(); cols + 1];
    t.obj[..n].clone_from_slice(&lp.objective);
    for r in 0..t.rows.len() {
        let b = t.basis[r];
        if !t.obj[b].is_zero() {
            let f = t.obj[b].clone();
            let row = t.rows[r].clone();
            for (x, p) in t.obj.iter_mut().zip(&row) {
                *x -= f.clone() * p;
            }
        }
    }
    if t.run(|j| j < art_start).is_none() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut solution = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            solution[b] = Tableau::rhs(&t.rows[r]).clone();
        }
    }
    let value = -Tableau::rhs(&t.obj).clone();
    Ok(LpOutcome::Optimal { solution, value })
}

/// A probability distribution over the members of a feasible set, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lottery {
    members: Vec<usize>,
    probs: Vec<Rational>,
}

impl Lottery {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn prob(&self, alt: usize) -> &Rational {
        let pos = self
            .members
            .iter()
            .position(|&a| a == alt)
            .expect("alternative not in lottery");
        &self.probs[pos]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Alternatives with strictly positive probability.
    pub fn support(&self) -> FeasibleSet {
        let mask = self
            .members
            .iter()
            .zip(&self.probs)
            .filter(|(_, p)| p.is_positive())
            .fold(0u32, |m, (&alt, _)| m | (1 << alt));
        FeasibleSet::from_mask(mask).expect("probabilities sum to one")
    }

    /// Renders as `p(a)=1/3 p(b)=1/3 p(c)=1/3`.
    pub fn format(&self, universe: &Universe) -> String {
        self.members
            .iter()
            .zip(&self.probs)
            .map(|(&alt, p)| format!("p({})={}", universe.name(alt), p))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn lottery_constraints(m: &MarginMatrix) -> Vec<Constraint> {
    let k = m.len();
    let mut constraints = Vec::with_capacity(k + 1);
    constraints.push(Constraint::new(
        vec![Rational::one(); k],
        Sense::Eq,
        Rational::one(),
    ));
    // p^T M >= 0 componentwise: column j gets sum_i p_i m[i][j] >= 0.
    for j in 0..k {
        let coeffs = (0..k).map(|i| rat(m.margin_at(i, j))).collect();
        constraints.push(Constraint::new(coeffs, Sense::Ge, Rational::zero()));
    }
    constraints
}

fn assert_lottery_optimal(m: &MarginMatrix, probs: &[Rational]) {
    let k = m.len();
    let sum: Rational = probs.iter().cloned().sum();
    assert!(sum.is_one(), "lottery probabilities must sum to one");
    assert!(
        probs.iter().all(|p| !p.is_negative()),
        "lottery probabilities must be nonnegative"
    );
    for j in 0..k {
        let v: Rational = (0..k)
            .map(|i| probs[i].clone() * rat(m.margin_at(i, j)))
            .sum();
        assert!(
            !v.is_negative(),
            "lottery must be an optimal strategy of the margin game"
        );
    }
}

/// An optimal mixed strategy of the symmetric zero-sum game given by a
/// skew-symmetric margin matrix: `p >= 0`, `sum p = 1`, `p^T M >= 0`.
///
/// Such a strategy always exists, so a solver failure here is a bug, not an
/// input condition.
pub fn maximal_lottery(m: &MarginMatrix) -> Lottery {
    let k = m.len();
    let lp = LinearProgram {
        objective: vec![Rational::zero(); k],
        constraints: lottery_constraints(m),
    };
    match simplex_solve(&lp).expect("dimensions are consistent by construction") {
        LpOutcome::Optimal { solution, .. } => {
            assert_lottery_optimal(m, &solution);
            Lottery {
                members: m.members().to_vec(),
                probs: solution,
            }
        }
        outcome => unreachable!("maximal lottery LP must be solvable, got {outcome:?}"),
    }
}

/// Alternatives that receive positive probability in *some* maximal lottery.
///
/// One lottery's support can under-report when optima are not unique, so
/// membership is decided per alternative by maximizing its probability over
/// the whole optimal-strategy polytope.
pub fn essential_support(m: &MarginMatrix) -> FeasibleSet {
    let k = m.len();
    let constraints = lottery_constraints(m);
    let mut mask = 0u32;
    for i in 0..k {
        let mut objective = vec![Rational::zero(); k];
        objective[i] = Rational::one();
        let lp = LinearProgram {
            objective,
            constraints: constraints.clone(),
        };
        match simplex_solve(&lp).expect("dimensions are consistent by construction") {
            LpOutcome::Optimal { solution, value } => {
                assert_lottery_optimal(m, &solution);
                if value.is_positive() {
                    mask |= 1 << m.members()[i];
                }
            }
            outcome => unreachable!("support LP must be solvable, got {outcome:?}"),
        }
    }
    FeasibleSet::from_mask(mask).expect("some alternative has positive probability")
}
