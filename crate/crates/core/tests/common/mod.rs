//! Brute-force oracle for the optimal-strategy polytope of a margin game,
//! independent of the simplex implementation: vertices are enumerated as
//! basic solutions of active-constraint subsets and solved by Gaussian
//! elimination.

use num::{One, Signed, Zero};
use setchoice::lp::{rat, Rational};
use setchoice::prefs::MarginMatrix;
use setchoice::universe::FeasibleSet;

/// Solves `a x = b` exactly; `None` when the system is singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let factor = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= factor.clone();
        }
        b[col] /= factor;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, v) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f.clone() * v;
                }
                let v = b[col].clone();
                b[r] -= f * v;
            }
        }
    }
    Some(b)
}

/// Rows of all constraints of `{p : p >= 0, sum p = 1, p^T M >= 0}` other
/// than the simplex equality, as (coefficients, is-a-nonnegativity-row).
fn inequality_rows(m: &MarginMatrix) -> Vec<Vec<Rational>> {
    let k = m.len();
    let mut rows = Vec::with_capacity(2 * k);
    for i in 0..k {
        let mut row = vec![Rational::zero(); k];
        row[i] = Rational::one();
        rows.push(row);
    }
    for j in 0..k {
        rows.push((0..k).map(|i| rat(m.margin_at(i, j))).collect());
    }
    rows
}

fn feasible_point(m: &MarginMatrix, p: &[Rational]) -> bool {
    let k = m.len();
    if p.iter().any(|x| x.is_negative()) {
        return false;
    }
    let sum: Rational = p.iter().cloned().sum();
    if !sum.is_one() {
        return false;
    }
    (0..k).all(|j| {
        let v: Rational = (0..k).map(|i| p[i].clone() * rat(m.margin_at(i, j))).sum();
        !v.is_negative()
    })
}

/// Union of the supports of all vertices of the optimal-strategy polytope.
pub fn vertex_support_oracle(m: &MarginMatrix) -> FeasibleSet {
    let k = m.len();
    let rows = inequality_rows(m);
    let mut support = 0u32;

    // choose k-1 active inequalities to pair with the probability equality
    let mut choice: Vec<usize> = (0..k.saturating_sub(1)).collect();
    loop {
        let mut a = vec![vec![Rational::one(); k]];
        a.extend(choice.iter().map(|&r| rows[r].clone()));
        let mut b = vec![Rational::one()];
        b.extend(std::iter::repeat_n(Rational::zero(), choice.len()));
        if let Some(p) = solve(a, b) {
            if feasible_point(m, &p) {
                for (i, x) in p.iter().enumerate() {
                    if x.is_positive() {
                        support |= 1 << m.members()[i];
                    }
                }
            }
        }
        // next (k-1)-combination of 0..rows.len()
        let total = rows.len();
        let want = choice.len();
        let mut pos = want;
        loop {
            if pos == 0 {
                return FeasibleSet::from_mask(support)
                    .expect("the polytope is nonempty, so some vertex exists");
            }
            pos -= 1;
            if choice[pos] < total - (want - pos) {
                choice[pos] += 1;
                for later in (pos + 1)..want {
                    choice[later] = choice[later - 1] + 1;
                }
                break;
            }
        }
    }
}
