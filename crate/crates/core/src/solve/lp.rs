//! Exact feasibility of `A x = b, x ≥ 0` by the phase-one simplex method.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! systems. An infeasible system yields a Farkas vector `y` with
//! `yᵀA ≤ 0` and `yᵀb > 0`, read off the final tableau.

use num_traits::{One, Signed, Zero};

use crate::dist::Rational;
use crate::error::{Error, Result};

/// Equality-constrained feasibility problem over nonnegative variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    cols: usize,
}

/// A Farkas certificate of infeasibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub y: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    Infeasible(Certificate),
}

impl LpProblem {
    /// Rows of `a` must all have length `cols`, and `b` one entry per row.
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>, cols: usize) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Domain(format!(
                "{} rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        if let Some(i) = a.iter().position(|row| row.len() != cols) {
            return Err(Error::Domain(format!(
                "row {i} does not have {cols} columns"
            )));
        }
        Ok(LpProblem { a, b, cols })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    /// Checks `x ≥ 0` and `A x = b` exactly.
    pub fn is_solution(&self, x: &[Rational]) -> bool {
        x.len() == self.cols
            && x.iter().all(|v| !v.is_negative())
            && self.a.iter().zip(&self.b).all(|(row, bi)| {
                let lhs: Rational = row
                    .iter()
                    .zip(x)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, v)| c * v)
                    .sum();
                lhs == *bi
            })
    }
}

/// Checks `yᵀA ≤ 0` on every column and `yᵀb > 0`.
pub fn verify_certificate(problem: &LpProblem, cert: &Certificate) -> bool {
    if cert.y.len() != problem.rows() {
        return false;
    }
    let yb: Rational = cert.y.iter().zip(&problem.b).map(|(y, b)| y * b).sum();
    if !yb.is_positive() {
        return false;
    }
    (0..problem.cols).all(|j| {
        let s: Rational = cert
            .y
            .iter()
            .zip(&problem.a)
            .filter(|(y, row)| !y.is_zero() && !row[j].is_zero())
            .map(|(y, row)| y * &row[j])
            .sum();
        !s.is_positive()
    })
}

/// Decides feasibility exactly.
pub fn lp_feasible(problem: &LpProblem) -> LpOutcome {
    let m = problem.rows();
    let n = problem.cols;
    let width = n + m + 1;
    let rhs = n + m;

    let signs: Vec<bool> = problem.b.iter().map(|b| b.is_negative()).collect();
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        for j in 0..n {
            row[j] = if signs[i] {
                -problem.a[i][j].clone()
            } else {
                problem.a[i][j].clone()
            };
        }
        row[n + i] = Rational::one();
        row[rhs] = problem.b[i].abs();
        tableau.push(row);
    }
    // Phase-one reduced costs: artificial columns cost 1, the rest 0.
    let mut cost = vec![Rational::zero(); width];
    for row in &tableau {
        for j in 0..n {
            if !row[j].is_zero() {
                cost[j] -= &row[j];
            }
        }
        cost[rhs] -= &row[rhs];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best = Rational::zero();
        for i in 0..m {
            let coef = &tableau[i][enter];
            if !coef.is_positive() {
                continue;
            }
            let ratio = &tableau[i][rhs] / coef;
            let better = match leave {
                None => true,
                Some(l) => ratio < best || (ratio == best && basis[i] < basis[l]),
            };
            if better {
                best = ratio;
                leave = Some(i);
            }
        }
        // Phase one is bounded below by zero, so a ratio test always succeeds.
        let Some(r) = leave else { break };
        pivot(&mut tableau, &mut cost, r, enter);
        basis[r] = enter;
    }

    // cost[rhs] holds minus the phase-one objective.
    if cost[rhs].is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &var) in basis.iter().enumerate() {
            if var < n {
                x[var] = tableau[i][rhs].clone();
            }
        }
        return LpOutcome::Feasible(x);
    }
    // Duals of the sign-normalised system: w_k = 1 − (reduced cost of artificial k).
    let y = (0..m)
        .map(|k| {
            let w = Rational::one() - &cost[n + k];
            if signs[k] {
                -w
            } else {
                w
            }
        })
        .collect();
    LpOutcome::Infeasible(Certificate { y })
}

fn pivot(tableau: &mut [Vec<Rational>], cost: &mut [Rational], r: usize, c: usize) {
    let inv = Rational::one() / &tableau[r][c];
    for v in tableau[r].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = tableau[r].clone();
    let support: Vec<usize> = (0..pivot_row.len())
        .filter(|&j| !pivot_row[j].is_zero())
        .collect();
    let eliminate = |row: &mut [Rational]| {
        let factor = row[c].clone();
        if factor.is_zero() {
            return;
        }
        for &j in &support {
            let delta = &factor * &pivot_row[j];
            row[j] -= delta;
        }
    };
    for (i, row) in tableau.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(cost);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ratio;

    fn int(v: i64) -> Rational {
        ratio(v, 1)
    }

    fn problem(a: &[&[i64]], b: &[i64]) -> LpProblem {
        let cols = a.first().map_or(0, |r| r.len());
        LpProblem::new(
            a.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
            b.iter().map(|&v| int(v)).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn single_variable_feasible() {
        let p = problem(&[&[1]], &[1]);
        assert_eq!(lp_feasible(&p), LpOutcome::Feasible(vec![int(1)]));
    }

    #[test]
    fn single_variable_infeasible_certificate() {
        let p = problem(&[&[1]], &[-1]);
        match lp_feasible(&p) {
            LpOutcome::Infeasible(c) => {
                assert_eq!(c.y, vec![int(-1)]);
                assert!(verify_certificate(&p, &c));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn no_columns_is_infeasible_when_rhs_nonzero() {
        let p = LpProblem::new(vec![vec![]], vec![int(1)], 0).unwrap();
        let LpOutcome::Infeasible(c) = lp_feasible(&p) else {
            panic!()
        };
        assert!(verify_certificate(&p, &c));
    }

    #[test]
    fn redundant_rows_are_handled() {
        // x + y = 1 twice, x = 1/2 implied by a third row.
        let p = LpProblem::new(
            vec![
                vec![int(1), int(1)],
                vec![int(1), int(1)],
                vec![int(2), int(0)],
            ],
            vec![int(1), int(1), int(1)],
            2,
        )
        .unwrap();
        let LpOutcome::Feasible(x) = lp_feasible(&p) else {
            panic!()
        };
        assert!(p.is_solution(&x));
        assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        assert!(LpProblem::new(vec![vec![int(1)]], vec![], 1).is_err());
        assert!(LpProblem::new(vec![vec![int(1), int(2)]], vec![int(0)], 1).is_err());
    }

    #[test]
    fn tampered_certificate_fails() {
        let p = problem(&[&[1, 1], &[1, -1]], &[1, 3]);
        let LpOutcome::Infeasible(c) = lp_feasible(&p) else {
            panic!()
        };
        assert!(verify_certificate(&p, &c));
        let mut bad = c.clone();
        bad.y[0] = -bad.y[0].clone() - int(5);
        assert!(!verify_certificate(&p, &bad));
    }
}
