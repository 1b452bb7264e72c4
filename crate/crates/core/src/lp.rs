//! Exact linear feasibility `A x = b, x ≥ 0` over the rationals.
//!
//! Phase-one simplex on a dense tableau with one artificial variable per row
//! and Bland's rule, so it terminates without cycling. When the system is
//! infeasible the final tableau yields a Farkas certificate `y` with
//! `yᵀA ≤ 0` and `yᵀb > 0`.

use num_traits::{Signed, Zero};

use crate::rational::{one, zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of `A x = b`.
    Feasible(Vec<Rational>),
    /// `y` with `yᵀA_j ≤ 0` for every column and `yᵀb > 0`.
    Infeasible(Vec<Rational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Decides `A x = b, x ≥ 0`. `a` is row-major with `b.len()` rows of equal
/// length.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let m = b.len();
    assert_eq!(a.len(), m, "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|row| row.len() == n), "ragged constraint matrix");

    // Columns: n structural, m artificial, then the right-hand side.
    let width = n + m + 1;
    let rhs = width - 1;
    let mut signs = Vec::with_capacity(m);
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        signs.push(flip);
        let mut t = vec![zero(); width];
        for (j, v) in row.iter().enumerate() {
            t[j] = if flip { -v } else { v.clone() };
        }
        t[n + i] = one();
        t[rhs] = if flip { -bi } else { bi.clone() };
        tab.push(t);
    }
    // Reduced costs of the phase-one objective `Σ artificials`; the rhs slot
    // holds minus the current objective value.
    let mut cost = vec![zero(); width];
    for row in &tab {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }
    tab.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| tab[m][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let coef = &tab[i][enter];
            if coef.is_positive() {
                let ratio = &tab[i][rhs] / coef;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (pr, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, pr, enter);
        basis[pr] = enter;
    }

    if tab[m][rhs].is_zero() {
        let mut x = vec![zero(); n];
        for (i, &j) in basis.iter().enumerate() {
            if j < n {
                x[j] = tab[i][rhs].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        // y_i = c_{art i} − reduced cost of artificial i, undoing row flips.
        let y = (0..m)
            .map(|i| {
                let yi = one() - &tab[m][n + i];
                if signs[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(tab: &mut [Vec<Rational>], pr: usize, pc: usize) {
    let inv = one() / &tab[pr][pc];
    for v in tab[pr].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = tab[pr].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let factor = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn check_certificate(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) {
        let n = a[0].len();
        for j in 0..n {
            let s: Rational = a.iter().zip(y).map(|(row, yi)| &row[j] * yi).sum();
            assert!(s <= zero(), "column {j}: {s}");
        }
        let yb: Rational = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
        assert!(yb > zero());
    }

    fn check_solution(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) {
        assert!(x.iter().all(|v| !v.is_negative()));
        for (row, bi) in a.iter().zip(b) {
            let s: Rational = row.iter().zip(x).map(|(r, v)| r * v).sum();
            assert_eq!(&s, bi);
        }
    }

    #[test]
    fn solves_two_by_two_convex_combination() {
        // λ₁(3/4, 1/4) + λ₂(1/4, 3/4) = (1/2, 1/2), λ₁ + λ₂ = 1.
        let a = vec![vec![rat(3, 4), rat(1, 4)], vec![rat(1, 4), rat(3, 4)], vec![one(), one()]];
        let b = vec![rat(1, 2), rat(1, 2), one()];
        match solve(&a, &b) {
            Feasibility::Feasible(x) => {
                check_solution(&a, &b, &x);
                assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certifies_infeasibility() {
        // x₁ + x₂ = 1 and x₁ + x₂ = 2.
        let a = vec![vec![one(), one()], vec![one(), one()]];
        let b = vec![one(), int(2)];
        match solve(&a, &b) {
            Feasibility::Infeasible(y) => check_certificate(&a, &b, &y),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn handles_negative_rhs() {
        let a = vec![vec![int(-1), int(1)]];
        let b = vec![int(-3)];
        match solve(&a, &b) {
            Feasibility::Feasible(x) => check_solution(&a, &b, &x),
            other => panic!("{other:?}"),
        }
        let a = vec![vec![int(1), int(2)]];
        match solve(&a, &b) {
            Feasibility::Infeasible(y) => check_certificate(&a, &b, &y),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_rows_do_not_cycle() {
        // Redundant, degenerate system with many ties.
        let a = vec![
            vec![one(), one(), zero(), zero()],
            vec![zero(), one(), one(), zero()],
            vec![one(), int(2), one(), zero()],
            vec![zero(), zero(), zero(), one()],
        ];
        let b = vec![zero(), zero(), zero(), zero()];
        assert!(solve(&a, &b).is_feasible());
    }

    #[test]
    fn empty_system_is_feasible() {
        assert_eq!(solve(&[], &[]), Feasibility::Feasible(vec![]));
    }
}
