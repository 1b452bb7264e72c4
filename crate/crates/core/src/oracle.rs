//! Slow, independent reference computations for tests.
//!
//! Nothing here calls the simplex solver or the polytope module: hull
//! membership enumerates generator subsets small enough to be affinely
//! independent and solves each square system by exact elimination.

use crate::rational::{one, zero, Rational};
use crate::space::Measure;

/// Solves `M λ = rhs` exactly. Returns the unique solution, or `None` if the
/// system is inconsistent or underdetermined.
pub fn solve_unique(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        let found = (pivot_row..rows.len()).find(|&r| rows[r][col] != zero())?;
        rows.swap(pivot_row, found);
        rhs.swap(pivot_row, found);
        let p = rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= &p;
        }
        rhs[pivot_row] = &rhs[pivot_row] / &p;
        let pivot = rows[pivot_row].clone();
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != zero() {
                let k = rows[r][col].clone();
                for (v, pv) in rows[r].iter_mut().zip(&pivot) {
                    *v -= &k * pv;
                }
                let delta = &k * &rhs[pivot_row];
                rhs[r] -= delta;
            }
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| *v != zero()) {
        return None;
    }
    Some(rhs[..cols].to_vec())
}

fn subsets_up_to(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..1 << n).filter(move |m| m.count_ones() as usize <= k).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

/// `xi ∈ conv(gens)` by Carathéodory: some affinely independent subset of at
/// most `|X|` generators carries `xi` with nonnegative coefficients.
pub fn hull_contains(xi: &Measure, gens: &[Measure]) -> bool {
    let dim = xi.space().len();
    subsets_up_to(gens.len(), dim).any(|subset| {
        // Rows: one per point, plus the sum of coefficients.
        let mut rows: Vec<Vec<Rational>> =
            (0..dim).map(|x| subset.iter().map(|&g| gens[g].weight(x).clone()).collect()).collect();
        rows.push(vec![one(); subset.len()]);
        let mut rhs: Vec<Rational> = xi.weights().to_vec();
        rhs.push(one());
        solve_unique(rows, rhs).is_some_and(|lambda| lambda.iter().all(|l| *l >= zero()))
    })
}

/// Distinct generators not in the hull of the remaining distinct ones.
pub fn vertices(gens: &[Measure]) -> Vec<Measure> {
    let mut distinct = gens.to_vec();
    distinct.sort();
    distinct.dedup();
    (0..distinct.len())
        .filter(|&i| {
            let others: Vec<Measure> =
                distinct.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, m)| m.clone()).collect();
            others.is_empty() || !hull_contains(&distinct[i], &others)
        })
        .map(|i| distinct[i].clone())
        .collect()
}

/// Vertices of `(1 − t)·conv(p) + t·conv(q)`.
pub fn minkowski_vertices(p: &[Measure], q: &[Measure], t: &Rational) -> Vec<Measure> {
    let mut sums = Vec::new();
    for a in p {
        for b in q {
            let weights = a.weights().iter().zip(b.weights()).map(|(x, y)| (one() - t) * x + t * y).collect();
            sums.push(Measure::new(a.space().clone(), weights).expect("convex combination"));
        }
    }
    vertices(&sums)
}

/// `max α · (n + 1) ≥ n` over the `n` atoms.
pub fn in_pf(xi: &Measure) -> bool {
    let n = xi.weights().iter().filter(|w| **w > zero()).count();
    let top = xi.weights().iter().max().cloned().unwrap_or_else(zero);
    top * Rational::from_integer((n as i64 + 1).into()) >= Rational::from_integer((n as i64).into())
}

/// Atoms whose weight meets the dominance threshold.
pub fn dominant_atoms(xi: &Measure) -> Vec<usize> {
    let n = xi.weights().iter().filter(|w| **w > zero()).count() as i64;
    (0..xi.space().len())
        .filter(|&x| xi.weight(x) * Rational::from_integer((n + 1).into()) >= Rational::from_integer(n.into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::space::FiniteSpace;

    #[test]
    fn hull_membership_by_enumeration() {
        let x = FiniteSpace::new(["a", "b", "c"]).unwrap();
        let da = Measure::dirac(&x, 0).unwrap();
        let db = Measure::dirac(&x, 1).unwrap();
        let dc = Measure::dirac(&x, 2).unwrap();
        let mid = Measure::new(x.clone(), vec![rat(1, 2), rat(1, 2), zero()]).unwrap();
        assert!(hull_contains(&mid, &[da.clone(), db.clone()]));
        assert!(!hull_contains(&dc, &[da.clone(), db.clone()]));
        assert_eq!(vertices(&[da.clone(), mid, db.clone()]), vec![db, da]);
    }

    #[test]
    fn dominance() {
        let x = FiniteSpace::new(["a", "b", "c"]).unwrap();
        let at = |w: [Rational; 3]| Measure::new(x.clone(), w.to_vec()).unwrap();
        assert!(in_pf(&at([rat(2, 3), rat(1, 3), zero()])));
        assert!(!in_pf(&at([rat(1, 2), rat(1, 2), zero()])));
        assert_eq!(dominant_atoms(&at([rat(3, 4), rat(1, 4), zero()])), vec![0]);
    }
}
