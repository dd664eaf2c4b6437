//! Dense exact-rational simplex for `max c.x` subject to `A x <= b`,
//! `x >= 0`, with `b >= 0` so the origin is a feasible start.
//!
//! Pivots follow Bland's rule, which cannot cycle.

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let (rows, cols) = (a.len(), c.len());
    if b.len() != rows || a.iter().any(|r| r.len() != cols) {
        return domain("constraint matrix shape does not match");
    }
    if b.iter().any(Signed::is_negative) {
        return domain("right-hand sides must be nonnegative");
    }
    // Columns: structural 0..cols, slack cols..cols+rows, then the rhs.
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, rhs))| {
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().cloned());
            r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r.push(rhs.clone());
            r
        })
        .collect();
    // Reduced costs of the objective row, as `c - z`.
    let mut cost: Vec<Rational> = c.iter().cloned().chain((0..=rows).map(|_| Rational::zero())).collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    loop {
        let Some(enter) = (0..cols + rows).find(|&j| cost[j].is_positive()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[enter];
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return domain("linear program is unbounded");
        };
        pivot(&mut t, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut x = vec![Rational::zero(); cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            x[var] = t[i][width - 1].clone();
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution { value, x })
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &factor * pv;
            }
        }
    }
    let factor = cost[col].clone();
    for (v, pv) in cost.iter_mut().zip(&pivot_row) {
        if !pv.is_zero() {
            *v -= &factor * pv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use itertools::Itertools;
    use proptest::prelude::*;

    /// Solves a square system exactly by Gaussian elimination.
    fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
        let n = rhs.len();
        for col in 0..n {
            let p = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, p);
            rhs.swap(col, p);
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = &m[r][col] / &m[col][col];
                    for c in 0..n {
                        let d = &f * &m[col][c];
                        m[r][c] -= d;
                    }
                    let d = &f * &rhs[col];
                    rhs[r] -= d;
                }
            }
        }
        Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
    }

    /// Best objective over all vertices of the polytope: every choice of
    /// `cols` tight constraints among `A x <= b` and `x >= 0`.
    fn vertex_enumeration(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Rational {
        let cols = c.len();
        let mut all: Vec<(Vec<Rational>, Rational)> = a.iter().cloned().zip(b.iter().cloned()).collect();
        for j in 0..cols {
            let unit = (0..cols).map(|i| if i == j { int(-1) } else { int(0) }).collect();
            all.push((unit, int(0)));
        }
        let mut best = int(0);
        for tight in (0..all.len()).combinations(cols) {
            let m = tight.iter().map(|&i| all[i].0.clone()).collect();
            let rhs = tight.iter().map(|&i| all[i].1.clone()).collect();
            let Some(x) = solve(m, rhs) else { continue };
            let feasible = all.iter().all(|(row, r)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>() <= *r);
            if feasible {
                best = best.max(c.iter().zip(&x).map(|(p, q)| p * q).sum());
            }
        }
        best
    }

    #[test]
    fn textbook_example() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
        let c = [int(3), int(5)];
        let a = vec![vec![int(1), int(0)], vec![int(0), int(2)], vec![int(3), int(2)]];
        let sol = maximize(&c, &a, &[int(4), int(12), int(18)]).unwrap();
        assert_eq!(sol.value, int(36));
        assert_eq!(sol.x, vec![int(2), int(6)]);
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 2x + y <= 1, x + 2y <= 1: optimum 2/3.
        let sol = maximize(&[int(1), int(1)], &[vec![int(2), int(1)], vec![int(1), int(2)]], &[int(1), int(1)]).unwrap();
        assert_eq!(sol.value, ratio(2, 3));
    }

    #[test]
    fn degenerate_and_errors() {
        let sol = maximize(&[int(1)], &[vec![int(1)], vec![int(1)]], &[int(0), int(0)]).unwrap();
        assert_eq!(sol.value, int(0));
        assert!(maximize(&[int(1)], &[vec![int(-1)]], &[int(1)]).is_err());
        assert!(maximize(&[int(1)], &[vec![int(1)]], &[int(-1)]).is_err());
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            c in proptest::collection::vec(-3i64..=5, 3),
            a in proptest::collection::vec(proptest::collection::vec(0i64..=4, 3), 3..5),
            b in proptest::collection::vec(0i64..=6, 5),
        ) {
            let c: Vec<Rational> = c.into_iter().map(int).collect();
            // A positive row keeps the problem bounded.
            let mut a: Vec<Vec<Rational>> = a.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
            a.push(vec![int(1), int(1), int(1)]);
            let b: Vec<Rational> = b.into_iter().take(a.len()).map(int).collect();
            prop_assume!(b.len() == a.len());
            let sol = maximize(&c, &a, &b).unwrap();
            prop_assert_eq!(sol.value, vertex_enumeration(&c, &a, &b));
        }
    }
}
