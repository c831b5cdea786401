use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer system `A x = b` with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntAffineSystem {
    columns: usize,
    rows: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
}

impl IntAffineSystem {
    pub fn new(columns: usize, rows: Vec<Vec<i64>>, rhs: Vec<i64>) -> Result<Self> {
        if rows.len() != rhs.len() {
            return Err(Error::ArityMismatch {
                expected: rows.len(),
                found: rhs.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != columns) {
            return Err(Error::ArityMismatch {
                expected: columns,
                found: r.len(),
            });
        }
        Ok(IntAffineSystem {
            columns,
            rows: rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect(),
            rhs: rhs.into_iter().map(BigInt::from).collect(),
        })
    }

    /// One row per triple with unit coefficients (added up on repeats), right-hand side 1.
    pub fn from_triples(columns: usize, triples: &[[usize; 3]]) -> Result<Self> {
        let rows = triples
            .iter()
            .map(|t| {
                let mut r = vec![0i64; columns];
                for &v in t {
                    if v >= columns {
                        return Err(Error::VariableOutOfRange {
                            index: v + 1,
                            count: columns,
                        });
                    }
                    r[v] += 1;
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        let rhs = vec![1; rows.len()];
        IntAffineSystem::new(columns, rows, rhs)
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[BigInt] {
        &self.rhs
    }

    pub fn is_solution(&self, x: &[BigInt]) -> bool {
        x.len() == self.columns
            && self
                .rows
                .iter()
                .zip(&self.rhs)
                .all(|(row, b)| row.iter().zip(x).map(|(a, v)| a * v).sum::<BigInt>() == *b)
    }
}

/// Replaces columns `a`, `b` by `p·a + q·b` and `r·a + s·b` in every row.
fn combine(m: &mut [Vec<BigInt>], a: usize, b: usize, coeffs: [&BigInt; 4]) {
    let [p, q, r, s] = coeffs;
    for row in m.iter_mut() {
        let (x, y) = (row[a].clone(), row[b].clone());
        row[a] = p * &x + q * &y;
        row[b] = r * &x + s * &y;
    }
}

/// Integer solution of `A x = b` through the column Hermite normal form
/// `A U = H` with unimodular `U`: solve the lower-echelon `H y = b` by
/// forward substitution, set the free part of `y` to zero, return `x = U y`.
pub fn hnf_solve(sys: &IntAffineSystem) -> Option<Vec<BigInt>> {
    let n = sys.columns;
    let mut h = sys.rows.clone();
    // u starts as the identity and receives the same column operations as h
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut col = 0;
    for r in 0..h.len() {
        if col == n {
            break;
        }
        for j in col + 1..n {
            if h[r][j].is_zero() {
                continue;
            }
            let (a, b) = (h[r][col].clone(), h[r][j].clone());
            if !a.is_zero() && b.is_multiple_of(&a) {
                let q = -(&b / &a);
                let (one, zero) = (BigInt::one(), BigInt::zero());
                combine(&mut h, col, j, [&one, &zero, &q, &one]);
                combine(&mut u, col, j, [&one, &zero, &q, &one]);
                continue;
            }
            let e = a.extended_gcd(&b);
            // [s t; -b/g a/g] has determinant 1
            let (s, t) = (e.x, e.y);
            let (bg, ag) = (-(&b / &e.gcd), &a / &e.gcd);
            combine(&mut h, col, j, [&s, &t, &bg, &ag]);
            combine(&mut u, col, j, [&s, &t, &bg, &ag]);
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for m in [&mut h, &mut u] {
                for row in m.iter_mut() {
                    row[col] = -row[col].clone();
                }
            }
        }
        // reduce the entries left of the pivot to keep coefficients small
        for c in 0..col {
            let q = h[r][c].div_floor(&h[r][col]);
            if !q.is_zero() {
                for m in [&mut h, &mut u] {
                    for row in m.iter_mut() {
                        let d = &q * &row[col];
                        row[c] -= d;
                    }
                }
            }
        }
        pivots.push((r, col));
        col += 1;
    }
    let mut y = vec![BigInt::zero(); n];
    let mut next = 0;
    for r in 0..h.len() {
        let partial: BigInt = (0..col).map(|c| &h[r][c] * &y[c]).sum();
        if next < pivots.len() && pivots[next].0 == r {
            let p = pivots[next].1;
            // partial includes y[p] = 0 so far
            let (q, rem) = (&sys.rhs[r] - &partial).div_rem(&h[r][p]);
            if !rem.is_zero() {
                return None;
            }
            y[p] = q;
            next += 1;
        } else if partial != sys.rhs[r] {
            return None;
        }
    }
    let x: Vec<BigInt> = (0..n).map(|i| (0..n).map(|j| &u[i][j] * &y[j]).sum()).collect();
    debug_assert!(sys.is_solution(&x));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        let one = IntAffineSystem::from_triples(3, &[[0, 1, 2]]).unwrap();
        assert_eq!(hnf_solve(&one), Some(ints(&[1, 0, 0])));
        let three = IntAffineSystem::new(1, vec![vec![3]], vec![1]).unwrap();
        assert_eq!(hnf_solve(&three), None);
        let two = IntAffineSystem::from_triples(4, &[[0, 1, 2], [0, 1, 3]]).unwrap();
        assert_eq!(hnf_solve(&two), Some(ints(&[1, 0, 0, 0])));
    }

    #[test]
    fn gcd_combinations() {
        // 6x + 10y + 15z = 1 needs all three columns
        let s = IntAffineSystem::new(3, vec![vec![6, 10, 15]], vec![1]).unwrap();
        let x = hnf_solve(&s).unwrap();
        assert!(s.is_solution(&x));
        let bad = IntAffineSystem::new(2, vec![vec![2, 4], vec![1, 1]], vec![1, 1]).unwrap();
        assert_eq!(hnf_solve(&bad), None);
        let inconsistent = IntAffineSystem::new(2, vec![vec![1, 1], vec![1, 1]], vec![1, 2]).unwrap();
        assert_eq!(hnf_solve(&inconsistent), None);
    }

    #[test]
    fn shape_errors() {
        assert!(IntAffineSystem::new(2, vec![vec![1]], vec![1]).is_err());
        assert!(IntAffineSystem::new(1, vec![vec![1]], vec![]).is_err());
        assert!(IntAffineSystem::from_triples(2, &[[0, 1, 2]]).is_err());
    }
}
