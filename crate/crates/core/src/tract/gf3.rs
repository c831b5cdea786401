use crate::error::{Error, Result};

/// Equations `x_a + x_b + x_c = rhs (mod 3)`; indices may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF3System {
    variable_count: usize,
    rows: Vec<([usize; 3], u8)>,
}

impl GF3System {
    pub fn new(variable_count: usize, rows: Vec<([usize; 3], u8)>) -> Result<Self> {
        for (vars, rhs) in &rows {
            if *rhs > 2 {
                return Err(Error::ValueOutOfRange {
                    value: *rhs as usize,
                    target_size: 3,
                });
            }
            if let Some(&v) = vars.iter().find(|&&v| v >= variable_count) {
                return Err(Error::VariableOutOfRange {
                    index: v + 1,
                    count: variable_count,
                });
            }
        }
        Ok(GF3System { variable_count, rows })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn rows(&self) -> &[([usize; 3], u8)] {
        &self.rows
    }
}

/// Gauss-Jordan elimination modulo 3; free variables are set to 0.
pub fn gauss_gf3(sys: &GF3System) -> Option<Vec<u8>> {
    let n = sys.variable_count;
    let mut rows: Vec<Vec<u8>> = sys
        .rows
        .iter()
        .map(|(vars, rhs)| {
            let mut r = vec![0u8; n + 1];
            for &v in vars {
                r[v] = (r[v] + 1) % 3;
            }
            r[n] = *rhs;
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..n {
        let Some(p) = (top..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(top, p);
        // 1 and 2 are their own inverses mod 3
        let inv = rows[top][col];
        for x in rows[top].iter_mut() {
            *x = *x * inv % 3;
        }
        for i in 0..rows.len() {
            let factor = rows[i][col];
            if i != top && factor != 0 {
                for j in col..=n {
                    rows[i][j] = (rows[i][j] + 3 - factor * rows[top][j] % 3) % 3;
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    if rows[top..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut x = vec![0u8; n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = rows[i][n];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(n: usize, rows: &[[usize; 3]]) -> Option<Vec<u8>> {
        gauss_gf3(&GF3System::new(n, rows.iter().map(|&r| (r, 1)).collect()).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(solve(3, &[[0, 1, 2]]), Some(vec![1, 0, 0]));
        assert_eq!(solve(1, &[[0, 0, 0]]), None);
        assert_eq!(solve(4, &[[0, 1, 2], [0, 1, 3]]), Some(vec![1, 0, 0, 0]));
        // 2x + y = 1 -> y = 1 with x free
        assert_eq!(solve(2, &[[0, 0, 1]]), Some(vec![2, 0]));
    }

    #[test]
    fn solutions_satisfy_rows() {
        let rows = [[0, 1, 2], [2, 3, 4], [4, 5, 0], [1, 3, 5], [0, 0, 3]];
        let planted = [2u8, 1, 0, 1, 0, 2];
        let sys = GF3System::new(
            6,
            rows.iter()
                .map(|&r| (r, (r.iter().map(|&v| planted[v]).sum::<u8>() % 3)))
                .collect(),
        )
        .unwrap();
        let x = gauss_gf3(&sys).unwrap();
        for (r, rhs) in sys.rows() {
            assert_eq!(r.iter().map(|&v| x[v]).sum::<u8>() % 3, *rhs);
        }
    }

    #[test]
    fn bad_rows_rejected() {
        assert!(GF3System::new(2, vec![([0, 1, 2], 1)]).is_err());
        assert!(GF3System::new(3, vec![([0, 1, 2], 3)]).is_err());
    }
}
