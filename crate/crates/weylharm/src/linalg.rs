//! Dense exact linear algebra over the Gaussian rationals: reduced row
//! echelon form, nullspace bases and linear solves. Pivot rows are chosen
//! by smallest coefficient bit-length to keep intermediate entries small;
//! the reduced echelon form itself is canonical, so results do not depend
//! on that choice.

use crate::scalar::GaussRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![GaussRational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<GaussRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRational) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces in place to reduced row echelon form; returns the pivot
    /// columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = self.select_pivot(row, col) else {
                continue;
            };
            self.swap_rows(row, pivot_row);
            let inv = self.get(row, col).inv();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = self.get(r, c) - &(&factor * self.get(row, c));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn select_pivot(&self, from_row: usize, col: usize) -> Option<usize> {
        (from_row..self.rows)
            .filter(|&r| !self.get(r, col).is_zero())
            .min_by_key(|&r| (crate::scalar::bit_weight(self.get(r, col)), r))
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A canonical basis of the right nullspace: one vector per free column,
    /// with entry 1 at that column.
    pub fn nullspace(&self) -> Vec<Vec<GaussRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![GaussRational::zero(); self.cols];
            vec[free] = GaussRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                vec[pc] = -m.get(i, free);
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * x = rhs`. Returns `None` when inconsistent; free
    /// variables, if any, are set to zero.
    pub fn solve(&self, rhs: &[GaussRational]) -> Option<Vec<GaussRational>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (r, rhs_entry) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs_entry.clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // a pivot in the augmented column
        }
        let mut x = vec![GaussRational::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(i, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_integer(n)
    }

    fn gq(p: i64, q: i64) -> GaussRational {
        GaussRational::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    #[test]
    fn rref_and_rank() {
        let m = Matrix::from_rows(vec![
            vec![g(1), g(2), g(3)],
            vec![g(2), g(4), g(6)],
            vec![g(0), g(1), g(1)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let m = Matrix::from_rows(vec![vec![g(1), g(2), g(3)], vec![g(0), g(1), g(1)]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // Each basis vector must actually be annihilated.
        for v in &ns {
            for r in 0..m.rows() {
                let mut acc = GaussRational::zero();
                for (c, entry) in v.iter().enumerate() {
                    acc = &acc + &(m.get(r, c) * entry);
                }
                assert!(acc.is_zero());
            }
        }
        assert_eq!(ns[0], vec![g(-1), g(-1), g(1)]);
    }

    #[test]
    fn solve_square_system() {
        let m = Matrix::from_rows(vec![vec![g(2), g(1)], vec![g(1), g(-1)]]);
        let x = m.solve(&[g(3), g(0)]).unwrap();
        assert_eq!(x, vec![g(1), g(1)]);
        let inconsistent = Matrix::from_rows(vec![vec![g(1), g(1)], vec![g(1), g(1)]]);
        assert!(inconsistent.solve(&[g(0), g(1)]).is_none());
        let fractional = Matrix::from_rows(vec![vec![g(2), g(0)], vec![g(0), g(3)]]);
        assert_eq!(fractional.solve(&[g(1), g(1)]).unwrap(), vec![gq(1, 2), gq(1, 3)]);
    }
}
