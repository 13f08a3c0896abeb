//! Dense Gaussian elimination over the rationals.

use num::{One, Zero};

use crate::poly::Coeff;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Coeff>>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![vec![Coeff::zero(); cols]; rows],
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coeff) {
        self.data[r][c] = v;
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = Coeff::one() / &self.data[r][c];
            for x in self.data[r][c..].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i == r || self.data[i][c].is_zero() {
                    continue;
                }
                let f = self.data[i][c].clone();
                for (x, p) in self.data[i][c..].iter_mut().zip(&pivot_row[c..]) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.clone().rref().len()
    }

    /// Some `x` with `self * x = rhs`, or None when inconsistent.
    pub fn solve(&self, rhs: &[Coeff]) -> Option<Vec<Coeff>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Dense::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.data[i][..self.cols].clone_from_slice(&self.data[i]);
            aug.data[i][self.cols] = rhs[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Coeff::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[r][self.cols].clone();
        }
        Some(x)
    }
}
