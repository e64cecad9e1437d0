//! Compressed sparse row storage for square symmetric matrices.

use rayon::prelude::*;

use crate::EigError;

/// Square sparse matrix in CSR form.  Column indices within each row are
/// strictly increasing; duplicate triplets are summed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n x n` matrix from unordered `(row, col, value)` triplets.
    /// Duplicates are summed; exact zeros arising from cancellation are kept
    /// (pattern stability matters more than a few spare entries).
    pub fn from_triplets(n: usize, triplets: &[(u32, u32, f64)]) -> Self {
        for &(r, c, _) in triplets {
            assert!((r as usize) < n, "row index {r} out of range for n={n}");
            assert!((c as usize) < n, "col index {c} out of range for n={n}");
        }
        let mut order: Vec<u32> = (0..triplets.len() as u32).collect();
        order.sort_unstable_by_key(|&t| {
            let (r, c, _) = triplets[t as usize];
            ((r as u64) << 32) | c as u64
        });

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        let mut cur_row = 0usize;
        for &t in &order {
            let (r, c, v) = triplets[t as usize];
            while cur_row < r as usize {
                cur_row += 1;
                row_ptr[cur_row] = col_idx.len();
            }
            if let Some(&last_c) = col_idx.last() {
                if row_ptr[cur_row] < col_idx.len() && last_c == c {
                    *vals.last_mut().unwrap() += v;
                    continue;
                }
            }
            col_idx.push(c);
            vals.push(v);
        }
        while cur_row < n {
            cur_row += 1;
            row_ptr[cur_row] = col_idx.len();
        }
        CsrMatrix { n, row_ptr, col_idx, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.vals[lo..hi])
    }

    /// `y = A x`.  Each output coordinate is reduced serially in column order,
    /// so the result is independent of the rayon thread count.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let mut acc = 0.0;
            for k in lo..hi {
                acc += self.vals[k] * x[self.col_idx[k] as usize];
            }
            *yi = acc;
        });
    }

    pub fn diag(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            if let Ok(p) = cols.binary_search(&(i as u32)) {
                d[i] = vals[p];
            }
        }
        d
    }

    /// `self + beta * other`, same dimension; patterns are merged.
    pub fn add_scaled(&self, other: &CsrMatrix, beta: f64) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0usize, 0usize);
            while p < ca.len() || q < cb.len() {
                let next_a = if p < ca.len() { ca[p] } else { u32::MAX };
                let next_b = if q < cb.len() { cb[q] } else { u32::MAX };
                if next_a < next_b {
                    col_idx.push(next_a);
                    vals.push(va[p]);
                    p += 1;
                } else if next_b < next_a {
                    col_idx.push(next_b);
                    vals.push(beta * vb[q]);
                    q += 1;
                } else {
                    col_idx.push(next_a);
                    vals.push(va[p] + beta * vb[q]);
                    p += 1;
                    q += 1;
                }
            }
            row_ptr[i + 1] = col_idx.len();
        }
        CsrMatrix { n: self.n, row_ptr, col_idx, vals }
    }

    /// Largest asymmetry `max |A_ij - A_ji|` over the stored pattern.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (k, &c) in cols.iter().enumerate() {
                let j = c as usize;
                if j < i {
                    continue; // each unordered pair visited once, from the upper side
                }
                let (cj, vj) = self.row(j);
                let mirror = match cj.binary_search(&(i as u32)) {
                    Ok(p) => vj[p],
                    Err(_) => 0.0,
                };
                worst = worst.max((vals[k] - mirror).abs());
            }
        }
        worst
    }

    pub fn check_symmetric(&self, tol: f64) -> Result<(), EigError> {
        let scale = self.vals.iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
        let max_asym = self.max_asymmetry();
        if max_asym > tol * scale {
            return Err(EigError::NotSymmetric { max_asym });
        }
        Ok(())
    }

    /// Dense copy, for the small-problem route and for test oracles.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut a = nalgebra::DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (k, &c) in cols.iter().enumerate() {
                a[(i, c as usize)] = vals[k];
            }
        }
        a
    }

    /// Quadratic form `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let mut acc = 0.0;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            let mut row_acc = 0.0;
            for (k, &c) in cols.iter().enumerate() {
                row_acc += vals[k] * y[c as usize];
            }
            acc += x[i] * row_acc;
        }
        acc
    }
}
