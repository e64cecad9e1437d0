//! Incomplete Cholesky factorization on the lower-triangular pattern of A.
//!
//! Breakdown (a non-positive pivot) is handled by retrying on `A + alpha D`
//! with `D = diag(A)` and `alpha` escalating geometrically; the shift only
//! changes the preconditioner, never the operator being solved.

use crate::{CsrMatrix, EigError};

/// Lower-triangular factor `L` with `L L^T ~ A`, stored row-wise CSR.
pub struct Ic0 {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<f64>,
    /// Diagonal shift that was needed, 0.0 when the plain factorization held.
    pub shift_used: f64,
}

impl Ic0 {
    /// Factors the lower triangle of symmetric positive definite `a`.
    pub fn new(a: &CsrMatrix) -> Result<Ic0, EigError> {
        let mut alpha = 0.0;
        loop {
            match try_factor(a, alpha) {
                Some(f) => return Ok(f),
                None => {
                    alpha = if alpha == 0.0 { 1e-3 } else { alpha * 10.0 };
                    if alpha > 1.0 {
                        return Err(EigError::PrecondBreakdown { final_shift: alpha });
                    }
                }
            }
        }
    }

    /// Applies the preconditioner: solves `L L^T z = r`.
    pub fn solve(&self, r: &[f64], z: &mut [f64]) {
        assert_eq!(r.len(), self.n);
        assert_eq!(z.len(), self.n);
        // Forward: L y = r, row-oriented.
        for i in 0..self.n {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let mut acc = r[i];
            for k in lo..hi - 1 {
                acc -= self.vals[k] * z[self.col_idx[k] as usize];
            }
            z[i] = acc / self.vals[hi - 1];
        }
        // Backward: L^T z = y.  L^T's column i is L's row i, so walk rows in
        // reverse and scatter.
        for i in (0..self.n).rev() {
            let lo = self.row_ptr[i];
            let hi = self.row_ptr[i + 1];
            let zi = z[i] / self.vals[hi - 1];
            z[i] = zi;
            for k in lo..hi - 1 {
                z[self.col_idx[k] as usize] -= self.vals[k] * zi;
            }
        }
    }
}

fn try_factor(a: &CsrMatrix, alpha: f64) -> Option<Ic0> {
    let n = a.n();
    // Lower-triangular pattern of A, diagonal last in each row.
    let mut row_ptr = vec![0usize; n + 1];
    let mut col_idx: Vec<u32> = Vec::new();
    let mut vals: Vec<f64> = Vec::new();
    for i in 0..n {
        let (cols, avals) = a.row(i);
        let mut diag = 0.0;
        let mut have_diag = false;
        for (k, &c) in cols.iter().enumerate() {
            if (c as usize) < i {
                col_idx.push(c);
                vals.push(avals[k]);
            } else if c as usize == i {
                diag = avals[k];
                have_diag = true;
            }
        }
        if !have_diag || diag <= 0.0 {
            return None;
        }
        col_idx.push(i as u32);
        vals.push(diag * (1.0 + alpha));
        row_ptr[i + 1] = col_idx.len();
    }

    // Up-looking IC(0): for each row i and each k in its strict lower pattern,
    //   L[i,k] = (A[i,k] - <L[i,0..k), L[k,0..k)>) / L[k,k]
    // then the pivot  L[i,i] = sqrt(A[i,i] - sum_j L[i,j]^2).
    for i in 0..n {
        let (ri_lo, ri_hi) = (row_ptr[i], row_ptr[i + 1]);
        for kk in ri_lo..ri_hi - 1 {
            let k = col_idx[kk] as usize;
            let mut acc = vals[kk];
            // Sparse dot of row i and row k over columns < k.
            let (rk_lo, rk_hi) = (row_ptr[k], row_ptr[k + 1]);
            let mut p = ri_lo;
            let mut q = rk_lo;
            while p < kk && q < rk_hi - 1 {
                let cp = col_idx[p];
                let cq = col_idx[q];
                if cp == cq {
                    acc -= vals[p] * vals[q];
                    p += 1;
                    q += 1;
                } else if cp < cq {
                    p += 1;
                } else {
                    q += 1;
                }
            }
            vals[kk] = acc / vals[rk_hi - 1];
        }
        let mut pivot = vals[ri_hi - 1];
        for k in ri_lo..ri_hi - 1 {
            pivot -= vals[k] * vals[k];
        }
        if pivot <= 0.0 || !pivot.is_finite() {
            return None;
        }
        vals[ri_hi - 1] = pivot.sqrt();
    }

    Some(Ic0 { n, row_ptr, col_idx, vals, shift_used: alpha })
}
