//! Preconditioned conjugate gradients for SPD systems.

use crate::ic0::Ic0;
use crate::{CsrMatrix, EigError};

/// Solves `A x = b` to relative residual `tol` (in the 2-norm, against
/// `||b||_2`), starting from `x = 0`.  Writes the solution into `x`.
pub fn pcg(
    a: &CsrMatrix,
    precond: &Ic0,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iters: usize,
) -> Result<usize, EigError> {
    let n = a.n();
    assert_eq!(b.len(), n);
    assert_eq!(x.len(), n);
    x.fill(0.0);
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(0);
    }

    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    precond.solve(&r, &mut z);
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);

    for iter in 0..max_iters {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(EigError::InnerSolveDiverged { residual: norm2(&r) / bnorm, iters: iter });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = norm2(&r);
        if rnorm <= tol * bnorm {
            return Ok(iter + 1);
        }
        precond.solve(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rnorm = norm2(&r);
    Err(EigError::InnerSolveDiverged { residual: rnorm / bnorm, iters: max_iters })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_shifted_laplacian() {
        let n = 200;
        let mut t = Vec::new();
        for i in 0..n as u32 {
            t.push((i, i, 2.1));
            if i + 1 < n as u32 {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, &t);
        let f = Ic0::new(&a).unwrap();
        let b: Vec<f64> = (0..n).map(|i| ((i * 7 % 13) as f64) - 6.0).collect();
        let mut x = vec![0.0; n];
        let iters = pcg(&a, &f, &b, &mut x, 1e-12, 1000).unwrap();
        assert!(iters <= 10, "tridiagonal IC(0) should converge immediately, took {iters}");
        let mut ax = vec![0.0; n];
        a.matvec(&x, &mut ax);
        for i in 0..n {
            assert!((ax[i] - b[i]).abs() < 1e-9);
        }
    }
}
