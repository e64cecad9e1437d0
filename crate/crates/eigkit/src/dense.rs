//! Dense route for small pencils: Cholesky reduction plus a full symmetric
//! eigendecomposition.  Also serves as the cross-check oracle in tests.

use nalgebra::{DMatrix, DVector};

use crate::{fix_sign, rel_residual, CsrMatrix, EigError, EigenPairs};

/// Solves the full generalized symmetric problem densely and returns the
/// `count` smallest pairs.  `M` must be positive definite.
pub fn smallest_eigenpairs_dense(
    k: &CsrMatrix,
    m: &CsrMatrix,
    count: usize,
) -> Result<EigenPairs, EigError> {
    let n = k.n();
    let kd = k.to_dense();
    let md = m.to_dense();
    let (values, vectors) = dense_generalized(&kd, &md)?;

    let mut out_values = Vec::with_capacity(count);
    let mut out_vectors = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    for j in 0..count {
        let mut v: Vec<f64> = (0..n).map(|i| vectors[(i, j)]).collect();
        fix_sign(&mut v);
        residuals.push(rel_residual(k, m, values[j], &v));
        out_values.push(values[j]);
        out_vectors.push(v);
    }
    Ok(EigenPairs { values: out_values, vectors: out_vectors, residuals, outer_iters: 0 })
}

/// Dense generalized symmetric eigendecomposition `K u = lambda M u`.
/// Returns all eigenvalues ascending with M-orthonormal eigenvector columns.
pub fn dense_generalized(
    kd: &DMatrix<f64>,
    md: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>), EigError> {
    let n = kd.nrows();
    assert_eq!(kd.ncols(), n);
    assert_eq!(md.nrows(), n);
    assert_eq!(md.ncols(), n);

    let chol = md.clone().cholesky().ok_or(EigError::MassNotPositiveDefinite)?;
    let l = chol.l();
    // B = L^-1 K L^-T, symmetrized against roundoff.
    let linv_k = l
        .solve_lower_triangular(kd)
        .ok_or(EigError::MassNotPositiveDefinite)?;
    let bt = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or(EigError::MassNotPositiveDefinite)?;
    let b = (&bt + bt.transpose()) * 0.5;

    let (values, y) = jacobi_symmetric(&b)?;
    // Back-transform: u = L^-T y, which keeps M-orthonormality exactly.
    let lt = l.transpose();
    let u = lt
        .solve_upper_triangular(&y)
        .ok_or(EigError::MassNotPositiveDefinite)?;
    Ok((values, u))
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.  Returns all
/// eigenvalues ascending, paired with orthonormal eigenvector columns.
///
/// Used instead of `nalgebra`'s `symmetric_eigen`, which has returned
/// mispaired values and vectors on the near-diagonal matrices the
/// Rayleigh-Ritz step produces close to convergence (tests/dense_pairing.rs
/// keeps one such matrix).  Jacobi cannot mispair: the values are the final
/// diagonal and the vectors the accumulated rotations, and near-diagonal
/// input is its fastest case.
pub fn jacobi_symmetric(a0: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>), EigError> {
    let n = a0.nrows();
    assert_eq!(a0.ncols(), n);
    let mut a = a0.clone();
    let mut v = DMatrix::identity(n, n);
    let fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut converged = fro == 0.0;
    let mut sweeps = 0usize;
    while !converged {
        sweeps += 1;
        if sweeps > 60 {
            let off = off_norm(&a);
            return Err(EigError::NotConverged { worst_residual: off, outer_iters: sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Entries this small cannot move the diagonal at double
                // precision; rotating on them is pure roundoff churn.
                if apq.abs() <= f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) + 1e-300 {
                    continue;
                }
                let h = aqq - app;
                let t = if apq.abs() * 1e15 < h.abs() {
                    apq / h
                } else {
                    let theta = h / (2.0 * apq);
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let np = akp - s * (akq + tau * akp);
                    let nq = akq + s * (akp - tau * akq);
                    a[(k, p)] = np;
                    a[(p, k)] = np;
                    a[(k, q)] = nq;
                    a[(q, k)] = nq;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp - s * (vkq + tau * vkp);
                    v[(k, q)] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
        // Scales with n so entries under the per-pair skip threshold can
        // never hold the off-norm above the target.
        converged = off_norm(&a) <= (n as f64).max(4.0) * 2e-16 * fro;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let mut values = Vec::with_capacity(n);
    let mut y = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(a[(src, src)]);
        y.set_column(dst, &v.column(src));
    }
    Ok((values, y))
}

fn off_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut off2 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            off2 += a[(i, j)] * a[(i, j)];
        }
    }
    (2.0 * off2).sqrt()
}

/// Dense generalized solve for a small projected pencil, tolerating a
/// mass block that is only numerically identity-like.  Used by the
/// Rayleigh-Ritz step of the sparse route.
pub fn rayleigh_ritz_small(
    kr: &DMatrix<f64>,
    mr: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>), EigError> {
    dense_generalized(kr, mr)
}

/// M-inner product of two coordinate vectors, dense mass.
pub fn m_dot(md: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (x.transpose() * md * y)[(0, 0)]
}
