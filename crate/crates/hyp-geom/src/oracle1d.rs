//! 1-D radial eigenvalue oracles, self-contained on purpose: they certify
//! 2-D finite-element output, so they share no solver code with it.
//!
//! Two reductions are covered.  On a collar, separating the Fermi Laplacian
//! in the angular mode `e^{ik theta}` leaves the radial operator
//! `-F'' - tanh(r) F' + (2 pi k / (l cosh r))^2 F` on an `r`-interval, which
//! is discretized by a symmetric finite-volume scheme and solved by Sturm
//! bisection, then Richardson-extrapolated across three grids.  On a geodesic
//! disk, the rotationally symmetric ground mode satisfies
//! `-F'' - coth(r) F' = lambda F` with regularity at the center, which is
//! integrated by RK4 shooting.

use crate::GeomError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    Neumann,
    Dirichlet,
}

/// Lowest eigenvalue of the angular-mode-`k` radial collar operator on
/// `[r_lo, r_hi]`, finite volumes at `n` cells (so `n + 1` nodes).
///
/// The scheme is the standard symmetric one for `-(w F')' + w V F = lambda w F`
/// with weight `w(r) = cosh r`: second-order accurate, so three dyadic grids
/// admit two rounds of Richardson extrapolation (done by
/// [`collar_sturm_liouville`]).
pub fn collar_sturm_liouville_at(
    l: f64,
    k: u32,
    r_lo: f64,
    r_hi: f64,
    bc_lo: EndCondition,
    bc_hi: EndCondition,
    n: usize,
) -> Result<f64, GeomError> {
    if !(l > 0.0) {
        return Err(GeomError::NonPositiveLength(l));
    }
    if !(r_hi > r_lo) {
        return Err(GeomError::BadInterval { lo: r_lo, hi: r_hi });
    }
    let h = (r_hi - r_lo) / n as f64;
    let w = |r: f64| r.cosh();
    let ang = 2.0 * std::f64::consts::PI * k as f64 / l;
    let v = |r: f64| {
        let c = ang / r.cosh();
        c * c
    };

    // Node-centered cells; half cells at the ends.  Row i of the stiffness:
    // flux couplings w_{i +/- 1/2} / h, plus the potential times the cell mass.
    let nodes = n + 1;
    let r_at = |i: usize| r_lo + i as f64 * h;
    let mut keep: Vec<usize> = (0..nodes).collect();
    if bc_lo == EndCondition::Dirichlet {
        keep.retain(|&i| i != 0);
    }
    if bc_hi == EndCondition::Dirichlet {
        keep.retain(|&i| i != nodes - 1);
    }
    let m = keep.len();
    let mut diag_a = vec![0.0; m];
    let mut off_a = vec![0.0; m.saturating_sub(1)];
    let mut mass = vec![0.0; m];
    for (row, &i) in keep.iter().enumerate() {
        let cell = if i == 0 || i == nodes - 1 { 0.5 * h } else { h };
        let wm = w(r_at(i)) * cell;
        mass[row] = wm;
        diag_a[row] = v(r_at(i)) * wm;
        if i > 0 {
            let flux = w(r_at(i) - 0.5 * h) / h;
            diag_a[row] += flux;
            if row > 0 && keep[row - 1] == i - 1 {
                off_a[row - 1] = -flux;
            }
        }
        if i < nodes - 1 {
            diag_a[row] += w(r_at(i) + 0.5 * h) / h;
        }
    }
    // Symmetrize the pencil: B = D^{-1/2} A D^{-1/2} stays tridiagonal.
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m.saturating_sub(1)];
    for i in 0..m {
        diag[i] = diag_a[i] / mass[i];
    }
    for i in 0..m - 1 {
        off[i] = off_a[i] / (mass[i] * mass[i + 1]).sqrt();
    }
    Ok(tridiag_smallest(&diag, &off))
}

/// Richardson-extrapolated lowest eigenvalue: grids `n`, `2n`, `4n` combined
/// through two rounds of `h^2` elimination.
pub fn collar_sturm_liouville(
    l: f64,
    k: u32,
    r_lo: f64,
    r_hi: f64,
    bc_lo: EndCondition,
    bc_hi: EndCondition,
) -> Result<f64, GeomError> {
    let n = 640;
    let e1 = collar_sturm_liouville_at(l, k, r_lo, r_hi, bc_lo, bc_hi, n)?;
    let e2 = collar_sturm_liouville_at(l, k, r_lo, r_hi, bc_lo, bc_hi, 2 * n)?;
    let e4 = collar_sturm_liouville_at(l, k, r_lo, r_hi, bc_lo, bc_hi, 4 * n)?;
    let r12 = (4.0 * e2 - e1) / 3.0;
    let r24 = (4.0 * e4 - e2) / 3.0;
    Ok((16.0 * r24 - r12) / 15.0)
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm-count
/// bisection.  `off` has length `diag.len() - 1`.
pub fn tridiag_smallest(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    assert!(n >= 1);
    assert_eq!(off.len(), n - 1);
    // Gershgorin bracket.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += off[i - 1].abs();
        }
        if i + 1 < n {
            radius += off[i].abs();
        }
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let scale = hi.abs().max(lo.abs()).max(1e-30);
    // Count of eigenvalues < x by the sign variation of the LDL^T pivots.
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = 1.0f64;
        for i in 0..n {
            let b2 = if i > 0 { off[i - 1] * off[i - 1] } else { 0.0 };
            d = diag[i] - x - b2 / d;
            if d == 0.0 {
                d = -1e-300 * scale;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut a = lo - 1e-12 * scale;
    let mut b = hi + 1e-12 * scale;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if count_below(mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
        if b - a <= 1e-15 * scale + f64::MIN_POSITIVE {
            break;
        }
    }
    0.5 * (a + b)
}

/// Dirichlet ground eigenvalue of a geodesic disk of hyperbolic radius
/// `radius`, by RK4 shooting on the radial equation
/// `-F'' - coth(r) F' = lambda F`, `F` regular at 0, `F(radius) = 0`.
pub fn disk_dirichlet_lambda0(radius: f64) -> Result<f64, GeomError> {
    if !(radius > 0.0) {
        return Err(GeomError::NonPositiveLength(radius));
    }
    // F(radius) as a function of lambda; its first zero is the eigenvalue.
    let miss = |lambda: f64| shoot(lambda, radius);
    // lambda0 lies in (0, 1/4 + C/radius^2); scan that range for the first
    // sign change of the miss function, then bisect.
    let upper = 0.25 + (std::f64::consts::PI / radius).powi(2) * 4.0 + 5.0;
    let steps = 400;
    let mut a = 1e-8;
    let mut fa = miss(a);
    let mut bracket = None;
    for _ in 1..=steps {
        let b = a + (upper - 1e-8) / steps as f64;
        let fb = miss(b);
        if fa.signum() != fb.signum() {
            bracket = Some((a, fa, b, fb));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut a, mut fa, mut b, _) = bracket.expect("ground eigenvalue bracket must exist");
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = miss(mid);
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if b - a < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// Integrates the radial equation out to `radius` and returns `F(radius)`.
/// Start uses the regular series `F = 1 - lambda r^2 / 4 + O(r^4)` to step
/// off the coordinate singularity at the center.
fn shoot(lambda: f64, radius: f64) -> f64 {
    let r0 = 1e-6;
    let mut f = 1.0 - lambda * r0 * r0 / 4.0;
    let mut fp = -lambda * r0 / 2.0;
    let n = 6000;
    let h = (radius - r0) / n as f64;
    let rhs = |r: f64, f: f64, fp: f64| -> (f64, f64) {
        (fp, -(1.0 / r.tanh()) * fp - lambda * f)
    };
    for i in 0..n {
        let ri = r0 + i as f64 * h;
        let (k1f, k1p) = rhs(ri, f, fp);
        let (k2f, k2p) = rhs(ri + 0.5 * h, f + 0.5 * h * k1f, fp + 0.5 * h * k1p);
        let (k3f, k3p) = rhs(ri + 0.5 * h, f + 0.5 * h * k2f, fp + 0.5 * h * k2p);
        let (k4f, k4p) = rhs(ri + h, f + h * k3f, fp + h * k3p);
        f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    f
}
