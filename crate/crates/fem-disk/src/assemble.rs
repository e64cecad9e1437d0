//! Mass and stiffness assembly.
//!
//! In two dimensions the Dirichlet energy is conformally invariant, so the
//! stiffness matrix of the hyperbolic metric equals the flat P1 stiffness
//! computed from chart coordinates.  Only the mass matrix sees the metric,
//! through the area weight `w(z) = (2 / (1 - |z|^2))^2` integrated by a
//! symmetric triangle rule.

use eigkit::CsrMatrix;
use rayon::prelude::*;

use crate::{DiskMesh, FemError};

/// Quadrature for the weighted mass matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassQuadrature {
    /// Edge-midpoint rule: degree 2, three points.  The default; its O(h^2)
    /// consistency error matches the P1 eigenvalue error.
    Midpoints3,
    /// Degree-5 seven-point rule on triangles with a corner beyond chart
    /// radius `rim_radius`, where the weight varies fastest; midpoints
    /// elsewhere.
    SevenPointNearRim { rim_radius: f64 },
}

impl Default for MassQuadrature {
    fn default() -> Self {
        MassQuadrature::Midpoints3
    }
}

fn weight(x: f64, y: f64) -> f64 {
    let s = 1.0 - (x * x + y * y);
    let w = 2.0 / s;
    w * w
}

/// Barycentric points and weights of the degree-5 rule (weights sum to 1).
fn seven_point() -> [([f64; 3], f64); 7] {
    let s15 = 15f64.sqrt();
    let b1 = (6.0 - s15) / 21.0;
    let w1 = (155.0 - s15) / 1200.0;
    let b2 = (6.0 + s15) / 21.0;
    let w2 = (155.0 + s15) / 1200.0;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 9.0 / 40.0),
        ([1.0 - 2.0 * b1, b1, b1], w1),
        ([b1, 1.0 - 2.0 * b1, b1], w1),
        ([b1, b1, 1.0 - 2.0 * b1], w1),
        ([1.0 - 2.0 * b2, b2, b2], w2),
        ([b2, 1.0 - 2.0 * b2, b2], w2),
        ([b2, b2, 1.0 - 2.0 * b2], w2),
    ]
}

const MIDPOINTS: [([f64; 3], f64); 3] = [
    ([0.5, 0.5, 0.0], 1.0 / 3.0),
    ([0.0, 0.5, 0.5], 1.0 / 3.0),
    ([0.5, 0.0, 0.5], 1.0 / 3.0),
];

fn local_matrices(
    coords: &[[f64; 2]; 3],
    rule: &[([f64; 3], f64)],
    index: usize,
) -> Result<[[f64; 9]; 2], FemError> {
    let [p0, p1, p2] = *coords;
    let area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if area2 <= 1e-14 {
        return Err(FemError::DegenerateTriangle { index, area2 });
    }
    let b = [p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]];
    let c = [p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]];
    let mut k = [0.0; 9];
    for r in 0..3 {
        for s in 0..3 {
            k[3 * r + s] = (b[r] * b[s] + c[r] * c[s]) / (2.0 * area2);
        }
    }
    let mut m = [0.0; 9];
    let area = 0.5 * area2;
    for (bary, wq) in rule {
        let x = bary[0] * p0[0] + bary[1] * p1[0] + bary[2] * p2[0];
        let y = bary[0] * p0[1] + bary[1] * p1[1] + bary[2] * p2[1];
        let w = weight(x, y) * wq * area;
        for r in 0..3 {
            for s in 0..3 {
                m[3 * r + s] += w * bary[r] * bary[s];
            }
        }
    }
    Ok([k, m])
}

/// Stiffness and mass triplets, in deterministic triangle order.  Exposed
/// separately from [`assemble`] so multi-cell assemblies can renumber nodes
/// before summing.
pub fn assemble_triplets(
    mesh: &DiskMesh,
    quad: MassQuadrature,
) -> Result<(Vec<(u32, u32, f64)>, Vec<(u32, u32, f64)>), FemError> {
    if mesh.triangles.len() != mesh.tri_coords.len() {
        return Err(FemError::Internal("triangles and tri_coords lengths differ"));
    }
    let seven = seven_point();
    let rim = match quad {
        MassQuadrature::Midpoints3 => f64::INFINITY,
        MassQuadrature::SevenPointNearRim { rim_radius } => rim_radius,
    };
    let locals: Result<Vec<_>, FemError> = mesh
        .tri_coords
        .par_iter()
        .enumerate()
        .map(|(t, coords)| {
            let near_rim = coords
                .iter()
                .any(|p| (p[0] * p[0] + p[1] * p[1]).sqrt() > rim);
            let rule: &[([f64; 3], f64)] =
                if near_rim { &seven } else { &MIDPOINTS };
            local_matrices(coords, rule, t)
        })
        .collect();
    let locals = locals?;
    let mut kt = Vec::with_capacity(9 * locals.len());
    let mut mt = Vec::with_capacity(9 * locals.len());
    for (tri, [k, m]) in mesh.triangles.iter().zip(&locals) {
        for r in 0..3 {
            for s in 0..3 {
                kt.push((tri[r], tri[s], k[3 * r + s]));
                mt.push((tri[r], tri[s], m[3 * r + s]));
            }
        }
    }
    Ok((kt, mt))
}

/// Assembles the `(K, M)` pencil with the given mass quadrature.
pub fn assemble_with(
    mesh: &DiskMesh,
    quad: MassQuadrature,
) -> Result<(CsrMatrix, CsrMatrix), FemError> {
    let (kt, mt) = assemble_triplets(mesh, quad)?;
    let n = mesh.vertices.len();
    Ok((CsrMatrix::from_triplets(n, &kt), CsrMatrix::from_triplets(n, &mt)))
}

/// Assembles the `(K, M)` pencil with the default midpoint mass rule.
pub fn assemble(mesh: &DiskMesh) -> Result<(CsrMatrix, CsrMatrix), FemError> {
    assemble_with(mesh, MassQuadrature::Midpoints3)
}

/// Hyperbolic area of one chart triangle by the degree-5 rule; used by the
/// meshers to report `hyperbolic_area`.
pub(crate) fn tri_hyp_area(coords: &[[f64; 2]; 3]) -> f64 {
    let [p0, p1, p2] = *coords;
    let area2 = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    let area = 0.5 * area2.abs();
    let mut total = 0.0;
    for (bary, wq) in seven_point() {
        let x = bary[0] * p0[0] + bary[1] * p1[0] + bary[2] * p2[0];
        let y = bary[0] * p0[1] + bary[1] * p1[1] + bary[2] * p2[1];
        total += weight(x, y) * wq * area;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_triangle_stiffness_is_textbook() {
        // Conformal invariance: a small triangle far from the rim has the
        // flat P1 stiffness regardless of scale.
        let coords = [[0.0, 0.0], [0.01, 0.0], [0.0, 0.01]];
        let [k, _] = local_matrices(&coords, &MIDPOINTS, 0).unwrap();
        let expect = [1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5];
        for (got, want) in k.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn stiffness_annihilates_constants() {
        let coords = [[0.13, 0.22], [0.31, 0.29], [0.15, 0.47]];
        let [k, _] = local_matrices(&coords, &MIDPOINTS, 0).unwrap();
        for r in 0..3 {
            let row: f64 = (0..3).map(|s| k[3 * r + s]).sum();
            assert!(row.abs() < 1e-12);
        }
    }

    #[test]
    fn mass_total_matches_hyperbolic_area() {
        // Sum of all mass entries = integral of 1 = weighted area.
        let coords = [[0.2, 0.1], [0.25, 0.12], [0.21, 0.16]];
        let [_, m] = local_matrices(&coords, &seven_point(), 0).unwrap();
        let total: f64 = m.iter().sum();
        let area = tri_hyp_area(&coords);
        assert!((total - area).abs() < 1e-14 * area.max(1.0));
    }

    #[test]
    fn seven_point_beats_midpoints_near_rim() {
        let coords = [[0.9, 0.0], [0.94, 0.0], [0.9, 0.04]];
        let [_, m3] = local_matrices(&coords, &MIDPOINTS, 0).unwrap();
        let [_, m7] = local_matrices(&coords, &seven_point(), 0).unwrap();
        // Reference: barycentric subdivision, degree-5 rule per subtriangle.
        let [p0, p1, p2] = coords;
        let nn = 32usize;
        let at = |u: usize, v: usize| -> [f64; 2] {
            let a = u as f64 / nn as f64;
            let b = v as f64 / nn as f64;
            let c = 1.0 - a - b;
            [
                c * p0[0] + a * p1[0] + b * p2[0],
                c * p0[1] + a * p1[1] + b * p2[1],
            ]
        };
        let mut refined = 0.0;
        for i in 0..nn {
            for j in 0..(nn - i) {
                refined += tri_hyp_area(&[at(i, j), at(i + 1, j), at(i, j + 1)]);
                if i + j + 1 < nn {
                    refined += tri_hyp_area(&[at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)]);
                }
            }
        }
        let t3: f64 = m3.iter().sum();
        let t7: f64 = m7.iter().sum();
        assert!((t7 - refined).abs() < (t3 - refined).abs());
    }
}
