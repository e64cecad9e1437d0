//! Product meshes used as oracles: collar bands and geodesic disks.

use hyp_geom::disk::LineFrame;
use num_complex::Complex64;

use crate::build::{finish_mesh, Key, MeshBuilder};
use crate::{Cut, CutKind, DiskMesh, FemError};

/// Meshes the Fermi band `r in [r_lo, r_hi]` around a closed geodesic of
/// length `l`, with interval counts chosen from `target_h`.
///
/// When the band is symmetric about `r = 0` the row count is forced even, so
/// the geodesic itself is a mesh row and the triangulation mirrors across it
/// (see [`mesh_collar_with`] for why that matters).
pub fn mesh_collar(l: f64, r_lo: f64, r_hi: f64, target_h: f64) -> Result<DiskMesh, FemError> {
    if !(target_h > 0.0 && target_h.is_finite()) {
        return Err(FemError::BadMeshSize(target_h));
    }
    if !(r_hi > r_lo) {
        return Err(FemError::EmptyBand(r_lo, r_hi));
    }
    let span = r_hi - r_lo;
    let mut n_r = ((span / target_h).ceil() as usize).max(2);
    if (r_lo + r_hi).abs() < 1e-12 && n_r % 2 == 1 {
        n_r += 1;
    }
    let max_cosh = r_lo.abs().max(r_hi.abs()).cosh();
    let n_t = ((l * max_cosh / target_h).ceil() as usize).max(8);
    mesh_collar_with(l, r_lo, r_hi, n_r, n_t)
}

/// Collar band with explicit interval counts.
///
/// The diagonal of each grid cell is chosen by the sign of the cell's radial
/// midpoint, not by index, so a band split at a mesh row produces pieces
/// whose triangulations are exact sub-triangulations of the whole.  That
/// makes discrete Neumann-split comparisons sharp instead of O(h^2).
pub fn mesh_collar_with(
    l: f64,
    r_lo: f64,
    r_hi: f64,
    n_r: usize,
    n_t: usize,
) -> Result<DiskMesh, FemError> {
    if !(l > 0.0) {
        return Err(FemError::Geometry(hyp_geom::GeomError::NonPositiveLength(l)));
    }
    if !(r_hi > r_lo) {
        return Err(FemError::EmptyBand(r_lo, r_hi));
    }
    if n_r < 2 || n_t < 3 {
        return Err(FemError::GridTooCoarse(n_r, n_t));
    }
    let axis = LineFrame::AXIS;
    let r_at = |j: usize| r_lo + (r_hi - r_lo) * (j as f64 / n_r as f64);
    let t_at = |i: usize| l * (i as f64 / n_t as f64);

    let mut b = MeshBuilder::new();
    // Row-major node creation for a stable numbering.
    let mut rows: Vec<Vec<(u32, Complex64)>> = Vec::with_capacity(n_r + 1);
    for j in 0..=n_r {
        let mut row = Vec::with_capacity(n_t + 1);
        for i in 0..=n_t {
            let z = axis.embed(t_at(i), r_at(j));
            let id = b.node(Key::Grid { i: (i % n_t) as u32, j: j as u32 }, 0, z);
            row.push((id, z));
        }
        rows.push(row);
    }
    for j in 0..n_r {
        let mid = 0.5 * (r_at(j) + r_at(j + 1));
        for i in 0..n_t {
            let (bl, br) = (rows[j][i], rows[j][i + 1]);
            let (tl, tr) = (rows[j + 1][i], rows[j + 1][i + 1]);
            if mid >= 0.0 {
                b.tri([bl, br, tr])?;
                b.tri([bl, tr, tl])?;
            } else {
                b.tri([bl, br, tl])?;
                b.tri([br, tr, tl])?;
            }
        }
    }

    let cuts = vec![
        Cut {
            kind: CutKind::CollarEnd { end: 0 },
            nodes: rows[0][..n_t].iter().map(|&(id, _)| id).collect(),
        },
        Cut {
            kind: CutKind::CollarEnd { end: 1 },
            nodes: rows[n_r][..n_t].iter().map(|&(id, _)| id).collect(),
        },
    ];
    let expected = l * (r_hi.sinh() - r_lo.sinh());
    finish_mesh(b, vec![], cuts, expected, 0.0, None, None)
}

/// Meshes the geodesic disk of the given radius: a center fan plus rings
/// whose node counts track the circumference `2 pi sinh(rho)`.
pub fn mesh_geodesic_disk(radius: f64, target_h: f64) -> Result<DiskMesh, FemError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(FemError::BadRadius(radius));
    }
    if !(target_h > 0.0 && target_h.is_finite()) {
        return Err(FemError::BadMeshSize(target_h));
    }
    let n_rho = ((radius / target_h).ceil() as usize).max(2);
    let two_pi = 2.0 * std::f64::consts::PI;

    let mut b = MeshBuilder::new();
    let center = b.node(Key::Grid { i: 0, j: 0 }, 0, Complex64::new(0.0, 0.0));
    let mut prev: Vec<(u32, Complex64)> = vec![(center, Complex64::new(0.0, 0.0))];
    let mut rim: Vec<u32> = vec![];
    // Inscribed-chord area deficit of the circular rings, band by band: the
    // quality floor of 8 nodes keeps the angular step large on small rings
    // no matter how fine `target_h` is, so the deficit is declared to the
    // validator instead of being folded into the edge-length term.
    let mut arc_defect = 0.0;
    for j in 1..=n_rho {
        let rho = radius * (j as f64 / n_rho as f64);
        let rho_prev = radius * ((j - 1) as f64 / n_rho as f64);
        let n_th = ((two_pi * rho.sinh() / target_h).ceil() as usize).max(8);
        let theta = two_pi / n_th as f64;
        let band = two_pi * (rho.cosh() - rho_prev.cosh());
        arc_defect += band * theta * theta / 3.0;
        let rad = (0.5 * rho).tanh();
        let mut ring = Vec::with_capacity(n_th + 1);
        for i in 0..=n_th {
            let th = two_pi * (i as f64 / n_th as f64);
            let z = Complex64::new(rad * th.cos(), rad * th.sin());
            let id = b.node(Key::Grid { i: (i % n_th) as u32, j: j as u32 }, 0, z);
            ring.push((id, z));
        }
        b.stitch(&prev, &ring)?;
        if j == n_rho {
            rim = ring[..n_th].iter().map(|&(id, _)| id).collect();
        }
        prev = ring;
    }

    let cuts = vec![Cut { kind: CutKind::DiskRim, nodes: rim }];
    let expected = two_pi * (radius.cosh() - 1.0);
    finish_mesh(b, vec![], cuts, expected, arc_defect, None, None)
}
