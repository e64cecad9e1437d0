//! Node arena and strip triangulation shared by the meshers.
//!
//! Nodes are identified by structural keys, so a node created by one patch
//! (say a seam lateral) is found again by the neighboring patch and the
//! meshes stay conforming without any coordinate matching.  Coordinates are
//! stored twice on purpose: `vertices` keeps the owner chart's coordinates
//! for export and boundary checks, while every triangle carries its own
//! corner coordinates in the chart of the patch that emitted it.

use hyp_geom::disk::dist;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;

use crate::{assemble::tri_hyp_area, BoundaryLoop, Cut, DiskMesh, FemError};

/// Structural identity of a mesh node.  `pants`/`slot`/`seam`/`cuff` follow
/// the labels of `PantsGeometry`; `back` distinguishes the two hexagons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    /// Node `i` on a cuff circle; glued circles use the canonical side's id.
    Cuff { pants: u16, slot: u8, i: u32 },
    /// Annulus band node, row `j >= 1` outward from the circle.
    AnnRow { pants: u16, slot: u8, j: u16, i: u32 },
    /// Interior node of a seam lateral.  Each seam has two lateral columns,
    /// `end = 0` near its corner on cuff `seam+1` and `end = 1` near cuff
    /// `seam+2`; each column is shared by that cuff's front and back quad.
    SeamLat { pants: u16, seam: u8, end: u8, j: u16 },
    /// Seam midpoint, shared by eight patches.
    SeamMid { pants: u16, seam: u8 },
    QuadInt { pants: u16, cuff: u8, back: bool, i: u16, j: u16 },
    /// Interior node of a chord row (top of a quad = base of an apex).
    Chord { pants: u16, cuff: u8, back: bool, i: u16 },
    ApexInt { pants: u16, cuff: u8, back: bool, k: u16, i: u16 },
    /// Node on the geodesic from a seam midpoint to a hexagon center.
    Radial { pants: u16, seam: u8, back: bool, k: u16 },
    /// Hexagon center.
    Center { pants: u16, back: bool },
    /// Funnel band node, row `j >= 1` outward from the cuff circle.
    Funnel { pants: u16, slot: u8, j: u16, i: u32 },
    /// Simple product meshes (collars, disks).
    Grid { i: u32, j: u32 },
}

pub(crate) struct MeshBuilder {
    map: HashMap<Key, u32>,
    pub vertices: Vec<[f64; 2]>,
    pub chart: Vec<u32>,
    pub triangles: Vec<[u32; 3]>,
    pub tri_coords: Vec<[[f64; 2]; 3]>,
}

impl MeshBuilder {
    pub fn new() -> Self {
        MeshBuilder {
            map: HashMap::new(),
            vertices: Vec::new(),
            chart: Vec::new(),
            triangles: Vec::new(),
            tri_coords: Vec::new(),
        }
    }

    /// Id for `key`, creating the node with `(chart, z)` on first sight.
    /// Later calls keep the original coordinates: the first patch owns them.
    pub fn node(&mut self, key: Key, chart: u32, z: Complex64) -> u32 {
        if let Some(&id) = self.map.get(&key) {
            return id;
        }
        let id = self.vertices.len() as u32;
        self.map.insert(key, id);
        self.vertices.push([z.re, z.im]);
        self.chart.push(chart);
        id
    }

    pub fn lookup(&self, key: &Key) -> Option<u32> {
        self.map.get(key).copied()
    }

    pub fn keys(&self) -> impl Iterator<Item = (&Key, &u32)> {
        self.map.iter()
    }

    /// Emits a triangle given `(id, chart coordinates)` per corner, flipping
    /// to positive chart orientation; degenerate corners are an error.
    pub fn tri(&mut self, corners: [(u32, Complex64); 3]) -> Result<(), FemError> {
        let [a, b, c] = corners;
        let area2 =
            (b.1.re - a.1.re) * (c.1.im - a.1.im) - (c.1.re - a.1.re) * (b.1.im - a.1.im);
        let (t, z) = if area2 >= 0.0 {
            ([a.0, b.0, c.0], [a.1, b.1, c.1])
        } else {
            ([a.0, c.0, b.0], [a.1, c.1, b.1])
        };
        if area2.abs() <= 1e-14 {
            return Err(FemError::DegenerateTriangle {
                index: self.triangles.len(),
                area2: area2.abs(),
            });
        }
        self.triangles.push(t);
        self.tri_coords.push([[z[0].re, z[0].im], [z[1].re, z[1].im], [z[2].re, z[2].im]]);
        Ok(())
    }

    /// Triangulates the strip between two node rows sharing endpoints (or a
    /// cylinder band when both rows repeat their first node at the end).
    ///
    /// Greedy advance by the shorter chart diagonal; ties advance the row
    /// with more nodes left, then the bottom row.  The rule is deterministic
    /// and handles any count pair, including a single-node row (a fan).
    pub fn stitch(
        &mut self,
        bottom: &[(u32, Complex64)],
        top: &[(u32, Complex64)],
    ) -> Result<(), FemError> {
        let (nb, nt) = (bottom.len(), top.len());
        debug_assert!(nb >= 1 && nt >= 1 && nb + nt >= 3);
        let (mut i, mut j) = (0usize, 0usize);
        while i + 1 < nb || j + 1 < nt {
            let adv_bottom = if i + 1 >= nb {
                false
            } else if j + 1 >= nt {
                true
            } else {
                let db = (bottom[i + 1].1 - top[j].1).norm();
                let dt = (top[j + 1].1 - bottom[i].1).norm();
                if (db - dt).abs() <= 1e-12 * (db + dt) {
                    let (rb, rt) = (nb - 1 - i, nt - 1 - j);
                    rb >= rt
                } else {
                    db < dt
                }
            };
            if adv_bottom {
                self.tri([bottom[i], bottom[i + 1], top[j]])?;
                i += 1;
            } else {
                self.tri([bottom[i], top[j + 1], top[j]])?;
                j += 1;
            }
        }
        Ok(())
    }
}

/// Computes the derived fields and runs the full validation pass.
///
/// `arc_defect` is the mesher's absolute bound on area lost to straight
/// chords standing in for circular arcs (inscribed-polygon deficit); it
/// widens the analytic-area gate beyond the generic `O(mesh_h^2)` term.
pub(crate) fn finish_mesh(
    builder: MeshBuilder,
    boundary_loops: Vec<BoundaryLoop>,
    cuts: Vec<Cut>,
    expected_area: f64,
    arc_defect: f64,
    symmetry: Option<Vec<u32>>,
    cuff_dist: Option<Vec<Vec<f64>>>,
) -> Result<DiskMesh, FemError> {
    // Map in parallel, sum in order: keeps the reported area bit-stable
    // across thread counts.
    let areas: Vec<f64> = builder.tri_coords.par_iter().map(tri_hyp_area).collect();
    let hyperbolic_area: f64 = areas.iter().sum();
    let mesh_h = builder
        .tri_coords
        .par_iter()
        .map(|c| {
            let z = [
                Complex64::new(c[0][0], c[0][1]),
                Complex64::new(c[1][0], c[1][1]),
                Complex64::new(c[2][0], c[2][1]),
            ];
            dist(z[0], z[1]).max(dist(z[1], z[2])).max(dist(z[2], z[0]))
        })
        .reduce(|| 0.0, f64::max);
    let area_gate = 0.35 * mesh_h * mesh_h
        + if expected_area > 0.0 { arc_defect / expected_area } else { 0.0 };
    let mesh = DiskMesh {
        vertices: builder.vertices,
        chart: builder.chart,
        triangles: builder.triangles,
        tri_coords: builder.tri_coords,
        boundary_loops,
        cuts,
        hyperbolic_area,
        expected_area,
        mesh_h,
        area_gate,
        symmetry,
        cuff_dist,
    };
    mesh.validate()?;
    Ok(mesh)
}
