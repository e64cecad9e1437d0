//! P1 finite elements for hyperbolic surfaces charted in the Poincare disk.
//!
//! Meshes are unions of patches, each developed into the disk by its own
//! chart isometry; triangle geometry is stored per triangle in the chart
//! where the patch was built.  The Laplacian is conformally invariant in two
//! dimensions, so the stiffness matrix is the flat P1 stiffness of the chart
//! coordinates, while the mass matrix carries the hyperbolic area weight
//! `(2 / (1 - |z|^2))^2`.  Everything is deterministic: node numbering,
//! triangulation, assembly order, and solver seeds.

mod build;
mod pants;

pub mod assemble;
pub mod cell;
pub mod simple;
pub mod solve;

pub use assemble::{assemble, assemble_triplets, assemble_with, MassQuadrature};
pub use cell::mesh_cell;
pub use simple::{mesh_collar, mesh_collar_with, mesh_geodesic_disk};
pub use solve::{
    solve_low_spectrum, solve_low_spectrum_with, spectral_gap, symmetry_check, Bc, BcSpec,
    SpectralResult,
};

use std::collections::HashMap;

use hyp_geom::disk::dist;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error(transparent)]
    Geometry(#[from] hyp_geom::GeomError),
    #[error("hexagon walk failed to close (cuff length {l}): deviation {deviation:.3e}")]
    HexagonWalk { l: f64, deviation: f64 },
    #[error("hexagon self-check `{check}` failed: deviation {deviation:.3e}")]
    HexagonCheck { check: &'static str, deviation: f64 },
    #[error("mesh size must be positive and finite, got {0}")]
    BadMeshSize(f64),
    #[error("funnel truncation depth must be positive and finite, got {0}")]
    BadTruncation(f64),
    #[error("cuff length {0} is below 0.01; such thin collars need the graded mesh option")]
    NeedsGraded(f64),
    #[error("band needs r_hi > r_lo, got [{0}, {1}]")]
    EmptyBand(f64, f64),
    #[error("disk radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("grid needs at least 2 intervals per direction, got {0} x {1}")]
    GridTooCoarse(usize, usize),
    #[error("triangle {index} is degenerate: doubled chart area {area2:.3e}")]
    DegenerateTriangle { index: usize, area2: f64 },
    #[error("vertex {0} lies outside the open unit disk")]
    VertexOutsideDisk(usize),
    #[error("triangle {tri} references vertex {vertex} out of range")]
    BadIndex { tri: usize, vertex: u32 },
    #[error("edge ({0}, {1}) borders {2} triangles; surfaces must be manifold")]
    NonManifoldEdge(u32, u32, usize),
    #[error("boundary edge accounting failed: {0}")]
    BadBoundary(String),
    #[error("boundary loop {id} strays from its geodesic by {deviation:.3e}")]
    LoopOffGeodesic { id: usize, deviation: f64 },
    #[error("mesh area {got:.8} deviates from the closed form {expected:.8} by more than 0.5%")]
    AreaMismatch { got: f64, expected: f64 },
    #[error("matrix size {got} does not match the mesh's {expected} vertices")]
    SizeMismatch { got: usize, expected: usize },
    #[error("boundary condition targets unknown {kind} {id}")]
    UnknownBcTarget { kind: &'static str, id: usize },
    #[error("every unknown is constrained; nothing to solve")]
    AllConstrained,
    #[error(transparent)]
    Eig(#[from] eigkit::EigError),
    #[error("computed eigenvalue {0:.3e} is negative beyond roundoff")]
    NegativeEigenvalue(f64),
    #[error("spectral gap needs at least two converged pairs, got {0}")]
    GapNeedsTwo(usize),
    #[error("permutation length {got} does not match {n} unknowns")]
    BadPermutation { got: usize, n: usize },
    #[error("permutation is not a bijection: node {0} is hit twice")]
    NotBijective(u32),
    #[error("permutation is not a pencil automorphism: entry ({row}, {col}) changes by {delta:.3e}")]
    NotAutomorphism { row: usize, col: usize, delta: f64 },
    #[error("permutation does not preserve the constrained node set (node {0})")]
    MovesConstraint(u32),
    #[error("internal meshing invariant violated: {0}")]
    Internal(&'static str),
}

/// Meshing options shared by the cell meshers.
#[derive(Debug, Clone)]
pub struct MeshOpts {
    /// Target hyperbolic edge length.
    pub target_h: f64,
    /// Depth at which attached funnels are truncated.
    pub r_trunc: f64,
    /// Allow column counts to shrink toward thin cuffs (and permits
    /// cuff lengths below `0.01`, whose collars are extremely anisotropic).
    pub graded: bool,
}

impl MeshOpts {
    pub fn new(target_h: f64) -> Self {
        MeshOpts { target_h, r_trunc: 3.0, graded: false }
    }

    pub fn with_r_trunc(mut self, r_trunc: f64) -> Self {
        self.r_trunc = r_trunc;
        self
    }

    pub fn with_graded(mut self, graded: bool) -> Self {
        self.graded = graded;
        self
    }
}

/// Where a mesh was truncated (Dirichlet by default when solving).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutKind {
    /// Funnel cut off at finite depth; `boundary` is the cuff id it flares from.
    FunnelTruncation { boundary: usize },
    /// One end circle of a collar band (`0` at `r_lo`, `1` at `r_hi`).
    CollarEnd { end: usize },
    /// Rim of a truncated geodesic disk.
    DiskRim,
}

/// A truncation circle: nodes in cyclic order.
#[derive(Debug, Clone)]
pub struct Cut {
    pub kind: CutKind,
    pub nodes: Vec<u32>,
}

/// A boundary cuff of a cell: a closed geodesic with an arc-length
/// parameterization, the gluing interface of the modeled-surface assembly.
#[derive(Debug, Clone)]
pub struct BoundaryLoop {
    /// Cuff id, `1..=v` in hole order.
    pub id: usize,
    /// Nodes in cyclic order of increasing parameter (no repeats).
    pub nodes: Vec<u32>,
    /// Arc-length parameter of each node along the cuff.
    pub params: Vec<f64>,
    /// Total length of the cuff geodesic.
    pub circumference: f64,
    /// True when an attached funnel makes this circle interior to the mesh.
    pub funneled: bool,
}

/// Triangle mesh of a hyperbolic surface piece, charted in the unit disk.
///
/// `vertices[i]` holds the coordinates of node `i` in the chart `chart[i]`
/// that first created it; `tri_coords[t]` holds all three corner coordinates
/// of triangle `t` in the chart of the patch that emitted it.  Assembly reads
/// only `tri_coords`, so nodes shared between charts need no global
/// coordinates.
#[derive(Debug, Clone)]
pub struct DiskMesh {
    pub vertices: Vec<[f64; 2]>,
    /// Chart id owning each vertex's stored coordinates.
    pub chart: Vec<u32>,
    pub triangles: Vec<[u32; 3]>,
    /// Per-triangle corner coordinates in the emitting patch's chart.
    pub tri_coords: Vec<[[f64; 2]; 3]>,
    pub boundary_loops: Vec<BoundaryLoop>,
    pub cuts: Vec<Cut>,
    /// Area from the degree-5 quadrature of the hyperbolic weight.
    pub hyperbolic_area: f64,
    /// Closed-form target area (Gauss-Bonnet plus funnel strips).
    pub expected_area: f64,
    /// Longest hyperbolic edge.
    pub mesh_h: f64,
    /// Relative tolerance for the analytic-area check: `0.35 * mesh_h^2`
    /// plus the arc-chord defect the mesher declared for its circular bands.
    pub area_gate: f64,
    /// Node permutation realizing the cell's order-`v` isometry, when the
    /// topology guarantees one.
    pub symmetry: Option<Vec<u32>>,
    /// For each boundary loop, per node: hyperbolic distance to that cuff's
    /// geodesic, exact within the flanking pants and `+inf` beyond it (any
    /// path from another pants crosses a full seam, which is wider than the
    /// collar the distances are consumed for).
    pub cuff_dist: Option<Vec<Vec<f64>>>,
}

impl DiskMesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// `V - E + F` over the triangulation.
    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = HashMap::new();
        for t in &self.triangles {
            for e in [[t[0], t[1]], [t[1], t[2]], [t[2], t[0]]] {
                let key = (e[0].min(e[1]), e[0].max(e[1]));
                *edges.entry(key).or_insert(0usize) += 1;
            }
        }
        self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }

    /// Structural well-formedness plus the geometric contracts: positive
    /// chart areas, manifold edge incidence, boundary edges accounted for by
    /// loops and cuts, loops on their geodesics with consistent arc-length
    /// parameters, and total area within 0.5% of the closed form.
    pub fn validate(&self) -> Result<(), FemError> {
        let n = self.vertices.len() as u32;
        for (i, v) in self.vertices.iter().enumerate() {
            let r2 = v[0] * v[0] + v[1] * v[1];
            if !(r2 < 1.0) {
                return Err(FemError::VertexOutsideDisk(i));
            }
        }
        if self.triangles.len() != self.tri_coords.len() {
            return Err(FemError::Internal("triangles and tri_coords lengths differ"));
        }
        let mut edges: HashMap<(u32, u32), usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &v in tri {
                if v >= n {
                    return Err(FemError::BadIndex { tri: t, vertex: v });
                }
            }
            let c = &self.tri_coords[t];
            let area2 = (c[1][0] - c[0][0]) * (c[2][1] - c[0][1])
                - (c[2][0] - c[0][0]) * (c[1][1] - c[0][1]);
            if area2 <= 1e-14 {
                return Err(FemError::DegenerateTriangle { index: t, area2 });
            }
            for e in [[tri[0], tri[1]], [tri[1], tri[2]], [tri[2], tri[0]]] {
                let key = (e[0].min(e[1]), e[0].max(e[1]));
                *edges.entry(key).or_insert(0) += 1;
            }
        }
        for (&(a, b), &count) in &edges {
            if count > 2 {
                return Err(FemError::NonManifoldEdge(a, b, count));
            }
        }

        // Every circle recorded on the mesh must be an edge chain; open-mesh
        // boundary edges must be exactly the non-funneled loops plus cuts.
        let mut claimed: HashMap<(u32, u32), usize> = HashMap::new();
        let mut claim = |nodes: &[u32], closed: bool| -> Result<(), FemError> {
            let m = nodes.len();
            let last = if closed { m } else { m - 1 };
            for i in 0..last {
                let (a, b) = (nodes[i], nodes[(i + 1) % m]);
                let key = (a.min(b), a.max(b));
                *claimed.entry(key).or_insert(0) += 1;
            }
            Ok(())
        };
        for lp in &self.boundary_loops {
            if lp.nodes.len() != lp.params.len() || lp.nodes.len() < 3 {
                return Err(FemError::BadBoundary(format!(
                    "loop {} has {} nodes and {} params",
                    lp.id,
                    lp.nodes.len(),
                    lp.params.len()
                )));
            }
            if !lp.funneled {
                claim(&lp.nodes, true)?;
            } else {
                // Funneled cuffs are interior circles; their edges must exist
                // and be shared by two triangles.
                let mnodes = lp.nodes.len();
                for i in 0..mnodes {
                    let (a, b) = (lp.nodes[i], lp.nodes[(i + 1) % mnodes]);
                    let key = (a.min(b), a.max(b));
                    if edges.get(&key) != Some(&2) {
                        return Err(FemError::BadBoundary(format!(
                            "funneled loop {} edge ({a}, {b}) is not interior",
                            lp.id
                        )));
                    }
                }
            }
        }
        for cut in &self.cuts {
            if cut.nodes.len() < 3 {
                return Err(FemError::BadBoundary(format!(
                    "cut {:?} has only {} nodes",
                    cut.kind,
                    cut.nodes.len()
                )));
            }
            claim(&cut.nodes, true)?;
        }
        let boundary: HashMap<(u32, u32), usize> =
            edges.iter().filter(|(_, &c)| c == 1).map(|(&e, _)| (e, 1)).collect();
        for key in claimed.keys() {
            if !boundary.contains_key(key) {
                return Err(FemError::BadBoundary(format!(
                    "claimed edge ({}, {}) is not a boundary edge",
                    key.0, key.1
                )));
            }
        }
        for key in boundary.keys() {
            if !claimed.contains_key(key) {
                return Err(FemError::BadBoundary(format!(
                    "boundary edge ({}, {}) belongs to no loop or cut",
                    key.0, key.1
                )));
            }
        }

        // Loops live on their geodesics: in the owning chart the cuff is the
        // real axis, so straying shows up as imaginary part; parameter steps
        // must match hyperbolic arc length.
        for lp in &self.boundary_loops {
            let mut dev: f64 = 0.0;
            let mnodes = lp.nodes.len();
            if mnodes < 3 || lp.params.len() != mnodes {
                return Err(FemError::BadBoundary(format!(
                    "loop {} has {} nodes and {} params",
                    lp.id,
                    mnodes,
                    lp.params.len()
                )));
            }
            let span = lp.params[mnodes - 1] - lp.params[0];
            if !(lp.circumference.is_finite() && span > 0.0 && span < lp.circumference) {
                return Err(FemError::BadBoundary(format!(
                    "loop {} params span {span} against circumference {}",
                    lp.id, lp.circumference
                )));
            }
            for i in 0..mnodes {
                let v = self.vertices[lp.nodes[i] as usize];
                dev = dev.max(v[1].abs());
                let w = self.vertices[lp.nodes[(i + 1) % mnodes] as usize];
                let step = dist(Complex64::new(v[0], v[1]), Complex64::new(w[0], w[1]));
                // The chart unrolls the circle, so the closing edge runs back
                // across the whole unrolled parameter range.
                let expected = if i + 1 == mnodes {
                    lp.params[mnodes - 1] - lp.params[0]
                } else {
                    lp.params[i + 1] - lp.params[i]
                };
                dev = dev.max((step - expected).abs());
            }
            if dev > 1e-9 {
                return Err(FemError::LoopOffGeodesic { id: lp.id, deviation: dev });
            }
        }

        if self.expected_area > 0.0 {
            let rel = (self.hyperbolic_area - self.expected_area).abs() / self.expected_area;
            // Straight chart edges misestimate curved area at O(h^2), plus
            // whatever arc-chord defect the mesher declared; the gate tracks
            // both so coarse meshes pass while anything
            // resolution-independent (overlaps, missing patches) still trips.
            let gate = self.area_gate.max(0.005);
            if rel > gate {
                return Err(FemError::AreaMismatch {
                    got: self.hyperbolic_area,
                    expected: self.expected_area,
                });
            }
        }

        if let Some(sym) = &self.symmetry {
            if sym.len() != self.vertices.len() {
                return Err(FemError::BadPermutation { got: sym.len(), n: self.vertices.len() });
            }
            let mut seen = vec![false; sym.len()];
            for &img in sym {
                if img >= n || seen[img as usize] {
                    return Err(FemError::NotBijective(img));
                }
                seen[img as usize] = true;
            }
        }
        if let Some(cd) = &self.cuff_dist {
            if cd.len() != self.boundary_loops.len()
                || cd.iter().any(|col| col.len() != self.vertices.len())
            {
                return Err(FemError::Internal("cuff_dist shape mismatch"));
            }
        }
        Ok(())
    }

    /// Plain-text serialization: counts, vertex chart coordinates, triangle
    /// indices, then tagged loops and cuts.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        writeln!(s, "hyperbolic-mesh v1").unwrap();
        writeln!(s, "area {:.17e} expected {:.17e}", self.hyperbolic_area, self.expected_area)
            .unwrap();
        writeln!(s, "mesh_h {:.17e}", self.mesh_h).unwrap();
        writeln!(s, "vertices {}", self.vertices.len()).unwrap();
        for (v, &c) in self.vertices.iter().zip(&self.chart) {
            writeln!(s, "{:.17e} {:.17e} {c}", v[0], v[1]).unwrap();
        }
        writeln!(s, "triangles {}", self.triangles.len()).unwrap();
        for t in &self.triangles {
            writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        for lp in &self.boundary_loops {
            writeln!(
                s,
                "boundary_loop {} {} {}",
                lp.id,
                lp.nodes.len(),
                if lp.funneled { "funneled" } else { "geodesic" }
            )
            .unwrap();
            for (n, p) in lp.nodes.iter().zip(&lp.params) {
                writeln!(s, "{n} {p:.17e}").unwrap();
            }
        }
        for cut in &self.cuts {
            let kind = match &cut.kind {
                CutKind::FunnelTruncation { boundary } => format!("funnel_truncation:{boundary}"),
                CutKind::CollarEnd { end } => format!("collar_end:{end}"),
                CutKind::DiskRim => "disk_rim".to_string(),
            };
            writeln!(s, "cut {kind} {}", cut.nodes.len()).unwrap();
            for nidx in &cut.nodes {
                writeln!(s, "{nidx}").unwrap();
            }
        }
        s
    }
}
