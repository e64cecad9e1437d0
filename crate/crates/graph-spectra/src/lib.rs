//! Graphs that surfaces are modeled on, and their combinatorial spectra.
//!
//! The graphs are balls in infinite constant-valence graphs (lattices, trees,
//! Cayley graphs) with the outermost shell tagged as truncation boundary.
//! Spectral quantities of the infinite graph are approached through the tag:
//! `mu0` with the Dirichlet flag removes tagged rows and is a certified upper
//! bound on the infinite graph's `mu0`, decreasing as the ball grows; the
//! Cheeger constant is bounded above by exhaustive enumeration over connected
//! untagged subsets.  Both conventions match infima over compactly supported
//! data.

pub mod cheeger;
pub mod colbois;

pub use cheeger::{
    cheeger_inequality_check, CheegerEstimate, CheegerMethod, CheegerMode, SandwichError,
    SandwichReport,
};
pub use colbois::{colbois_spectrum, ColboisForm};

use eigkit::{smallest_eigenpairs, CsrMatrix, SolveOpts};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {0} out of range (n = {1})")]
    EdgeOutOfRange(usize, usize),
    #[error("interior vertex {vertex} has degree {degree}, expected valence {valence}")]
    ValenceViolation { vertex: usize, degree: usize, valence: usize },
    #[error("operation needs at least one interior (untagged) vertex")]
    NoInterior,
    #[error("eigensolver failed: {0}")]
    Eigen(#[from] eigkit::EigError),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Finite graph, usually a tagged ball of an infinite constant-valence graph.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    boundary: Vec<bool>,
    valence: Option<usize>,
}

/// Wire format: `{ "vertices": n, "edges": [[i,j],...], "boundary": [k,...],
/// "valence": v }`.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    boundary: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    valence: Option<usize>,
}

/// Graph families. `radius`/`depth` of 0 is the single root vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphKind {
    /// Ball of radius `radius` in the integer lattice `Z^d`, `d` in {1, 2}.
    Lattice { d: usize, radius: usize },
    /// Ball of depth `depth` in the infinite `v`-regular tree, `v >= 3`.
    RegularTree { v: usize, depth: usize },
    /// Ball in a Cayley graph preset.
    CayleyBall { preset: CayleyPreset, radius: usize },
    /// Explicit edge list; boundary tags supplied by the caller.
    Explicit { vertices: usize, edges: Vec<(usize, usize)>, boundary: Vec<usize>, valence: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CayleyPreset {
    /// Free group of the given rank with the symmetric generating set;
    /// its Cayley graph is the (2 rank)-regular tree.
    FreeGroup { rank: usize },
    /// `Z^d` with standard generators; same balls as [`GraphKind::Lattice`].
    ZPower { d: usize },
}

impl Graph {
    /// Validates and builds from parts. `boundary` lists tagged vertices.
    pub fn new(
        vertices: usize,
        edges: &[(usize, usize)],
        boundary: &[usize],
        valence: Option<usize>,
    ) -> Result<Graph, GraphError> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); vertices];
        for &(a, b) in edges {
            if a >= vertices {
                return Err(GraphError::EdgeOutOfRange(a, vertices));
            }
            if b >= vertices {
                return Err(GraphError::EdgeOutOfRange(b, vertices));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if adj[a].contains(&(b as u32)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        let mut tag = vec![false; vertices];
        for &k in boundary {
            if k >= vertices {
                return Err(GraphError::EdgeOutOfRange(k, vertices));
            }
            tag[k] = true;
        }
        let g = Graph { adj, boundary: tag, valence };
        g.check_connected()?;
        if let Some(v) = valence {
            for i in 0..vertices {
                if !g.boundary[i] && g.adj[i].len() != v {
                    return Err(GraphError::ValenceViolation {
                        vertex: i,
                        degree: g.adj[i].len(),
                        valence: v,
                    });
                }
            }
        }
        Ok(g)
    }

    pub fn build(kind: &GraphKind) -> Result<Graph, GraphError> {
        match kind {
            GraphKind::Lattice { d, radius } => build_lattice(*d, *radius),
            GraphKind::RegularTree { v, depth } => build_tree(*v, *depth),
            GraphKind::CayleyBall { preset, radius } => match preset {
                CayleyPreset::FreeGroup { rank } => {
                    if *rank == 0 {
                        return Err(GraphError::BadParameter("free group rank must be >= 1".into()));
                    }
                    build_tree(2 * rank, *radius)
                }
                CayleyPreset::ZPower { d } => build_lattice(*d, *radius),
            },
            GraphKind::Explicit { vertices, edges, boundary, valence } => {
                Graph::new(*vertices, edges, boundary, *valence)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn valence(&self) -> Option<usize> {
        self.valence
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for &j in &self.adj[i] {
                if (j as usize) > i {
                    out.push((i, j as usize));
                }
            }
        }
        out
    }

    /// Untagged vertices, ascending.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.boundary[i]).collect()
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.boundary[i]).collect()
    }

    fn check_connected(&self) -> Result<(), GraphError> {
        if self.n() == 0 {
            return Err(GraphError::Disconnected);
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &self.adj[i] {
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    count += 1;
                    stack.push(j as usize);
                }
            }
        }
        if count != self.n() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            vertices: self.n(),
            edges: self.edges(),
            boundary: self.boundary_vertices(),
            valence: self.valence,
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph, GraphError> {
        let doc: GraphJson = serde_json::from_str(text)?;
        Graph::new(doc.vertices, &doc.edges, &doc.boundary, doc.valence)
    }
}

fn build_lattice(d: usize, radius: usize) -> Result<Graph, GraphError> {
    match d {
        1 => {
            let r = radius as i64;
            let n = (2 * r + 1) as usize;
            let idx = |x: i64| (x + r) as usize;
            let mut edges = Vec::new();
            for x in -r..r {
                edges.push((idx(x), idx(x + 1)));
            }
            let boundary: Vec<usize> =
                if radius == 0 { vec![] } else { vec![idx(-r), idx(r)] };
            // A radius-0 ball is a lone vertex; no valence claim can hold.
            let valence = if radius == 0 { None } else { Some(2) };
            Graph::new(n, &edges, &boundary, valence)
        }
        2 => {
            let r = radius as i64;
            let mut coords = Vec::new();
            let mut index = std::collections::HashMap::new();
            for x in -r..=r {
                for y in -r..=r {
                    if x.abs() + y.abs() <= r {
                        index.insert((x, y), coords.len());
                        coords.push((x, y));
                    }
                }
            }
            let mut edges = Vec::new();
            let mut boundary = Vec::new();
            for (i, &(x, y)) in coords.iter().enumerate() {
                for (dx, dy) in [(1i64, 0i64), (0, 1)] {
                    if let Some(&j) = index.get(&(x + dx, y + dy)) {
                        edges.push((i, j));
                    }
                }
                if x.abs() + y.abs() == r && r > 0 {
                    boundary.push(i);
                }
            }
            let valence = if radius == 0 { None } else { Some(4) };
            Graph::new(coords.len(), &edges, &boundary, valence)
        }
        _ => Err(GraphError::BadParameter(format!("lattice dimension {d} unsupported (use 1 or 2)"))),
    }
}

fn build_tree(v: usize, depth: usize) -> Result<Graph, GraphError> {
    if v < 3 {
        return Err(GraphError::BadParameter(format!("tree valence {v} must be >= 3")));
    }
    let mut edges = Vec::new();
    let mut next = 1usize;
    let mut shell = vec![0usize];
    for level in 0..depth {
        let mut new_shell = Vec::new();
        for &p in &shell {
            let children = if level == 0 { v } else { v - 1 };
            for _ in 0..children {
                edges.push((p, next));
                new_shell.push(next);
                next += 1;
            }
        }
        shell = new_shell;
    }
    let boundary = if depth == 0 { vec![] } else { shell };
    Graph::new(next, &edges, &boundary, Some(v))
}

/// Combinatorial Laplacian `(Delta_G f)(i) = sum_{i~j} (f(i) - f(j))`.
///
/// Without the Dirichlet flag the operator acts on every vertex and has zero
/// row sums.  With it, rows and columns of tagged vertices are removed; the
/// returned index list maps matrix rows back to vertex ids.
pub fn combinatorial_laplacian(
    g: &Graph,
    dirichlet_on_boundary: bool,
) -> Result<(CsrMatrix, Vec<usize>), GraphError> {
    let kept: Vec<usize> = if dirichlet_on_boundary {
        g.interior()
    } else {
        (0..g.n()).collect()
    };
    if kept.is_empty() {
        return Err(GraphError::NoInterior);
    }
    let mut back = vec![u32::MAX; g.n()];
    for (row, &v) in kept.iter().enumerate() {
        back[v] = row as u32;
    }
    let mut triplets = Vec::new();
    for (row, &v) in kept.iter().enumerate() {
        // Diagonal is the full degree: Dirichlet removes the column but the
        // difference against the (zero) tagged neighbor still costs energy.
        triplets.push((row as u32, row as u32, g.neighbors(v).len() as f64));
        for &w in g.neighbors(v) {
            let col = back[w as usize];
            if col != u32::MAX {
                triplets.push((row as u32, col, -1.0));
            }
        }
    }
    Ok((CsrMatrix::from_triplets(kept.len(), &triplets), kept))
}

/// Result of [`mu0`]: the bottom eigenvalue and its (unit, sign-fixed)
/// eigenvector over the kept vertex set.
#[derive(Debug, Clone)]
pub struct Mu0 {
    pub value: f64,
    pub vertex_ids: Vec<usize>,
    pub eigenvector: Vec<f64>,
}

/// Bottom of the spectrum of the combinatorial Laplacian.
///
/// Dirichlet flag set: smallest eigenvalue over functions vanishing on the
/// tagged shell, an upper bound for the infinite graph's `mu0`, nonincreasing
/// under ball growth.  Flag clear: 0 for any finite connected graph.
pub fn mu0(g: &Graph, dirichlet_on_boundary: bool) -> Result<Mu0, GraphError> {
    let (lap, kept) = combinatorial_laplacian(g, dirichlet_on_boundary)?;
    let n = lap.n();
    let mass = CsrMatrix::from_triplets(
        n,
        &(0..n as u32).map(|i| (i, i, 1.0)).collect::<Vec<_>>(),
    );
    let pairs = smallest_eigenpairs(&lap, &mass, &SolveOpts::with_count(1))?;
    Ok(Mu0 { value: pairs.values[0], vertex_ids: kept, eigenvector: pairs.vectors[0].clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_1d_is_a_tagged_path() {
        let g = Graph::build(&GraphKind::Lattice { d: 1, radius: 2 }).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.boundary_vertices().len(), 2);
        assert!(g.is_boundary(0) && g.is_boundary(4));
        assert_eq!(g.interior(), vec![1, 2, 3]);
    }

    #[test]
    fn tree_ball_counts() {
        let g = Graph::build(&GraphKind::RegularTree { v: 3, depth: 2 }).unwrap();
        assert_eq!(g.n(), 10, "1 + 3 + 6");
        assert_eq!(g.edges().len(), 9);
        assert_eq!(g.boundary_vertices().len(), 6);
        let center_deg = g.neighbors(0).len();
        assert_eq!(center_deg, 3);
    }

    #[test]
    fn cayley_free_group_ball() {
        let g = Graph::build(&GraphKind::CayleyBall {
            preset: CayleyPreset::FreeGroup { rank: 2 },
            radius: 1,
        })
        .unwrap();
        assert_eq!(g.n(), 5, "identity plus 4 generators");
        assert_eq!(g.neighbors(0).len(), 4);
        assert_eq!(g.boundary_vertices().len(), 4);
    }

    #[test]
    fn lattice_2d_ball_counts() {
        let g = Graph::build(&GraphKind::Lattice { d: 2, radius: 2 }).unwrap();
        assert_eq!(g.n(), 13, "1 + 4 + 8");
        assert_eq!(g.boundary_vertices().len(), 8);
        // Interior vertices have full valence 4.
        for &i in &g.interior() {
            assert_eq!(g.neighbors(i).len(), 4);
        }
    }

    #[test]
    fn explicit_graph_validation() {
        assert!(matches!(
            Graph::new(3, &[(0, 1)], &[], None),
            Err(GraphError::Disconnected)
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 0)], &[], None),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 1), (1, 0)], &[], None),
            Err(GraphError::DuplicateEdge(1, 0))
        ));
        // Valence enforced on interior only.
        assert!(Graph::new(3, &[(0, 1), (1, 2)], &[0, 2], Some(2)).is_ok());
        assert!(matches!(
            Graph::new(3, &[(0, 1), (1, 2)], &[2], Some(2)),
            Err(GraphError::ValenceViolation { vertex: 0, .. })
        ));
    }

    #[test]
    fn laplacian_row_sums_and_path3_spectrum() {
        let g = Graph::build(&GraphKind::Lattice { d: 1, radius: 1 }).unwrap();
        let (lap, kept) = combinatorial_laplacian(&g, false).unwrap();
        assert_eq!(kept.len(), 3);
        // Row sums zero without Dirichlet.
        let ones = vec![1.0; 3];
        let mut out = vec![0.0; 3];
        lap.matvec(&ones, &mut out);
        for v in out {
            assert!(v.abs() < 1e-14);
        }
        // Path-3 spectrum {0, 1, 3}: oracle from the 3x3 characteristic
        // polynomial by hand: det(L - x I) = -x (x - 1)(x - 3).
        let dense = lap.to_dense();
        let eig = dense.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in vals.iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn single_vertex_operator_is_zero() {
        let g = Graph::build(&GraphKind::Lattice { d: 1, radius: 0 }).unwrap();
        let (lap, _) = combinatorial_laplacian(&g, false).unwrap();
        assert_eq!(lap.n(), 1);
        assert_eq!(lap.diag()[0], 0.0);
        let m = mu0(&g, false).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn path5_dirichlet_mu0_closed_form() {
        let g = Graph::build(&GraphKind::Lattice { d: 1, radius: 2 }).unwrap();
        let (lap, kept) = combinatorial_laplacian(&g, true).unwrap();
        assert_eq!(kept, vec![1, 2, 3]);
        // Interior operator is tridiag(-1, 2, -1).
        let d = lap.to_dense();
        assert_eq!(d[(0, 0)], 2.0);
        assert_eq!(d[(0, 1)], -1.0);
        assert_eq!(d[(0, 2)], 0.0);
        let m = mu0(&g, true).unwrap();
        let want = 2.0 - 2f64.sqrt();
        assert!((m.value - want).abs() < 1e-10, "{} vs {want}", m.value);
    }

    #[test]
    fn dirichlet_mu0_decreases_with_ball_radius() {
        let mut last = f64::INFINITY;
        for depth in 2..=5 {
            let g = Graph::build(&GraphKind::RegularTree { v: 3, depth }).unwrap();
            let m = mu0(&g, true).unwrap().value;
            assert!(m < last + 1e-12, "depth {depth}: {m} vs previous {last}");
            assert!(m > 0.0);
            last = m;
        }
    }

    #[test]
    fn json_roundtrip() {
        let g = Graph::build(&GraphKind::RegularTree { v: 3, depth: 2 }).unwrap();
        let text = g.to_json();
        let h = Graph::from_json(&text).unwrap();
        assert_eq!(g.n(), h.n());
        assert_eq!(g.edges(), h.edges());
        assert_eq!(g.boundary_vertices(), h.boundary_vertices());
        assert_eq!(g.valence(), h.valence());
        assert!(Graph::from_json("{\"vertices\": 2, \"edges\": [[0,1],[0,1]]}").is_err());
    }
}
