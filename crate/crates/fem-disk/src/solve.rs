//! Boundary conditions and the low-spectrum eigensolve.

use std::collections::BTreeMap;

use eigkit::{smallest_eigenpairs, CsrMatrix, SolveOpts};

use crate::{DiskMesh, FemError};

/// Boundary condition on one mesh boundary component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bc {
    /// Natural condition: the component's nodes stay free.
    Neumann,
    /// Essential condition: the component's nodes are eliminated.
    Dirichlet,
}

/// Assignment of boundary conditions to loops and cuts.
///
/// Loops are addressed by their `BoundaryLoop::id`, cuts by index into
/// `DiskMesh::cuts`.  Unlisted components get the defaults: Neumann on
/// loops (closed geodesic boundaries) and Dirichlet on cuts (artificial
/// truncations, where elimination keeps truncated spectra above the
/// untruncated ones).
#[derive(Clone, Debug)]
pub struct BcSpec {
    pub default_loop: Bc,
    pub default_cut: Bc,
    pub loop_overrides: BTreeMap<usize, Bc>,
    pub cut_overrides: BTreeMap<usize, Bc>,
}

impl Default for BcSpec {
    fn default() -> Self {
        BcSpec {
            default_loop: Bc::Neumann,
            default_cut: Bc::Dirichlet,
            loop_overrides: BTreeMap::new(),
            cut_overrides: BTreeMap::new(),
        }
    }
}

impl BcSpec {
    /// Neumann everywhere, cuts included.
    pub fn neumann() -> Self {
        BcSpec { default_cut: Bc::Neumann, ..Default::default() }
    }

    /// Dirichlet everywhere, loops included.
    pub fn dirichlet() -> Self {
        BcSpec { default_loop: Bc::Dirichlet, ..Default::default() }
    }

    pub fn with_loop(mut self, id: usize, bc: Bc) -> Self {
        self.loop_overrides.insert(id, bc);
        self
    }

    pub fn with_cut(mut self, idx: usize, bc: Bc) -> Self {
        self.cut_overrides.insert(idx, bc);
        self
    }

    /// Sorted, deduplicated list of constrained nodes.
    fn dirichlet_nodes(&self, mesh: &DiskMesh) -> Result<Vec<u32>, FemError> {
        for &id in self.loop_overrides.keys() {
            if !mesh.boundary_loops.iter().any(|lp| lp.id == id) {
                return Err(FemError::UnknownBcTarget { kind: "loop", id });
            }
        }
        for &idx in self.cut_overrides.keys() {
            if idx >= mesh.cuts.len() {
                return Err(FemError::UnknownBcTarget { kind: "cut", id: idx });
            }
        }
        let mut nodes = Vec::new();
        for lp in &mesh.boundary_loops {
            let bc = self.loop_overrides.get(&lp.id).copied().unwrap_or(self.default_loop);
            if bc == Bc::Dirichlet {
                nodes.extend_from_slice(&lp.nodes);
            }
        }
        for (idx, cut) in mesh.cuts.iter().enumerate() {
            let bc = self.cut_overrides.get(&idx).copied().unwrap_or(self.default_cut);
            if bc == Bc::Dirichlet {
                nodes.extend_from_slice(&cut.nodes);
            }
        }
        nodes.sort_unstable();
        nodes.dedup();
        Ok(nodes)
    }
}

/// Result of [`solve_low_spectrum`]: ascending eigenvalues with full-length
/// eigenvectors (zero at eliminated nodes).
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    /// Relative residuals from the eigensolver, per pair.
    pub residuals: Vec<f64>,
    pub mesh_h: f64,
    /// Nodes eliminated by Dirichlet conditions, sorted.
    pub dirichlet_nodes: Vec<u32>,
}

/// Solves `K u = lambda M u` restricted to the nodes left free by `bc`.
///
/// The ground-state vector is normalized to nonnegative mass-weighted mean,
/// so repeated runs and symmetric meshes get a reproducible sign.
pub fn solve_low_spectrum(
    mesh: &DiskMesh,
    k: &CsrMatrix,
    m: &CsrMatrix,
    bc: &BcSpec,
    count: usize,
) -> Result<SpectralResult, FemError> {
    solve_low_spectrum_with(mesh, k, m, bc, &SolveOpts::with_count(count))
}

/// [`solve_low_spectrum`] with explicit eigensolver options.
pub fn solve_low_spectrum_with(
    mesh: &DiskMesh,
    k: &CsrMatrix,
    m: &CsrMatrix,
    bc: &BcSpec,
    opts: &SolveOpts,
) -> Result<SpectralResult, FemError> {
    let n = mesh.n_vertices();
    if k.n() != n {
        return Err(FemError::SizeMismatch { got: k.n(), expected: n });
    }
    if m.n() != n {
        return Err(FemError::SizeMismatch { got: m.n(), expected: n });
    }
    let dirichlet = bc.dirichlet_nodes(mesh)?;

    let mut new_of = vec![u32::MAX; n];
    let mut free = Vec::with_capacity(n - dirichlet.len());
    {
        let mut dit = dirichlet.iter().peekable();
        for i in 0..n {
            if dit.peek() == Some(&&(i as u32)) {
                dit.next();
            } else {
                new_of[i] = free.len() as u32;
                free.push(i as u32);
            }
        }
    }
    if free.is_empty() {
        return Err(FemError::AllConstrained);
    }

    let restrict = |a: &CsrMatrix| -> CsrMatrix {
        let mut triplets = Vec::new();
        for (new_r, &old_r) in free.iter().enumerate() {
            let (cols, vals) = a.row(old_r as usize);
            for (&c, &v) in cols.iter().zip(vals) {
                let nc = new_of[c as usize];
                if nc != u32::MAX {
                    triplets.push((new_r as u32, nc, v));
                }
            }
        }
        CsrMatrix::from_triplets(free.len(), &triplets)
    };
    let k_red = restrict(k);
    let m_red = restrict(m);

    let pairs = smallest_eigenpairs(&k_red, &m_red, opts)?;
    for &ev in &pairs.values {
        if ev < -1e-10 {
            return Err(FemError::NegativeEigenvalue(ev));
        }
    }

    let mut eigenvectors = Vec::with_capacity(pairs.vectors.len());
    for (j, v_red) in pairs.vectors.iter().enumerate() {
        let mut v = v_red.clone();
        if j == 0 {
            let mut mu = vec![0.0; v.len()];
            m_red.matvec(&v, &mut mu);
            let mean: f64 = mu.iter().sum();
            if mean < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        } else {
            eigkit::fix_sign(&mut v);
        }
        let mut full = vec![0.0; n];
        for (new_i, &old_i) in free.iter().enumerate() {
            full[old_i as usize] = v[new_i];
        }
        eigenvectors.push(full);
    }

    Ok(SpectralResult {
        eigenvalues: pairs.values,
        eigenvectors,
        residuals: pairs.residuals,
        mesh_h: mesh.mesh_h,
        dirichlet_nodes: dirichlet,
    })
}

/// Verifies that `perm` is an automorphism of the discrete problem and
/// returns the ground state's deviation from symmetry, `max |u0[i] -
/// u0[perm[i]]|`.
///
/// Checks: `perm` is a bijection, conjugating `K` and `M` by it leaves every
/// entry fixed to relative precision `1e-12`, and the Dirichlet node set is
/// preserved.  These make the discrete spectrum exactly degenerate under the
/// symmetry, so a simple ground state must be pointwise invariant.
pub fn symmetry_check(
    k: &CsrMatrix,
    m: &CsrMatrix,
    result: &SpectralResult,
    perm: &[u32],
) -> Result<f64, FemError> {
    let n = k.n();
    if perm.len() != n || m.n() != n {
        return Err(FemError::BadPermutation { got: perm.len().min(m.n()), n });
    }
    let mut seen = vec![false; n];
    for &img in perm {
        if img as usize >= n || seen[img as usize] {
            return Err(FemError::NotBijective(img));
        }
        seen[img as usize] = true;
    }

    let lookup = |a: &CsrMatrix, r: usize, c: u32| -> f64 {
        let (cols, vals) = a.row(r);
        match cols.binary_search(&c) {
            Ok(pos) => vals[pos],
            Err(_) => 0.0,
        }
    };
    for (name, a) in [("stiffness", k), ("mass", m)] {
        let _ = name;
        for i in 0..n {
            let (cols, vals) = a.row(i);
            let pi = perm[i] as usize;
            for (&c, &v) in cols.iter().zip(vals) {
                let w = lookup(a, pi, perm[c as usize]);
                let delta = (v - w).abs();
                if delta > 1e-12 * v.abs().max(1.0) {
                    return Err(FemError::NotAutomorphism { row: i, col: c as usize, delta });
                }
            }
        }
    }

    for &d in &result.dirichlet_nodes {
        if result.dirichlet_nodes.binary_search(&perm[d as usize]).is_err() {
            return Err(FemError::MovesConstraint(d));
        }
    }

    let u0 = result
        .eigenvectors
        .first()
        .ok_or(FemError::Internal("symmetry check needs an eigenvector"))?;
    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max((u0[i] - u0[perm[i] as usize]).abs());
    }
    Ok(worst)
}

/// Gap between the two lowest computed eigenvalues.
pub fn spectral_gap(result: &SpectralResult) -> Result<f64, FemError> {
    if result.eigenvalues.len() < 2 {
        return Err(FemError::GapNeedsTwo(result.eigenvalues.len()));
    }
    Ok(result.eigenvalues[1] - result.eigenvalues[0])
}
