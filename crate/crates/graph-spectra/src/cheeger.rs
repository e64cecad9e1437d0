//! Cheeger constants on tagged balls, and the combinatorial sandwich
//! `h^2/(2v) <= mu0 <= h`.
//!
//! The boundary of a subset is the *vertex* boundary taken inside the set:
//! `dG_f = { x in G_f : some neighbor of x lies outside G_f }`.  Subsets range
//! over nonempty *connected* sets of untagged vertices; restricting to
//! connected sets loses nothing because a disjoint union's ratio is at least
//! the best component's ratio.
//!
//! On a tagged ball both exhaustive `h` and Dirichlet `mu0` are upper bounds
//! for the corresponding infinite-graph quantities, so the infinite-graph
//! sandwich does not automatically transfer: the lower half
//! `h^2/(2v) <= mu0` survives truncation (the co-area proof runs on the
//! Dirichlet problem directly), but the upper half can fail on balls whose
//! Dirichlet shell is "everywhere close", e.g. 2-D lattice balls.
//! [`cheeger_inequality_check`] treats any violation as a hard error, as its
//! contract demands; callers probing truncation artifacts should compare the
//! two report fields themselves.

use rayon::prelude::*;

use crate::{mu0, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheegerMode {
    /// Exact minimum over all nonempty connected untagged subsets.  Errors
    /// if the interior has more than `cap` vertices (default 16).
    Exhaustive { cap: usize },
    /// Upper bound from the best BFS ball around `center` that stays clear
    /// of the tagged shell.
    FolnerBalls { center: usize },
}

impl CheegerMode {
    pub fn exhaustive() -> Self {
        CheegerMode::Exhaustive { cap: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheegerMethod {
    Exhaustive,
    FolnerBalls,
}

#[derive(Debug, Clone)]
pub struct CheegerEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: CheegerMethod,
    /// Subset achieving `upper` (vertex ids, ascending).
    pub witness_subset: Option<Vec<usize>>,
    /// `upper` as an exact count pair (#boundary, #subset).
    pub ratio_counts: (usize, usize),
}

/// Cheeger constant of the tagged graph.
pub fn cheeger(g: &Graph, mode: &CheegerMode) -> Result<CheegerEstimate, GraphError> {
    match *mode {
        CheegerMode::Exhaustive { cap } => exhaustive(g, cap),
        CheegerMode::FolnerBalls { center } => folner(g, center),
    }
}

/// Vertex-boundary size of `subset` (given as a bitmask over `interior`).
fn boundary_count(g: &Graph, interior: &[usize], mask: u64) -> usize {
    let mut in_set = vec![false; g.n()];
    for (bit, &v) in interior.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            in_set[v] = true;
        }
    }
    let mut count = 0;
    for (bit, &v) in interior.iter().enumerate() {
        if mask >> bit & 1 == 0 {
            continue;
        }
        if g.neighbors(v).iter().any(|&w| !in_set[w as usize]) {
            count += 1;
        }
    }
    count
}

fn is_connected_mask(g: &Graph, interior: &[usize], mask: u64) -> bool {
    let size = mask.count_ones() as usize;
    if size == 0 {
        return false;
    }
    let mut bit_of = vec![usize::MAX; g.n()];
    for (bit, &v) in interior.iter().enumerate() {
        bit_of[v] = bit;
    }
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut stack = vec![interior[start]];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            let b = bit_of[w as usize];
            if b != usize::MAX && mask >> b & 1 == 1 && seen >> b & 1 == 0 {
                seen |= 1 << b;
                reached += 1;
                stack.push(w as usize);
            }
        }
    }
    reached == size
}

fn exhaustive(g: &Graph, cap: usize) -> Result<CheegerEstimate, GraphError> {
    let interior = g.interior();
    let k = interior.len();
    if k == 0 {
        return Err(GraphError::NoInterior);
    }
    if k > cap || k >= 64 {
        return Err(GraphError::BadParameter(format!(
            "exhaustive Cheeger on {k} interior vertices exceeds the cap {cap}"
        )));
    }
    let total: u64 = 1u64 << k;
    // Minimize (#boundary / #size) with exact rational comparison; ties break
    // toward the smallest mask, so the result is independent of thread count.
    let best = (1..total)
        .into_par_iter()
        .filter(|&mask| is_connected_mask(g, &interior, mask))
        .map(|mask| {
            let b = boundary_count(g, &interior, mask) as u64;
            let s = mask.count_ones() as u64;
            (b, s, mask)
        })
        .reduce(
            || (u64::MAX, 1, u64::MAX),
            |a, b| {
                // a.0/a.1 vs b.0/b.1 by cross-multiplication; then mask order.
                let left = a.0.saturating_mul(b.1);
                let right = b.0.saturating_mul(a.1);
                match left.cmp(&right) {
                    std::cmp::Ordering::Less => a,
                    std::cmp::Ordering::Greater => b,
                    std::cmp::Ordering::Equal => {
                        if a.2 <= b.2 {
                            a
                        } else {
                            b
                        }
                    }
                }
            },
        );
    let (b, s, mask) = best;
    let witness: Vec<usize> = interior
        .iter()
        .enumerate()
        .filter(|(bit, _)| mask >> bit & 1 == 1)
        .map(|(_, &v)| v)
        .collect();
    let h = b as f64 / s as f64;
    Ok(CheegerEstimate {
        lower: h,
        upper: h,
        method: CheegerMethod::Exhaustive,
        witness_subset: Some(witness),
        ratio_counts: (b as usize, s as usize),
    })
}

fn folner(g: &Graph, center: usize) -> Result<CheegerEstimate, GraphError> {
    if center >= g.n() || g.is_boundary(center) {
        return Err(GraphError::BadParameter(format!(
            "Folner ball center {center} must be an interior vertex"
        )));
    }
    // BFS layers from the center; radius-r ball is usable while untagged.
    let mut depth = vec![usize::MAX; g.n()];
    depth[center] = 0;
    let mut queue = std::collections::VecDeque::from([center]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if depth[w as usize] == usize::MAX {
                depth[w as usize] = depth[v] + 1;
                queue.push_back(w as usize);
            }
        }
    }
    let max_tagged_free = (0..g.n())
        .filter(|&v| g.is_boundary(v))
        .map(|v| depth[v])
        .min()
        .map(|d| d.saturating_sub(1))
        .unwrap_or(g.n());

    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    for r in 0..=max_tagged_free {
        let ball: Vec<usize> = (0..g.n()).filter(|&v| depth[v] <= r).collect();
        let in_ball: Vec<bool> = (0..g.n()).map(|v| depth[v] <= r).collect();
        let b = ball
            .iter()
            .filter(|&&v| g.neighbors(v).iter().any(|&w| !in_ball[w as usize]))
            .count();
        let s = ball.len();
        let better = match &best {
            None => true,
            Some((bb, bs, _)) => (b as u64) * (*bs as u64) < (*bb as u64) * (s as u64),
        };
        if better {
            best = Some((b, s, ball));
        }
    }
    let (b, s, witness) = best.expect("center ball of radius 0 always exists");
    Ok(CheegerEstimate {
        lower: 0.0,
        upper: b as f64 / s as f64,
        method: CheegerMethod::FolnerBalls,
        witness_subset: Some(witness),
        ratio_counts: (b, s),
    })
}

/// The three numbers of the combinatorial sandwich on one tagged graph.
#[derive(Debug, Clone, Copy)]
pub struct SandwichReport {
    pub lower: f64,
    pub mu0: f64,
    pub h: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum SandwichError {
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("need at least 2 interior vertices and a valence, got {0}")]
    Degenerate(String),
    #[error("sandwich violated: h^2/(2v) = {lower:.12} <= mu0 = {mu0:.12} <= h = {h:.12} fails")]
    Violation { lower: f64, mu0: f64, h: f64 },
}

/// Checks `h^2/(2v) <= mu0 <= h` with Dirichlet `mu0` and exhaustive `h` on
/// the same tagged graph.  Violation is a hard error carrying the numbers.
pub fn cheeger_inequality_check(g: &Graph) -> Result<SandwichReport, SandwichError> {
    let v = g
        .valence()
        .ok_or_else(|| SandwichError::Degenerate("constant valence required".into()))?;
    if g.interior().len() < 2 {
        return Err(SandwichError::Degenerate(format!(
            "{} interior vertices",
            g.interior().len()
        )));
    }
    let est = cheeger(g, &CheegerMode::exhaustive())?;
    let h = est.upper;
    let m = mu0(g, true)?.value;
    let lower = h * h / (2.0 * v as f64);
    let report = SandwichReport { lower, mu0: m, h };
    let tol = 1e-10;
    if m + tol < lower || m > h + tol {
        return Err(SandwichError::Violation { lower, mu0: m, h });
    }
    Ok(report)
}
