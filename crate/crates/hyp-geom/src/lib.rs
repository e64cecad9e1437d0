//! Closed-form hyperbolic geometry for surfaces of curvature -1.
//!
//! Everything here is exact-formula territory: collar halfwidths, Fermi and
//! cusp metrics, Gauss-Bonnet volumes, right-angled hexagon trigonometry, the
//! critical exponent, plus Poincare-disk primitives ([`disk`]) and 1-D radial
//! eigenvalue oracles ([`oracle1d`]) that downstream finite-element code is
//! checked against.
//!
//! Conventions.  A closed geodesic of length `l` has an embedded collar of
//! halfwidth `m(l) = argsinh(1/sinh(l/2))`; in Fermi coordinates `(theta, r)`
//! about the geodesic the metric is `ds^2 = (l/2pi)^2 cosh^2(r) dtheta^2 +
//! dr^2` with `theta` of period `2pi`.  A cusp neighborhood at injectivity
//! threshold `eps` carries `e^{-2r} (eps/2pi)^2 dtheta^2 + dr^2` and has
//! volume exactly `eps`.  All gluings downstream use zero twist: gluing maps
//! identify arc-length parameters by `t -> l - t` anchored at `t = 0`.  This
//! pins a unique surface for every build and is assumed throughout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod disk;
pub mod oracle1d;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("geodesic length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("signature (g={genus}, b={boundaries}, c={cusps}) has Euler characteristic {chi} >= 0, not hyperbolic")]
    NotHyperbolic { genus: u32, boundaries: u32, cusps: u32, chi: i64 },
    #[error("critical exponent needs 0 <= lambda0 <= 1/4, got {0}")]
    CriticalExponentRange(f64),
    #[error("interval [{lo}, {hi}] is empty or reversed")]
    BadInterval { lo: f64, hi: f64 },
    #[error("cell spec invalid: {0}")]
    BadCellSpec(String),
}

/// Numerical tolerances used by this crate's closed forms and oracles,
/// centralized so every consumer checks against the same budget.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Closed-form identities (e.g. `sinh(m) sinh(l/2) = 1`): pure roundoff.
    pub closed_form: f64,
    /// Finite-difference evaluation of differential operators on smooth
    /// functions: second-order stencil at step `FD_STEP`, so errors are
    /// `O(step^2)` truncation plus `O(eps/step^2)` roundoff.
    pub fd_oracle: f64,
    /// Unit-determinant drift allowed on composed Mobius transforms.
    pub mobius_det: f64,
    /// 1-D eigenvalue oracles after Richardson extrapolation.
    pub oracle_eigenvalue: f64,
}

pub const TOL: Tolerances = Tolerances {
    closed_form: 1e-12,
    fd_oracle: 1e-6,
    mobius_det: 1e-11,
    oracle_eigenvalue: 1e-9,
};

/// Step used by the grid evaluation of the Fermi Laplacian.
const FD_STEP: f64 = 1e-4;

/// Collar halfwidth `m(l) = argsinh(1/sinh(l/2))` of a closed geodesic of
/// length `l > 0`.  Strictly decreasing, blows up as `l -> 0`.
pub fn collar_halfwidth(l: f64) -> Result<f64, GeomError> {
    if !(l > 0.0) {
        return Err(GeomError::NonPositiveLength(l));
    }
    Ok((1.0 / (0.5 * l).sinh()).asinh())
}

/// The function `U(r) = arcsin(tanh r)`, harmonic for the Fermi Laplacian
/// (`U' = sech r`, `U'' = -sech r tanh r`).  Evaluated as `atan(sinh r)`,
/// which is the same function without the |tanh| -> 1 domain edge.
pub fn harmonic_u(r: f64) -> f64 {
    r.sinh().atan()
}

/// Derivative `U'(r) = sech r`.
pub fn harmonic_u_prime(r: f64) -> f64 {
    1.0 / r.cosh()
}

/// Fermi collar of a closed geodesic: coordinates `(theta, r)`, metric
/// `ds^2 = (l/2pi)^2 cosh^2 r dtheta^2 + dr^2`.
#[derive(Debug, Clone, Copy)]
pub struct FermiCollar {
    /// Length of the core geodesic.
    pub l: f64,
    /// Embedded halfwidth `m(l)`.
    pub halfwidth: f64,
    /// Which side of the geodesic carries `r >= 0`.
    pub orientation: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `r` grows to the left of the oriented geodesic.
    Left,
    /// `r` grows to the right.
    Right,
}

impl FermiCollar {
    pub fn new(l: f64) -> Result<Self, GeomError> {
        Ok(FermiCollar { l, halfwidth: collar_halfwidth(l)?, orientation: Side::Left })
    }

    /// Metric coefficient `g_{theta theta}(r) = (l/2pi)^2 cosh^2 r`.
    pub fn g_theta_theta(&self, r: f64) -> f64 {
        let c = self.l / (2.0 * std::f64::consts::PI) * r.cosh();
        c * c
    }

    /// Area of the band `r0 <= r <= r1`: `l (sinh r1 - sinh r0)`.
    pub fn area_between(&self, r0: f64, r1: f64) -> f64 {
        self.l * (r1.sinh() - r0.sinh())
    }

    /// Applies the collar Laplacian
    /// `Delta f = -(f_rr + tanh r f_r + (2pi/l)^2 cosh^{-2} r f_{theta theta})`
    /// to a smooth function given as a closure, by second-order central
    /// differences at step [`FD_STEP`].  Test oracle only.
    pub fn laplacian_apply(&self, f: &dyn Fn(f64, f64) -> f64, r: f64, theta: f64) -> f64 {
        let h = FD_STEP;
        let f0 = f(r, theta);
        let frr = (f(r + h, theta) - 2.0 * f0 + f(r - h, theta)) / (h * h);
        let fr = (f(r + h, theta) - f(r - h, theta)) / (2.0 * h);
        let ftt = (f(r, theta + h) - 2.0 * f0 + f(r, theta - h)) / (h * h);
        let ang = 2.0 * std::f64::consts::PI / self.l;
        -(frr + r.tanh() * fr + ang * ang / (r.cosh() * r.cosh()) * ftt)
    }
}

/// Cusp neighborhood at injectivity threshold `eps`; metric
/// `e^{-2r} (eps/2pi)^2 dtheta^2 + dr^2` on `r >= 0`, volume exactly `eps`.
#[derive(Debug, Clone, Copy)]
pub struct CuspNeighborhood {
    pub epsilon: f64,
}

impl CuspNeighborhood {
    pub fn new(epsilon: f64) -> Result<Self, GeomError> {
        if !(epsilon > 0.0) {
            return Err(GeomError::NonPositiveLength(epsilon));
        }
        Ok(CuspNeighborhood { epsilon })
    }

    /// `int_0^inf e^{-r} eps dr = eps`, closed form.
    pub fn volume(&self) -> f64 {
        self.epsilon
    }
}

/// Hyperbolic area by Gauss-Bonnet: `2pi (2g - 2 + b + c)` for genus `g`,
/// `b` geodesic boundary circles, `c` cusps.  Errors unless the Euler
/// characteristic `2 - 2g - b - c` is negative.
pub fn gauss_bonnet_volume(genus: u32, boundaries: u32, cusps: u32) -> Result<f64, GeomError> {
    let chi = 2i64 - 2 * genus as i64 - boundaries as i64 - cusps as i64;
    if chi >= 0 {
        return Err(GeomError::NotHyperbolic { genus, boundaries, cusps, chi });
    }
    Ok(2.0 * std::f64::consts::PI * (-chi) as f64)
}

/// A pair of pants: three cuff lengths, some possibly degenerated to cusps.
#[derive(Debug, Clone, Copy)]
pub struct PantsSpec {
    pub cuffs: [f64; 3],
    /// Cuffs flagged here may be 0 (cusps); bookkeeping only, never meshed.
    pub allow_zero: [bool; 3],
}

impl PantsSpec {
    pub fn new(cuffs: [f64; 3]) -> Result<Self, GeomError> {
        for &l in &cuffs {
            if !(l > 0.0) {
                return Err(GeomError::NonPositiveLength(l));
            }
        }
        Ok(PantsSpec { cuffs, allow_zero: [false; 3] })
    }

    /// Gauss-Bonnet: every hyperbolic pair of pants has area `2pi`.
    pub fn volume(&self) -> f64 {
        gauss_bonnet_volume(0, 3, 0).expect("pants are hyperbolic")
    }
}

/// Sides of the right-angled hexagon realizing a pair of pants with cuff
/// lengths `(l1, l2, l3)`.  `cuff_half[i] = l_i / 2` are the alternating
/// sides; `seam[i]` is the side *opposite* cuff `i`, running between the
/// half-cuffs of the other two.
#[derive(Debug, Clone, Copy)]
pub struct Hexagon {
    pub cuff_half: [f64; 3],
    pub seam: [f64; 3],
}

/// Right-angled hexagon with alternating sides `l_i/2`.  The seam opposite
/// cuff `i` satisfies
/// `cosh(seam_i) = (cosh a_j cosh a_k + cosh a_i) / (sinh a_j sinh a_k)`
/// with `a = l/2` and `{i,j,k} = {0,1,2}`.
pub fn hexagon_from_cuffs(l1: f64, l2: f64, l3: f64) -> Result<Hexagon, GeomError> {
    let ls = [l1, l2, l3];
    for &l in &ls {
        if !(l > 0.0) {
            return Err(GeomError::NonPositiveLength(l));
        }
    }
    let a = [0.5 * l1, 0.5 * l2, 0.5 * l3];
    let mut seam = [0.0; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let c = (a[j].cosh() * a[k].cosh() + a[i].cosh()) / (a[j].sinh() * a[k].sinh());
        seam[i] = c.acosh();
    }
    Ok(Hexagon { cuff_half: a, seam })
}

/// Critical exponent of the limit set from the bottom of the spectrum:
/// `delta = 1/2 + sqrt(1/4 - lambda0)` for `0 <= lambda0 <= 1/4`.
/// Above `1/4` the relation `lambda0 = delta(1 - delta)` has no real branch,
/// so that range is rejected.
pub fn critical_exponent(lambda0: f64) -> Result<f64, GeomError> {
    if !(0.0..=0.25).contains(&lambda0) {
        return Err(GeomError::CriticalExponentRange(lambda0));
    }
    Ok(0.5 + (0.25 - lambda0).sqrt())
}

/// Cell topology.  The two presets admit the cyclic order-`v` isometry the
/// graph-modeled construction requires; `custom` makes no symmetry promise
/// (downstream symmetry checks report instead of assuming).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Single pair of pants with all three cuffs on the boundary (`v = 3`).
    PantsRing,
    /// Necklace of `v` pants around a central handle: genus 1, `v` boundary
    /// cuffs, cyclic symmetry rotating the necklace.
    TorusWithVHoles,
    /// Explicit pants complex: `pants` nodes with cuff slots `0..3`;
    /// `pairings` glues slot pairs (same-pants pairs allowed); slots left
    /// unpaired are the cell's boundary cuffs, ordered lexicographically by
    /// `(pants, slot)`.
    Custom {
        pants: usize,
        pairings: Vec<[[usize; 2]; 2]>,
    },
}

/// Repeated cell of a graph-modeled surface: `v` boundary cuffs of common
/// length `l`, cyclically permuted by an order-`v` isometry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub v: usize,
    pub cuff_length: f64,
    pub topology: Topology,
    /// One flag per boundary cuff: `true` attaches an infinite funnel,
    /// `false` leaves geodesic boundary (for gluing or Dirichlet truncation).
    #[serde(default)]
    pub funnels: Vec<bool>,
}

impl CellSpec {
    pub fn validate(&self) -> Result<(), GeomError> {
        if self.v == 0 {
            return Err(GeomError::BadCellSpec("v must be >= 1".into()));
        }
        if !(self.cuff_length > 0.0) {
            return Err(GeomError::BadCellSpec(format!(
                "cuff_length must be positive, got {}",
                self.cuff_length
            )));
        }
        if self.topology == Topology::PantsRing && self.v != 3 {
            return Err(GeomError::BadCellSpec(format!(
                "pants_ring has exactly 3 boundary cuffs, got v={}",
                self.v
            )));
        }
        if !self.funnels.is_empty() && self.funnels.len() != self.v {
            return Err(GeomError::BadCellSpec(format!(
                "funnels must have one flag per boundary: expected {} got {}",
                self.v,
                self.funnels.len()
            )));
        }
        if let Topology::Custom { pants, pairings } = &self.topology {
            self.validate_custom(*pants, pairings)?;
        }
        Ok(())
    }

    fn validate_custom(
        &self,
        pants: usize,
        pairings: &[[[usize; 2]; 2]],
    ) -> Result<(), GeomError> {
        if pants == 0 {
            return Err(GeomError::BadCellSpec("custom topology needs >= 1 pants".into()));
        }
        let mut used = vec![false; 3 * pants];
        for pair in pairings {
            for &[p, s] in pair {
                if p >= pants || s >= 3 {
                    return Err(GeomError::BadCellSpec(format!(
                        "pairing slot ({p}, {s}) out of range for {pants} pants"
                    )));
                }
                if used[3 * p + s] {
                    return Err(GeomError::BadCellSpec(format!(
                        "cuff slot ({p}, {s}) paired twice"
                    )));
                }
                used[3 * p + s] = true;
            }
            if pair[0] == pair[1] {
                return Err(GeomError::BadCellSpec(format!(
                    "cuff slot ({}, {}) paired with itself",
                    pair[0][0], pair[0][1]
                )));
            }
        }
        let free = used.iter().filter(|&&u| !u).count();
        if free != self.v {
            return Err(GeomError::BadCellSpec(format!(
                "custom topology leaves {free} boundary cuffs but v = {}",
                self.v
            )));
        }
        // Pants complex must be connected.
        let mut seen = vec![false; pants];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for pair in pairings {
                for (a, b) in [(pair[0], pair[1]), (pair[1], pair[0])] {
                    if a[0] == p && !seen[b[0]] {
                        seen[b[0]] = true;
                        stack.push(b[0]);
                    }
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(GeomError::BadCellSpec("custom pants complex is disconnected".into()));
        }
        Ok(())
    }

    /// The cell as a pants complex: (pants count, glued slot pairs, boundary
    /// slots in hole order).  Presets and custom share this representation.
    pub fn pants_graph(&self) -> (usize, Vec<[[usize; 2]; 2]>, Vec<[usize; 2]>) {
        match &self.topology {
            Topology::PantsRing => (1, vec![], vec![[0, 0], [0, 1], [0, 2]]),
            Topology::TorusWithVHoles => {
                // Pants i: slot 0 = ring left, slot 1 = ring right, slot 2 =
                // boundary hole; v = 1 pairs two slots of the same pants.
                let v = self.v;
                let pairings = (0..v).map(|i| [[i, 1], [(i + 1) % v, 0]]).collect();
                (v, pairings, (0..v).map(|i| [i, 2]).collect())
            }
            Topology::Custom { pants, pairings } => {
                let mut used = vec![false; 3 * pants];
                for pair in pairings {
                    for &[p, s] in pair {
                        used[3 * p + s] = true;
                    }
                }
                let free = (0..*pants)
                    .flat_map(|p| (0..3).map(move |s| [p, s]))
                    .filter(|&[p, s]| !used[3 * p + s])
                    .collect();
                (*pants, pairings.clone(), free)
            }
        }
    }

    /// Funnel flag for boundary `p`, defaulting to `false` when omitted.
    pub fn funnel(&self, p: usize) -> bool {
        self.funnels.get(p).copied().unwrap_or(false)
    }

    /// Number of pants in the cell; its area is `2pi` times this.
    pub fn pants_count(&self) -> usize {
        match &self.topology {
            Topology::PantsRing => 1,
            Topology::TorusWithVHoles => self.v.max(1),
            Topology::Custom { pants, .. } => *pants,
        }
    }

    /// Gauss-Bonnet area of the compact core (funnels excluded).
    pub fn core_volume(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.pants_count() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collar_halfwidth_closed_forms() {
        // At l = 2 argsinh(1), sinh(l/2) = 1 so m = argsinh(1); the target is
        // the independent log form ln(1 + sqrt(2)).
        let l = 2.0 * 1f64.asinh();
        let m = collar_halfwidth(l).unwrap();
        let indep = (1.0 + 2f64.sqrt()).ln();
        assert!((m - indep).abs() < TOL.closed_form);

        // l = 1 through the explicit log form of argsinh.
        let y = 1.0 / 0.5f64.sinh();
        let indep1 = (y + (y * y + 1.0).sqrt()).ln();
        let m1 = collar_halfwidth(1.0).unwrap();
        assert!((m1 - indep1).abs() < TOL.closed_form);
        assert!((m1 - 1.4068291137472952).abs() < 1e-12);

        assert!(collar_halfwidth(0.0).is_err());
        assert!(collar_halfwidth(-1.0).is_err());
    }

    #[test]
    fn collar_halfwidth_monotone() {
        let m1 = collar_halfwidth(1.0).unwrap();
        let m5 = collar_halfwidth(5.0).unwrap();
        let m10 = collar_halfwidth(10.0).unwrap();
        assert!(m10 < m5 && m5 < m1);
    }

    #[test]
    fn gauss_bonnet_signatures() {
        assert!((gauss_bonnet_volume(0, 3, 0).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((gauss_bonnet_volume(1, 1, 0).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((gauss_bonnet_volume(2, 0, 0).unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!(gauss_bonnet_volume(0, 0, 0).is_err());
        assert!(gauss_bonnet_volume(0, 2, 0).is_err());
        assert!(gauss_bonnet_volume(1, 0, 0).is_err());
    }

    #[test]
    fn critical_exponent_branch() {
        assert!((critical_exponent(0.25).unwrap() - 0.5).abs() < 1e-15);
        assert!((critical_exponent(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((critical_exponent(3.0 / 16.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(critical_exponent(0.26).is_err());
        assert!(critical_exponent(-0.01).is_err());
    }

    #[test]
    fn cell_spec_validation_and_json() {
        let json = r#"{ "v": 3, "cuff_length": 1.0, "topology": "pants_ring", "funnels": [true, false, true] }"#;
        let spec: CellSpec = serde_json::from_str(json).unwrap();
        spec.validate().unwrap();
        assert!(spec.funnel(0) && !spec.funnel(1));
        assert_eq!(spec.pants_count(), 1);

        let bad: CellSpec = serde_json::from_str(
            r#"{ "v": 4, "cuff_length": 1.0, "topology": "pants_ring" }"#,
        )
        .unwrap();
        assert!(bad.validate().is_err());

        assert!(serde_json::from_str::<CellSpec>(
            r#"{ "v": 3, "cuff_length": 1.0, "topology": "klein_bottle" }"#
        )
        .is_err());

        let necklace: CellSpec = serde_json::from_str(
            r#"{ "v": 2, "cuff_length": 2.0, "topology": "torus_with_v_holes" }"#,
        )
        .unwrap();
        necklace.validate().unwrap();
        assert_eq!(necklace.pants_count(), 2);
        assert!((necklace.core_volume() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn custom_pants_graph_validation() {
        // Two pants glued along two cuffs: torus with 2 holes, same complex
        // the necklace preset produces for v = 2.
        let chain: CellSpec = serde_json::from_str(
            r#"{ "v": 2, "cuff_length": 1.0,
                 "topology": { "custom": { "pants": 2,
                     "pairings": [[[0,0],[1,0]], [[0,1],[1,1]]] } } }"#,
        )
        .unwrap();
        chain.validate().unwrap();
        assert_eq!(chain.pants_count(), 2);
        let (n, pairings, holes) = chain.pants_graph();
        assert_eq!((n, pairings.len()), (2, 2));
        assert_eq!(holes, vec![[0, 2], [1, 2]]);

        let mut slot_reuse = chain.clone();
        slot_reuse.topology = Topology::Custom {
            pants: 2,
            pairings: vec![[[0, 0], [1, 0]], [[0, 0], [1, 1]]],
        };
        assert!(slot_reuse.validate().is_err());

        let mut self_pair = chain.clone();
        self_pair.topology = Topology::Custom {
            pants: 1,
            pairings: vec![[[0, 0], [0, 0]]],
        };
        assert!(self_pair.validate().is_err());

        let mut wrong_v = chain.clone();
        wrong_v.v = 3;
        wrong_v.funnels.clear();
        assert!(wrong_v.validate().is_err());

        let mut disconnected = chain.clone();
        disconnected.v = 6;
        disconnected.topology = Topology::Custom { pants: 2, pairings: vec![] };
        assert!(disconnected.validate().is_err());

        // Same-pants pairing of two different slots is a legitimate handle.
        let handle: CellSpec = serde_json::from_str(
            r#"{ "v": 1, "cuff_length": 1.0,
                 "topology": { "custom": { "pants": 1,
                     "pairings": [[[0,0],[0,1]]] } } }"#,
        )
        .unwrap();
        handle.validate().unwrap();
        assert_eq!(handle.pants_graph().2, vec![[0, 2]]);
    }

    #[test]
    fn preset_pants_graphs_are_consistent() {
        let ring = CellSpec {
            v: 3,
            cuff_length: 1.0,
            topology: Topology::PantsRing,
            funnels: vec![],
        };
        let (n, pairings, holes) = ring.pants_graph();
        assert_eq!((n, pairings.len(), holes.len()), (1, 0, 3));

        for v in 1..=4usize {
            let neck = CellSpec {
                v,
                cuff_length: 1.0,
                topology: Topology::TorusWithVHoles,
                funnels: vec![],
            };
            neck.validate().unwrap();
            let (n, pairings, holes) = neck.pants_graph();
            assert_eq!((n, pairings.len(), holes.len()), (v, v, v));
            // Every slot is used exactly once across pairings and holes.
            let mut used = vec![0usize; 3 * v];
            for pair in &pairings {
                for &[p, s] in pair {
                    used[3 * p + s] += 1;
                }
            }
            for &[p, s] in &holes {
                used[3 * p + s] += 1;
            }
            assert!(used.iter().all(|&u| u == 1));
        }
    }
}
