//! Developed geometry of a pair of pants with three equal cuffs.
//!
//! The front right-angled hexagon is traced by a frame walk: start on the
//! cuff-0 geodesic, alternate sides of length `a = l/2` (cuff halves) and
//! `b` (seams), turning left by a right angle at each corner.  The walk must
//! close, which pins every frame; the back hexagon is the mirror image glued
//! along the seams, and for equal cuffs its development through any cuff
//! band coincides with the front hexagon translated by `a` along that cuff.
//! All downstream meshing reads positions from these frames.

use hyp_geom::disk::{dist, point_along, LineFrame, Mobius};
use hyp_geom::{collar_halfwidth, hexagon_from_cuffs};
use num_complex::Complex64;

use crate::FemError;

const WALK_TOL: f64 = 1e-9;

/// Frames and distinguished points of one pants, in the chart where cuff 0
/// is the real axis ("the reference chart" of that pants).
#[derive(Debug, Clone)]
pub(crate) struct PantsGeometry {
    pub l: f64,
    /// Half cuff length: the hexagon side along each cuff.
    pub a: f64,
    /// Seam length: the full hexagon side between two cuffs.
    pub b: f64,
    /// Seam midpoint height `b/2`, the top of the quad columns.
    pub h_top: f64,
    /// Collar half-width of a length-`l` geodesic.
    pub m: f64,
    /// Frame of cuff `c`; the front hexagon side occupies `t` in `[0, a]`,
    /// the interior lies on `r > 0`.
    pub cuff: [LineFrame; 3],
    /// Frame of seam `s` (the seam opposite cuff `s`), oriented from its
    /// corner on cuff `s+1` (`t = 0`) to its corner on cuff `s+2` (`t = b`).
    /// Read by the orientation tests; the mesher works in cuff frames.
    #[allow(dead_code)]
    pub seam: [LineFrame; 3],
    /// Seam midpoints `mu[s] = seam[s].embed(b/2, 0)`.
    pub mu: [Complex64; 3],
    /// Rotation center of the front hexagon: the fixed point of the order-3
    /// isometry cycling its cuffs.
    pub p_star: Complex64,
    /// Lowest Fermi height over cuff 0 of the chord geodesic from `mu[1]`
    /// to `mu[2]`.
    pub chord_min: f64,
}

fn check(name: &'static str, deviation: f64) -> Result<(), FemError> {
    if deviation > WALK_TOL {
        return Err(FemError::HexagonCheck { check: name, deviation });
    }
    Ok(())
}

pub(crate) fn pants_geometry(l: f64) -> Result<PantsGeometry, FemError> {
    let hex = hexagon_from_cuffs(l, l, l)?;
    let a = hex.cuff_half[0];
    let b = hex.seam[0];
    let h_top = 0.5 * b;
    let m = collar_halfwidth(l)?;

    // Walk the hexagon boundary counterclockwise; frames[k] starts side k.
    let mut frames = [Mobius::IDENTITY; 6];
    let mut g = Mobius::IDENTITY;
    for (k, frame) in frames.iter_mut().enumerate() {
        *frame = g;
        let len = if k % 2 == 0 { a } else { b };
        g = g
            .compose(&Mobius::translation(len))
            .compose(&Mobius::rotation(std::f64::consts::FRAC_PI_2));
    }
    let closure = g.distance_to_identity();
    if closure > WALK_TOL {
        return Err(FemError::HexagonWalk { l, deviation: closure });
    }

    let cuff = [
        LineFrame { map: frames[0] },
        LineFrame { map: frames[2] },
        LineFrame { map: frames[4] },
    ];
    // Side 2k+1 runs from cuff k to cuff k+1, which is the seam opposite the
    // remaining cuff k+2.
    let seam = [
        LineFrame { map: frames[3] },
        LineFrame { map: frames[5] },
        LineFrame { map: frames[1] },
    ];
    let mu = [
        seam[0].embed(h_top, 0.0),
        seam[1].embed(h_top, 0.0),
        seam[2].embed(h_top, 0.0),
    ];

    // The seams flanking cuff 0 are the Fermi verticals t = 0 and t = a.
    check("mu1 on t=0 vertical", dist(mu[1], cuff[0].embed(0.0, h_top)))?;
    check("mu2 on t=a vertical", dist(mu[2], cuff[0].embed(a, h_top)))?;

    // The frame step cuff 0 -> cuff 1 cycles the whole hexagon.
    let s_star = frames[2];
    let cubed = s_star.compose(&s_star).compose(&s_star);
    check("order-3 rotation", cubed.distance_to_identity())?;
    check("rotation cycles mu0", dist(s_star.apply(mu[0]), mu[1]))?;
    check("rotation cycles mu2", dist(s_star.apply(mu[2]), mu[0]))?;

    let p_star = elliptic_fixed_point(&s_star)?;
    check("center fixed", dist(s_star.apply(p_star), p_star))?;
    let d0 = dist(p_star, mu[0]);
    let d1 = dist(p_star, mu[1]);
    let d2 = dist(p_star, mu[2]);
    check("center equidistant", (d0 - d1).abs().max((d0 - d2).abs()))?;
    check("center above midcuff", (LineFrame::AXIS.foot_t(p_star) - 0.5 * a).abs())?;
    if LineFrame::AXIS.signed_r(p_star) <= h_top {
        return Err(FemError::HexagonCheck {
            check: "center above seam midpoints",
            deviation: h_top - LineFrame::AXIS.signed_r(p_star),
        });
    }

    // Sag of the chord geodesic mu1 -> mu2.  The chord and the cuff axis
    // are ultraparallel; a point at arclength s along the chord from the
    // foot of their common perpendicular sits at distance rho(s) with
    // sinh rho(s) = sinh(rho_min) cosh(s).  By symmetry the foot is the
    // chord midpoint, so the endpoints at height b/2 and half-length L/2
    // give sinh(rho_min) = sinh(b/2) / cosh(L/2).
    let chord_len = dist(mu[1], mu[2]);
    let chord_min = (h_top.sinh() / (0.5 * chord_len).cosh()).asinh();
    let mid = point_along(mu[1], mu[2], 0.5 * chord_len);
    check("chord sag identity", (LineFrame::AXIS.signed_r(mid) - chord_min).abs())?;

    Ok(PantsGeometry { l, a, b, h_top, m, cuff, seam, mu, p_star, chord_min })
}

impl PantsGeometry {
    /// Frame of the chord geodesic over cuff 0, oriented `mu[1] -> mu[2]`.
    pub fn chord_frame(&self) -> LineFrame {
        LineFrame::through(self.mu[1], self.mu[2])
    }

    /// Chart isometry of patch kind `k` (0..3 front per cuff, 3..6 back per
    /// cuff) into this pants' reference chart.
    pub fn to_ref(&self, kind: u8) -> Mobius {
        let c = (kind % 3) as usize;
        if kind < 3 {
            self.cuff[c].map
        } else {
            self.cuff[c].map.compose(&Mobius::translation(self.a))
        }
    }
}

/// Fixed point inside the disk of an elliptic isometry `(az + b)/(conj(b) z
/// + conj(a))`: the inside root of `conj(b) z^2 + (conj(a) - a) z - b = 0`.
fn elliptic_fixed_point(g: &Mobius) -> Result<Complex64, FemError> {
    if g.b.norm() < 1e-30 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let qa = g.b.conj();
    let qb = g.a.conj() - g.a;
    let qc = -g.b;
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    let z1 = (-qb + disc) / (2.0 * qa);
    let z2 = (-qb - disc) / (2.0 * qa);
    let z = if z1.norm() < z2.norm() { z1 } else { z2 };
    if z.norm() >= 1.0 {
        return Err(FemError::HexagonCheck {
            check: "elliptic fixed point inside disk",
            deviation: z.norm() - 1.0,
        });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_self_checks_pass_across_cuff_lengths() {
        for &l in &[0.05, 0.3, 1.0, 2.0, 4.0, 6.0] {
            let g = pants_geometry(l).unwrap();
            assert!(g.b > 0.0 && g.chord_min > 0.0, "l = {l}");
            // Quads must have positive height: the chord stays above any
            // usable annulus band.
            assert!(g.chord_min < g.h_top);
        }
    }

    #[test]
    fn seam_midpoint_heights_match_half_seam() {
        let g = pants_geometry(1.0).unwrap();
        let r1 = LineFrame::AXIS.signed_r(g.mu[1]);
        assert!((r1 - g.h_top).abs() < 1e-12);
        let foot = LineFrame::AXIS.foot_t(g.mu[2]);
        assert!((foot - g.a).abs() < 1e-12);
    }

    #[test]
    fn seam_endpoints_sit_on_flanking_cuff_lines() {
        for &l in &[0.3, 1.0, 3.0] {
            let g = pants_geometry(l).unwrap();
            for s in 0..3 {
                let start = g.seam[s].embed(0.0, 0.0);
                let end = g.seam[s].embed(g.b, 0.0);
                assert!(g.cuff[(s + 1) % 3].signed_r(start).abs() < 1e-9, "l = {l}, s = {s}");
                assert!(g.cuff[(s + 2) % 3].signed_r(end).abs() < 1e-9, "l = {l}, s = {s}");
            }
        }
    }

    #[test]
    fn back_translation_lands_on_seam_midpoints() {
        // The back chart sends the canonical mu1 corner onto mu2's position:
        // the two quads over a cuff meet along the same seam verticals.
        let g = pants_geometry(1.3).unwrap();
        let back = g.to_ref(3);
        let mapped = back.apply(g.cuff[0].map.inverse().apply(g.mu[1]));
        assert!(dist(mapped, g.mu[2]) < 1e-12);
    }

    #[test]
    fn collar_halfwidth_below_seam_midpoint() {
        // Equal-cuff pants keep each cuff's collar inside its own quads:
        // the half seam always dominates the collar half-width.
        for &l in &[0.05, 0.2, 1.0, 2.0, 4.0, 8.0] {
            let g = pants_geometry(l).unwrap();
            assert!(g.h_top > g.m, "l = {l}: h_top = {} m = {}", g.h_top, g.m);
        }
    }
}
