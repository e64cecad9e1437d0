//! Poincare-disk model primitives: orientation-preserving isometries as
//! unit-determinant Mobius transforms, hyperbolic distances, geodesic
//! interpolation, and Fermi coordinate frames along geodesic lines.
//!
//! An isometry is stored as the pair `(a, b)` acting by
//! `z -> (a z + b) / (conj(b) z + conj(a))` with `|a|^2 - |b|^2 = 1`;
//! composition is 2x2 matrix multiplication of `[[a, b], [conj(b), conj(a)]]`.

use num_complex::Complex64;

/// Orientation-preserving isometry of the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
}

impl Mobius {
    pub const IDENTITY: Mobius =
        Mobius { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) };

    /// Translation by hyperbolic distance `s` along the real-axis geodesic,
    /// moving the origin toward `+1` for `s > 0`.
    pub fn translation(s: f64) -> Mobius {
        Mobius {
            a: Complex64::new((0.5 * s).cosh(), 0.0),
            b: Complex64::new((0.5 * s).sinh(), 0.0),
        }
    }

    /// Rotation by angle `phi` about the origin.
    pub fn rotation(phi: f64) -> Mobius {
        Mobius { a: Complex64::from_polar(1.0, 0.5 * phi), b: Complex64::new(0.0, 0.0) }
    }

    /// The isometry taking `z0` to the origin with zero rotation at `z0`.
    pub fn to_origin(z0: Complex64) -> Mobius {
        let s = (1.0 - z0.norm_sqr()).sqrt();
        Mobius { a: Complex64::new(1.0 / s, 0.0), b: -z0 / s }
    }

    /// `self` after `rhs`: `(self * rhs)(z) = self(rhs(z))`.
    pub fn compose(&self, rhs: &Mobius) -> Mobius {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.b.conj(),
            b: self.a * rhs.b + self.b * rhs.a.conj(),
        }
        .renormalized()
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.a.conj(), b: -self.b }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// Determinant `|a|^2 - |b|^2`; 1 up to roundoff for valid isometries.
    pub fn det(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    /// Rescales to unit determinant, quenching drift from long compositions.
    pub fn renormalized(&self) -> Mobius {
        let d = self.det();
        debug_assert!(d > 0.0, "Mobius determinant collapsed: {d}");
        let s = 1.0 / d.sqrt();
        Mobius { a: self.a * s, b: self.b * s }
    }

    /// Max deviation from the identity on the generators' action; used to
    /// assert closure of frame walks.
    pub fn distance_to_identity(&self) -> f64 {
        // Either +(a,b) or -(a,b) represents the identity.
        let plus = (self.a - 1.0).norm().max(self.b.norm());
        let minus = (self.a + 1.0).norm().max(self.b.norm());
        plus.min(minus)
    }
}

/// Hyperbolic distance between points of the open unit disk.
pub fn dist(z: Complex64, w: Complex64) -> f64 {
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm();
    2.0 * (num / den).atanh()
}

/// Point at hyperbolic distance `s` from `z` along the geodesic toward `w`.
/// `s` may exceed `dist(z, w)` (extrapolation) or be negative.
pub fn point_along(z: Complex64, w: Complex64, s: f64) -> Complex64 {
    let g = Mobius::to_origin(z);
    let wz = g.apply(w);
    let phi = wz.arg();
    let p = Complex64::from_polar((0.5 * s).tanh(), phi);
    g.inverse().apply(p)
}

/// Hyperbolic midpoint of the geodesic segment `[z, w]`.
pub fn midpoint(z: Complex64, w: Complex64) -> Complex64 {
    point_along(z, w, 0.5 * dist(z, w))
}

/// Fermi frame of an oriented geodesic line: the image of the real-axis
/// geodesic under `map`.  Points are addressed by `(t, r)`: arc length `t`
/// along the line from `map(0)`, signed distance `r` (positive on the side
/// that `i` maps to).
#[derive(Debug, Clone, Copy)]
pub struct LineFrame {
    pub map: Mobius,
}

impl LineFrame {
    /// The real-axis geodesic itself.
    pub const AXIS: LineFrame = LineFrame { map: Mobius::IDENTITY };

    /// Frame through `z` and `w`, oriented from `z` to `w`, with `t = 0` at `z`.
    pub fn through(z: Complex64, w: Complex64) -> LineFrame {
        let g = Mobius::to_origin(z);
        let phi = g.apply(w).arg();
        // map = g^{-1} . rotation(phi): sends 0 -> z and +1 direction toward w.
        LineFrame { map: g.inverse().compose(&Mobius::rotation(phi)) }
    }

    /// Embeds Fermi coordinates: walk `t` along the line, then `r`
    /// perpendicular (to the left of the orientation).
    pub fn embed(&self, t: f64, r: f64) -> Complex64 {
        let on_axis = Complex64::new(0.0, (0.5 * r).tanh());
        self.map.compose(&Mobius::translation(t)).apply(on_axis)
    }

    /// Signed distance from `z` to the line; positive on the `r > 0` side.
    pub fn signed_r(&self, z: Complex64) -> f64 {
        let zeta = self.map.inverse().apply(z);
        // For the real-axis geodesic, sinh(d) = 2 Im(zeta) / (1 - |zeta|^2).
        (2.0 * zeta.im / (1.0 - zeta.norm_sqr())).asinh()
    }

    /// Arc-length parameter of the foot of the perpendicular from `z`.
    pub fn foot_t(&self, z: Complex64) -> f64 {
        let zeta = self.map.inverse().apply(z);
        // The geodesic through zeta orthogonal to the real axis is a circle
        // centered at c on the real axis with c^2 - 1 = |zeta - c|^2, so
        // c = (|zeta|^2 + 1) / (2 Re zeta); its foot is the root of
        // x^2 - 2cx + 1 inside the disk.  Re zeta = 0 is the axis' own
        // perpendicular through the origin.
        let re = zeta.re;
        if re.abs() < 1e-300 {
            return 0.0;
        }
        let c = (zeta.norm_sqr() + 1.0) / (2.0 * re);
        // Stable inside-disk root: x = c - sign(c) sqrt(c^2 - 1), written to
        // avoid cancellation.
        let x = 1.0 / (c + c.signum() * (c * c - 1.0).sqrt());
        2.0 * x.atanh()
    }

    /// Pushes the frame forward by an isometry.
    pub fn transformed(&self, g: &Mobius) -> LineFrame {
        LineFrame { map: g.compose(&self.map) }
    }

    /// Frame of the same line with reversed orientation and flipped sides,
    /// re-anchored so the new `t = 0` sits at old `t = t0`.
    pub fn reversed_at(&self, t0: f64) -> LineFrame {
        // Rotation by pi about embed(t0, 0) flips both t and r.
        let m = self.map.compose(&Mobius::translation(t0)).compose(&Mobius::rotation(std::f64::consts::PI));
        LineFrame { map: m }
    }
}
