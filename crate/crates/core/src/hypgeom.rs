//! Poincaré-disk primitives: SU(1,1) matrices acting by Möbius maps,
//! hyperbolic distance and geodesic arcs.

use std::f64::consts::PI;

use crate::{Complex, Error, Result};

const DET_TOL: f64 = 1e-12;

/// An element `[[u, v], [conj v, conj u]]` of SU(1,1), `|u|^2 - |v|^2 = 1`.
///
/// The matrices `m` and `-m` act identically on the disk; comparisons that
/// care about the action use [`MobiusMatrix::projective_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMatrix {
    pub u: Complex,
    pub v: Complex,
}

impl MobiusMatrix {
    /// Checked constructor; the determinant must be 1 up to round-off
    /// relative to the entry size.
    pub fn new(u: Complex, v: Complex) -> Result<Self> {
        let m = MobiusMatrix { u, v };
        let scale = u.norm_sqr() + v.norm_sqr();
        if !scale.is_finite() || (m.det() - 1.0).abs() > DET_TOL * scale.max(1.0) {
            return Err(Error::consistency(
                "MobiusMatrix::new",
                format!("|u|^2 - |v|^2 = {} (expected 1)", m.det()),
            ));
        }
        Ok(m)
    }

    /// Builds a matrix without checking the determinant. Useful for negative
    /// controls and for entries that are unit-determinant by construction.
    pub fn from_raw(u: Complex, v: Complex) -> Self {
        MobiusMatrix { u, v }
    }

    pub fn identity() -> Self {
        MobiusMatrix::from_raw(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    /// `diag(e^{i phi/2}, e^{-i phi/2})`: rotation of the disk by `phi`.
    ///
    /// `rotation(2 pi)` is minus the identity, which acts as the identity.
    pub fn rotation(phi: f64) -> Self {
        MobiusMatrix::from_raw(Complex::from_polar(1.0, 0.5 * phi), Complex::new(0.0, 0.0))
    }

    /// `|u|^2 - |v|^2`.
    pub fn det(&self) -> f64 {
        self.u.norm_sqr() - self.v.norm_sqr()
    }

    /// Trace `u + conj u = 2 Re u`.
    pub fn trace(&self) -> f64 {
        2.0 * self.u.re
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [Complex; 4] {
        [self.u, self.v, self.v.conj(), self.u.conj()]
    }

    /// `z -> (u z + v) / (conj(v) z + conj(u))` for `|z| < 1`.
    pub fn apply(&self, z: Complex) -> Result<Complex> {
        if !(z.norm() < 1.0) {
            return Err(Error::domain("mobius_apply", format!("|z| = {} >= 1", z.norm())));
        }
        Ok(self.apply_unchecked(z))
    }

    pub(crate) fn apply_unchecked(&self, z: Complex) -> Complex {
        (self.u * z + self.v) / (self.v.conj() * z + self.u.conj())
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &MobiusMatrix) -> MobiusMatrix {
        // The product of two SU(1,1) matrices keeps the [[u, v], [v*, u*]]
        // shape, so only the first row needs computing.
        MobiusMatrix::from_raw(
            self.u * other.u + self.v * other.v.conj(),
            self.u * other.v + self.v * other.u.conj(),
        )
    }

    /// Inverse `[[conj u, -v], [-conj v, u]]`.
    pub fn inverse(&self) -> MobiusMatrix {
        MobiusMatrix::from_raw(self.u.conj(), -self.v)
    }

    /// Conjugation `g self g^-1`.
    pub fn conjugate_by(&self, g: &MobiusMatrix) -> MobiusMatrix {
        g.compose(self).compose(&g.inverse())
    }

    /// Largest entry-wise deviation from `other`.
    pub fn distance(&self, other: &MobiusMatrix) -> f64 {
        (self.u - other.u).norm().max((self.v - other.v).norm())
    }

    /// `min over sigma in {+1, -1}` of the entry-wise deviation between `self`
    /// and `sigma * other`.
    pub fn projective_distance(&self, other: &MobiusMatrix) -> f64 {
        let neg = MobiusMatrix::from_raw(-other.u, -other.v);
        self.distance(other).min(self.distance(&neg))
    }
}

/// Hyperbolic distance in the disk with metric `4|dz|^2 / (1 - |z|^2)^2`.
pub fn hyp_distance(z1: Complex, z2: Complex) -> Result<f64> {
    if !(z1.norm() < 1.0 && z2.norm() < 1.0) {
        return Err(Error::domain("hyp_distance", "points must lie inside the unit disk"));
    }
    let num = (z1 - z2).norm();
    let den = (Complex::new(1.0, 0.0) - z1.conj() * z2).norm();
    Ok(2.0 * (num / den).atanh())
}

/// Which end of a [`GeodesicArc`] a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcEnd {
    Start,
    End,
}

/// Geodesic segment: a piece of the circle of radius `radius` centred at
/// `sqrt(1 + R^2) e^{i center_angle}`, which meets the unit circle at right
/// angles. The segment runs from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicArc {
    pub radius: f64,
    pub center_angle: f64,
    pub start: Complex,
    pub end: Complex,
}

const ON_ARC_TOL: f64 = 1e-9;

impl GeodesicArc {
    /// Checks that both endpoints are inside the disk and on the circle.
    pub fn new(radius: f64, center_angle: f64, start: Complex, end: Complex) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain("GeodesicArc::new", format!("radius {radius} must be > 0")));
        }
        let arc = GeodesicArc { radius, center_angle, start, end };
        for p in [start, end] {
            if !(p.norm() < 1.0) {
                return Err(Error::domain("GeodesicArc::new", "endpoint outside the disk"));
            }
            let miss = arc.circle_miss(p);
            if miss > ON_ARC_TOL {
                return Err(Error::consistency(
                    "GeodesicArc::new",
                    format!("endpoint {p} misses the arc circle by {miss:e}"),
                ));
            }
        }
        Ok(arc)
    }

    pub fn center(&self) -> Complex {
        Complex::from_polar((1.0 + self.radius * self.radius).sqrt(), self.center_angle)
    }

    /// `| |p - center| - R |`.
    pub fn circle_miss(&self, p: Complex) -> f64 {
        ((p - self.center()).norm() - self.radius).abs()
    }

    fn endpoint(&self, end: ArcEnd) -> Complex {
        match end {
            ArcEnd::Start => self.start,
            ArcEnd::End => self.end,
        }
    }

    /// Euclidean unit tangent at an endpoint, oriented from `start` to `end`.
    pub fn tangent_at(&self, end: ArcEnd) -> Result<[f64; 2]> {
        let p = self.endpoint(end);
        let miss = self.circle_miss(p);
        if miss > ON_ARC_TOL {
            return Err(Error::consistency(
                "arc_tangent_at",
                format!("point misses the arc circle by {miss:e}"),
            ));
        }
        let r = p - self.center();
        // Perpendicular to the radius vector; pick the sign that points along
        // the chord, which is the traversal direction for a minor arc.
        let mut t = [-r.im, r.re];
        let chord = self.end - self.start;
        if t[0] * chord.re + t[1] * chord.im < 0.0 {
            t = [-t[0], -t[1]];
        }
        let n = t[0].hypot(t[1]);
        Ok([t[0] / n, t[1] / n])
    }

    /// Cosine of the angle between the arc circle and the unit circle at
    /// their intersection; 0 for an orthogonal crossing.
    pub fn boundary_orthogonality_defect(&self) -> f64 {
        // Circles |z| = 1 and |z - c| = R meet orthogonally iff |c|^2 = 1 + R^2.
        let c2 = self.center().norm_sqr();
        (c2 - 1.0 - self.radius * self.radius) / (2.0 * self.radius)
    }

    pub fn hyperbolic_length(&self) -> Result<f64> {
        hyp_distance(self.start, self.end)
    }

    /// Rotates the arc about the origin by `phi`.
    pub fn rotated(&self, phi: f64) -> GeodesicArc {
        let r = Complex::from_polar(1.0, phi);
        GeodesicArc {
            radius: self.radius,
            center_angle: (self.center_angle + phi).rem_euclid(2.0 * PI),
            start: self.start * r,
            end: self.end * r,
        }
    }
}

/// Interior angle at a vertex where `incoming` ends and `outgoing` starts,
/// for a boundary traversed counterclockwise.
pub fn interior_angle(incoming: &GeodesicArc, outgoing: &GeodesicArc) -> Result<f64> {
    let t_in = incoming.tangent_at(ArcEnd::End)?;
    let t_out = outgoing.tangent_at(ArcEnd::Start)?;
    let cross = t_in[0] * t_out[1] - t_in[1] * t_out[0];
    let dot = t_in[0] * t_out[0] + t_in[1] * t_out[1];
    let turn = cross.atan2(dot);
    if !turn.is_finite() || turn.abs() >= PI - 1e-12 {
        return Err(Error::consistency("interior_angle", "degenerate tangent pair"));
    }
    Ok(PI - turn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    /// Hyperbolic translation composed with a rotation; always in SU(1,1).
    fn element(t: f64, phi: f64, psi: f64) -> MobiusMatrix {
        MobiusMatrix::new(
            Complex::from_polar(t.cosh(), phi),
            Complex::from_polar(t.sinh(), psi),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_rotations() {
        let z = c(0.3, -0.4);
        assert_eq!(MobiusMatrix::identity().apply(z).unwrap(), z);
        let w = MobiusMatrix::rotation(PI).apply(z).unwrap();
        assert!((w + z).norm() < 1e-15);
        assert!(MobiusMatrix::rotation(0.0).distance(&MobiusMatrix::identity()) == 0.0);
        let full = MobiusMatrix::rotation(2.0 * PI);
        assert!((full.u + 1.0).norm() < 1e-15);
        assert!(full.projective_distance(&MobiusMatrix::identity()) < 1e-15);
        let half = MobiusMatrix::rotation(FRAC_PI_2).compose(&MobiusMatrix::rotation(FRAC_PI_2));
        assert!(half.distance(&MobiusMatrix::rotation(PI)) < 1e-15);
    }

    #[test]
    fn rejects_boundary_points_and_bad_determinants() {
        assert!(MobiusMatrix::identity().apply(c(1.0, 0.0)).is_err());
        assert!(MobiusMatrix::new(c(1.0, 0.0), c(0.5, 0.0)).is_err());
        assert!(hyp_distance(c(0.0, 0.0), c(0.0, 1.0)).is_err());
    }

    #[test]
    fn inverse_and_composition() {
        let m = element(0.7, 0.3, -1.1);
        let id = m.compose(&m.inverse());
        assert!(id.distance(&MobiusMatrix::identity()) < 1e-12);
        assert!((m.compose(&element(0.2, 1.0, 2.0)).det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distances() {
        let z = c(0.2, 0.5);
        assert_eq!(hyp_distance(z, z).unwrap(), 0.0);
        for r in [0.1, 0.5, 0.9, 0.999] {
            assert_relative_eq!(
                hyp_distance(c(0.0, 0.0), c(r, 0.0)).unwrap(),
                2.0 * f64::atanh(r),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn arc_tangent_is_perpendicular_to_radius() {
        // Circle centred on the positive real axis; endpoints mirror-symmetric
        // about the axis.
        let radius: f64 = 0.75;
        let cx = (1.0 + radius * radius).sqrt();
        let th = 2.6_f64;
        let top = c(cx + radius * th.cos(), radius * th.sin());
        let bottom = top.conj();
        let arc = GeodesicArc::new(radius, 0.0, bottom, top).unwrap();
        let t = arc.tangent_at(ArcEnd::End).unwrap();
        let r = top - arc.center();
        assert!((t[0] * r.re + t[1] * r.im).abs() < 1e-15);
        // Traversal goes upward on the left of the centre.
        assert!(t[1] > 0.0);
        assert!(arc.boundary_orthogonality_defect().abs() < 1e-15);
        assert!(arc.tangent_at(ArcEnd::Start).is_ok());
        let off = GeodesicArc { start: c(0.1, 0.1), ..arc };
        assert!(off.tangent_at(ArcEnd::Start).is_err());
        assert!(GeodesicArc::new(radius, 0.0, c(0.0, 0.0), top).is_err());
    }

    proptest! {
        #[test]
        fn action_preserves_disk_and_distance(
            t in 0.0..3.0f64, phi in -PI..PI, psi in -PI..PI,
            r1 in 0.0..0.95f64, a1 in -PI..PI, r2 in 0.0..0.95f64, a2 in -PI..PI,
        ) {
            let g = element(t, phi, psi);
            prop_assert!((g.det() - 1.0).abs() < 1e-12 * (g.u.norm_sqr() + g.v.norm_sqr()));
            let z1 = Complex::from_polar(r1, a1);
            let z2 = Complex::from_polar(r2, a2);
            let w1 = g.apply(z1).unwrap();
            let w2 = g.apply(z2).unwrap();
            prop_assert!(w1.norm() < 1.0 && w2.norm() < 1.0);
            let d = hyp_distance(z1, z2).unwrap();
            let dw = hyp_distance(w1, w2).unwrap();
            prop_assert!((d - dw).abs() < 1e-9 * (1.0 + d), "d = {}, dw = {}", d, dw);
            prop_assert!((hyp_distance(z2, z1).unwrap() - d).abs() < 1e-15);
        }
    }
}
