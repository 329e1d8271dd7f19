//! The two-parameter octagon: admissible region, derived parameters,
//! vertices, geodesic sides, perimeter and inner angles.
//!
//! Vertices sit at `a i^k` and `b e^{i(alpha + k pi/2)}`, `k = 0..3`. Sides are
//! labelled `s_0 .. s_7` counterclockwise starting with `s_0 = [a, b e^{i alpha}]`.
//! Even sides are arcs of the "+" family, odd sides of the "-" family.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use crate::hypgeom::{interior_angle, GeodesicArc};
use crate::specfun::arccosh_stable;
use crate::{Complex, Error, RegionViolation, Result};

/// Margin applied to every strict inequality of the region.
pub const REGION_MARGIN: f64 = 1e-12;

/// Sheet of the region: the sign of `alpha - pi/4`. The symmetric point
/// `alpha = pi/4` is assigned to [`Sheet::Plus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn of(alpha_tilde: f64) -> Sheet {
        if alpha_tilde < 0.0 {
            Sheet::Minus
        } else {
            Sheet::Plus
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }

    pub fn from_sign(eps: f64) -> Sheet {
        Sheet::of(eps)
    }
}

/// Why `(a, alpha)` is not admissible, if it is not.
pub fn region_violation(a: f64, alpha: f64) -> Option<RegionViolation> {
    if !(a.is_finite() && alpha.is_finite()) {
        return Some(RegionViolation::NotFinite);
    }
    let alpha_tilde = alpha - FRAC_PI_4;
    if alpha_tilde.abs() >= FRAC_PI_4 - REGION_MARGIN {
        return Some(RegionViolation::AngleBound { alpha_tilde });
    }
    let bound = 1.0 / (SQRT_2 * alpha_tilde.cos());
    if a <= bound + REGION_MARGIN {
        return Some(RegionViolation::LowerRadius { a, bound });
    }
    if a >= 1.0 - REGION_MARGIN {
        return Some(RegionViolation::UpperRadius { a });
    }
    None
}

/// Strict membership in the admissible region.
pub fn in_region(a: f64, alpha: f64) -> bool {
    region_violation(a, alpha).is_none()
}

/// A point `(a, alpha)` of the admissible region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctagonParams {
    a: f64,
    alpha: f64,
}

impl OctagonParams {
    pub fn new(a: f64, alpha: f64) -> Result<Self> {
        match region_violation(a, alpha) {
            None => Ok(OctagonParams { a, alpha }),
            Some(v) => Err(Error::Region(v)),
        }
    }

    /// Same as [`OctagonParams::new`] with `alpha_tilde = alpha - pi/4`.
    pub fn from_alpha_tilde(a: f64, alpha_tilde: f64) -> Result<Self> {
        OctagonParams::new(a, alpha_tilde + FRAC_PI_4)
    }

    /// The regular octagon `a = 2^(-1/4)`, `alpha = pi/4`.
    pub fn regular() -> Self {
        OctagonParams { a: 2f64.powf(-0.25), alpha: FRAC_PI_4 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_tilde(&self) -> f64 {
        self.alpha - FRAC_PI_4
    }

    pub fn sheet(&self) -> Sheet {
        Sheet::of(self.alpha_tilde())
    }

    /// Radius of the second vertex family, `b = (sqrt(2) a cos alpha~)^-1`.
    pub fn b(&self) -> f64 {
        1.0 / (SQRT_2 * self.a * self.alpha_tilde().cos())
    }

    /// `2 a^2 cos^2 alpha~ - 1`; positive inside the region and zero on the
    /// `b = 1` boundary.
    pub fn normalization_radicand(&self) -> f64 {
        let c = self.alpha_tilde().cos();
        2.0 * self.a * self.a * c * c - 1.0
    }
}

/// `(b, beta)` with `tan beta = (1 - a^2) / (1 - b^2)`.
pub fn derived_b_beta(p: &OctagonParams) -> (f64, f64) {
    let b = p.b();
    let a = p.a();
    let beta = ((1.0 - a * a) / ((1.0 - b) * (1.0 + b))).atan();
    (b, beta)
}

/// Radii and centre angles of the two arc families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcFamilies {
    pub r_plus: f64,
    pub r_minus: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

pub fn arc_radii_angles(p: &OctagonParams) -> ArcFamilies {
    let a = p.a();
    let a2 = a * a;
    let tan = p.alpha_tilde().tan();
    let t_plus = a2 + tan;
    let t_minus = a2 - tan;
    let one_minus = 1.0 - a2;
    ArcFamilies {
        r_plus: t_plus.hypot(one_minus) / (2.0 * a),
        r_minus: t_minus.hypot(one_minus) / (2.0 * a),
        phi_plus: (t_plus / (1.0 + a2)).atan(),
        phi_minus: ((1.0 + a2) / t_minus).atan(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OctagonGeometry {
    pub b: f64,
    pub beta: f64,
    pub arcs: ArcFamilies,
    /// `v_{2k} = a i^k`, `v_{2k+1} = b e^{i(alpha + k pi/2)}`.
    pub vertices: [Complex; 8],
    /// `sides[k]` runs from `vertices[k]` to `vertices[k + 1 mod 8]`.
    pub sides: [GeodesicArc; 8],
}

/// Builds vertices and sides and certifies that every vertex lies on both
/// adjacent arc circles.
pub fn build_geometry(p: &OctagonParams) -> Result<OctagonGeometry> {
    let (b, beta) = derived_b_beta(p);
    let arcs = arc_radii_angles(p);
    let a = p.a();
    let alpha = p.alpha();
    let mut vertices = [Complex::new(0.0, 0.0); 8];
    for k in 0..4 {
        let turn = k as f64 * FRAC_PI_2;
        vertices[2 * k] = Complex::from_polar(a, turn);
        vertices[2 * k + 1] = Complex::from_polar(b, alpha + turn);
    }
    let mut sides = Vec::with_capacity(8);
    for k in 0..8 {
        let turn = (k / 2) as f64 * FRAC_PI_2;
        let (radius, angle) = if k % 2 == 0 {
            (arcs.r_plus, arcs.phi_plus + turn)
        } else {
            (arcs.r_minus, arcs.phi_minus + turn)
        };
        sides.push(GeodesicArc::new(radius, angle, vertices[k], vertices[(k + 1) % 8])?);
    }
    let sides: [GeodesicArc; 8] = sides.try_into().expect("eight sides");
    Ok(OctagonGeometry { b, beta, arcs, vertices, sides })
}

impl OctagonGeometry {
    /// Hyperbolic side lengths, `s_0 .. s_7`.
    pub fn side_lengths(&self) -> Result<[f64; 8]> {
        let mut out = [0.0; 8];
        for (o, s) in out.iter_mut().zip(self.sides.iter()) {
            *o = s.hyperbolic_length()?;
        }
        Ok(out)
    }

    /// Inner angles at `v_0 .. v_7`, measured from the arc tangents.
    pub fn inner_angles(&self) -> Result<[f64; 8]> {
        let mut out = [0.0; 8];
        for (k, o) in out.iter_mut().enumerate() {
            *o = interior_angle(&self.sides[(k + 7) % 8], &self.sides[k])?;
        }
        Ok(out)
    }
}

/// Closed-form octagon perimeter.
pub fn perimeter(p: &OctagonParams) -> f64 {
    perimeter_ab(p.a(), p.b())
}

pub(crate) fn perimeter_ab(a: f64, b: f64) -> f64 {
    let one_a = (1.0 - a) * (1.0 + a);
    let one_b = (1.0 - b) * (1.0 + b);
    let arg = (1.0 - a * a * b * b + one_a.hypot(one_b)) / (one_a * one_b);
    8.0 * arccosh_stable(arg).expect("perimeter argument is >= 1 inside the region")
}

/// Minimal perimeter, attained by the regular octagon: `8 arccosh(5 + 4 sqrt 2)`.
pub fn regular_perimeter() -> f64 {
    8.0 * arccosh_stable(5.0 + 4.0 * SQRT_2).expect("argument > 1")
}

/// Sum of the eight inner angles; `2 pi` certifies hyperbolic area `4 pi` by
/// Gauss–Bonnet.
pub fn angle_sum(p: &OctagonParams) -> Result<f64> {
    Ok(build_geometry(p)?.inner_angles()?.iter().sum())
}

/// Deterministic interior grid over the region in the normalized chart
/// `s = (alpha~ + pi/4) / (pi/2)`, `t = (a - a_min(alpha~)) / (1 - a_min)`,
/// with `n x n` nodes spread evenly over `[margin, 1 - margin]^2`.
pub fn region_grid(n: usize, margin: f64) -> Vec<OctagonParams> {
    let node = |i: usize| {
        if n == 1 {
            0.5
        } else {
            margin + (1.0 - 2.0 * margin) * i as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if let Ok(p) = chart_point(node(i), node(j)) {
                out.push(p);
            }
        }
    }
    out
}

/// Maps chart coordinates `(s, t)` in the open unit square into the region.
pub fn chart_point(s: f64, t: f64) -> Result<OctagonParams> {
    let alpha_tilde = -FRAC_PI_4 + FRAC_PI_2 * s;
    let a_min = 1.0 / (SQRT_2 * alpha_tilde.cos());
    OctagonParams::from_alpha_tilde(a_min + (1.0 - a_min) * t, alpha_tilde)
}
