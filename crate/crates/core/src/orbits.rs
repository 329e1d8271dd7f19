//! Isoperimetric orbits in the parameter region, their Weil–Petersson area
//! and the action–angle variables built from it.
//!
//! An orbit is labelled by its perimeter `P`, or equivalently by
//! `T = tanh(P/16)`. Along an orbit `x = a^2` oscillates between the turning
//! points `x_-` and `x_+`, reached at `alpha~ = 0`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::numeric::{find_root, integrate, QuadOptions, RootOptions};
use crate::octagon::{perimeter_ab, OctagonParams, Sheet};
use crate::specfun::dilog_paper;
use crate::specfun::legendre::{ellint_f_split, ellint_pi_split_p};
use crate::{Complex, Error, Result};

/// Perimeter of the regular octagon, `8 arccosh(5 + 4 sqrt 2)`.
pub const P_REG: f64 = 24.457_134_711_695_97;

/// `tanh(P_REG / 16) = sqrt(2 sqrt 2 - 2)`.
pub const T_REG: f64 = 0.910_179_721_124_454_7;

/// Below `P_REG + NEAR_REG_WIDTH` the orbit is treated as collapsed and the
/// area is continued linearly.
pub const NEAR_REG_WIDTH: f64 = 1e-6;

const X_TOL: f64 = 1e-12;

fn below_minimum(perimeter: f64) -> Error {
    Error::BelowMinimum { perimeter, minimum: P_REG }
}

/// `T = tanh(P/16)`.
pub fn t_of_p(p: f64) -> Result<f64> {
    check_perimeter(p)?;
    Ok((p / 16.0).tanh())
}

/// `P = 16 artanh(T)`.
pub fn p_of_t(t: f64) -> Result<f64> {
    if !(t < 1.0) {
        return Err(Error::domain("p_of_t", format!("T = {t} must be below 1")));
    }
    let p = 16.0 * t.atanh();
    check_perimeter(p)?;
    Ok(p)
}

fn check_perimeter(p: f64) -> Result<()> {
    if p.is_nan() || p < P_REG * (1.0 - 4.0 * f64::EPSILON) {
        return Err(below_minimum(p));
    }
    Ok(())
}

/// `(2 + T^2)^2 - 8`, clamped at zero within round-off.
fn discriminant(t: f64) -> Result<f64> {
    let s = 2.0 + t * t;
    let d = s * s - 8.0;
    if d < -1e-14 {
        return Err(Error::singular("a_plus_minus", format!("negative radicand {d} at T = {t}")));
    }
    Ok(d.max(0.0))
}

/// Extreme values `(a_+, a_-)` of `a` on the orbit of `T`.
/// Unlike [`IsoOrbit`], this accepts the limit `T = 1`.
pub fn a_plus_minus(t: f64) -> Result<(f64, f64)> {
    if !(t <= 1.0) {
        return Err(Error::domain("a_plus_minus", format!("T = {t} exceeds 1")));
    }
    let x_plus = 0.25 * (2.0 + t * t + discriminant(t)?.sqrt());
    Ok((x_plus.sqrt(), (0.5 / x_plus).sqrt()))
}

/// Parameters of the elliptic integrals in `Q(x, T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArgs {
    pub u: f64,
    pub k: f64,
    pub nu1: f64,
    pub nu2: f64,
}

/// A closed orbit of constant perimeter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoOrbit {
    pub perimeter: f64,
    pub t: f64,
    /// `1 - T^2`, evaluated as `sech^2(P/16)` when the perimeter is known.
    pub one_minus_t2: f64,
    pub x_minus: f64,
    pub x_plus: f64,
    /// `x_+ - x_-`.
    pub delta: f64,
    /// `T^2 - x_+`.
    t2_minus_xp: f64,
}

impl IsoOrbit {
    pub fn new(p: f64) -> Result<Self> {
        check_perimeter(p)?;
        let t = (p / 16.0).tanh();
        let sech = 1.0 / (p / 16.0).cosh();
        Self::build(p, t, sech * sech)
    }

    pub fn from_t(t: f64) -> Result<Self> {
        if !(t < 1.0) || t < T_REG * (1.0 - 4.0 * f64::EPSILON) {
            if t < 1.0 {
                return Err(below_minimum(16.0 * t.atanh()));
            }
            return Err(Error::domain("IsoOrbit::from_t", format!("T = {t} must lie in [T_reg, 1)")));
        }
        Self::build(16.0 * t.atanh(), t, (1.0 - t) * (1.0 + t))
    }

    fn build(perimeter: f64, t: f64, one_minus_t2: f64) -> Result<Self> {
        let root = discriminant(t)?.sqrt();
        let s = 2.0 + t * t;
        let x_plus = 0.25 * (s + root);
        // T^2 - x_+ vanishes like (1 - T^2)^2 as T -> 1; this form has no
        // cancellation.
        let t2_minus_xp = 2.0 * one_minus_t2 * one_minus_t2 * (5.0 + t * t) / ((1.0 + root) * (s + 3.0 * root));
        Ok(IsoOrbit { perimeter, t, one_minus_t2, x_minus: 0.5 / x_plus, x_plus, delta: 0.5 * root, t2_minus_xp })
    }

    /// `sqrt((2 + T^2)^2 - 8)`.
    pub fn root_discriminant(&self) -> f64 {
        2.0 * self.delta
    }

    pub fn is_collapsed(&self) -> bool {
        self.perimeter - P_REG < NEAR_REG_WIDTH
    }

    /// The point of the orbit at cyclic parameter `phi`; `phi = 0` is the
    /// outer turning point `a_+` and `phi = pi` the inner one.
    pub fn point(&self, phi: f64) -> Result<OctagonParams> {
        let (a, alpha_tilde) = self.point_raw(phi)?;
        OctagonParams::from_alpha_tilde(a, alpha_tilde)
    }

    fn point_raw(&self, phi: f64) -> Result<(f64, f64)> {
        let root = self.root_discriminant();
        let t2 = self.t * self.t;
        let a = 0.5 * (2.0 + t2 + phi.cos() * root).sqrt();
        let radicand = 3.0 * t2 - 2.0 - phi.cos() * root;
        if radicand < -1e-14 {
            return Err(Error::consistency("orbit_point", format!("negative radicand {radicand}")));
        }
        let alpha_tilde = (SQRT_2 * self.t * root * phi.sin()).atan2(2.0 * radicand.max(0.0).sqrt());
        Ok((a, alpha_tilde))
    }

    fn clamp_x(&self, x: f64, op: &'static str) -> Result<f64> {
        let tol = X_TOL * (1.0 + self.delta);
        if !(x >= self.x_minus - tol && x <= self.x_plus + tol) {
            return Err(Error::domain(
                op,
                format!("x = {x} lies outside [{}, {}]", self.x_minus, self.x_plus),
            ));
        }
        Ok(x.clamp(self.x_minus, self.x_plus))
    }

    /// `|alpha~|` of the orbit point with `a^2 = x`, from
    /// `tan^2 alpha~ = 2 T^2 (x_+ - x)(x - x_-) / (T^2 - x)`.
    pub fn alpha_tilde_at(&self, x: f64) -> f64 {
        let x = x.clamp(self.x_minus, self.x_plus);
        let t2 = self.t * self.t;
        (2.0 * t2 * (self.x_plus - x) * (x - self.x_minus) / (t2 - x)).sqrt().atan()
    }

    fn one_minus_xp(&self) -> f64 {
        2.0 * self.one_minus_t2 / (2.0 - self.t * self.t + 2.0 * self.delta)
    }

    /// `|alpha~|` at distance `y = x_+ - x` below the top of the orbit.
    pub(crate) fn alpha_tilde_from_gap(&self, y: f64) -> f64 {
        let y = y.clamp(0.0, self.delta);
        let t2 = self.t * self.t;
        (2.0 * t2 * y * (self.delta - y) / (self.t2_minus_xp + y)).sqrt().atan()
    }

    /// `x_+ - a^2` for an orbit point. Near `x_+` the gap is far below the
    /// resolution of `a`, so it is recovered from `alpha~` instead.
    pub(crate) fn gap_at(&self, a: f64, alpha_tilde: f64) -> f64 {
        let from_a = (self.x_plus - a * a).clamp(0.0, self.delta);
        let t2 = self.t * self.t;
        let tan2 = alpha_tilde.tan().powi(2);
        let b = 2.0 * t2 * self.delta - tan2;
        let disc = b * b - 8.0 * t2 * tan2 * self.t2_minus_xp;
        if !(b > 0.0) || !(disc > 0.0) {
            return from_a;
        }
        let small = 2.0 * tan2 * self.t2_minus_xp / (b + disc.sqrt());
        let large = (b + disc.sqrt()) / (4.0 * t2);
        if small < 0.25 * large && (from_a - small).abs() < (from_a - large).abs() {
            small
        } else {
            from_a
        }
    }

    pub fn elliptic_args(&self, x: f64) -> Result<EllipticArgs> {
        let x = self.clamp_x(x, "elliptic_args")?;
        let t2 = self.t * self.t;
        let xm = self.x_minus;
        let u = if self.delta > 0.0 { ((x - xm) / self.delta).sqrt().min(1.0) } else { 0.0 };
        Ok(EllipticArgs {
            u,
            k: (self.delta / (self.t2_minus_xp + self.delta)).sqrt(),
            nu1: self.delta / (1.0 - xm),
            nu2: 2.0 * self.delta / (t2 - 2.0 * xm + 1.0),
        })
    }

    /// `Q(x, T)`, the canonical partner of the perimeter; `Q(x_-) = 0`.
    pub fn q(&self, x: f64) -> Result<f64> {
        let x = self.clamp_x(x, "q_function")?;
        if self.delta == 0.0 {
            return Ok(0.0);
        }
        self.q_split((x - self.x_minus) / self.delta, (self.x_plus - x) / self.delta)
    }

    /// `Q` from `u^2` and `1 - u^2`.
    fn q_split(&self, u2: f64, c: f64) -> Result<f64> {
        let t2 = self.t * self.t;
        let xm = self.x_minus;
        let t2_minus_xm = self.t2_minus_xp + self.delta;
        let d = (self.t2_minus_xp + self.delta * c) / t2_minus_xm;
        let nu1 = self.delta / (1.0 - xm);
        let nu2 = 2.0 * self.delta / (t2 - 2.0 * xm + 1.0);
        // 1 - nu_i u^2, kept accurate as x_+ approaches 1
        let one_minus_xp = self.one_minus_xp();
        let p1 = (one_minus_xp + self.delta * c) / (1.0 - xm);
        let p2 = (self.t2_minus_xp + one_minus_xp + 2.0 * self.delta * c) / (t2 - 2.0 * xm + 1.0);
        let f = ellint_f_split(u2, c, d)?;
        let pi1 = ellint_pi_split_p(u2, c, d, nu1, p1)?;
        let pi2 = ellint_pi_split_p(u2, c, d, nu2, p2)?;
        let bracket = f - self.one_minus_t2 * pi1 / (1.0 - xm) + self.one_minus_t2 * pi2 / (t2 - 2.0 * xm + 1.0);
        Ok(SQRT_2 / 4.0 / t2_minus_xm.sqrt() * bracket)
    }

    /// `Q` at the orbit point with cyclic parameter `phi`.
    pub fn q_at_phase(&self, phi: f64) -> Result<f64> {
        if self.delta == 0.0 {
            return Ok(0.0);
        }
        let half = 0.5 * phi;
        self.q_split(half.cos().powi(2), half.sin().powi(2))
    }

    /// `Q(x_+, T)`, built from complete integrals.
    pub fn q_plus(&self) -> Result<f64> {
        if self.delta == 0.0 {
            return Ok(0.0);
        }
        self.q_split(1.0, 0.0)
    }

    /// Integrand of the area in the variable `x = x_- + delta sin^2(theta)`.
    fn area_integrand(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let sc = s * c;
        let x = self.x_minus + self.delta * s * s;
        let gap = self.delta * c * c;
        let one_minus_xp = self.one_minus_xp();
        // arccosh f = asinh(sqrt(f^2 - 1)), with f^2 - 1 factored through the
        // turning points to avoid cancellation.
        let lower = self.t2_minus_xp + one_minus_xp + 2.0 * gap;
        let root = self.t * self.delta * sc * (2.0 / (x * self.one_minus_t2 * lower)).sqrt();
        8.0 / ((one_minus_xp + gap) * (2.0 * x - 1.0).sqrt()) * root.asinh() * 2.0 * self.delta * sc
    }
}

/// `(a, alpha~)` on the orbit of `T` at cyclic parameter `phi`.
pub fn orbit_point(t: f64, phi: f64) -> Result<(f64, f64)> {
    IsoOrbit::from_t(t)?.point_raw(phi)
}

/// `Q(x, T)`.
pub fn q_function(x: f64, t: f64) -> Result<f64> {
    IsoOrbit::from_t(t)?.q(x)
}

/// `lim dA/dP` as `P -> P_reg`, where every elliptic integral reduces to
/// `arcsin 1 = pi/2`.
pub fn slope_at_regular() -> f64 {
    let t2 = T_REG * T_REG;
    let x = std::f64::consts::FRAC_1_SQRT_2;
    let omt2 = 1.0 - t2;
    2.0 * SQRT_2 / 4.0 / (t2 - x).sqrt() * FRAC_PI_2 * (1.0 - omt2 / (1.0 - x) + omt2 / (t2 - 2.0 * x + 1.0))
}

fn area_options() -> QuadOptions {
    QuadOptions { abs_tol: 1e-13, rel_tol: 2e-13, max_intervals: 4000 }
}

/// Weil–Petersson area enclosed by the orbit of perimeter `p`, by adaptive
/// quadrature.
pub fn wp_area_numeric(p: f64) -> Result<f64> {
    let orbit = IsoOrbit::new(p)?;
    if orbit.is_collapsed() {
        return Ok(slope_at_regular() * (p - P_REG).max(0.0));
    }
    let est = integrate(|theta| orbit.area_integrand(theta), 0.0, FRAC_PI_2, &area_options())?;
    Ok(est.value)
}

/// `dA/dP = 2 Q(x_+, T)`.
pub fn da_dp(p: f64) -> Result<f64> {
    let orbit = IsoOrbit::new(p)?;
    if orbit.is_collapsed() {
        return Ok(slope_at_regular());
    }
    Ok(2.0 * orbit.q_plus()?)
}

/// Logarithmic-order area estimate together with the imaginary part that
/// the dilogarithm terms failed to cancel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilogArea {
    pub value: f64,
    pub imaginary_residual: f64,
}

/// Largest imaginary residual accepted by [`wp_area_dilog`].
pub const DILOG_RESIDUAL_LIMIT: f64 = 1e-6;

fn dilog_primitive(t: f64, one_minus_t2: f64, xi: f64) -> Complex {
    let d = dilog_paper;
    let re = |x: f64| Complex::new(x, 0.0);
    let s = (2.0 * t * t - 1.0).sqrt();
    let log_term = 16.0 * (std::f64::consts::LN_2 - 0.5 * one_minus_t2.ln()) * xi.atanh();
    let mut total = re(log_term + 8.0 * xi.ln() * xi.ln_1p()) + 8.0 * d(re(xi)) + 8.0 * d(re(1.0 + xi));
    for eps in [1.0, -1.0] {
        let terms = d(re((t + eps * xi) / (t - eps))) - d(re((t + eps * xi) / (t + eps)))
            + d(Complex::new(0.5 * (1.0 - xi), eps * 0.5 * (1.0 + xi)))
            - d(Complex::new(0.5 * (1.0 + xi), eps * 0.5 * (1.0 - xi)))
            + d(re((s + eps * xi) / (s + eps)))
            - d(re((s + eps * xi) / (s - eps)));
        total += 4.0 * terms;
    }
    total
}

/// Area estimate keeping only the logarithmic term of the arccosh
/// expansion, assembled from dilogarithms.
pub fn wp_area_dilog(p: f64) -> Result<DilogArea> {
    let orbit = IsoOrbit::new(p)?;
    if orbit.delta == 0.0 {
        return Ok(DilogArea { value: 0.0, imaginary_residual: 0.0 });
    }
    let xi_plus = (2.0 * orbit.x_plus - 1.0).sqrt();
    let xi_minus = (2.0 * orbit.x_minus - 1.0).sqrt();
    let total = dilog_primitive(orbit.t, orbit.one_minus_t2, xi_plus)
        - dilog_primitive(orbit.t, orbit.one_minus_t2, xi_minus);
    let residual = total.im.abs();
    if !(residual <= DILOG_RESIDUAL_LIMIT) || !total.re.is_finite() {
        return Err(Error::consistency("wp_area_dilog", format!("imaginary residual {residual}")));
    }
    Ok(DilogArea { value: total.re, imaginary_residual: residual })
}

/// `J(P) = A_WP(P) / (4 pi)`.
pub fn action_j(p: f64) -> Result<f64> {
    Ok(wp_area_numeric(p)? / (4.0 * PI))
}

/// Perimeter with `action_j(P) = j`.
pub fn invert_action(j: f64) -> Result<f64> {
    if !(j >= 0.0) {
        return Err(Error::domain("invert_action", format!("J = {j} must be nonnegative")));
    }
    if j == 0.0 {
        return Ok(P_REG);
    }
    let f = |p: f64| Ok(action_j(p)? - j);
    let mut width = 1.0;
    while f(P_REG + width)? < 0.0 {
        width *= 2.0;
        if width > 1e4 {
            return Err(Error::numeric("invert_action", format!("no bracket for J = {j}")));
        }
    }
    let opts = RootOptions { x_tol: 1e-12, f_tol: 1e-12, max_iter: 300 };
    find_root(f, P_REG, P_REG + width, &opts)
}

/// `Phi = pi eps Q(a^2, T) / Q(x_+, T)` on the orbit of perimeter `p`.
pub fn angle_phi(a: f64, p: f64, sheet: Sheet) -> Result<f64> {
    let orbit = IsoOrbit::new(p)?;
    let x = orbit.clamp_x(a * a, "angle_phi")?;
    if orbit.delta == 0.0 {
        return Ok(0.0);
    }
    Ok(PI * sheet.sign() * orbit.q(x)? / orbit.q_plus()?)
}

/// [`angle_phi`] for a point of the region, using `alpha~` where it resolves
/// the position on the orbit better than `a`.
pub fn angle_phi_at(point: &OctagonParams, p: f64) -> Result<f64> {
    let orbit = IsoOrbit::new(p)?;
    orbit.clamp_x(point.a() * point.a(), "angle_phi")?;
    if orbit.delta == 0.0 {
        return Ok(0.0);
    }
    let y = orbit.gap_at(point.a(), point.alpha_tilde());
    let c = y / orbit.delta;
    Ok(PI * point.sheet().sign() * orbit.q_split(1.0 - c, c)? / orbit.q_plus()?)
}

/// Point `(a, alpha~)` of the orbit of perimeter `p` at angle `phi`.
pub fn invert_angle(phi: f64, p: f64) -> Result<(f64, f64)> {
    if !(phi.abs() <= PI * (1.0 + 1e-15)) {
        return Err(Error::domain("invert_angle", format!("Phi = {phi} outside [-pi, pi]")));
    }
    let orbit = IsoOrbit::new(p)?;
    if orbit.delta == 0.0 {
        return Ok((orbit.x_plus.sqrt(), 0.0));
    }
    let ratio = (phi.abs() / PI).min(1.0);
    let q_plus = orbit.q_plus()?;
    let x_of = |theta: f64| orbit.x_minus + orbit.delta * theta.sin().powi(2);
    let theta = find_root(
        |theta| Ok(orbit.q_split(theta.sin().powi(2), theta.cos().powi(2))? / q_plus - ratio),
        0.0,
        FRAC_PI_2,
        &RootOptions::default(),
    )?;
    let x = x_of(theta);
    let y = orbit.delta * theta.cos().powi(2);
    Ok((x.sqrt(), orbit.alpha_tilde_from_gap(y).copysign(if phi < 0.0 { -1.0 } else { 1.0 })))
}

/// `b` of the octagon with radius `a` and perimeter `p`, from the
/// perimeter formula solved for `1 - b^2`.
pub fn b_from_perimeter(a: f64, p: f64) -> Result<f64> {
    check_perimeter(p)?;
    let c1 = (p / 8.0).cosh() + 1.0;
    let one_minus_a2 = (1.0 - a) * (1.0 + a);
    let one_minus_b2 = (2.0 * c1 * one_minus_a2 - 2.0) / (c1 * (c1 * one_minus_a2 - 2.0));
    if !(one_minus_b2 > 0.0 && one_minus_b2 < 1.0) {
        return Err(Error::domain("b_from_perimeter", format!("no octagon with a = {a}, P = {p}")));
    }
    Ok((1.0 - one_minus_b2).sqrt())
}

/// Action–angle coordinates of a point of the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionAngle {
    pub j: f64,
    pub phi: f64,
    pub sheet: Sheet,
}

pub fn action_angle(p: &OctagonParams) -> Result<ActionAngle> {
    let per = crate::octagon::perimeter(p);
    let sheet = p.sheet();
    Ok(ActionAngle { j: action_j(per)?, phi: angle_phi_at(p, per)?, sheet })
}

/// Density of `eps dQ ^ dP` on `da ^ dalpha~`, by central differences.
pub fn symplectic_density_fd(p: &OctagonParams) -> Result<f64> {
    let q_at = |a: f64, t: f64| -> Result<f64> {
        let per = perimeter_at(a, t);
        IsoOrbit::new(per)?.q(a * a)
    };
    let (a, t) = (p.a(), p.alpha_tilde());
    let ha = 1e-6 * a.abs().max(1.0);
    let ht = 1e-6 * t.abs().max(1.0);
    let q_a = (q_at(a + ha, t)? - q_at(a - ha, t)?) / (2.0 * ha);
    let q_t = (q_at(a, t + ht)? - q_at(a, t - ht)?) / (2.0 * ht);
    let p_a = (perimeter_at(a + ha, t) - perimeter_at(a - ha, t)) / (2.0 * ha);
    let p_t = (perimeter_at(a, t + ht) - perimeter_at(a, t - ht)) / (2.0 * ht);
    Ok(p.sheet().sign() * (q_a * p_t - q_t * p_a))
}

fn perimeter_at(a: f64, alpha_tilde: f64) -> f64 {
    perimeter_ab(a, 1.0 / (SQRT_2 * a * alpha_tilde.cos()))
}

/// Total variation of `Phi` around the orbit, sampled at `n` evenly spaced
/// orbit parameters. Equals `2 pi` for every non-degenerate orbit.
pub fn angle_winding(p: f64, n: usize) -> Result<f64> {
    let orbit = IsoOrbit::new(p)?;
    let q_plus = orbit.q_plus()?;
    let mut phis = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let varphi = std::f64::consts::TAU * i as f64 / n as f64;
        phis.push(Sheet::of(varphi.sin()).sign() * PI * orbit.q_at_phase(varphi)? / q_plus);
    }
    let mut total = 0.0;
    for w in phis.windows(2) {
        let mut d = w[1] - w[0];
        d -= (d / std::f64::consts::TAU).round() * std::f64::consts::TAU;
        total += d;
    }
    Ok(total.abs())
}
