//! su(1,1) observables built from the action–angle pair, boost evolution,
//! the bounce, reconstruction of the trajectory in the parameter region, and
//! the discrete-series ladder.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;

use crate::hypgeom::MobiusMatrix;
use crate::numeric::{find_root, RootOptions};
use crate::octagon::{perimeter, OctagonParams, Sheet};
use crate::orbits::{action_j, angle_phi_at, invert_angle, P_REG};
use crate::teichmuller::wp_density;
use crate::{Complex, Error, Result};

fn radial(j: f64, c: f64) -> Result<f64> {
    let r2 = j * j - c;
    if !(r2 >= 0.0) || c < 0.0 {
        return Err(Error::Unphysical { j_squared: j * j, casimir: c });
    }
    Ok(r2.sqrt())
}

/// The triple `(J_0, J_+, J_-)` with Casimir `C = J_0^2 - J_+ J_-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuObservables {
    pub j0: f64,
    pub j_plus: Complex,
    pub j_minus: Complex,
    pub casimir: f64,
}

/// `J_0 = J`, `J_+- = sqrt(J^2 - C) e^{-+ i Phi}`.
pub fn observables(j: f64, phi: f64, c: f64) -> Result<SuObservables> {
    let r = radial(j, c)?;
    Ok(SuObservables {
        j0: j,
        j_plus: Complex::from_polar(r, -phi),
        j_minus: Complex::from_polar(r, phi),
        casimir: c,
    })
}

impl SuObservables {
    /// `M = [[J_0, J_+], [J_-, J_0]]`, row-major.
    pub fn matrix(&self) -> [[Complex; 2]; 2] {
        let j0 = Complex::new(self.j0, 0.0);
        [[j0, self.j_plus], [self.j_minus, j0]]
    }

    /// `det M = J_0^2 - J_+ J_-`.
    pub fn det(&self) -> f64 {
        (self.j0 * self.j0 - self.j_plus * self.j_minus).re
    }

    /// `U M U^dagger` for the boost `U = U_tau`.
    pub fn boosted(&self, tau: f64) -> SuObservables {
        let m = self.matrix();
        let u = boost_entries(tau);
        let mut out = [[Complex::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                for k in 0..2 {
                    for l in 0..2 {
                        // U is real symmetric, so U^dagger = U.
                        *cell += u[r][k] * m[k][l] * u[l][c];
                    }
                }
            }
        }
        SuObservables {
            j0: 0.5 * (out[0][0].re + out[1][1].re),
            j_plus: out[0][1],
            j_minus: out[1][0],
            casimir: self.casimir,
        }
    }

    /// `(J, Phi)` with `Phi = -arg J_+`.
    pub fn action_angle(&self) -> (f64, f64) {
        (self.j0, -self.j_plus.arg())
    }
}

fn boost_entries(tau: f64) -> [[f64; 2]; 2] {
    let (s, c) = ((0.5 * tau).sinh(), (0.5 * tau).cosh());
    [[c, s], [s, c]]
}

/// `U_tau = [[cosh tau/2, sinh tau/2], [sinh tau/2, cosh tau/2]]`.
pub fn boost_matrix(tau: f64) -> MobiusMatrix {
    let (s, c) = ((0.5 * tau).sinh(), (0.5 * tau).cosh());
    MobiusMatrix::from_raw(Complex::new(c, 0.0), Complex::new(s, 0.0))
}

/// `H = sqrt(J^2 - C) sin Phi`.
pub fn hamiltonian(j: f64, phi: f64, c: f64) -> Result<f64> {
    Ok(radial(j, c)? * phi.sin())
}

/// `(J(tau), Phi(tau))` of the boost orbit through `(j, phi)`.
pub fn evolve_closed_form(j: f64, phi: f64, sheet: Sheet, c: f64, tau: f64) -> Result<(f64, f64)> {
    let r = radial(j, c)?;
    let (sh, ch) = (tau.sinh(), tau.cosh());
    let jt = j * ch + r * sh * phi.cos();
    let rt2 = jt * jt - c;
    if !(rt2 > 0.0) {
        if rt2 == 0.0 && c > 0.0 {
            return Ok((jt, sheet.sign() * FRAC_PI_2));
        }
        return Err(Error::numeric("evolve_closed_form", format!("J^2 - C = {rt2} at tau = {tau}")));
    }
    let cos = (j * sh + r * ch * phi.cos()) / rt2.sqrt();
    if cos.abs() > 1.0 + 1e-12 {
        return Err(Error::numeric("evolve_closed_form", format!("cos Phi = {cos} at tau = {tau}")));
    }
    Ok((jt, sheet.sign() * cos.clamp(-1.0, 1.0).acos()))
}

/// Minimum of `J - C` below which [`evolve_rk4`] refuses to step.
pub const RK4_SINGULAR_TOL: f64 = 1e-12;

fn rhs(j: f64, phi: f64, c: f64) -> Option<(f64, f64)> {
    let r2 = j * j - c;
    if !(r2 > RK4_SINGULAR_TOL) {
        return None;
    }
    let r = r2.sqrt();
    Some((r * phi.cos(), -j * phi.sin() / r))
}

fn rk4_step(j: f64, phi: f64, c: f64, h: f64) -> Option<(f64, f64)> {
    let k1 = rhs(j, phi, c)?;
    let k2 = rhs(j + 0.5 * h * k1.0, phi + 0.5 * h * k1.1, c)?;
    let k3 = rhs(j + 0.5 * h * k2.0, phi + 0.5 * h * k2.1, c)?;
    let k4 = rhs(j + h * k3.0, phi + h * k3.1, c)?;
    Some((
        j + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        phi + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    ))
}

/// Fixed-step RK4 solution of the Hamilton equations, sampled at `steps + 1`
/// evenly spaced times from `tau_min` to `tau_max`. The state is known at
/// `tau = 0`; it is first carried to `tau_min` with the same step size.
///
/// Returns `(tau, J, Phi)` triples.
pub fn evolve_rk4(j: f64, phi: f64, c: f64, tau_min: f64, tau_max: f64, steps: usize) -> Result<Vec<(f64, f64, f64)>> {
    if !(j * j - c > RK4_SINGULAR_TOL) || c < 0.0 {
        return Err(Error::Unphysical { j_squared: j * j, casimir: c });
    }
    if steps == 0 || !(tau_max > tau_min) {
        return Err(Error::domain("evolve_rk4", "need steps >= 1 and tau_max > tau_min"));
    }
    let h = (tau_max - tau_min) / steps as f64;
    let lead = ((tau_min.abs() / h).ceil() as usize).max(1);
    let h_lead = tau_min / lead as f64;
    let (mut jj, mut pp) = (j, phi);
    let mut partial = Vec::new();
    for i in 0..lead {
        match rk4_step(jj, pp, c, h_lead) {
            Some((a, b)) => (jj, pp) = (a, b),
            None => {
                return Err(Error::SingularState { tau: h_lead * i as f64, partial });
            }
        }
        partial.push((h_lead * (i + 1) as f64, jj, pp));
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push((tau_min, jj, pp));
    for i in 0..steps {
        match rk4_step(jj, pp, c, h) {
            Some((a, b)) => (jj, pp) = (a, b),
            None => {
                return Err(Error::SingularState { tau: tau_min + h * i as f64, partial: out });
            }
        }
        out.push((tau_min + h * (i + 1) as f64, jj, pp));
    }
    Ok(out)
}

/// Time, action and angle at the minimum of `J(tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounce {
    pub tau: f64,
    pub j: f64,
    pub phi: f64,
}

pub fn bounce(j: f64, phi: f64, sheet: Sheet, c: f64) -> Result<Bounce> {
    let r = radial(j, c)?;
    let arg = r / j * phi.cos();
    if !(arg.abs() < 1.0) {
        return Err(Error::Degenerate(format!("no bounce: artanh argument {arg}")));
    }
    let (s, co) = phi.sin_cos();
    Ok(Bounce {
        tau: -arg.atanh(),
        j: (j * j * s * s + c * co * co).sqrt(),
        phi: sheet.sign() * FRAC_PI_2,
    })
}

/// `A_WP = 4 pi (n + 1/2)`.
pub fn area_spectrum(n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::domain("area_spectrum", format!("n = {n} must be nonnegative")));
    }
    Ok(4.0 * PI * (n as f64 + 0.5))
}

/// Monotone table of `J(P)` on a grid geometric in `P - P_reg`, used to
/// invert the action without extrapolating.
#[derive(Debug, Clone)]
pub struct ActionTable {
    perimeters: Vec<f64>,
    actions: Vec<f64>,
}

/// Default upper perimeter of the inversion table.
pub const DEFAULT_P_MAX: f64 = 80.0;

impl ActionTable {
    pub fn new(p_max: f64, nodes: usize) -> Result<Self> {
        if !(p_max > P_REG + 1e-3) || nodes < 2 {
            return Err(Error::domain("ActionTable::new", "need p_max > P_reg and at least 2 nodes"));
        }
        let span = p_max - P_REG;
        let first = 1e-4f64.min(0.5 * span);
        let ratio = (span / first).powf(1.0 / (nodes - 1) as f64);
        let mut perimeters = vec![P_REG];
        perimeters.extend((0..nodes).map(|i| P_REG + first * ratio.powi(i as i32)));
        *perimeters.last_mut().expect("nonempty") = p_max;
        let actions = perimeters.iter().map(|&p| action_j(p)).collect::<Result<Vec<_>>>()?;
        if actions.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::consistency("ActionTable::new", "J(P) is not increasing on the grid"));
        }
        Ok(ActionTable { perimeters, actions })
    }

    pub fn p_max(&self) -> f64 {
        *self.perimeters.last().expect("nonempty")
    }

    pub fn j_max(&self) -> f64 {
        *self.actions.last().expect("nonempty")
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.perimeters.iter().copied().zip(self.actions.iter().copied())
    }

    /// Perimeter with `J(P) = j`, refined by root finding inside the bracketing
    /// table cell.
    pub fn invert(&self, j: f64) -> Result<f64> {
        if !(j >= 0.0) {
            return Err(Error::domain("ActionTable::invert", format!("J = {j} must be nonnegative")));
        }
        if j > self.j_max() {
            return Err(Error::domain(
                "ActionTable::invert",
                format!("J = {j} exceeds the table maximum {} (P_max = {})", self.j_max(), self.p_max()),
            ));
        }
        if j == 0.0 {
            return Ok(P_REG);
        }
        let i = self.actions.partition_point(|&v| v < j).max(1);
        let (lo, hi) = (self.perimeters[i - 1], self.perimeters[i]);
        let opts = RootOptions { x_tol: 1e-13, f_tol: 1e-13, max_iter: 300 };
        find_root(|p| Ok(action_j(p)? - j), lo, hi, &opts)
    }
}

/// One reconstructed sample of the evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionState {
    pub tau: f64,
    pub j: f64,
    pub phi: f64,
    pub a: f64,
    pub alpha: f64,
    /// Hamiltonian re-evaluated at the reconstructed `(a, alpha)`.
    pub h: f64,
    /// Hamiltonian of the initial data.
    pub e: f64,
}

impl EvolutionState {
    pub fn alpha_tilde(&self) -> f64 {
        self.alpha - FRAC_PI_4
    }
}

/// Reconstructed path with the samples that could not be mapped back.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<EvolutionState>,
    pub dropped: Vec<(f64, String)>,
    pub sheet: Sheet,
    pub initial: (f64, f64),
}

impl Trajectory {
    pub fn max_residual(&self) -> f64 {
        self.states.iter().map(|s| (s.h - s.e).abs()).fold(0.0, f64::max)
    }
}

/// Initial action, angle and sheet of a point of the region.
pub fn initial_data(p: &OctagonParams) -> Result<(f64, f64, Sheet)> {
    let per = perimeter(p);
    let sheet = p.sheet();
    Ok((action_j(per)?, angle_phi_at(p, per)?, sheet))
}

/// Maps `(J, Phi)` at time `tau` back to `(a, alpha)` and re-evaluates `H`
/// there.
pub fn reconstruct_state(table: &ActionTable, tau: f64, j: f64, phi: f64, sheet: Sheet, c: f64, e: f64) -> Result<EvolutionState> {
    let p = table.invert(j)?;
    let (a, alpha_tilde) = invert_angle(phi, p)?;
    let point = OctagonParams::from_alpha_tilde(a, alpha_tilde)?;
    let (jr, phir, _) = initial_data(&point)?;
    let phir = if alpha_tilde == 0.0 { sheet.sign() * phir.abs() } else { phir };
    Ok(EvolutionState { tau, j, phi, a, alpha: point.alpha(), h: hamiltonian(jr, phir, c)?, e })
}

/// Evolves `(a0, alpha0)` along the boost in closed form and maps each
/// sample back into the region through the action table and the angle
/// inversion.
pub fn trajectory_in_region(table: &ActionTable, start: &OctagonParams, c: f64, taus: &[f64]) -> Result<Trajectory> {
    let (j0, phi0, sheet) = initial_data(start)?;
    let e = hamiltonian(j0, phi0, c)?;
    let mut states = Vec::with_capacity(taus.len());
    let mut dropped = Vec::new();
    for &tau in taus {
        let sample = evolve_closed_form(j0, phi0, sheet, c, tau)
            .and_then(|(j, phi)| reconstruct_state(table, tau, j, phi, sheet, c, e));
        match sample {
            Ok(s) => states.push(s),
            Err(err) => dropped.push((tau, err.to_string())),
        }
    }
    Ok(Trajectory { states, dropped, sheet, initial: (j0, phi0) })
}

/// Truncated discrete-series representation with lowest weight `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    pub j: f64,
    /// `m = j, j + 1, ..., j + levels - 1`.
    pub weights: Vec<f64>,
    pub j0: DMatrix<f64>,
    pub j_plus: DMatrix<f64>,
    pub j_minus: DMatrix<f64>,
    pub casimir: DMatrix<f64>,
}

/// Ladder matrices for `j = two_j / 2` on `levels` basis states.
pub fn rep_ladder(two_j: u32, levels: usize) -> Result<Ladder> {
    if two_j == 0 || levels < 2 {
        return Err(Error::domain("rep_ladder", "need j >= 1/2 and at least two levels"));
    }
    let j = 0.5 * two_j as f64;
    let weights: Vec<f64> = (0..levels).map(|i| j + i as f64).collect();
    let j0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(weights.clone()));
    let mut j_plus = DMatrix::zeros(levels, levels);
    let mut j_minus = DMatrix::zeros(levels, levels);
    for (i, &m) in weights.iter().enumerate() {
        if i + 1 < levels {
            j_plus[(i + 1, i)] = ((m - j + 1.0) * (m + j)).sqrt();
        }
        if i > 0 {
            j_minus[(i - 1, i)] = ((m - j) * (m + j - 1.0)).sqrt();
        }
    }
    let casimir = DMatrix::from_diagonal_element(levels, levels, j * (j - 1.0));
    Ok(Ladder { j, weights, j0, j_plus, j_minus, casimir })
}

impl Ladder {
    /// `J_0^2 - J_0 - J_+ J_-`, which reproduces `C` on the whole basis.
    pub fn casimir_from_generators(&self) -> DMatrix<f64> {
        &self.j0 * &self.j0 - &self.j0 - &self.j_plus * &self.j_minus
    }

    /// `[A, B]` restricted to indices `0 .. levels - 1`, away from the cutoff.
    pub fn interior_commutator(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.weights.len() - 1;
        (a * b - b * a).view((0, 0), (n, n)).into_owned()
    }

    pub fn interior(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.weights.len() - 1;
        a.view((0, 0), (n, n)).into_owned()
    }
}

/// Default finite-difference step of [`poisson_bracket_fd`].
pub const POISSON_STEP: f64 = 1e-5;

/// `{f, g}_WP = (2 / W)(d_alpha~ f d_a g - d_a f d_alpha~ g)` at `p`, by
/// central differences. With this normalization `{J, Phi} = 1`.
pub fn poisson_bracket_fd<F, G>(f: F, g: G, p: &OctagonParams, h: f64) -> Result<Complex>
where
    F: Fn(&OctagonParams) -> Result<Complex>,
    G: Fn(&OctagonParams) -> Result<Complex>,
{
    let (a, t) = (p.a(), p.alpha_tilde());
    let at = |da: f64, dt: f64| OctagonParams::from_alpha_tilde(a + da, t + dt);
    let (ap, am, tp, tm) = (at(h, 0.0)?, at(-h, 0.0)?, at(0.0, h)?, at(0.0, -h)?);
    let d = |fun: &dyn Fn(&OctagonParams) -> Result<Complex>| -> Result<(Complex, Complex)> {
        Ok(((fun(&ap)? - fun(&am)?) / (2.0 * h), (fun(&tp)? - fun(&tm)?) / (2.0 * h)))
    };
    let (f_a, f_t) = d(&f)?;
    let (g_a, g_t) = d(&g)?;
    Ok((f_t * g_a - f_a * g_t) * (2.0 / wp_density(p)))
}

/// Complex-valued field of the observables over the region, `C = c`.
pub fn observable_field(which: Observable, c: f64) -> impl Fn(&OctagonParams) -> Result<Complex> {
    move |p: &OctagonParams| {
        let (j, phi, _) = initial_data(p)?;
        let o = observables(j, phi, c)?;
        Ok(match which {
            Observable::J => Complex::new(j, 0.0),
            Observable::Phi => Complex::new(phi, 0.0),
            Observable::JPlus => o.j_plus,
            Observable::JMinus => o.j_minus,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    J,
    Phi,
    JPlus,
    JMinus,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const J_START: f64 = 0.567_023_909_160_769_8;
    const PHI_START: f64 = 0.579_438_091_466_514_6;

    #[test]
    fn initial_data_reference() {
        let p = OctagonParams::new(0.8, PI / 3.0).unwrap();
        let (j, phi, sheet) = initial_data(&p).unwrap();
        assert_relative_eq!(j, J_START, max_relative = 1e-11);
        assert_relative_eq!(phi, PHI_START, max_relative = 1e-11);
        assert_eq!(sheet, Sheet::Plus);
    }

    #[test]
    fn observable_special_cases() {
        let o = observables(2.0, 0.7, 4.0).unwrap();
        assert_eq!(o.j_plus.norm(), 0.0);
        let o = observables(2.0, 0.0, 1.0).unwrap();
        assert_eq!(o.j_plus, o.j_minus);
        assert_eq!(o.j_plus.im, 0.0);
        assert!(matches!(observables(1.0, 0.0, 2.0), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn boost_group_law() {
        assert!(boost_matrix(0.0).distance(&MobiusMatrix::identity()) < 1e-16);
        let prod = boost_matrix(0.7).compose(&boost_matrix(-1.9));
        assert!(prod.distance(&boost_matrix(-1.2)) < 1e-14);
        assert!((boost_matrix(2.5).det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boost_reproduces_closed_form() {
        for (j, phi, c) in [(J_START, PHI_START, 0.0), (1.3, -2.0, 0.8), (0.5, 1.0, 0.1)] {
            let sheet = Sheet::of(phi);
            let o = observables(j, phi, c).unwrap();
            for tau in [-3.0, -0.4, 0.0, 1.1, 2.5] {
                let (jb, pb) = o.boosted(tau).action_angle();
                let (jc, pc) = evolve_closed_form(j, phi, sheet, c, tau).unwrap();
                assert_relative_eq!(jb, jc, max_relative = 1e-12);
                assert!((pb - pc).abs() < 1e-10, "tau {tau}: {pb} vs {pc}");
                assert!((hamiltonian(jc, pc, c).unwrap() - hamiltonian(j, phi, c).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_form_special_cases() {
        assert_eq!(evolve_closed_form(1.5, 0.3, Sheet::Plus, 0.2, 0.0).unwrap().0, 1.5);
        assert!((evolve_closed_form(1.5, 0.3, Sheet::Plus, 0.2, 0.0).unwrap().1 - 0.3).abs() < 1e-15);
        for tau in [-2.0, 0.5, 3.0] {
            let (j, _) = evolve_closed_form(0.9, FRAC_PI_2, Sheet::Plus, 0.0, tau).unwrap();
            assert_relative_eq!(j, 0.9 * f64::cosh(tau), max_relative = 1e-14);
        }
        assert_eq!(hamiltonian(2.0, FRAC_PI_2, 0.0).unwrap(), 2.0);
        assert_eq!(hamiltonian(2.0, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rk4_matches_closed_form() {
        let (j, phi, c) = (J_START, PHI_START, 0.0);
        let path = evolve_rk4(j, phi, c, -3.0, 3.0, 2000).unwrap();
        let e = hamiltonian(j, phi, c).unwrap();
        for &(tau, jr, pr) in &path {
            let (jc, pc) = evolve_closed_form(j, phi, Sheet::Plus, c, tau).unwrap();
            assert!((jr - jc).abs() < 1e-6 && (pr - pc).abs() < 1e-6);
            assert!((hamiltonian(jr, pr, c).unwrap() - e).abs() < 1e-8);
        }
    }

    #[test]
    fn rk4_order_four() {
        let err = |steps| {
            evolve_rk4(1.0, 0.4, 0.3, -2.0, 2.0, steps)
                .unwrap()
                .iter()
                .map(|&(tau, j, _)| (j - evolve_closed_form(1.0, 0.4, Sheet::Plus, 0.3, tau).unwrap().0).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(200) / err(400);
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rk4_reports_singular_state() {
        assert!(matches!(evolve_rk4(1.0, 0.5, 1.0, -1.0, 1.0, 10), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn bounce_values() {
        let b = bounce(J_START, PHI_START, Sheet::Plus, 0.0).unwrap();
        assert_relative_eq!(b.tau, -1.210_303_336_883_214_7, max_relative = 1e-12);
        assert_relative_eq!(b.j, 0.310_476_115_883_593_2, max_relative = 1e-12);
        assert_eq!(b.phi, FRAC_PI_2);
        let b = bounce(2.0, FRAC_PI_2, Sheet::Plus, 1.0).unwrap();
        assert!(b.tau.abs() < 1e-16 && (b.j - 2.0).abs() < 1e-15);
        let b = bounce(2.0, 1.0, Sheet::Plus, 4.0).unwrap();
        assert!(b.tau == 0.0 && (b.j - 2.0).abs() < 1e-15);
        assert!(matches!(bounce(1.0, 0.0, Sheet::Plus, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn bounce_is_the_sampled_minimum() {
        let b = bounce(J_START, PHI_START, Sheet::Plus, 0.0).unwrap();
        let j_at = |t: f64| evolve_closed_form(J_START, PHI_START, Sheet::Plus, 0.0, t).unwrap().0;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=40_000 {
            let t = -3.0 + 6.0 * i as f64 / 40_000.0;
            best = best.min_by_j(j_at(t), t);
        }
        assert!((best.0 - b.j).abs() < 1e-8);
        assert!((best.1 - b.tau).abs() < 1e-3);
        let (_, phi_b) = evolve_closed_form(J_START, PHI_START, Sheet::Plus, 0.0, b.tau).unwrap();
        assert!((phi_b - FRAC_PI_2).abs() < 1e-8);
    }

    trait MinBy {
        fn min_by_j(self, j: f64, t: f64) -> Self;
    }
    impl MinBy for (f64, f64) {
        fn min_by_j(self, j: f64, t: f64) -> Self {
            if j < self.0 {
                (j, t)
            } else {
                self
            }
        }
    }

    #[test]
    fn spectrum() {
        assert_eq!(area_spectrum(0).unwrap(), 2.0 * PI);
        assert_eq!(area_spectrum(1).unwrap(), 6.0 * PI);
        assert!((area_spectrum(3).unwrap() - 14.0 * PI).abs() < 1e-14);
        assert!((area_spectrum(8).unwrap() - area_spectrum(7).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!(area_spectrum(-1).is_err());
    }

    #[test]
    fn ladder_identities() {
        let l = rep_ladder(1, 20).unwrap();
        assert_eq!(l.j_plus[(1, 0)], 1.0);
        assert_eq!(l.j_minus.column(0).iter().copied().fold(0.0, f64::max), 0.0);
        assert_eq!(l.casimir[(0, 0)], -0.25);
        let comm = l.interior_commutator(&l.j_plus, &l.j_minus);
        assert!((comm + 2.0 * l.interior(&l.j0)).amax() < 1e-12);
        assert!((l.interior_commutator(&l.j0, &l.j_plus) - l.interior(&l.j_plus)).amax() < 1e-12);
        assert!((l.casimir_from_generators() - &l.casimir).amax() < 1e-12);
        for two_j in [2, 3, 5] {
            let l = rep_ladder(two_j, 12).unwrap();
            assert!((l.casimir_from_generators() - &l.casimir).amax() < 1e-11);
        }
    }

    #[test]
    fn action_table_round_trip() {
        let table = ActionTable::new(40.0, 24).unwrap();
        let j = action_j(30.0).unwrap();
        assert!((table.invert(j).unwrap() - 30.0).abs() < 1e-9);
        assert_eq!(table.invert(0.0).unwrap(), P_REG);
        assert!(table.invert(table.j_max() * 1.01).is_err());
        assert!(table.nodes().count() == 25);
    }

    #[test]
    fn poisson_brackets() {
        let p = OctagonParams::new(0.8, PI / 3.0).unwrap();
        let j = observable_field(Observable::J, 0.0);
        let phi = observable_field(Observable::Phi, 0.0);
        let jp = observable_field(Observable::JPlus, 0.0);
        let jm = observable_field(Observable::JMinus, 0.0);
        let jj = poisson_bracket_fd(&j, &j, &p, POISSON_STEP).unwrap();
        assert!(jj.norm() < 1e-12);
        let jphi = poisson_bracket_fd(&j, &phi, &p, POISSON_STEP).unwrap();
        assert!((jphi - Complex::new(1.0, 0.0)).norm() < 1e-4, "{jphi}");
        let pm = poisson_bracket_fd(&jp, &jm, &p, POISSON_STEP).unwrap();
        let j0 = j(&p).unwrap();
        assert!((pm - Complex::new(0.0, 2.0) * j0).norm() < 1e-4, "{pm}");
        let p0 = poisson_bracket_fd(&jp, &j, &p, POISSON_STEP).unwrap();
        assert!((p0 - Complex::new(0.0, 1.0) * jp(&p).unwrap()).norm() < 1e-4, "{p0}");
    }

    #[test]
    fn trajectory_reconstruction() {
        let table = ActionTable::new(160.0, 64).unwrap();
        let start = OctagonParams::new(0.8, PI / 3.0).unwrap();
        let b = bounce(J_START, PHI_START, Sheet::Plus, 0.0).unwrap();
        let mut taus: Vec<f64> = (0..=140).map(|i| -9.0 + 0.1 * i as f64).collect();
        taus.push(b.tau);
        taus.sort_by(f64::total_cmp);
        let tr = trajectory_in_region(&table, &start, 0.0, &taus).unwrap();
        assert!(tr.max_residual() < 1e-6, "{}", tr.max_residual());
        assert!(tr.states.iter().all(|s| s.alpha_tilde() >= 0.0));
        let zero = tr.states.iter().find(|s| s.tau.abs() < 1e-12).unwrap();
        assert!((zero.a - 0.8).abs() < 1e-7 && (zero.alpha - PI / 3.0).abs() < 1e-7);
        let at_b = tr.states.iter().find(|s| s.tau == b.tau).unwrap();
        assert!((at_b.phi - FRAC_PI_2).abs() < 1e-9);
        let (first, last) = (tr.states.first().unwrap(), tr.states.last().unwrap());
        assert!(first.a > 0.99 && first.alpha_tilde().abs() < 0.02, "{first:?}");
        assert!((last.a - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3, "{last:?}");
        let alphas: Vec<f64> = tr.states.iter().map(|s| s.alpha_tilde()).collect();
        let peak = alphas.iter().copied().enumerate().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap().0;
        assert!(alphas[..peak].windows(2).all(|w| w[1] > w[0]));
        assert!(alphas[peak..].windows(2).all(|w| w[1] < w[0]));
        assert!(!tr.dropped.is_empty());
        assert!(tr.dropped.iter().all(|(t, _)| *t < first.tau || *t > last.tau));
    }

    proptest! {
        #[test]
        fn casimir_preserved_by_boost(j in 0.1f64..20.0, frac in 0.0f64..1.0, phi in -3.1f64..3.1, tau in -5.0f64..5.0) {
            let c = frac * j * j;
            let o = observables(j, phi, c).unwrap();
            prop_assert!((o.det() - c).abs() < 1e-12 * (1.0 + j * j));
            let b = o.boosted(tau);
            prop_assert!((b.det() - c).abs() < 1e-12 * (1.0 + b.j0 * b.j0));
        }
    }
}
