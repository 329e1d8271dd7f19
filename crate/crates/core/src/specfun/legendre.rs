//! Incomplete Legendre integrals in the Jacobi-argument convention: the upper
//! limit `u` is the sine of the amplitude, so `u = 1` gives the complete
//! integrals.

use super::carlson::{carlson_rf, carlson_rj};
use crate::{Error, Result};

fn check_uk(op: &'static str, u: f64, k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(op, format!("u = {u} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain(op, format!("k = {k} outside [0, 1]")));
    }
    Ok(())
}

/// `F(u, k) = ∫_0^u dt / sqrt((1 - t^2)(1 - k^2 t^2))`.
pub fn ellint_f(u: f64, k: f64) -> Result<f64> {
    check_uk("ellint_f", u, k)?;
    ellint_f_split(u * u, (1.0 - u) * (1.0 + u), 1.0 - k * k * u * u)
}

/// [`ellint_f`] from `u^2`, `c = 1 - u^2` and `d = 1 - k^2 u^2` supplied
/// separately, so that callers can keep full relative accuracy in `c` and `d`
/// near `u = 1`, `k = 1`.
pub(crate) fn ellint_f_split(u2: f64, c: f64, d: f64) -> Result<f64> {
    if u2 == 0.0 {
        return Ok(0.0);
    }
    if c == 0.0 && d == 0.0 {
        return Err(Error::singular("ellint_f", "F(1, 1) diverges"));
    }
    Ok(u2.sqrt() * carlson_rf(c, d, 1.0)?)
}

/// `Pi(u, nu, k) = ∫_0^u dt / ((1 - nu t^2) sqrt((1 - t^2)(1 - k^2 t^2)))`.
///
/// Requires `nu u^2 < 1`; at or beyond that point the integrand has a pole
/// inside the range.
pub fn ellint_pi(u: f64, nu: f64, k: f64) -> Result<f64> {
    check_uk("ellint_pi", u, k)?;
    ellint_pi_split(u * u, (1.0 - u) * (1.0 + u), 1.0 - k * k * u * u, nu)
}

/// [`ellint_pi`] from `u^2`, `1 - u^2` and `1 - k^2 u^2`.
pub(crate) fn ellint_pi_split(u2: f64, c: f64, d: f64, nu: f64) -> Result<f64> {
    ellint_pi_split_p(u2, c, d, nu, 1.0 - nu * u2)
}

/// [`ellint_pi_split`] with `p = 1 - nu u^2` also supplied by the caller.
pub(crate) fn ellint_pi_split_p(u2: f64, c: f64, d: f64, nu: f64, p: f64) -> Result<f64> {
    if !nu.is_finite() {
        return Err(Error::domain("ellint_pi", "nu must be finite"));
    }
    if p <= 0.0 {
        return Err(Error::singular(
            "ellint_pi",
            format!("nu u^2 = {} >= 1", nu * u2),
        ));
    }
    if u2 == 0.0 {
        return Ok(0.0);
    }
    if c == 0.0 && d == 0.0 {
        return Err(Error::singular("ellint_pi", "Pi(1, nu, 1) diverges"));
    }
    let u = u2.sqrt();
    let rf = carlson_rf(c, d, 1.0)?;
    if nu == 0.0 {
        return Ok(u * rf);
    }
    Ok(u * rf + nu / 3.0 * u * u2 * carlson_rj(c, d, 1.0, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{integrate, QuadOptions};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// Complete K(k) by the arithmetic-geometric mean.
    fn agm_k(k: f64) -> f64 {
        let (mut a, mut b) = (1.0, (1.0 - k * k).sqrt());
        while (a - b).abs() > 1e-16 * a {
            let an = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = an;
        }
        PI / (2.0 * a)
    }

    #[test]
    fn reductions() {
        for i in 0..=10 {
            let u = i as f64 / 10.0;
            assert_relative_eq!(ellint_f(u, 0.0).unwrap(), u.asin(), max_relative = 1e-14);
            for k in [0.0, 0.3, 0.9] {
                assert_eq!(ellint_pi(u, 0.0, k).unwrap(), ellint_f(u, k).unwrap());
            }
        }
        assert_relative_eq!(ellint_f(1.0, 0.5).unwrap(), agm_k(0.5), max_relative = 1e-14);
        assert_relative_eq!(ellint_f(1.0, 0.5).unwrap(), 1.685_750_354_812_596, max_relative = 1e-14);
    }

    #[test]
    fn reference_values() {
        assert_relative_eq!(ellint_f(0.7, 0.8).unwrap(), 0.827_523_159_904_401_2, max_relative = 1e-13);
        assert_relative_eq!(ellint_pi(0.7, 0.3, 0.8).unwrap(), 0.878_622_443_662_612_1, max_relative = 1e-13);
        assert_relative_eq!(ellint_pi(0.9, -0.5, 0.6).unwrap(), 1.036_036_955_953_586_2, max_relative = 1e-13);
    }

    #[test]
    fn errors() {
        assert!(ellint_f(1.1, 0.5).is_err());
        assert!(ellint_f(0.5, -0.1).is_err());
        assert!(matches!(ellint_f(1.0, 1.0), Err(Error::Singular { .. })));
        assert!(matches!(ellint_pi(0.9, 1.3, 0.5), Err(Error::Singular { .. })));
        assert!(ellint_pi(0.5, 3.9, 0.5).is_ok());
    }

    #[test]
    fn first_kind_matches_direct_quadrature_on_grid() {
        // Integrate in the amplitude variable t = sin(phi), which leaves a
        // smooth integrand for k < 1.
        let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, ..QuadOptions::default() };
        for i in 0..20 {
            let u = (i as f64 + 0.5) / 20.0;
            for j in 0..20 {
                let k = j as f64 / 20.0;
                let direct = integrate(
                    |phi: f64| 1.0 / (1.0 - (k * phi.sin()).powi(2)).sqrt(),
                    0.0,
                    u.asin(),
                    &opts,
                )
                .unwrap()
                .value;
                let carlson = ellint_f(u, k).unwrap();
                assert!((direct - carlson).abs() < 1e-10, "u={u} k={k}");
            }
        }
    }

    #[test]
    fn third_kind_matches_direct_quadrature() {
        let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, ..QuadOptions::default() };
        for &(u, nu, k) in &[(0.3, 0.5, 0.2), (0.8, 0.9, 0.7), (0.95, -2.0, 0.4), (0.6, 2.5, 0.99)] {
            let direct = integrate(
                |phi: f64| {
                    let s2 = phi.sin().powi(2);
                    1.0 / ((1.0 - nu * s2) * (1.0 - k * k * s2).sqrt())
                },
                0.0,
                f64::asin(u),
                &opts,
            )
            .unwrap()
            .value;
            assert_relative_eq!(ellint_pi(u, nu, k).unwrap(), direct, max_relative = 1e-11);
        }
    }
}
