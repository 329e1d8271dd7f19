//! Special-function kernel: inverse hyperbolic cosine, Carlson symmetric
//! elliptic integrals, incomplete Legendre integrals and the dilogarithm.
//!
//! Every routine is a pure function and targets about `1e-12` relative
//! accuracy on its documented domain.

mod carlson;
mod dilog;
pub(crate) mod legendre;

pub use carlson::{carlson_rc, carlson_rf, carlson_rj};
pub use dilog::{dilog_paper, li2};
pub use legendre::{ellint_f, ellint_pi};

pub use num_complex::Complex64 as Complex;

use crate::{Error, Result};

/// `arccosh z = ln(z + sqrt(z^2 - 1))` for `z >= 1`.
///
/// Near `z = 1` the argument is rewritten as `1 + t` so that the small
/// difference `z - 1` is not lost before the square root.
pub fn arccosh_stable(z: f64) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(Error::domain("arccosh_stable", format!("argument {z} < 1")));
    }
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if z < 2.0 {
        arccosh_1p(z - 1.0)
    } else {
        Ok((z + (z * z - 1.0).sqrt()).ln())
    }
}

/// `arccosh(1 + t)` for `t >= 0`, accurate when `t` is tiny.
pub fn arccosh_1p(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::domain("arccosh_1p", format!("argument {t} < 0")));
    }
    Ok((t + (t * (t + 2.0)).sqrt()).ln_1p())
}

/// Magnitude of the `n`-th correction of the large-argument expansion
/// `arccosh z = ln(2z) - sum_{n>=1} c_n / (2n z^{2n})`, with
/// `c_n = (2n-1)!! / (2n)!!`.
pub fn arccosh_series_term(z: f64, n: usize) -> f64 {
    if n == 0 {
        return (2.0 * z).ln();
    }
    let mut c = 1.0;
    for i in 1..=n {
        c *= (2 * i - 1) as f64 / (2 * i) as f64;
    }
    c / (2.0 * n as f64 * z.powi(2 * n as i32))
}

/// Partial sum of the large-argument expansion of `arccosh z`.
///
/// `terms = 1` keeps only `ln(2z)`; each further term subtracts one more
/// correction. Close to `z = 1` the truncation badly overestimates; that is a
/// property of the expansion, not an error.
pub fn arccosh_series(z: f64, terms: usize) -> Result<f64> {
    if !(z > 1.0) {
        return Err(Error::domain("arccosh_series", format!("argument {z} <= 1")));
    }
    if terms == 0 {
        return Err(Error::domain("arccosh_series", "at least one term is required"));
    }
    let mut sum = (2.0 * z).ln();
    for n in 1..terms {
        sum -= arccosh_series_term(z, n);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn arccosh_boundary_and_reference_values() {
        assert_eq!(arccosh_stable(1.0).unwrap(), 0.0);
        let z = 5.0 + 4.0 * 2f64.sqrt();
        assert_relative_eq!(arccosh_stable(z).unwrap(), 3.057_141_838_961_996, max_relative = 1e-14);
        assert_relative_eq!(
            arccosh_stable(16.0 / 9.0).unwrap(),
            1.177_928_460_865_762_6,
            max_relative = 1e-14
        );
        assert!(arccosh_stable(0.999).is_err());
        assert!(arccosh_stable(f64::NAN).is_err());
    }

    #[test]
    fn arccosh_inverts_cosh() {
        for i in 0..=300 {
            let t = i as f64 * 0.1;
            let back = arccosh_stable(t.cosh()).unwrap();
            assert!((back - t).abs() < 1e-12 * (1.0 + t), "t = {t}, back = {back}");
        }
    }

    #[test]
    fn arccosh_series_truncations() {
        assert_relative_eq!(arccosh_series(10.0, 1).unwrap(), 20f64.ln(), max_relative = 1e-15);
        // Low-argument overestimate is expected.
        let exact = arccosh_stable(1.01).unwrap();
        assert!(arccosh_series(1.01, 1).unwrap() > 4.0 * exact);
        assert!(arccosh_series(1.0, 1).is_err());
        assert!(arccosh_series(3.0, 0).is_err());
    }

    #[test]
    fn arccosh_series_remainder_is_bracketed_by_first_omitted_term() {
        // Every omitted correction has the same sign and they decay at least
        // geometrically with ratio z^-2.
        for zi in 0..40 {
            let z = 2.0 + 0.5 * zi as f64;
            for terms in 1..6 {
                let err = arccosh_series(z, terms).unwrap() - arccosh_stable(z).unwrap();
                let first = arccosh_series_term(z, terms);
                let upper = first / (1.0 - z.powi(-2));
                assert!(err > 0.0 || err.abs() < 1e-15);
                assert!(err <= upper * (1.0 + 1e-9) + 1e-15, "z={z} terms={terms}");
                assert!(err >= first * (1.0 - 1e-6) - 1e-15, "z={z} terms={terms}");
            }
        }
        let err = (arccosh_series(10.0, 4).unwrap() - arccosh_stable(10.0).unwrap()).abs();
        assert!(err < arccosh_series_term(10.0, 4) / (1.0 - 0.01));
    }
}
