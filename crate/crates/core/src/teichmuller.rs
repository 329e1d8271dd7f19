//! Fenchel–Nielsen coordinates of the octagon and the Weil–Petersson form.

use std::f64::consts::TAU;

use crate::octagon::OctagonParams;
use crate::specfun::{arccosh_1p, arccosh_stable};
use crate::{Error, Result};

/// Lengths `l_1, l_2, l_3` and twists `tau_1, tau_2, tau_3` of the pants
/// curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FNCoords {
    pub lengths: [f64; 3],
    pub twists: [f64; 3],
}

impl FNCoords {
    /// `theta_k = 2 pi tau_k / l_k`.
    pub fn twist_angles(&self) -> [f64; 3] {
        [0, 1, 2].map(|k| TAU * self.twists[k] / self.lengths[k])
    }

    /// Applies Dehn twists so that every twist angle lands in `[0, 2 pi)`.
    /// The result describes the same surface.
    pub fn dehn_normalized(&self) -> FNCoords {
        let twists = [0, 1, 2].map(|k| self.twists[k].rem_euclid(self.lengths[k]));
        FNCoords { lengths: self.lengths, twists }
    }
}

/// Closed-form coordinates as functions of `(a, alpha~)`, without a region
/// check. `b` is recomputed from `a` and `alpha~`.
fn fn_raw(a: f64, alpha_tilde: f64) -> Result<FNCoords> {
    let a2 = a * a;
    let one_minus = (1.0 - a) * (1.0 + a);
    let b = 1.0 / (std::f64::consts::SQRT_2 * a * alpha_tilde.cos());
    let one_minus_b = (1.0 - b) * (1.0 + b);
    let l12 = 2.0 * arccosh_stable(a2 / one_minus)?;
    let log = ((1.0 + a) / (1.0 - a)).ln();
    // (2a^2 - 1)/(a^2 (1 - b^2)) - 1 = 1 + tan^2(alpha~) / (a^2 (1 - b^2)).
    let t = alpha_tilde.tan();
    if !(one_minus_b > 0.0) {
        return Err(Error::domain("fn_coordinates", format!("b = {b} is not below 1")));
    }
    let twist = arccosh_1p(t * t / (a2 * one_minus_b))?.copysign(alpha_tilde);
    Ok(FNCoords { lengths: [l12, l12, 2.0 * log], twists: [twist, twist, log] })
}

/// Fenchel–Nielsen coordinates of the standard decomposition.
///
/// The twists `tau_1 = tau_2` carry the sheet sign `sign(alpha~)`, which makes
/// them smooth across `alpha~ = 0`.
pub fn fn_coordinates(p: &OctagonParams) -> Result<FNCoords> {
    fn_raw(p.a(), p.alpha_tilde())
}

/// `W(a, alpha~) = 8a / ((1 - a^2)(2 a^2 cos^2 alpha~ - 1))`, the coefficient of
/// `da ^ dalpha~` in the Weil–Petersson form.
pub fn wp_density(p: &OctagonParams) -> f64 {
    let a = p.a();
    8.0 * a / ((1.0 - a) * (1.0 + a) * p.normalization_radicand())
}

fn step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// `(1/2) sum_k dl_k ^ dtau_k` for coordinates given as a function of
/// `(a, alpha~)`, by central differences.
fn wolpert_sum<F>(coords: F, a: f64, alpha_tilde: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<FNCoords>,
{
    let ha = step(a);
    let ht = step(alpha_tilde);
    let (ap, am) = (coords(a + ha, alpha_tilde)?, coords(a - ha, alpha_tilde)?);
    let (tp, tm) = (coords(a, alpha_tilde + ht)?, coords(a, alpha_tilde - ht)?);
    let mut sum = 0.0;
    for k in 0..3 {
        let dl_da = (ap.lengths[k] - am.lengths[k]) / (2.0 * ha);
        let dtau_da = (ap.twists[k] - am.twists[k]) / (2.0 * ha);
        let dl_dt = (tp.lengths[k] - tm.lengths[k]) / (2.0 * ht);
        let dtau_dt = (tp.twists[k] - tm.twists[k]) / (2.0 * ht);
        sum += dl_da * dtau_dt - dl_dt * dtau_da;
    }
    Ok(0.5 * sum)
}

/// Density of `(1/2) sum dl ^ dtau` assembled from finite differences of
/// [`fn_coordinates`].
pub fn wolpert_density_fd(p: &OctagonParams) -> Result<f64> {
    wolpert_sum(fn_raw, p.a(), p.alpha_tilde())
}

/// The same assembly for the decomposition obtained by `a <-> b`,
/// `alpha~ -> -alpha~`, pulled back to `(a, alpha~)`.
pub fn swapped_decomposition_density(p: &OctagonParams) -> Result<f64> {
    let swapped = OctagonParams::from_alpha_tilde(p.b(), -p.alpha_tilde())?;
    debug_assert!((swapped.b() - p.a()).abs() < 1e-12);
    let coords = |a: f64, t: f64| {
        let b = 1.0 / (std::f64::consts::SQRT_2 * a * t.cos());
        fn_raw(b, -t)
    };
    wolpert_sum(coords, p.a(), p.alpha_tilde())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagon::region_grid;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn at(a: f64, alpha: f64) -> OctagonParams {
        OctagonParams::new(a, alpha).unwrap()
    }

    #[test]
    fn coordinate_values() {
        let c = fn_coordinates(&at(0.8, FRAC_PI_4)).unwrap();
        assert_relative_eq!(c.lengths[2], 2.0 * 9f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(c.lengths[2], 4.394_449_154_672_439, max_relative = 1e-14);
        assert_relative_eq!(c.twists[2], 9f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(c.lengths[0], 2.355_856_921_731_525_1, max_relative = 1e-14);
        assert_eq!(c.twists[0], 0.0);
        assert_eq!(c.lengths[0], c.lengths[1]);
    }

    #[test]
    fn twist_matches_printed_arccosh_up_to_sign() {
        for p in region_grid(9, 0.05) {
            let c = fn_coordinates(&p).unwrap();
            let (a, b) = (p.a(), p.b());
            let arg = (2.0 * a * a - 1.0) / (a * a * (1.0 - b * b)) - 1.0;
            let printed = arccosh_stable(arg.max(1.0)).unwrap();
            assert!((c.twists[0].abs() - printed).abs() < 1e-7 * (1.0 + printed));
            assert!(c.twists[0].signum() * p.alpha_tilde().signum() >= 0.0);
            assert_relative_eq!(c.twists[2], 0.5 * c.lengths[2], max_relative = 1e-15);
            assert!(c.lengths.iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn twist_angles_and_dehn_normalization() {
        let c = fn_coordinates(&at(0.8, PI / 3.0)).unwrap();
        let theta = c.twist_angles();
        assert_relative_eq!(theta[2], PI, max_relative = 1e-15);
        let shifted = FNCoords {
            lengths: c.lengths,
            twists: [c.twists[0] + 2.0 * c.lengths[0], c.twists[1] - c.lengths[1], c.twists[2]],
        };
        let n = shifted.dehn_normalized();
        for k in 0..3 {
            assert!((n.twists[k] - c.twists[k].rem_euclid(c.lengths[k])).abs() < 1e-12);
            let angle = n.twist_angles()[k];
            assert!((0.0..TAU).contains(&angle));
        }
    }

    #[test]
    fn density_values() {
        assert_relative_eq!(wp_density(&OctagonParams::regular()), 55.449_656_048_184_17, max_relative = 1e-13);
        let mut last = 0.0;
        for a in [0.9, 0.99, 0.999, 0.9999] {
            let w = wp_density(&at(a, FRAC_PI_4));
            assert!(w > last);
            last = w;
        }
        assert!(last > 1e4);
    }

    #[test]
    fn wolpert_consistency_on_grid() {
        for p in region_grid(12, 0.05) {
            let w = wp_density(&p);
            assert!(w > 0.0);
            assert_relative_eq!(wolpert_density_fd(&p).unwrap(), w, max_relative = 1e-6);
        }
    }

    #[test]
    fn decomposition_swap_preserves_density() {
        let reg = OctagonParams::regular();
        assert_relative_eq!(swapped_decomposition_density(&reg).unwrap(), wp_density(&reg), max_relative = 1e-6);
        for p in [at(0.8, PI / 3.0), at(0.85, FRAC_PI_4)] {
            assert_relative_eq!(swapped_decomposition_density(&p).unwrap(), wp_density(&p), max_relative = 1e-5);
        }
        for p in region_grid(10, 0.05) {
            assert_relative_eq!(swapped_decomposition_density(&p).unwrap(), wp_density(&p), max_relative = 1e-5);
        }
    }
}
