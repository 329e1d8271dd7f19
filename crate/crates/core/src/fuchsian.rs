//! Side-pairing generators of the octagon group as SU(1,1) matrices.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::hypgeom::MobiusMatrix;
use crate::octagon::{build_geometry, OctagonGeometry, OctagonParams};
use crate::{Complex, Error, Result};

/// `g_0 .. g_3`, their inverses and the common normalization factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSet {
    pub g: [MobiusMatrix; 4],
    pub g_inv: [MobiusMatrix; 4],
    pub normalization: f64,
}

/// `N(a, alpha~) = -cos alpha~ / sqrt((1 - a^2)(2 a^2 cos^2 alpha~ - 1))`.
pub fn normalization(p: &OctagonParams) -> Result<f64> {
    let a = p.a();
    let radicand = (1.0 - a) * (1.0 + a) * p.normalization_radicand();
    if !(radicand > 0.0) {
        return Err(Error::singular("normalization", format!("radicand {radicand} is not positive")));
    }
    Ok(-p.alpha_tilde().cos() / radicand.sqrt())
}

/// Builds `g_0, g_1` from their closed forms, `g_2, g_3` by a quarter turn,
/// and the inverses by a half turn.
pub fn generators(p: &OctagonParams) -> Result<GeneratorSet> {
    let n = normalization(p)?;
    let a = p.a();
    let a2 = a * a;
    let t = p.alpha_tilde().tan();
    let one_minus = (1.0 - a) * (1.0 + a);
    let g0 = MobiusMatrix::new(
        Complex::new(n * a * (1.0 - t), 0.0),
        Complex::new(n * (a2 - t), n * one_minus),
    )?;
    let g1 = MobiusMatrix::new(
        Complex::new(n * a * (1.0 + t), 0.0),
        Complex::new(n * one_minus, n * (a2 + t)),
    )?;
    let quarter = MobiusMatrix::rotation(FRAC_PI_2);
    let half = MobiusMatrix::rotation(PI);
    let g = [g0, g1, g0.conjugate_by(&quarter), g1.conjugate_by(&quarter)];
    let g_inv = g.map(|m| m.conjugate_by(&half));
    Ok(GeneratorSet { g, g_inv, normalization: n })
}

impl GeneratorSet {
    /// `g_0 g_1^-1 g_2 g_3^-1 g_0^-1 g_1 g_2^-1 g_3`.
    pub fn relation_word(&self) -> MobiusMatrix {
        let (g, gi) = (&self.g, &self.g_inv);
        [g[0], gi[1], g[2], gi[3], gi[0], g[1], gi[2], g[3]]
            .iter()
            .fold(MobiusMatrix::identity(), |acc, m| acc.compose(m))
    }

    /// Conjugates every generator by `gamma`, giving a marking-equivalent set.
    pub fn conjugated(&self, gamma: &MobiusMatrix) -> GeneratorSet {
        GeneratorSet {
            g: self.g.map(|m| m.conjugate_by(gamma)),
            g_inv: self.g_inv.map(|m| m.conjugate_by(gamma)),
            normalization: self.normalization,
        }
    }

    /// Largest projective deviation of `g_inv[k]` from the true inverse of `g[k]`.
    pub fn inverse_defect(&self) -> f64 {
        self.g
            .iter()
            .zip(self.g_inv.iter())
            .map(|(m, mi)| m.compose(mi).projective_distance(&MobiusMatrix::identity()))
            .fold(0.0, f64::max)
    }
}

/// Entry-wise distance of the relation word from `+-id`.
pub fn relation_defect(gs: &GeneratorSet) -> f64 {
    gs.relation_word().projective_distance(&MobiusMatrix::identity())
}

/// Largest Euclidean distance between `g_k` applied to the endpoints of
/// `s_{k+4}` and the endpoints of `s_k`, matched in the better of the two
/// orders.
pub fn side_pairing_defect(p: &OctagonParams) -> Result<f64> {
    let geom = build_geometry(p)?;
    let gens = generators(p)?;
    pairing_defect_with(&geom, &gens.g)
}

/// [`side_pairing_defect`] for an arbitrary choice of pairing maps.
pub fn pairing_defect_with(geom: &OctagonGeometry, maps: &[MobiusMatrix; 4]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (k, g) in maps.iter().enumerate() {
        let from = &geom.sides[k + 4];
        let to = &geom.sides[k];
        let p = g.apply(from.start)?;
        let q = g.apply(from.end)?;
        let same = (p - to.start).norm().max((q - to.end).norm());
        let swapped = (p - to.end).norm().max((q - to.start).norm());
        worst = worst.max(same.min(swapped));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octagon::region_grid;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn at(a: f64, alpha: f64) -> OctagonParams {
        OctagonParams::new(a, alpha).unwrap()
    }

    #[test]
    fn generator_values() {
        let gs = generators(&at(0.8, PI / 3.0)).unwrap();
        assert!((gs.g[0].trace() - (-4.278_250_646_822_581)).abs() < 1e-12);
        assert!(gs.g[0].trace().abs() > 2.0);
        for m in gs.g.iter().chain(gs.g_inv.iter()) {
            assert!((m.det() - 1.0).abs() < 1e-12);
        }
        assert!(gs.inverse_defect() < 1e-12);
    }

    #[test]
    fn regular_generators_are_reflections_of_each_other() {
        let gs = generators(&OctagonParams::regular()).unwrap();
        // With alpha~ = 0, g_1 has the real and imaginary parts of v swapped.
        assert!((gs.g[0].u - gs.g[1].u).norm() < 1e-15);
        assert!((gs.g[0].v.re - gs.g[1].v.im).abs() < 1e-15);
        assert!((gs.g[0].v.im - gs.g[1].v.re).abs() < 1e-15);
    }

    #[test]
    fn rotated_generators() {
        let gs = generators(&at(0.8, PI / 3.0)).unwrap();
        let q = MobiusMatrix::rotation(FRAC_PI_2);
        assert!(gs.g[2].projective_distance(&gs.g[0].conjugate_by(&q)) < 1e-12);
        assert!(gs.g[3].projective_distance(&gs.g[1].conjugate_by(&q)) < 1e-12);
    }

    #[test]
    fn relation_holds() {
        for p in [OctagonParams::regular(), at(0.8, PI / 3.0)] {
            assert!(relation_defect(&generators(&p).unwrap()) < 1e-10);
            assert!(side_pairing_defect(&p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn relation_and_pairing_on_grid() {
        for p in region_grid(20, 0.1) {
            let gs = generators(&p).unwrap();
            assert!(relation_defect(&gs) < 1e-10, "{p:?}");
            assert!(side_pairing_defect(&p).unwrap() < 1e-9, "{p:?}");
        }
    }

    #[test]
    fn perturbed_generator_breaks_relation() {
        let mut gs = generators(&at(0.8, PI / 3.0)).unwrap();
        gs.g[0].v *= 1.01;
        gs.g_inv[0] = gs.g[0].conjugate_by(&MobiusMatrix::rotation(PI));
        assert!(relation_defect(&gs) > 1e-6);
    }

    #[test]
    fn identity_does_not_pair_sides() {
        let p = at(0.8, PI / 3.0);
        let geom = build_geometry(&p).unwrap();
        let mut maps = generators(&p).unwrap().g;
        maps[0] = MobiusMatrix::identity();
        assert!(pairing_defect_with(&geom, &maps).unwrap() > 0.1);
    }

    #[test]
    fn normalization_rejects_boundary() {
        // Bypass the region check by building a point on the b = 1 boundary.
        let p = OctagonParams::regular();
        assert!(normalization(&p).unwrap() < 0.0);
        let gs = generators(&at(0.9, FRAC_PI_4)).unwrap();
        assert!(gs.normalization < 0.0);
    }

    proptest! {
        #[test]
        fn marking_equivalence(re in -0.6f64..0.6, im in -0.6f64..0.6, phi in 0.0f64..std::f64::consts::TAU) {
            let v = Complex::new(re, im);
            let u = Complex::from_polar((1.0 + v.norm_sqr()).sqrt(), phi);
            let gamma = MobiusMatrix::new(u, v).unwrap();
            let gs = generators(&at(0.85, 0.9)).unwrap().conjugated(&gamma);
            prop_assert!(relation_defect(&gs) < 1e-9);
        }
    }
}
