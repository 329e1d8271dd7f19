use std::f64::consts::PI;

use genus2::dynamics::{evolve_closed_form, observables};
use genus2::hypgeom::{hyp_distance, MobiusMatrix};
use genus2::octagon::{chart_point, derived_b_beta, perimeter, OctagonParams, Sheet};
use genus2::orbits::{action_angle, invert_action, invert_angle, IsoOrbit, P_REG};
use genus2::teichmuller::wp_density;
use genus2::Complex;
use proptest::prelude::*;

fn su11(r: f64, t1: f64, t2: f64) -> MobiusMatrix {
    MobiusMatrix::new(Complex::from_polar(r.cosh(), t1), Complex::from_polar(r.sinh(), t2)).unwrap()
}

fn disk_point(rho: f64, theta: f64) -> Complex {
    Complex::from_polar(rho, theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn region_points_are_valid_octagons(s in 0.05f64..0.95, t in 0.05f64..0.95) {
        let p = chart_point(s, t).unwrap();
        let (b, _) = derived_b_beta(&p);
        prop_assert!(b < 1.0);
        prop_assert!(perimeter(&p) >= P_REG - 1e-9);
        prop_assert!(wp_density(&p) > 0.0);
    }

    #[test]
    fn perimeter_swap_symmetry(s in 0.15f64..0.85, t in 0.1f64..0.9) {
        let p = chart_point(s, t).unwrap();
        let (b, _) = derived_b_beta(&p);
        if let Ok(q) = OctagonParams::from_alpha_tilde(b, -p.alpha_tilde()) {
            prop_assert!((perimeter(&q) - perimeter(&p)).abs() < 1e-10 * perimeter(&p));
        }
    }

    #[test]
    fn action_angle_round_trip(s in 0.1f64..0.9, t in 0.1f64..0.9) {
        let p = chart_point(s, t).unwrap();
        prop_assume!(p.alpha_tilde().abs() > 1e-3);
        let aa = action_angle(&p).unwrap();
        prop_assert_eq!(aa.phi.signum(), p.sheet().sign());
        let per = invert_action(aa.j).unwrap();
        let (a, alpha_tilde) = invert_angle(aa.phi, per).unwrap();
        prop_assert!((a - p.a()).abs() < 1e-7, "a {} vs {}", a, p.a());
        prop_assert!((alpha_tilde - p.alpha_tilde()).abs() < 1e-7);
    }

    #[test]
    fn orbit_points_stay_on_the_orbit(per in 24.5f64..60.0, phi in 0.0f64..(2.0 * PI)) {
        let orbit = IsoOrbit::new(per).unwrap();
        prop_assert!(orbit.x_plus <= orbit.t * orbit.t);
        let p = orbit.point(phi).unwrap();
        prop_assert!((perimeter(&p) - per).abs() < 1e-10 * per);
        if phi.sin().abs() > 1e-9 {
            prop_assert_eq!(p.sheet(), Sheet::of(phi.sin()));
        }
    }

    #[test]
    fn mobius_maps_preserve_disk_and_distance(
        r in 0.0f64..3.0, t1 in -PI..PI, t2 in -PI..PI,
        r1 in 0.0f64..0.95, a1 in -PI..PI, r2 in 0.0f64..0.95, a2 in -PI..PI,
    ) {
        let g = su11(r, t1, t2);
        prop_assert!((g.det() - 1.0).abs() < 1e-12 * (1.0 + (2.0 * r).cosh()));
        let (z, w) = (disk_point(r1, a1), disk_point(r2, a2));
        let (gz, gw) = (g.apply(z).unwrap(), g.apply(w).unwrap());
        prop_assert!(gz.norm() < 1.0 && gw.norm() < 1.0);
        let d = hyp_distance(z, w).unwrap();
        prop_assert!((hyp_distance(gz, gw).unwrap() - d).abs() < 1e-8 * (1.0 + d));
    }

    #[test]
    fn evolution_stays_on_its_sheet(j in 0.1f64..3.0, frac in 0.0f64..0.9, phi in 0.01f64..3.13, neg: bool, tau in -8.0f64..8.0) {
        let phi = if neg { -phi } else { phi };
        let c = frac * j * j;
        let sheet = Sheet::of(phi);
        let (jt, pt) = evolve_closed_form(j, phi, sheet, c, tau).unwrap();
        prop_assert!(pt == 0.0 || pt.signum() == sheet.sign());
        prop_assert!(jt * jt >= c);
        let o = observables(jt, pt, c).unwrap();
        prop_assert_eq!(o.j_minus, o.j_plus.conj());
    }
}
