//! Complex dilogarithm.
//!
//! [`li2`] is the standard `Li_2(w) = sum w^p / p^2`. [`dilog_paper`] is the
//! shifted convention `dilog(z) = sum (1 - z)^p / p^2 = Li_2(1 - z)` used by
//! the Weil–Petersson area approximation.

use std::f64::consts::PI;

use super::Complex;

const PI2_6: f64 = PI * PI / 6.0;

// B_{2k} / (2k+1)! for k = 1..
const BERNOULLI: [f64; 19] = [
    0.027777777777777778,
    -0.00027777777777777778,
    4.7241118669690098e-6,
    -9.1857730746619636e-8,
    1.8978869988970999e-9,
    -4.0647616451442255e-11,
    8.9216910204564526e-13,
    -1.9939295860721076e-14,
    4.5189800296199182e-16,
    -1.0356517612181247e-17,
    2.3952186210261867e-19,
    -5.5817858743250093e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.3159756527022034e-26,
    -1.7408456572340007e-27,
    4.1576356446138997e-29,
    -9.9621484882846221e-31,
    2.3940344248961653e-32,
];

/// `dilog(z) = Li_2(1 - z)`; finite for every finite `z`.
pub fn dilog_paper(z: Complex) -> Complex {
    li2(Complex::new(1.0, 0.0) - z)
}

/// Principal branch of `Li_2(w)`, cut along real `w > 1`.
///
/// On the cut itself the value is the limit from below, `Im w -> 0-`, so
/// `Im Li_2(x) = -pi ln x` for real `x > 1`.
pub fn li2(w: Complex) -> Complex {
    if w.re == 0.0 && w.im == 0.0 {
        return Complex::new(0.0, 0.0);
    }
    if w.im == 0.0 && w.re >= 1.0 {
        let x = w.re;
        if x == 1.0 {
            return Complex::new(PI2_6, 0.0);
        }
        let lx = x.ln();
        let re = 2.0 * PI2_6 - 0.5 * lx * lx - li2(Complex::new(1.0 / x, 0.0)).re;
        return Complex::new(re, -PI * lx);
    }
    if w.norm() > 1.0 {
        // Inversion: Li2(w) + Li2(1/w) = -pi^2/6 - ln^2(-w) / 2.
        let l = (-w).ln();
        return -PI2_6 - 0.5 * l * l - li2(w.inv());
    }
    if w.norm() <= 0.5 {
        return defining_series(w);
    }
    if w.re > 0.5 {
        // Reflection: Li2(w) + Li2(1-w) = pi^2/6 - ln(w) ln(1-w).
        let one_minus = Complex::new(1.0, 0.0) - w;
        return PI2_6 - w.ln() * one_minus.ln() - bernoulli_series(one_minus);
    }
    bernoulli_series(w)
}

fn defining_series(w: Complex) -> Complex {
    let mut sum = Complex::new(0.0, 0.0);
    let mut pow = w;
    for p in 1..200 {
        let term = pow / (p * p) as f64;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        pow *= w;
    }
    sum
}

/// Series in `z = -ln(1 - w)`; converges fast for `|w| <= 1`, `Re w <= 1/2`.
fn bernoulli_series(w: Complex) -> Complex {
    let z = -(Complex::new(1.0, 0.0) - w).ln();
    let z2 = z * z;
    let mut sum = z - 0.25 * z2;
    let mut pow = z * z2;
    for &b in BERNOULLI.iter() {
        let term = pow * b;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
        pow *= z2;
    }
    sum
}
