//! Adaptive Gauss–Kronrod quadrature and a bracketed root finder.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let abs_sum = abs_sum * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let round_off = 50.0 * f64::EPSILON * abs_sum;
    if round_off > f64::MIN_POSITIVE {
        error = error.max(round_off);
    }
    Segment { lo, hi, value, error }
}

/// Globally adaptive 21-point Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadEstimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate", "integration limits must be finite"));
    }
    if a == b {
        return Ok(QuadEstimate { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let first = kronrod21(&f, a, b);
    let mut evaluations = 21;
    if !first.value.is_finite() {
        return Err(Error::numeric("integrate", "integrand is not finite on the interval"));
    }
    let mut heap = BinaryHeap::new();
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadEstimate { value, error, evaluations });
        }
        if heap.len() >= opts.max_intervals {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo.min(worst.hi) || mid >= worst.lo.max(worst.hi) {
            // Interval cannot be split further in floating point.
            heap.push(worst);
            break;
        }
        let left = kronrod21(&f, worst.lo, mid);
        let right = kronrod21(&f, mid, worst.hi);
        evaluations += 42;
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::numeric("integrate", "integrand is not finite on the interval"));
        }
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to drop accumulated update round-off before judging.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum();
    if error <= opts.abs_tol.max(opts.rel_tol * value.abs()) {
        Ok(QuadEstimate { value, error, evaluations })
    } else {
        Err(Error::Quadrature { estimate: value, error_estimate: error })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Stop once the bracket is narrower than this.
    pub x_tol: f64,
    /// Stop once `|f(x)|` is at most this.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { x_tol: 1e-15, f_tol: 0.0, max_iter: 300 }
    }
}

/// Root of `f` inside the bracket `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must differ in sign (or one of them vanish). Steps are
/// secant (false-position) steps between the bracket endpoints, with the
/// Illinois down-weighting of a stale endpoint; a step that would leave the
/// bracket is replaced by bisection, and every third iteration that failed
/// to halve the bracket is forced to bisect.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, opts: &RootOptions) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::numeric(
            "find_root",
            format!("no sign change on [{a}, {b}]: f = ({fa}, {fb})"),
        ));
    }
    // +1 when `a` was replaced last, -1 for `b`.
    let mut side = 0i8;
    let mut checkpoint = b - a;
    for iter in 0..opts.max_iter {
        let width = b - a;
        if width <= opts.x_tol.max(4.0 * f64::EPSILON * a.abs().max(b.abs())) {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if iter % 3 == 2 {
            checkpoint = if width > 0.5 * checkpoint {
                x = 0.5 * (a + b);
                0.5 * width
            } else {
                width
            };
        }
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx == 0.0 || fx.abs() <= opts.f_tol {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::numeric("find_root", "iteration limit reached"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| 3.0 * x * x, 0.0, 2.0, &QuadOptions::default()).unwrap();
        assert_relative_eq!(r.value, 8.0, max_relative = 1e-14);
        assert_eq!(r.evaluations, 21);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, ..Default::default() };
        let r = integrate(|x: f64| (20.0 * x).sin() * x, 0.0, PI, &opts).unwrap();
        assert_relative_eq!(r.value, -PI / 20.0, max_relative = 1e-12);
        let r = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, &opts).unwrap();
        assert_relative_eq!(r.value, 2.0 * 100.0 * (100.0f64).atan(), max_relative = 1e-12);
    }

    #[test]
    fn integrable_endpoint_singularity_converges() {
        let opts = QuadOptions { abs_tol: 1e-9, rel_tol: 1e-9, ..Default::default() };
        let r = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &opts).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let opts = QuadOptions::default();
        let a = integrate(|x: f64| x.exp(), 0.0, 1.0, &opts).unwrap().value;
        let b = integrate(|x: f64| x.exp(), 1.0, 0.0, &opts).unwrap().value;
        assert_relative_eq!(a, -b, max_relative = 1e-15);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 0.0, max_intervals: 3 };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &opts);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn root_finder() {
        let opts = RootOptions::default();
        let r = find_root(|x| Ok(x * x - 2.0), 0.0, 2.0, &opts).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let r = find_root(|x: f64| Ok(x.cos() - x), 0.0, 1.0, &opts).unwrap();
        assert!((r.cos() - r).abs() < 1e-15);
        // Flat region near the root forces the bisection fallback.
        let r = find_root(|x: f64| Ok((x - 0.3).powi(9)), 0.0, 1.0, &opts).unwrap();
        assert!((r - 0.3).abs() < 1e-1);
        assert!(find_root(|x| Ok(x * x + 1.0), -1.0, 1.0, &opts).is_err());
    }
}
