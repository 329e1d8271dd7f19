//! Carlson symmetric elliptic integrals by the duplication algorithm.

use crate::{Error, Result};

// Stopping thresholds on the relative spread of the arguments. The neglected
// terms of the fifth-order tails scale like the sixth power of these.
const RF_TOL: f64 = 8e-4;
const RJ_TOL: f64 = 5e-4;
const RC_TOL: f64 = 1e-3;
const MAX_ITER: usize = 100;

fn check_nonneg(op: &'static str, vals: &[f64]) -> Result<()> {
    for &v in vals {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::domain(op, format!("argument {v} must be finite and >= 0")));
        }
    }
    Ok(())
}

/// `R_F(x, y, z) = 1/2 ∫_0^∞ dt / sqrt((t+x)(t+y)(t+z))`.
///
/// All arguments must be nonnegative and at most one may vanish.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    check_nonneg("carlson_rf", &[x, y, z])?;
    let zeros = [x, y, z].iter().filter(|v| **v == 0.0).count();
    if zeros > 1 {
        return Err(Error::domain("carlson_rf", "at most one argument may be zero"));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..MAX_ITER {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RF_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series =
                1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0;
            return Ok(series / mu.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    Err(Error::numeric("carlson_rf", "duplication did not converge"))
}

/// Degenerate integral `R_C(x, y) = R_F(x, y, y)` for `x >= 0`, `y > 0`.
pub fn carlson_rc(x: f64, y: f64) -> Result<f64> {
    check_nonneg("carlson_rc", &[x, y])?;
    if y == 0.0 {
        return Err(Error::domain("carlson_rc", "second argument must be > 0"));
    }
    let (mut x, mut y) = (x, y);
    for _ in 0..MAX_ITER {
        let mu = (x + 2.0 * y) / 3.0;
        let s = (y - mu) / mu;
        if s.abs() < RC_TOL {
            let series = 1.0
                + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)));
            return Ok(series / mu.sqrt());
        }
        let lambda = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
    }
    Err(Error::numeric("carlson_rc", "duplication did not converge"))
}

/// `R_J(x, y, z, p) = 3/2 ∫_0^∞ dt / ((t+p) sqrt((t+x)(t+y)(t+z)))` for
/// `p > 0` and at most one of `x, y, z` zero.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    check_nonneg("carlson_rj", &[x, y, z, p])?;
    if p == 0.0 {
        return Err(Error::domain("carlson_rj", "p must be > 0"));
    }
    let zeros = [x, y, z].iter().filter(|v| **v == 0.0).count();
    if zeros > 1 {
        return Err(Error::domain("carlson_rj", "at most one of x, y, z may be zero"));
    }
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.75 * C3;
    const C6: f64 = 1.5 * C4;
    const C7: f64 = 0.5 * C2;
    const C8: f64 = C3 + C3;

    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        let mu = 0.2 * (x + y + z + 2.0 * p);
        let dx = (mu - x) / mu;
        let dy = (mu - y) / mu;
        let dz = (mu - z) / mu;
        let dp = (mu - p) / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < RJ_TOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            let tail = 1.0
                + ed * (-C1 + C5 * ed - C6 * ee)
                + eb * (C7 + dp * (-C8 + dp * C4))
                + dp * ea * (C2 - dp * C3)
                - C2 * dp * ec;
            return Ok(3.0 * sum + fac * tail / (mu * mu.sqrt()));
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lambda).powi(2);
        sum += fac * carlson_rc(alpha, beta)?;
        fac *= 0.25;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        p = 0.25 * (p + lambda);
    }
    Err(Error::numeric("carlson_rj", "duplication did not converge"))
}
