//! Orbits of constant perimeter and the area they enclose.

use genus2::octagon::perimeter;
use genus2::orbits::{da_dp, wp_area_dilog, wp_area_numeric, IsoOrbit, P_REG};

fn main() -> genus2::Result<()> {
    println!("P_reg = {P_REG:.12}");
    for p in (0..9).map(|i| 25.0 + 2.0 * i as f64) {
        let orbit = IsoOrbit::new(p)?;
        let spread = (0..64)
            .map(|k| orbit.point(std::f64::consts::TAU * k as f64 / 64.0).map(|q| perimeter(&q)))
            .collect::<genus2::Result<Vec<_>>>()?
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        println!(
            "P = {p:4.1}  a in [{:.6}, {:.6}]  spread {:.1e}  A = {:.9}  A_dilog = {:.6}  dA/dP = {:.9}",
            orbit.x_minus.sqrt(),
            orbit.x_plus.sqrt(),
            spread.1 - spread.0,
            wp_area_numeric(p)?,
            wp_area_dilog(p)?.value,
            da_dp(p)?
        );
    }
    Ok(())
}
