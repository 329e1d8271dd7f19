//! Side-pairing generators and the surface-group relation.

use genus2::fuchsian::{generators, relation_defect, side_pairing_defect};
use genus2::octagon::region_grid;
use genus2::octagon::OctagonParams;

fn main() -> genus2::Result<()> {
    let p = OctagonParams::new(0.8, std::f64::consts::PI / 3.0)?;
    let gs = generators(&p)?;
    for (k, g) in gs.g.iter().enumerate() {
        println!("g{k}: u = {:.6}, v = {:.6}, tr = {:.6}, det = {:.3e}", g.u, g.v, g.trace(), g.det() - 1.0);
    }
    println!("relation defect {:.3e}", relation_defect(&gs));
    println!("side pairing defect {:.3e}", side_pairing_defect(&p)?);

    let worst = region_grid(10, 0.1)
        .iter()
        .map(|q| generators(q).map(|gs| relation_defect(&gs)))
        .collect::<genus2::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("worst relation defect on a 10x10 grid {worst:.3e}");
    Ok(())
}
