//! Geometry of the regular octagon and of a deformed one.

use genus2::octagon::{angle_sum, build_geometry, perimeter, OctagonParams};

fn main() -> genus2::Result<()> {
    for p in [OctagonParams::regular(), OctagonParams::new(0.8, std::f64::consts::PI / 3.0)?] {
        let g = build_geometry(&p)?;
        println!("a = {:.6}, alpha = {:.6}, b = {:.6}, beta = {:.6}", p.a(), p.alpha(), g.b, g.beta);
        for (k, z) in g.vertices.iter().enumerate() {
            println!("  vertex {k}: {:+.6} {:+.6}i", z.re, z.im);
        }
        println!("  side lengths {:?}", g.side_lengths()?.map(|l| (l * 1e6).round() / 1e6));
        println!("  perimeter {:.9}, angle sum {:.12}", perimeter(&p), angle_sum(&p)?);
    }
    Ok(())
}
