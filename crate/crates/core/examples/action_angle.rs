//! Action-angle variables of a point and their inversion.

use genus2::octagon::OctagonParams;
use genus2::orbits::{action_angle, angle_winding, invert_action, invert_angle};

fn main() -> genus2::Result<()> {
    let p = OctagonParams::new(0.8, std::f64::consts::PI / 3.0)?;
    let aa = action_angle(&p)?;
    println!("J = {:.15}, Phi = {:.15}, sheet {:?}", aa.j, aa.phi, aa.sheet);
    let per = invert_action(aa.j)?;
    let (a, alpha_tilde) = invert_angle(aa.phi, per)?;
    println!("back: P = {per:.12}, a = {a:.12}, alpha~ = {alpha_tilde:.12}");
    for per in [25.0, 33.0, 41.0] {
        println!("winding of Phi around P = {per}: {:.14}", angle_winding(per, 2048)?);
    }
    Ok(())
}
