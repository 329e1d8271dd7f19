//! Boost evolution from (a, alpha) = (0.8, pi/3): J contracts, bounces and
//! expands while the octagon drifts along the region.

use genus2::dynamics::{bounce, initial_data, trajectory_in_region, ActionTable};
use genus2::octagon::OctagonParams;

fn main() -> genus2::Result<()> {
    let start = OctagonParams::new(0.8, std::f64::consts::PI / 3.0)?;
    let (j, phi, sheet) = initial_data(&start)?;
    let b = bounce(j, phi, sheet, 0.0)?;
    println!("bounce at tau = {:.12}, J_b = {:.12}", b.tau, b.j);

    let table = ActionTable::new(160.0, 64)?;
    let taus: Vec<f64> = (0..=28).map(|i| -9.0 + 0.5 * i as f64).collect();
    let tr = trajectory_in_region(&table, &start, 0.0, &taus)?;
    println!("{:>6} {:>12} {:>9} {:>10} {:>9} {:>10}", "tau", "J", "Phi", "a", "alpha", "H-E");
    for s in &tr.states {
        println!("{:6.2} {:12.6} {:9.5} {:10.7} {:9.6} {:10.2e}", s.tau, s.j, s.phi, s.a, s.alpha, s.h - s.e);
    }
    for (tau, why) in &tr.dropped {
        println!("dropped tau = {tau}: {why}");
    }
    Ok(())
}
