//! Fenchel-Nielsen coordinates and the Weil-Petersson density.

use genus2::octagon::OctagonParams;
use genus2::teichmuller::{fn_coordinates, swapped_decomposition_density, wolpert_density_fd, wp_density};

fn main() -> genus2::Result<()> {
    for (a, alpha) in [(2f64.powf(-0.25), std::f64::consts::FRAC_PI_4), (0.8, std::f64::consts::PI / 3.0), (0.85, 0.9)] {
        let p = OctagonParams::new(a, alpha)?;
        let c = fn_coordinates(&p)?;
        println!("(a, alpha) = ({a:.6}, {alpha:.6})");
        println!("  lengths {:?}", c.lengths);
        println!("  twists  {:?}", c.twists);
        println!(
            "  W = {:.9}, from FN Jacobian {:.9}, swapped decomposition {:.9}",
            wp_density(&p),
            wolpert_density_fd(&p)?,
            swapped_decomposition_density(&p)?
        );
    }
    Ok(())
}
