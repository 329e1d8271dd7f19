//! Area eigenvalues and the truncated discrete-series ladder.

use genus2::dynamics::{area_spectrum, rep_ladder};

fn main() -> genus2::Result<()> {
    for n in 0..6 {
        println!("A_{n} = {:.12} = {}pi", area_spectrum(n)?, 4 * n + 2);
    }
    let l = rep_ladder(1, 6)?;
    println!("J+ =\n{:.4}", l.j_plus);
    println!("J- =\n{:.4}", l.j_minus);
    println!("J0^2 - J0 - J+J- =\n{:.4}", l.casimir_from_generators());
    Ok(())
}
