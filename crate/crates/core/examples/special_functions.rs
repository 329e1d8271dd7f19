//! Carlson forms, Legendre integrals, the dilogarithm and the series for
//! arccosh.

use genus2::specfun::{arccosh_series, arccosh_stable, carlson_rf, carlson_rj, dilog_paper, ellint_f, ellint_pi, li2};
use genus2::Complex;

fn main() -> genus2::Result<()> {
    println!("R_F(1, 2, 0) = {:.15}", carlson_rf(1.0, 2.0, 0.0)?);
    println!("R_J(2, 3, 4, 5) = {:.15}", carlson_rj(2.0, 3.0, 4.0, 5.0)?);
    println!("F(0.7, 0.8) = {:.15}", ellint_f(0.7, 0.8)?);
    println!("Pi(0.7, 0.3, 0.8) = {:.15}", ellint_pi(0.7, 0.3, 0.8)?);
    println!("Li2(1) = {:.15}", li2(Complex::new(1.0, 0.0)).re);
    println!("dilog(0.5) = {:.15}", dilog_paper(Complex::new(0.5, 0.0)).re);
    for terms in [1, 2, 4, 8] {
        println!("arccosh(1.5) with {terms} terms: {:.15}", arccosh_series(1.5, terms)?);
    }
    println!("arccosh(1.5) = {:.15}", arccosh_stable(1.5)?);
    Ok(())
}
