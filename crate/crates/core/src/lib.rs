//! Numerical toolkit for a two-parameter family of genus-two Riemann surfaces.
//!
//! A surface is described by a hyperbolic octagon in the Poincaré disk with an
//! order-four rotational symmetry. Two real parameters `(a, alpha)` fix the
//! octagon; everything else is derived from them:
//!
//! * [`hypgeom`]: SU(1,1) matrices, Möbius action and geodesic arcs in the disk.
//! * [`octagon`]: the admissible parameter region, vertices, sides, perimeter
//!   and the inner-angle sum.
//! * [`fuchsian`]: the four side-pairing generators and their single relation.
//! * [`teichmuller`]: Fenchel–Nielsen coordinates and the Weil–Petersson density.
//! * [`orbits`]: isoperimetric orbits, enclosed Weil–Petersson area and the
//!   action–angle pair `(J, Phi)`.
//! * [`dynamics`]: su(1,1) observables, boost evolution, bounce and the area
//!   spectrum.
//! * [`specfun`] and [`numeric`]: special functions, quadrature and root finding.
//!
//! The [`validation`] module bundles the cross-checks between closed forms and
//! independent numerical routes; [`cli`] backs the `genus2` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod dynamics;
mod error;
pub mod fuchsian;
pub mod hypgeom;
pub mod numeric;
pub mod octagon;
pub mod orbits;
pub mod specfun;
pub mod teichmuller;
pub mod validation;

pub use error::{Error, RegionViolation, Result};
pub use specfun::Complex;
