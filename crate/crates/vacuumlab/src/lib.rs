//! Numerics for a scalar field quantized in a reducible representation of
//! the oscillator algebra: delta-sequence calculus, vacuum profiles,
//! generalized Coulomb potentials, double-delta cavities, Casimir pressure
//! and photon-number statistics.

// `!(x > 0.0)` style guards are kept so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Kernel coefficients keep every digit they were published with.
#![allow(clippy::excessive_precision)]

pub mod casimir;
pub mod cavity;
pub mod coulomb;
pub mod deltaseq;
pub mod error;
pub mod oscillator;
pub mod quadrature;
pub mod specfun;
pub mod units;
pub mod validate;
pub mod vacuum;

pub use error::{Error, Result};
pub use quadrature::{OscillatoryStrategy, QuadratureSpec};
