//! Simultaneous polynomial approximation on the unit cube.
//!
//! Given a function u with enough continuous derivatives on [0,1]^N, this
//! crate constructs a single polynomial P whose derivatives D^α P approximate
//! D^α u in sup norm for every |α| ≤ m, together with the machinery the
//! construction rests on:
//!
//! * [`polyalgebra`] — sparse multivariate polynomial arithmetic,
//! * [`bernstein`] — constructive order-0 sup-norm approximation,
//! * [`sigma`] — the substitution set S and its partition-of-unity identity,
//! * [`solver`] — the triangular solver for D^β[w·P] = Q,
//! * [`approximator`] — the end-to-end pipeline and error reporting,
//! * [`mollifier`] — dilation plus compact-kernel smoothing of low-order data,
//! * [`poincare`] — numerical checks of the Poincaré inequalities involved.

pub mod approximator;
pub mod bernstein;
pub mod error;
pub mod grid;
pub mod mollifier;
pub mod oracle;
pub mod poincare;
pub mod polyalgebra;
pub mod quadrature;
pub mod sigma;
pub mod solver;

pub use error::{Error, Result};
pub use polyalgebra::{MultiIndex, Polynomial};
