//! Exact-structure sparse multivariate polynomial arithmetic: the substrate
//! for every other module. Values are immutable after construction and all
//! operations are pure functions.

pub mod combin;
mod multiindex;
mod polynomial;

pub use multiindex::{box_iter, cube_iter, BoxIter, MultiIndex};
pub use polynomial::{random_polynomial, Polynomial, CANONICAL_RELATIVE_EPS};
