//! The substitution set S and its partition-of-unity identity.
//!
//! Each element of S acts on the monomial x^β = Π_j x_j^m by replacing every
//! degree-one factor x_j with either x_j or 1−x_j; there are 2^{Nm} raw
//! choices. Identical products collapse by the binomial theorem, so S is
//! stored as the (m+1)^N retention vectors k (number of x_j factors kept on
//! axis j) with integer multiplicities Π_j C(m,k_j). The weight polynomials
//! w_k = Π_j x_j^{k_j}(1−x_j)^{m−k_j} then satisfy Σ_k mult(k)·w_k = 1.

use crate::error::{Error, Result};
use crate::polyalgebra::{combin::binomial, cube_iter, MultiIndex, Polynomial};

/// Default limit on the collapsed enumeration size (m+1)^N.
pub const DEFAULT_SIZE_LIMIT: u64 = 4096;

/// One collapsed element of S: a retention vector with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTerm {
    retention: MultiIndex,
    order: u32,
    multiplicity: u64,
}

impl SigmaTerm {
    /// Build a term from a retention vector k with 0 ≤ k_j ≤ m.
    pub fn new(retention: MultiIndex, order: u32) -> Result<Self> {
        if retention.max_order() > order {
            return Err(Error::InvalidConfig(format!(
                "retention {retention} exceeds order {order}"
            )));
        }
        let multiplicity = retention
            .orders()
            .iter()
            .map(|&k| binomial(order, k) as u64)
            .product();
        Ok(SigmaTerm {
            retention,
            order,
            multiplicity,
        })
    }

    /// Retention counts per axis (x_j factors kept un-flipped).
    pub fn retention(&self) -> &MultiIndex {
        &self.retention
    }

    /// The order m of the underlying monomial x^β, β = (m,...,m).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.retention.dimension()
    }

    /// Number of raw substitution choices collapsing onto this term.
    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    /// β = (m, ..., m), the multi-index of the special derivative D^β.
    pub fn beta(&self) -> MultiIndex {
        MultiIndex::uniform(self.dimension(), self.order)
    }
}

/// Enumerate the collapsed set S for order m in dimension N:
/// exactly (m+1)^N terms, one per retention vector in {0..m}^N.
pub fn enumerate_sigma(m: u32, dimension: usize) -> Result<Vec<SigmaTerm>> {
    enumerate_sigma_with_limit(m, dimension, DEFAULT_SIZE_LIMIT)
}

pub fn enumerate_sigma_with_limit(
    m: u32,
    dimension: usize,
    size_limit: u64,
) -> Result<Vec<SigmaTerm>> {
    if m < 1 || dimension < 1 {
        return Err(Error::InvalidConfig(format!(
            "order and dimension must be positive, got m={m}, N={dimension}"
        )));
    }
    let count = (m as u64 + 1)
        .checked_pow(dimension as u32)
        .unwrap_or(u64::MAX);
    if count > size_limit {
        return Err(Error::SizeLimitExceeded {
            requested: count,
            limit: size_limit,
        });
    }
    cube_iter(dimension, m)
        .map(|retention| SigmaTerm::new(retention, m))
        .collect()
}

/// The expanded weight polynomial Π_j x_j^{k_j}(1−x_j)^{m−k_j}
/// (multiplicity not included). Degree m on each axis.
pub fn weight_polynomial(term: &SigmaTerm) -> Polynomial {
    let dim = term.dimension();
    let mut w = Polynomial::constant(dim, 1.0);
    for axis in 0..dim {
        let x = Polynomial::variable(dim, axis).expect("axis in range");
        let one_minus_x = Polynomial::constant(dim, 1.0)
            .sub(&x)
            .expect("same dimension");
        let k = term.retention.order(axis);
        let factor = x
            .pow(k)
            .mul(&one_minus_x.pow(term.order - k))
            .expect("same dimension");
        w = w.mul(&factor).expect("same dimension");
    }
    w
}

/// Coefficient-norm of (Σ_k mult(k)·w_k) − 1. The caller asserts this is
/// at most 1e-12; for the supported orders the sum is integer-exact and the
/// residual comes out identically zero.
pub fn verify_identity(m: u32, dimension: usize) -> Result<f64> {
    let terms = enumerate_sigma(m, dimension)?;
    let mut sum = Polynomial::zero(dimension);
    for t in &terms {
        sum = sum.add(&weight_polynomial(t).scale(t.multiplicity() as f64))?;
    }
    let residual = sum.sub(&Polynomial::constant(dimension, 1.0))?;
    Ok(residual.max_abs_coeff())
}
