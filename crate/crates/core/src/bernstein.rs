//! Constructive order-0 sup-norm approximation on the unit cube.
//!
//! `bernstein_approximate` builds B_n[f] = Σ_k f(k/n) Π_j C(n,k_j)
//! x_j^{k_j}(1−x_j)^{n−k_j}, expanded to monomial form. The operator is
//! linear and positive and converges uniformly for continuous f, which makes
//! it the order-0 supplier for the simultaneous-approximation pipeline.
//!
//! The monomial coefficient of x^d along one axis is C(n,d)·Δ^d f(0), the
//! d-th forward difference of the samples. That transform is severely
//! cancellation-prone: a single unit-roundoff perturbation of a mid-lattice
//! sample changes mid-degree monomial coefficients by ~u·C(n,d)·C(d,d/2) per
//! axis. To avoid adding arithmetic noise on top of the irreducible sample
//! rounding, the samples (exact dyadic rationals) are lifted to big integers
//! over a common power-of-two denominator, differenced and binomial-scaled
//! exactly, and rounded to f64 once at the end. The remaining noise floor is
//! set by sample rounding alone; it stays below 1e-4 in evaluated values for
//! one axis up to the degree cap, and for two axes up to degree ~32, beyond
//! which the monomial basis simply cannot carry the information (see README).

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::polyalgebra::{combin::binomial, cube_iter, Polynomial};

/// Per-axis degree cap accepted by [`BernsteinDegree::new`].
pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// Samples smaller than max|sample|·2^-60 are flushed to zero before the
/// exact lift; this bounds the common-denominator spread without affecting
/// values beyond ordinary rounding.
const SAMPLE_FLUSH_BITS: i64 = 60;

/// Isotropic per-axis Bernstein degree, validated against a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BernsteinDegree(u32);

impl BernsteinDegree {
    /// Degree with the default cap.
    pub fn new(n: u32) -> Result<Self> {
        Self::with_limit(n, DEFAULT_MAX_DEGREE)
    }

    /// Degree with an explicit cap.
    pub fn with_limit(n: u32, max_degree: u32) -> Result<Self> {
        if n < 1 || n > max_degree {
            return Err(Error::DegreeLimitExceeded {
                requested: n,
                max: max_degree,
            });
        }
        Ok(BernsteinDegree(n))
    }

    pub fn get(&self) -> u32 {
        self.0
    }
}

/// Monomial-form Bernstein approximant B_n[f] of a function on [0,1]^N.
///
/// Samples f at the (n+1)^N lattice nodes k/n (in parallel, reduced in a
/// fixed order), then transforms to monomial coefficients axis by axis in
/// exact integer arithmetic.
pub fn bernstein_approximate<F>(
    f: F,
    degree: BernsteinDegree,
    dimension: usize,
) -> Result<Polynomial>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = degree.get() as usize;
    let side = n + 1;
    let total = side.pow(dimension as u32);

    // sample lattice, row-major, last axis fastest
    let samples: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|flat| f(&lattice_node(flat, side, dimension, n)))
        .collect();
    if let Some(flat) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            node: lattice_node(flat, side, dimension, n),
        });
    }

    let sample_scale = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if sample_scale == 0.0 {
        return Ok(Polynomial::zero(dimension));
    }

    // lift to integers over the common denominator 2^-shift
    let (mut values, shift) = lift_to_integers(&samples, sample_scale);

    // per-axis transform: v[d] becomes C(n,d) · Δ^d v(0), exactly
    let binoms: Vec<BigInt> = (0..=n as u32)
        .map(|d| BigInt::from(binomial(n as u32, d)))
        .collect();
    for ax in 0..dimension {
        let stride = side.pow((dimension - 1 - ax) as u32);
        let block = stride * side;
        for chunk in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = chunk + offset;
                for level in 1..=n {
                    for i in (level..=n).rev() {
                        let prev = values[base + (i - 1) * stride].clone();
                        values[base + i * stride] -= prev;
                    }
                }
                for (i, b) in binoms.iter().enumerate() {
                    values[base + i * stride] *= b;
                }
            }
        }
    }

    let scale_back = pow2(shift);
    let terms = cube_iter(dimension, n as u32)
        .zip(values)
        .filter(|(_, v)| !v.is_zero())
        .map(|(exp, v)| (exp, v.to_f64().unwrap_or(0.0) * scale_back));
    Polynomial::from_terms_with_scale(dimension, terms, sample_scale)
}

/// max over grid nodes of |f(x) − p(x)|: a lower bound for ‖f − p‖_∞.
pub fn sup_error<F>(f: F, p: &Polynomial, grid: &GridSpec) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    grid.sup(p.dimension(), |x| {
        f(x) - p.evaluate(x).expect("grid point dimension matches")
    })
}

fn lattice_node(flat: usize, side: usize, dimension: usize, n: usize) -> Vec<f64> {
    let mut idx = flat;
    let mut node = vec![0.0; dimension];
    for d in (0..dimension).rev() {
        node[d] = (idx % side) as f64 / n as f64;
        idx /= side;
    }
    node
}

/// Exact power of two, valid through the subnormal range (where
/// `powi`'s repeated squaring would overflow an intermediate).
fn pow2(e: i32) -> f64 {
    if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}

/// Exact dyadic decomposition x = m·2^e of a finite nonzero f64.
fn decompose(x: f64) -> (i64, i64) {
    let bits = x.abs().to_bits();
    let raw_exp = (bits >> 52) & 0x7ff;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw_exp == 0 {
        (frac, -1074_i64)
    } else {
        (frac | (1u64 << 52), raw_exp as i64 - 1075)
    };
    (if x < 0.0 { -(mant as i64) } else { mant as i64 }, exp)
}

/// Represent samples as BigInt numerators over a common denominator 2^-shift.
fn lift_to_integers(samples: &[f64], scale: f64) -> (Vec<BigInt>, i32) {
    let flush = scale * 2.0_f64.powi(-(SAMPLE_FLUSH_BITS as i32));
    let kept: Vec<f64> = samples
        .iter()
        .map(|&v| if v.abs() < flush { 0.0 } else { v })
        .collect();
    let min_exp = kept
        .iter()
        .filter(|v| **v != 0.0)
        .map(|&v| decompose(v).1)
        .min()
        .unwrap_or(0);
    let values = kept
        .iter()
        .map(|&v| {
            if v == 0.0 {
                BigInt::zero()
            } else {
                let (m, e) = decompose(v);
                BigInt::from(m) << (e - min_exp) as usize
            }
        })
        .collect();
    (values, min_exp as i32)
}
