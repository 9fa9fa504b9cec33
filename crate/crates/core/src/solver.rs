//! Solve the linear polynomial equation D^β[w_σ·P] = Q for P.
//!
//! Fix β = (m,...,m). For any weight w_σ and monomial x^γ,
//! D^β[w_σ·x^γ] = L·x^γ + strictly lower-order terms with L ≠ 0, so the
//! equation is triangular in the graded-lex order: eliminating the current
//! highest residual monomial only introduces lower monomials, and the sweep
//! terminates. The closed-form pivot L and the per-axis image expansion are
//! derived here and cross-checked against brute-force multiply-differentiate
//! (which stays the independent verification route).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::polyalgebra::{combin::binomial_f64, MultiIndex, Polynomial};
use crate::sigma::{weight_polynomial, SigmaTerm};

/// Exponent cap for the closed-form pivot. The pivot is computed as an
/// m-term product, so this is far below any overflow; it bounds the solver
/// to the degree range the rest of the toolkit supports.
pub const LEADING_EXPONENT_CAP: u32 = 120;

/// Relative residual tolerance the sweep must meet, verified against the
/// brute-force image after every solve.
pub const SOLVE_RELATIVE_TOLERANCE: f64 = 1e-8;

/// The special multi-index β = (m,...,m) with D^β = Π_j D_j^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaIndex {
    order: u32,
    dimension: usize,
}

impl BetaIndex {
    pub fn new(order: u32, dimension: usize) -> Self {
        BetaIndex { order, dimension }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// |β| = N·m, the total derivative order.
    pub fn total_order(&self) -> u32 {
        self.order * self.dimension as u32
    }

    pub fn multi_index(&self) -> MultiIndex {
        MultiIndex::uniform(self.dimension, self.order)
    }
}

/// Exact D^β(w_σ · p), computed through polynomial multiplication followed
/// by differentiation. This is the brute-force route; `solve` uses it to
/// verify its residual.
pub fn apply_dbeta_w(term: &SigmaTerm, p: &Polynomial) -> Result<Polynomial> {
    if p.dimension() != term.dimension() {
        return Err(Error::DimensionMismatch {
            expected: term.dimension(),
            found: p.dimension(),
        });
    }
    weight_polynomial(term).mul(p)?.differentiate(&term.beta())
}

/// The coefficient of x^γ in D^β[w_σ·x^γ]: Π_j (−1)^{m−k_j}·(m+γ_j)!/γ_j!.
/// Never zero, which is what makes the sweep triangular.
pub fn leading_constant(term: &SigmaTerm, gamma: &MultiIndex) -> Result<f64> {
    if gamma.dimension() != term.dimension() {
        return Err(Error::DimensionMismatch {
            expected: term.dimension(),
            found: gamma.dimension(),
        });
    }
    if gamma.max_order() > LEADING_EXPONENT_CAP {
        return Err(Error::ExponentCapExceeded {
            exponent: gamma.max_order(),
            cap: LEADING_EXPONENT_CAP,
        });
    }
    let m = term.order();
    let mut acc = 1.0;
    for (axis, &g) in gamma.orders().iter().enumerate() {
        let k = term.retention().order(axis);
        let mut axis_factor: f64 = 1.0;
        for i in 1..=m {
            axis_factor *= (g + i) as f64;
        }
        if (m - k) % 2 == 1 {
            axis_factor = -axis_factor;
        }
        acc *= axis_factor;
    }
    Ok(acc)
}

/// Monomial image D^β[w_σ·x^γ] from the per-axis closed form
/// D^m[x^{γ+k}(1−x)^{m−k}] = Σ_i (−1)^i C(m−k,i) · (γ+k+i)!/(γ+k+i−m)! ·
/// x^{γ+k+i−m}. Terms whose exponent would go negative differentiate to zero.
fn monomial_image(term: &SigmaTerm, gamma: &MultiIndex) -> Vec<(MultiIndex, f64)> {
    let m = term.order();
    let dim = term.dimension();
    // per-axis expansions as (exponent, coefficient) lists
    let mut axes: Vec<Vec<(u32, f64)>> = Vec::with_capacity(dim);
    for (axis, &g) in gamma.orders().iter().enumerate() {
        let k = term.retention().order(axis);
        let mut entries = Vec::with_capacity((m - k + 1) as usize);
        for i in 0..=(m - k) {
            let e = g + k + i;
            if e < m {
                continue;
            }
            let mut coef = binomial_f64(m - k, i);
            if i % 2 == 1 {
                coef = -coef;
            }
            for r in 0..m {
                coef *= (e - r) as f64;
            }
            entries.push((e - m, coef));
        }
        axes.push(entries);
    }
    // tensor product of the per-axis lists
    let mut out: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), 1.0)];
    for axis_entries in &axes {
        let mut next = Vec::with_capacity(out.len() * axis_entries.len());
        for (exps, coef) in &out {
            for &(e, c) in axis_entries {
                let mut exps = exps.clone();
                exps.push(e);
                next.push((exps, coef * c));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(exps, c)| (MultiIndex::new(exps), c))
        .collect()
}

/// Solve D^β[w_σ·P] = Q for P by highest-degree-first elimination.
///
/// The residual is processed in graded-lex descending order: the current top
/// monomial c·x^γ contributes (c/L)·x^γ to P and its strictly lower-order
/// image terms are subtracted from the residual. The result is verified with
/// the brute-force route; failure to meet the relative tolerance is reported
/// rather than returned silently.
pub fn solve(term: &SigmaTerm, q: &Polynomial) -> Result<Polynomial> {
    if q.dimension() != term.dimension() {
        return Err(Error::DimensionMismatch {
            expected: term.dimension(),
            found: q.dimension(),
        });
    }
    let q_scale = q.max_abs_coeff();
    if q_scale == 0.0 {
        return Ok(Polynomial::zero(q.dimension()));
    }

    let mut residual: BTreeMap<MultiIndex, f64> = q.terms().map(|(e, c)| (e.clone(), c)).collect();
    let mut solution: BTreeMap<MultiIndex, f64> = BTreeMap::new();

    while let Some((gamma, c)) = residual
        .iter()
        .next_back()
        .map(|(e, &c)| (e.clone(), c))
    {
        residual.remove(&gamma);
        if c == 0.0 {
            continue;
        }
        let pivot = leading_constant(term, &gamma)?;
        let scale = c / pivot;
        *solution.entry(gamma.clone()).or_insert(0.0) += scale;
        for (exp, coef) in monomial_image(term, &gamma) {
            if exp == gamma {
                continue; // the leading term: eliminated exactly by construction
            }
            let entry = residual.entry(exp).or_insert(0.0);
            *entry -= scale * coef;
            if entry.abs() <= q_scale * 1e-18 {
                // round-off residue; dropping it keeps the sweep finite-length
                *entry = 0.0;
            }
        }
        residual.retain(|_, v| *v != 0.0);
    }

    let p = Polynomial::from_terms_with_scale(q.dimension(), solution, q_scale)?;

    // independent verification of the sweep
    let achieved = apply_dbeta_w(term, &p)?.sub(q)?.max_abs_coeff();
    let tolerance = SOLVE_RELATIVE_TOLERANCE * q_scale;
    if achieved > tolerance {
        return Err(Error::SolveResidual {
            residual: achieved,
            tolerance,
        });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::enumerate_sigma;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn term(m: u32, retention: Vec<u32>) -> SigmaTerm {
        SigmaTerm::new(MultiIndex::new(retention), m).unwrap()
    }

    #[test]
    fn apply_examples() {
        // t=(m=1,N=1,k=1), p=1: D[x·1] = 1
        let t = term(1, vec![1]);
        let one = Polynomial::constant(1, 1.0);
        assert_eq!(apply_dbeta_w(&t, &one).unwrap(), one);

        // p = x/2: D[x²/2] = x
        let x = Polynomial::variable(1, 0).unwrap();
        let img = apply_dbeta_w(&t, &x.scale(0.5)).unwrap();
        assert_eq!(img, x);

        // t=(k=0), p=−1: D[(1−x)(−1)] = 1
        let t0 = term(1, vec![0]);
        let img = apply_dbeta_w(&t0, &Polynomial::constant(1, -1.0)).unwrap();
        assert_eq!(img, one);
    }

    #[test]
    fn leading_constant_examples() {
        let t1 = term(1, vec![1]);
        let t0 = term(1, vec![0]);
        assert_eq!(leading_constant(&t1, &MultiIndex::zero(1)).unwrap(), 1.0);
        assert_eq!(leading_constant(&t0, &MultiIndex::zero(1)).unwrap(), -1.0);
        assert_eq!(
            leading_constant(&t1, &MultiIndex::new(vec![2])).unwrap(),
            3.0
        );
    }

    #[test]
    fn leading_constant_cap() {
        let t = term(1, vec![1]);
        assert!(leading_constant(&t, &MultiIndex::new(vec![121])).is_err());
        assert!(leading_constant(&t, &MultiIndex::new(vec![120])).is_ok());
    }

    #[test]
    fn leading_constant_matches_brute_force_extraction() {
        // exact equality: both routes are integer-valued products below 2^53
        for m in 1..=3 {
            for dim in 1..=2 {
                for t in enumerate_sigma(m, dim).unwrap() {
                    for gamma in crate::polyalgebra::cube_iter(dim, 5) {
                        let image =
                            apply_dbeta_w(&t, &Polynomial::monomial(gamma.clone(), 1.0)).unwrap();
                        let extracted = image.coefficient(&gamma);
                        let closed = leading_constant(&t, &gamma).unwrap();
                        assert_eq!(extracted, closed, "m={m} t={:?} γ={gamma}", t.retention());
                    }
                }
            }
        }
    }

    #[test]
    fn solve_examples() {
        let t1 = term(1, vec![1]);
        let one = Polynomial::constant(1, 1.0);
        assert_eq!(solve(&t1, &one).unwrap(), one);

        let x = Polynomial::variable(1, 0).unwrap();
        assert_eq!(solve(&t1, &x).unwrap(), x.scale(0.5));

        let t0 = term(1, vec![0]);
        assert_eq!(solve(&t0, &one).unwrap(), Polynomial::constant(1, -1.0));
    }

    #[test]
    fn solve_zero() {
        let t = term(2, vec![1, 2]);
        assert!(solve(&t, &Polynomial::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dim in 1..=2usize {
            for m in 1..=2 {
                for t in enumerate_sigma(m, dim).unwrap() {
                    for _ in 0..5 {
                        let q =
                            crate::polyalgebra::random_polynomial(&mut rng, dim, 8, 1.0);
                        let p = solve(&t, &q).unwrap();
                        // solve verifies its own residual; check degree too
                        assert!(p.per_axis_degrees().le_componentwise(&q.per_axis_degrees()));
                        let r = apply_dbeta_w(&t, &p).unwrap().sub(&q).unwrap();
                        assert!(r.max_abs_coeff() <= 1e-8 * q.max_abs_coeff().max(1e-30));
                    }
                }
            }
        }
    }

    #[test]
    fn solve_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = term(2, vec![1, 0]);
        let q1 = crate::polyalgebra::random_polynomial(&mut rng, 2, 6, 1.0);
        let q2 = crate::polyalgebra::random_polynomial(&mut rng, 2, 6, 1.0);
        let (a, b) = (2.25, -0.75);
        let combo = q1.scale(a).add(&q2.scale(b)).unwrap();
        let lhs = solve(&t, &combo).unwrap();
        let rhs = solve(&t, &q1)
            .unwrap()
            .scale(a)
            .add(&solve(&t, &q2).unwrap().scale(b))
            .unwrap();
        let diff = lhs.sub(&rhs).unwrap().max_abs_coeff();
        let scale = lhs.max_abs_coeff().max(1e-30);
        assert!(diff / scale <= 1e-9, "relative deviation {}", diff / scale);
    }
}
