//! The end-to-end pipeline: from a derivative oracle u to one polynomial
//! P = Σ_σ mult(σ)·w_σ·P_σ whose derivatives approximate those of u
//! simultaneously, plus grid error reporting.
//!
//! Per σ-term the stages are independent: form g_σ = D^β[w_σ·u] by Leibniz
//! (polynomial factors differentiated exactly, u-derivatives from the
//! oracle), Bernstein-approximate g_σ, solve D^β[w_σ·P_σ] = Q_σ, and weigh
//! the solutions back together with the partition identity. Stages run on
//! concurrent workers with a deterministic assembly order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernstein::{bernstein_approximate, sup_error, BernsteinDegree};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::oracle::{require_order, DerivativeOracle, OracleHandle};
use crate::polyalgebra::{combin::binomial_f64, cube_iter, MultiIndex, Polynomial};
use crate::sigma::{enumerate_sigma, weight_polynomial, SigmaTerm};
use crate::solver::solve;

/// Pipeline configuration: target derivative order m, dimension N,
/// Bernstein degree, and the error-report grid.
#[derive(Debug, Clone, Copy)]
pub struct ApproxConfig {
    m: u32,
    dimension: usize,
    degree: BernsteinDegree,
    grid: GridSpec,
}

impl ApproxConfig {
    pub fn new(m: u32, dimension: usize, degree: BernsteinDegree, grid: GridSpec) -> Result<Self> {
        if m < 1 || dimension < 1 {
            return Err(Error::InvalidConfig(format!(
                "order and dimension must be positive, got m={m}, N={dimension}"
            )));
        }
        Ok(ApproxConfig {
            m,
            dimension,
            degree,
            grid,
        })
    }

    /// Default error-report grid: 101 nodes per axis for N ≤ 2, 21 for N = 3.
    pub fn default_grid(dimension: usize) -> GridSpec {
        let nodes = if dimension <= 2 { 101 } else { 21 };
        GridSpec::new(nodes).expect("valid node count")
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> BernsteinDegree {
        self.degree
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }
}

/// Grid sup error of D^α(u−P) for one multi-index α.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaError {
    pub alpha: Vec<u32>,
    pub sup_error: f64,
}

/// Per-σ diagnostics: how well the Bernstein stage matched g_σ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaDiagnostic {
    pub retention: Vec<u32>,
    pub multiplicity: u64,
    pub bernstein_error: f64,
}

/// Per-multi-index sup-norm errors of D^α(u−P) over a grid, together with
/// the per-σ Bernstein errors. Grid maxima are lower bounds of the true sup
/// norms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub alpha_errors: Vec<AlphaError>,
    pub sigma: Vec<SigmaDiagnostic>,
}

impl ErrorReport {
    /// max over |α| ≤ m of the reported sup errors.
    pub fn max_alpha_error(&self) -> f64 {
        self.alpha_errors
            .iter()
            .fold(0.0_f64, |m, e| m.max(e.sup_error))
    }

    /// max over σ of ‖g_σ − Q_σ‖ on the grid.
    pub fn max_sigma_error(&self) -> f64 {
        self.sigma
            .iter()
            .fold(0.0_f64, |m, s| m.max(s.bernstein_error))
    }

    /// The observed constant of the final inequality chain:
    /// max_α error / max_σ Bernstein error. `None` when degenerate.
    pub fn domination_ratio(&self) -> Option<f64> {
        let den = self.max_sigma_error();
        (den > 0.0).then(|| self.max_alpha_error() / den)
    }
}

/// The function g_σ = D^β[σ(x^β)·u] as an evaluatable closure:
/// x ↦ Σ_{γ≤β} Π_j C(m,γ_j) · (D^γ w_σ)(x) · u.eval(β−γ, x).
pub fn g_sigma(term: &SigmaTerm, u: OracleHandle) -> Result<impl Fn(&[f64]) -> f64 + Send + Sync> {
    if u.dimension() != term.dimension() {
        return Err(Error::DimensionMismatch {
            expected: term.dimension(),
            found: u.dimension(),
        });
    }
    require_order(u.as_ref(), term.beta().total_degree())?;

    let m = term.order();
    let beta = term.beta();
    let w = weight_polynomial(term);
    // Leibniz expansion: exact derivatives of the weight, oracle derivatives of u
    let mut parts: Vec<(f64, Polynomial, MultiIndex)> = Vec::new();
    for gamma in cube_iter(term.dimension(), m) {
        let coeff: f64 = gamma.orders().iter().map(|&g| binomial_f64(m, g)).product();
        let dw = w.differentiate(&gamma)?;
        if dw.is_zero() {
            continue;
        }
        let remaining = beta.checked_sub(&gamma).expect("gamma ≤ beta");
        parts.push((coeff, dw, remaining));
    }
    Ok(move |x: &[f64]| {
        parts
            .iter()
            .map(|(c, dw, rem)| {
                c * dw.evaluate(x).expect("dimension matches") * u.eval(rem, x)
            })
            .sum()
    })
}

/// Run the full pipeline: P = Σ_σ mult(σ)·w_σ·solve(σ, B_n[g_σ]) and the
/// associated error report. Stage failures identify the offending σ-term.
pub fn approximate(u: OracleHandle, cfg: &ApproxConfig) -> Result<(Polynomial, ErrorReport)> {
    if u.dimension() != cfg.dimension {
        return Err(Error::DimensionMismatch {
            expected: cfg.dimension,
            found: u.dimension(),
        });
    }
    require_order(u.as_ref(), cfg.m * cfg.dimension as u32)?;

    let terms = enumerate_sigma(cfg.m, cfg.dimension)?;
    let staged: Vec<Result<(Polynomial, SigmaDiagnostic)>> = terms
        .par_iter()
        .map(|t| sigma_stage(t, u.clone(), cfg))
        .collect();

    let mut p = Polynomial::zero(cfg.dimension);
    let mut diagnostics = Vec::with_capacity(staged.len());
    for stage in staged {
        let (contribution, diag) = stage?;
        p = p.add(&contribution)?;
        diagnostics.push(diag);
    }

    let alpha_errors = error_report(u.as_ref(), &p, cfg.m, &cfg.grid)?;
    Ok((
        p,
        ErrorReport {
            alpha_errors,
            sigma: diagnostics,
        },
    ))
}

fn sigma_stage(
    term: &SigmaTerm,
    u: OracleHandle,
    cfg: &ApproxConfig,
) -> Result<(Polynomial, SigmaDiagnostic)> {
    let tag = || format!("{}", term.retention());
    let wrap = |e: Error| Error::SigmaStage {
        retention: tag(),
        source: Box::new(e),
    };

    let g = g_sigma(term, u).map_err(wrap)?;
    let q = bernstein_approximate(&g, cfg.degree, cfg.dimension).map_err(wrap)?;
    let bernstein_error = sup_error(&g, &q, &cfg.grid);
    let p_sigma = solve(term, &q).map_err(wrap)?;
    let contribution = weight_polynomial(term)
        .mul(&p_sigma)
        .map(|wp| wp.scale(term.multiplicity() as f64))
        .map_err(wrap)?;
    Ok((
        contribution,
        SigmaDiagnostic {
            retention: term.retention().orders().to_vec(),
            multiplicity: term.multiplicity(),
            bernstein_error,
        },
    ))
}

/// Grid sup errors of D^α(u−P) for every |α| ≤ m, with D^α u from the oracle
/// and D^α P from exact polynomial differentiation.
pub fn error_report(
    u: &dyn DerivativeOracle,
    p: &Polynomial,
    m: u32,
    grid: &GridSpec,
) -> Result<Vec<AlphaError>> {
    if u.dimension() != p.dimension() {
        return Err(Error::DimensionMismatch {
            expected: p.dimension(),
            found: u.dimension(),
        });
    }
    require_order(u, m)?;
    let dim = p.dimension();
    let mut out = Vec::new();
    for alpha in cube_iter(dim, m) {
        if alpha.total_degree() > m {
            continue;
        }
        let dp = p.differentiate(&alpha)?;
        let points: Vec<Vec<f64>> = grid.points(dim).collect();
        let sup = points
            .par_iter()
            .map(|x| (u.eval(&alpha, x) - dp.evaluate(x).expect("dimension matches")).abs())
            .reduce(|| 0.0, f64::max);
        out.push(AlphaError {
            alpha: alpha.into_vec(),
            sup_error: sup,
        });
    }
    Ok(out)
}

/// The Bernstein-free path: with Q_σ taken as the exact polynomial
/// g_σ = D^β[w_σ·u] of a polynomial u, the σ-sum and the solver invert D^β
/// exactly, so the assembled P reproduces u up to round-off. This is the
/// identity-consistency route used to validate the assembly.
pub fn assemble_exact(u: &Polynomial, m: u32) -> Result<Polynomial> {
    let dim = u.dimension();
    let terms = enumerate_sigma(m, dim)?;
    let mut p = Polynomial::zero(dim);
    for t in &terms {
        let w = weight_polynomial(t);
        let g = w.mul(u)?.differentiate(&t.beta())?;
        let p_sigma = solve(t, &g)?;
        p = p.add(&w.mul(&p_sigma)?.scale(t.multiplicity() as f64))?;
    }
    Ok(p)
}
