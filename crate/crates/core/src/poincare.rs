//! Numerical verification of the Poincaré inequalities the construction
//! leans on, with empirical constant estimation.
//!
//! Three statements are checked on the unit cube: the order-one inequality
//! ‖u‖_p ≤ ‖D₁u‖_p under a vanishing trace on {x₁=0} (constant 1), the
//! standard inequality Σ_{|α|<m}‖D^αu‖ ≤ A‖∇^m u‖ for boundary-flat u, and
//! the detailed chain version ‖D^α u‖_p ≤ A‖D^β u‖_p under per-link face
//! traces. Inequalities are tested, not proved: both sides are quadrature /
//! grid values, so equality cases carry a (1+1e-6) tolerance factor.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::{weighted_points, GridSpec};
use crate::oracle::DerivativeOracle;
use crate::polyalgebra::{cube_iter, MultiIndex};

/// Which L^p norm a check runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    pub fn label(&self) -> &'static str {
        match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::LInf => "inf",
        }
    }
}

/// Tolerance factor guarding equality cases of the tested inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-6;

/// Traces must vanish to this absolute tolerance on grid nodes.
pub const TRACE_TOLERANCE: f64 = 1e-10;

/// L^p norm of f over the cube: grid max for p=∞, tensor trapezoidal
/// quadrature of |f|^p followed by the p-th root otherwise.
pub fn lp_norm<F>(f: F, dimension: usize, p: Norm, grid: &GridSpec) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    match p {
        Norm::LInf => grid.sup(dimension, f),
        Norm::L1 => weighted_points(grid, dimension)
            .iter()
            .map(|(x, w)| w * f(x).abs())
            .sum(),
        Norm::L2 => weighted_points(grid, dimension)
            .iter()
            .map(|(x, w)| w * f(x) * f(x))
            .sum::<f64>()
            .sqrt(),
    }
}

/// A cube face {x_axis = 0} or {x_axis = 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Zero,
    One,
}

impl Face {
    pub fn value(&self) -> f64 {
        match self {
            Face::Zero => 0.0,
            Face::One => 1.0,
        }
    }
}

/// Points of the grid restricted to one face.
fn face_points(grid: &GridSpec, dimension: usize, axis: usize, face: Face) -> Vec<Vec<f64>> {
    grid.points(dimension - 1)
        .map(|line| {
            let mut point = Vec::with_capacity(dimension);
            let mut rest = line.into_iter();
            for a in 0..dimension {
                if a == axis {
                    point.push(face.value());
                } else {
                    point.push(rest.next().expect("line has dimension-1 entries"));
                }
            }
            point
        })
        .collect()
}

fn verify_face_trace(
    u: &dyn DerivativeOracle,
    gamma: &MultiIndex,
    axis: usize,
    face: Face,
    grid: &GridSpec,
    context: &str,
) -> Result<()> {
    for point in face_points(grid, u.dimension(), axis, face) {
        let value = u.eval(gamma, &point);
        if value.abs() > TRACE_TOLERANCE {
            return Err(Error::TraceViolation {
                face: format!("{context} D^{gamma}u on x_{}={}", axis + 1, face.value()),
                node: point,
                value,
            });
        }
    }
    Ok(())
}

/// Outcome of the order-one check: both norms and whether
/// lhs ≤ rhs·(1+slack) held.
#[derive(Debug, Clone, Copy)]
pub struct OrderOneOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The order-one inequality ‖u‖_p ≤ ‖D₁u‖_p for u vanishing on {x₁=0}.
/// The trace precondition is verified on grid nodes before the norms are
/// compared; a violation is rejected with the offending node.
pub fn check_order_one(
    u: &dyn DerivativeOracle,
    p: Norm,
    grid: &GridSpec,
) -> Result<OrderOneOutcome> {
    let dim = u.dimension();
    let zero = MultiIndex::zero(dim);
    verify_face_trace(u, &zero, 0, Face::Zero, grid, "order-one:")?;
    let d1 = MultiIndex::unit(dim, 0);
    let lhs = lp_norm(|x: &[f64]| u.eval(&zero, x), dim, p, grid);
    let rhs = lp_norm(|x: &[f64]| u.eval(&d1, x), dim, p, grid);
    Ok(OrderOneOutcome {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + INEQUALITY_SLACK),
    })
}

/// An increasing chain γ_t < γ_{t+1} < ... < γ_m of multi-indices, each step
/// a unit increment on one axis, with a declared face per link. The trace
/// condition of link k is that D^{γ_k}u (the lower end of the link) vanishes
/// on the declared face of the link's axis.
#[derive(Debug, Clone)]
pub struct TraceChain {
    start: MultiIndex,
    links: Vec<(usize, Face)>,
}

impl TraceChain {
    pub fn new(start: MultiIndex, links: Vec<(usize, Face)>) -> Result<Self> {
        let dim = start.dimension();
        if links.is_empty() {
            return Err(Error::InvalidConfig("trace chain needs at least one link".into()));
        }
        if let Some((axis, _)) = links.iter().find(|(axis, _)| *axis >= dim) {
            return Err(Error::AxisOutOfRange {
                axis: *axis,
                dimension: dim,
            });
        }
        Ok(TraceChain { start, links })
    }

    pub fn start(&self) -> &MultiIndex {
        &self.start
    }

    pub fn links(&self) -> &[(usize, Face)] {
        &self.links
    }

    /// γ_t, γ_{t+1}, ..., γ_m.
    pub fn indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![self.start.clone()];
        for (axis, _) in &self.links {
            out.push(out.last().expect("nonempty").bump(*axis));
        }
        out
    }

    pub fn end(&self) -> MultiIndex {
        self.indices().pop().expect("nonempty")
    }
}

/// Result of one detailed-inequality evaluation.
#[derive(Debug, Clone, Copy)]
pub enum DetailedOutcome {
    Ratio {
        lhs: f64,
        rhs: f64,
        ratio: f64,
        /// Running maximum ratio seen for this (N, m, t, p) configuration:
        /// the empirical constant A.
        running_max: f64,
    },
    /// Both norms vanish (u ≡ 0 on the relevant derivatives).
    Degenerate { lhs: f64, rhs: f64 },
}

/// Accumulates empirical constants across detailed-inequality runs,
/// keyed by (N, m, t, p).
#[derive(Debug, Default)]
pub struct PoincareChecker {
    running: HashMap<(usize, u32, u32, Norm), f64>,
}

impl PoincareChecker {
    pub fn new() -> Self {
        Self::default()
    }

    /// The detailed inequality ‖D^{γ_t}u‖_p ≤ A·‖D^{γ_m}u‖_p under the
    /// chain's face traces. Preconditions are verified per link (identifying
    /// the link and face on failure); the returned running maximum is the
    /// empirical A for this configuration.
    pub fn check_detailed(
        &mut self,
        u: &dyn DerivativeOracle,
        chain: &TraceChain,
        p: Norm,
        grid: &GridSpec,
    ) -> Result<DetailedOutcome> {
        let dim = u.dimension();
        if chain.start().dimension() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: chain.start().dimension(),
            });
        }
        let indices = chain.indices();
        for (k, (axis, face)) in chain.links().iter().enumerate() {
            let context = format!("detailed link {k}:");
            verify_face_trace(u, &indices[k], *axis, *face, grid, &context)?;
        }

        let start = &indices[0];
        let end = indices.last().expect("nonempty");
        let lhs = lp_norm(|x: &[f64]| u.eval(start, x), dim, p, grid);
        let rhs = lp_norm(|x: &[f64]| u.eval(end, x), dim, p, grid);
        if rhs == 0.0 {
            return Ok(DetailedOutcome::Degenerate { lhs, rhs });
        }
        let ratio = lhs / rhs;
        let key = (dim, end.total_degree(), start.total_degree(), p);
        let running = self.running.entry(key).or_insert(0.0);
        *running = running.max(ratio);
        Ok(DetailedOutcome::Ratio {
            lhs,
            rhs,
            ratio,
            running_max: *running,
        })
    }
}

/// The trace chain automatically satisfied by u = w_k·q for a σ-weight with
/// retention k of order m: on axis j the first k_j steps may use the 0-face
/// (where the factor x_j^{k_j} keeps derivatives of lower order at zero) and
/// the next m−k_j steps the 1-face. Axes are consumed in order; the chain
/// starts after `start_order` steps and runs to the end of the available
/// path. `None` when no links remain past the requested start.
pub fn sigma_weight_chain(
    retention: &MultiIndex,
    m: u32,
    start_order: u32,
) -> Option<TraceChain> {
    let dim = retention.dimension();
    let mut steps: Vec<(usize, Face)> = Vec::new();
    for axis in 0..dim {
        let k = retention.order(axis);
        for r in 0..k.max(m - k) {
            steps.push((axis, if r < k { Face::Zero } else { Face::One }));
        }
    }
    let start_order = start_order as usize;
    if start_order >= steps.len() {
        return None;
    }
    let mut start = MultiIndex::zero(dim);
    for (axis, _) in &steps[..start_order] {
        start = start.bump(*axis);
    }
    TraceChain::new(start, steps[start_order..].to_vec()).ok()
}

/// Result of the standard-inequality check.
#[derive(Debug, Clone, Copy)]
pub struct StandardOutcome {
    /// Σ_{|α|<m} ‖D^α u‖_p.
    pub lhs: f64,
    /// Σ_{|α|=m} ‖D^α u‖_p.
    pub rhs: f64,
    /// lhs/rhs, `None` when the m-th order norms vanish (degenerate input).
    pub ratio: Option<f64>,
}

/// The standard inequality for u vanishing with all derivatives of order
/// < m on the whole boundary: reports Σ_{|α|<m}‖D^αu‖_p against
/// Σ_{|α|=m}‖D^αu‖_p and their ratio.
pub fn check_standard(
    u: &dyn DerivativeOracle,
    m: u32,
    p: Norm,
    grid: &GridSpec,
) -> Result<StandardOutcome> {
    let dim = u.dimension();
    // boundary-vanishing precondition for every derivative of order < m
    for alpha in cube_iter(dim, m.saturating_sub(1)) {
        if alpha.total_degree() >= m {
            continue;
        }
        for axis in 0..dim {
            for face in [Face::Zero, Face::One] {
                verify_face_trace(u, &alpha, axis, face, grid, "standard:")?;
            }
        }
    }

    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for alpha in cube_iter(dim, m) {
        let order = alpha.total_degree();
        if order > m {
            continue;
        }
        let norm = lp_norm(|x: &[f64]| u.eval(&alpha, x), dim, p, grid);
        if order < m {
            lhs += norm;
        } else {
            rhs += norm;
        }
    }
    let ratio = (rhs > 0.0).then_some(lhs / rhs);
    Ok(StandardOutcome { lhs, rhs, ratio })
}
