//! Dilation and compact-kernel smoothing: turn an oracle with m continuous
//! derivatives into an approximate oracle of higher order.
//!
//! The dilation x → (1−1/(n+1))x shrinks the cube into itself, buying a
//! margin of 1/(2(n+1)) at the far faces; convolution with the polynomial
//! bump Ψ(r) = c_s(1−r²)^s (support in the unit ball, C^{s−1} at its
//! boundary) then supplies derivatives the original oracle lacks: orders up
//! to the oracle's budget fall on the data, anything beyond falls on the
//! kernel. The kernel scale λ must respect λ ≥ 2(n+1) so the mollification
//! radius 1/λ stays inside the dilation margin.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::oracle::{DerivativeOracle, OracleHandle};
use crate::polyalgebra::{combin::factorial, MultiIndex, Polynomial};
use crate::quadrature::ball_rule;

/// Radially symmetric polynomial bump: Ψ(r) = c_s·(1−r²)^s for r < 1,
/// zero outside, normalized so ∫_{R^N} Ψ(|x|) dx = 1.
#[derive(Debug, Clone)]
pub struct BumpKernel {
    smoothness: u32,
    dimension: usize,
    normalization: f64,
}

impl BumpKernel {
    pub fn new(smoothness: u32, dimension: usize) -> Result<Self> {
        if smoothness < 1 {
            return Err(Error::InvalidConfig(
                "kernel smoothness exponent must be at least 1".into(),
            ));
        }
        if !(1..=3).contains(&dimension) {
            return Err(Error::InvalidConfig(format!(
                "kernel supports dimensions 1-3, got {dimension}"
            )));
        }
        Ok(BumpKernel {
            smoothness,
            dimension,
            normalization: 1.0 / unit_profile_integral(dimension, smoothness),
        })
    }

    /// The kernel the C^{mN}-density step calls for: s = mN − m + 1, the
    /// minimal exponent whose C^{mN−m} profile supplies the missing orders.
    pub fn for_target(m: u32, dimension: usize) -> Result<Self> {
        Self::new(m * dimension as u32 - m + 1, dimension)
    }

    pub fn smoothness(&self) -> u32 {
        self.smoothness
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Radial profile Ψ(r).
    pub fn profile(&self, r: f64) -> f64 {
        if r.abs() >= 1.0 {
            return 0.0;
        }
        self.normalization * (1.0 - r * r).powi(self.smoothness as i32)
    }

    /// The profile c_s(1−r²)^s as a univariate polynomial in r (valid on
    /// |r| ≤ 1), for boundary-smoothness checks.
    pub fn profile_polynomial(&self) -> Polynomial {
        let r2 = Polynomial::variable(1, 0).unwrap().pow(2);
        Polynomial::constant(1, 1.0)
            .sub(&r2)
            .unwrap()
            .pow(self.smoothness)
            .scale(self.normalization)
    }

    /// The scaled kernel Ψ_λ(y) = λ^N·c_s·(1−λ²|y|²)^s as a polynomial in
    /// the N Cartesian coordinates (valid inside the support ball |y| ≤ 1/λ).
    pub fn cartesian_polynomial(&self, lambda: f64) -> Polynomial {
        let dim = self.dimension;
        let mut radius2 = Polynomial::zero(dim);
        for axis in 0..dim {
            let x = Polynomial::variable(dim, axis).unwrap();
            radius2 = radius2.add(&x.pow(2)).unwrap();
        }
        Polynomial::constant(dim, 1.0)
            .sub(&radius2.scale(lambda * lambda))
            .unwrap()
            .pow(self.smoothness)
            .scale(self.normalization * lambda.powi(dim as i32))
    }
}

/// ∫_{R^N} (1−|x|²)_+^s dx = π^{N/2}·s!/Γ(s+1+N/2), in exact factorial form.
fn unit_profile_integral(dimension: usize, s: u32) -> f64 {
    use std::f64::consts::PI;
    match dimension {
        2 => PI / (s as f64 + 1.0),
        d if d % 2 == 1 => {
            // Γ(s+1+N/2) = Γ(k+1/2) with k = s+(N+1)/2
            let k = s + (d as u32).div_ceil(2);
            let pow4k = 4.0_f64.powi(k as i32);
            PI.powi(((d - 1) / 2) as i32) * factorial(s) * pow4k * factorial(k)
                / factorial(2 * k)
        }
        d => PI.powi((d / 2) as i32) * factorial(s) / factorial(s + d as u32 / 2),
    }
}

/// Dilation step n (factor 1−1/(n+1)), kernel scale λ, and quadrature
/// resolution for the convolution integral.
#[derive(Debug, Clone, Copy)]
pub struct MollifierConfig {
    step: u32,
    scale: f64,
    quad_nodes: usize,
}

impl MollifierConfig {
    /// Default: the tightest scale meeting the margin, λ = 2(n+1),
    /// with 24 quadrature nodes per axis.
    pub fn new(step: u32) -> Result<Self> {
        if step < 1 {
            return Err(Error::InvalidConfig(
                "dilation step must be positive".into(),
            ));
        }
        Ok(MollifierConfig {
            step,
            scale: 2.0 * (step as f64 + 1.0),
            quad_nodes: 24,
        })
    }

    /// Override the kernel scale; λ ≥ 2(n+1) keeps the mollification radius
    /// 1/λ inside the dilation margin 1/(2(n+1)).
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        let required = 2.0 * (self.step as f64 + 1.0);
        if scale < required {
            return Err(Error::MarginViolated { scale, required });
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn with_quad_nodes(mut self, quad_nodes: usize) -> Result<Self> {
        if quad_nodes < 2 {
            return Err(Error::InvalidConfig(
                "quadrature needs at least 2 nodes per axis".into(),
            ));
        }
        self.quad_nodes = quad_nodes;
        Ok(self)
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn quad_nodes(&self) -> usize {
        self.quad_nodes
    }

    /// 1 − 1/(n+1).
    pub fn dilation_factor(&self) -> f64 {
        1.0 - 1.0 / (self.step as f64 + 1.0)
    }

    /// Mollification radius 1/λ.
    pub fn radius(&self) -> f64 {
        1.0 / self.scale
    }
}

/// The dilated oracle ũ with ũ(γ, x) = ρ^{|γ|}·u(γ, ρx), ρ = 1−1/(n+1).
/// Pre-images of [0,1]^N plus a mollification collar stay inside the
/// domain where the built-in oracles are defined.
pub struct DilatedOracle {
    inner: OracleHandle,
    factor: f64,
}

pub fn dilate(u: OracleHandle, step: u32) -> DilatedOracle {
    DilatedOracle {
        inner: u,
        factor: 1.0 - 1.0 / (step as f64 + 1.0),
    }
}

impl DerivativeOracle for DilatedOracle {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn max_order(&self) -> u32 {
        self.inner.max_order()
    }

    fn eval(&self, gamma: &MultiIndex, x: &[f64]) -> f64 {
        let scaled: Vec<f64> = x.iter().map(|&xi| self.factor * xi).collect();
        self.factor.powi(gamma.total_degree() as i32) * self.inner.eval(gamma, &scaled)
    }

    fn name(&self) -> &str {
        "dilated"
    }
}

/// Mollified oracle v ≈ Ψ_λ * ũ with derivatives split between data and
/// kernel: v(γ, x) = Σ_q w_q·(D^{γ'}Ψ_λ)(y_q)·ũ(γ'', x−y_q) where γ = γ'+γ''
/// and |γ''| ≤ budget is maximal. Values are cached on demand.
pub struct SmoothedOracle {
    dilated: DilatedOracle,
    kernel_poly: Polynomial,
    rule: Vec<(Vec<f64>, f64)>,
    budget: u32,
    target_order: u32,
    kernel_derivatives: Mutex<HashMap<MultiIndex, Arc<Polynomial>>>,
    values: Mutex<HashMap<(MultiIndex, Vec<u64>), f64>>,
}

/// Smooth a dilated copy of `u` up to `target_order` total derivatives.
///
/// `budget` is the derivative order trusted to the data oracle (the m of
/// "u has m continuous derivatives"); orders beyond it fall on the kernel,
/// which caps target_order at budget + s − 1.
pub fn smooth(
    u: OracleHandle,
    kernel: &BumpKernel,
    cfg: &MollifierConfig,
    target_order: u32,
    budget: u32,
) -> Result<SmoothedOracle> {
    if u.dimension() != kernel.dimension() {
        return Err(Error::DimensionMismatch {
            expected: kernel.dimension(),
            found: u.dimension(),
        });
    }
    if budget > u.max_order() {
        return Err(Error::OracleOrderInsufficient {
            required: budget,
            available: u.max_order(),
        });
    }
    let capacity = budget + kernel.smoothness() - 1;
    if target_order > capacity {
        return Err(Error::KernelCapacity {
            target: target_order,
            capacity,
        });
    }
    let dimension = u.dimension();
    Ok(SmoothedOracle {
        dilated: dilate(u, cfg.step()),
        kernel_poly: kernel.cartesian_polynomial(cfg.scale()),
        rule: ball_rule(dimension, cfg.radius(), cfg.quad_nodes()),
        budget,
        target_order,
        kernel_derivatives: Mutex::new(HashMap::new()),
        values: Mutex::new(HashMap::new()),
    })
}

impl SmoothedOracle {
    /// Greedy split γ = γ' + γ'' with |γ''| ≤ budget maximal.
    fn split(&self, gamma: &MultiIndex) -> (MultiIndex, MultiIndex) {
        let mut remaining = self.budget;
        let mut on_data = Vec::with_capacity(gamma.dimension());
        for &g in gamma.orders() {
            let take = g.min(remaining);
            on_data.push(take);
            remaining -= take;
        }
        let on_data = MultiIndex::new(on_data);
        let on_kernel = gamma.checked_sub(&on_data).expect("split is componentwise");
        (on_kernel, on_data)
    }

    fn kernel_derivative(&self, gamma: &MultiIndex) -> Arc<Polynomial> {
        let mut cache = self.kernel_derivatives.lock().expect("not poisoned");
        cache
            .entry(gamma.clone())
            .or_insert_with(|| {
                Arc::new(
                    self.kernel_poly
                        .differentiate(gamma)
                        .expect("dimension matches"),
                )
            })
            .clone()
    }

    fn compute(&self, gamma: &MultiIndex, x: &[f64]) -> f64 {
        let (on_kernel, on_data) = self.split(gamma);
        let dpsi = self.kernel_derivative(&on_kernel);
        let mut acc = 0.0;
        let mut shifted = vec![0.0; x.len()];
        for (y, w) in &self.rule {
            for i in 0..x.len() {
                shifted[i] = x[i] - y[i];
            }
            acc += w * dpsi.evaluate(y).expect("dimension matches")
                * self.dilated.eval(&on_data, &shifted);
        }
        acc
    }
}

impl DerivativeOracle for SmoothedOracle {
    fn dimension(&self) -> usize {
        self.dilated.dimension()
    }

    fn max_order(&self) -> u32 {
        self.target_order
    }

    fn eval(&self, gamma: &MultiIndex, x: &[f64]) -> f64 {
        let key = (gamma.clone(), x.iter().map(|v| v.to_bits()).collect());
        if let Some(&v) = self.values.lock().expect("not poisoned").get(&key) {
            return v;
        }
        let v = self.compute(gamma, x);
        self.values.lock().expect("not poisoned").insert(key, v);
        v
    }

    fn name(&self) -> &str {
        "smoothed"
    }
}

/// W^{m,∞}-style grid distance between two oracles:
/// max over |α| ≤ m of the grid sup of |a − b|.
pub fn wm_inf_distance(
    a: &dyn DerivativeOracle,
    b: &dyn DerivativeOracle,
    m: u32,
    grid: &GridSpec,
) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            expected: a.dimension(),
            found: b.dimension(),
        });
    }
    let dim = a.dimension();
    let mut worst = 0.0_f64;
    for alpha in crate::polyalgebra::cube_iter(dim, m) {
        if alpha.total_degree() > m {
            continue;
        }
        let sup = grid.sup(dim, |x| a.eval(&alpha, x) - b.eval(&alpha, x));
        worst = worst.max(sup);
    }
    Ok(worst)
}
