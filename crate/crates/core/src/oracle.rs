//! Derivative oracles: evaluatable functions u together with evaluatable
//! D^γ u up to a declared order.
//!
//! The pipeline consumes exact derivatives rather than finite differences
//! (mixed partials of order N·m are numerically hopeless to difference), so
//! test functions ship with closed-form mixed partials. Built-ins are defined
//! on all of R^N; the mollifier relies on evaluating slightly outside the
//! cube near its boundary.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyalgebra::{MultiIndex, Polynomial};

/// An evaluatable function with evaluatable mixed partials.
///
/// `eval(γ, x)` returns D^γ u(x); `γ = 0` is the function value. Mixed
/// partials are symmetric by construction (one value per γ). Implementations
/// must be pure: the pipeline calls them from concurrent workers.
pub trait DerivativeOracle: Send + Sync {
    fn dimension(&self) -> usize;

    /// Largest total derivative order |γ| this oracle can supply.
    fn max_order(&self) -> u32;

    fn eval(&self, gamma: &MultiIndex, x: &[f64]) -> f64;

    fn name(&self) -> &str {
        "oracle"
    }
}

/// Check that `oracle` can serve every γ ≤ β for β = (m,...,m).
pub fn require_order(oracle: &dyn DerivativeOracle, total_order: u32) -> Result<()> {
    if oracle.max_order() < total_order {
        return Err(Error::OracleOrderInsufficient {
            required: total_order,
            available: oracle.max_order(),
        });
    }
    Ok(())
}

/// A polynomial as its own derivative oracle (symbolic differentiation).
#[derive(Clone)]
pub struct PolynomialOracle {
    poly: Polynomial,
}

impl PolynomialOracle {
    pub fn new(poly: Polynomial) -> Self {
        PolynomialOracle { poly }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }
}

impl DerivativeOracle for PolynomialOracle {
    fn dimension(&self) -> usize {
        self.poly.dimension()
    }

    fn max_order(&self) -> u32 {
        u32::MAX
    }

    fn eval(&self, gamma: &MultiIndex, x: &[f64]) -> f64 {
        self.poly
            .differentiate(gamma)
            .and_then(|d| d.evaluate(x))
            .expect("dimensions agree")
    }

    fn name(&self) -> &str {
        "polynomial"
    }
}

/// Built-in closed-form test functions.
///
/// Every variant supplies exact mixed partials; all but `Kink` support any
/// order. `Kink` is the limited-smoothness specimen |Σx_j − 0.4|^{5/2},
/// which has continuous derivatives up to total order 2 and no more.
#[derive(Clone)]
pub enum BuiltinOracle {
    /// u ≡ 0.
    Zero { dimension: usize },
    /// u ≡ 1.
    One { dimension: usize },
    /// u = x₁.
    X1 { dimension: usize },
    /// u = Π_j x_j.
    XProd { dimension: usize },
    /// u = exp(Σ_j x_j).
    ExpSum { dimension: usize },
    /// u = sin(π Σ_j x_j / 2).
    SinSum { dimension: usize },
    /// u = Π_j sin(π x_j).
    SinProd { dimension: usize },
    /// u = |Σ_j x_j − 0.4|^{5/2}: C² but not C³ across the kink hyperplane.
    Kink { dimension: usize },
}

impl BuiltinOracle {
    /// Look up a built-in by its CLI name.
    pub fn by_name(name: &str, dimension: usize) -> Result<Self> {
        let o = match name {
            "zero" => BuiltinOracle::Zero { dimension },
            "one" => BuiltinOracle::One { dimension },
            "x1" => BuiltinOracle::X1 { dimension },
            "xprod" => BuiltinOracle::XProd { dimension },
            "exp-sum" => BuiltinOracle::ExpSum { dimension },
            "sin-sum" => BuiltinOracle::SinSum { dimension },
            "sin-prod" => BuiltinOracle::SinProd { dimension },
            "kink" => BuiltinOracle::Kink { dimension },
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown test function '{other}' (known: {})",
                    Self::names().join(", ")
                )))
            }
        };
        Ok(o)
    }

    pub fn names() -> Vec<&'static str> {
        vec![
            "zero", "one", "x1", "xprod", "exp-sum", "sin-sum", "sin-prod", "kink",
        ]
    }
}

impl DerivativeOracle for BuiltinOracle {
    fn dimension(&self) -> usize {
        match self {
            BuiltinOracle::Zero { dimension }
            | BuiltinOracle::One { dimension }
            | BuiltinOracle::X1 { dimension }
            | BuiltinOracle::XProd { dimension }
            | BuiltinOracle::ExpSum { dimension }
            | BuiltinOracle::SinSum { dimension }
            | BuiltinOracle::SinProd { dimension }
            | BuiltinOracle::Kink { dimension } => *dimension,
        }
    }

    fn max_order(&self) -> u32 {
        match self {
            BuiltinOracle::Kink { .. } => 2,
            _ => u32::MAX,
        }
    }

    fn eval(&self, gamma: &MultiIndex, x: &[f64]) -> f64 {
        match self {
            BuiltinOracle::Zero { .. } => 0.0,
            BuiltinOracle::One { .. } => {
                if gamma.is_zero() {
                    1.0
                } else {
                    0.0
                }
            }
            BuiltinOracle::X1 { .. } => {
                let g1 = gamma.order(0);
                let rest_zero = gamma.orders()[1..].iter().all(|&g| g == 0);
                match (g1, rest_zero) {
                    (0, true) => x[0],
                    (1, true) => 1.0,
                    _ => 0.0,
                }
            }
            BuiltinOracle::XProd { .. } => {
                let mut v = 1.0;
                for (&g, &xi) in gamma.orders().iter().zip(x) {
                    match g {
                        0 => v *= xi,
                        1 => {}
                        _ => return 0.0,
                    }
                }
                v
            }
            BuiltinOracle::ExpSum { .. } => x.iter().sum::<f64>().exp(),
            BuiltinOracle::SinSum { .. } => {
                // D^γ sin(πs/2) = (π/2)^{|γ|} sin(πs/2 + |γ|π/2)
                let s: f64 = x.iter().sum();
                let k = gamma.total_degree();
                (PI / 2.0).powi(k as i32) * (PI * s / 2.0 + k as f64 * PI / 2.0).sin()
            }
            BuiltinOracle::SinProd { .. } => {
                let mut v = 1.0;
                for (&g, &xi) in gamma.orders().iter().zip(x) {
                    v *= PI.powi(g as i32) * (PI * xi + g as f64 * PI / 2.0).sin();
                }
                v
            }
            BuiltinOracle::Kink { .. } => {
                // directional profile g(t) = |t|^{5/2} along s = Σx_j − 0.4
                let t: f64 = x.iter().sum::<f64>() - 0.4;
                match gamma.total_degree() {
                    0 => t.abs().powf(2.5),
                    1 => 2.5 * t.signum() * t.abs().powf(1.5),
                    2 => 3.75 * t.abs().sqrt(),
                    _ => f64::NAN, // beyond the declared order
                }
            }
        }
    }

    fn name(&self) -> &str {
        match self {
            BuiltinOracle::Zero { .. } => "zero",
            BuiltinOracle::One { .. } => "one",
            BuiltinOracle::X1 { .. } => "x1",
            BuiltinOracle::XProd { .. } => "xprod",
            BuiltinOracle::ExpSum { .. } => "exp-sum",
            BuiltinOracle::SinSum { .. } => "sin-sum",
            BuiltinOracle::SinProd { .. } => "sin-prod",
            BuiltinOracle::Kink { .. } => "kink",
        }
    }
}

/// Shared-ownership oracle handle used across pipeline stages.
pub type OracleHandle = Arc<dyn DerivativeOracle>;
