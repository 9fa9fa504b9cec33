use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::combin::binomial_f64;
use super::multiindex::MultiIndex;
use crate::error::{Error, Result};

/// Coefficients whose magnitude falls below this fraction of the operand
/// scale are dropped when results are brought to canonical form. Exact
/// integer inputs stay exact through add/mul/differentiate.
pub const CANONICAL_RELATIVE_EPS: f64 = 1e-14;

/// Sparse multivariate polynomial over the reals in the monomial basis.
///
/// Terms map exponent multi-indices to nonzero coefficients; the map order
/// is graded lexicographic, so the last entry is the leading term.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dimension: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    /// The zero polynomial (empty term map).
    pub fn zero(dimension: usize) -> Self {
        Polynomial {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial c.
    pub fn constant(dimension: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(dimension);
        if c != 0.0 {
            p.terms.insert(MultiIndex::zero(dimension), c);
        }
        p
    }

    /// The coordinate polynomial x_axis.
    pub fn variable(dimension: usize, axis: usize) -> Result<Self> {
        if axis >= dimension {
            return Err(Error::AxisOutOfRange { axis, dimension });
        }
        Ok(Polynomial::monomial(MultiIndex::unit(dimension, axis), 1.0))
    }

    /// The single term c·x^exponent.
    pub fn monomial(exponent: MultiIndex, c: f64) -> Self {
        let mut p = Polynomial::zero(exponent.dimension());
        if c != 0.0 {
            p.terms.insert(exponent, c);
        }
        p
    }

    /// Build from raw (exponent, coefficient) pairs, summing duplicates and
    /// canonicalizing against the largest input coefficient.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        Self::from_terms_inner(dimension, terms, None)
    }

    /// Like [`Polynomial::from_terms`], but canonicalizes against an explicit
    /// operand scale instead of the largest input coefficient. Used when the
    /// coefficients come out of a cancellation-prone transform and the
    /// meaningful scale is that of the data the transform consumed.
    pub fn from_terms_with_scale<I>(dimension: usize, terms: I, scale: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        Self::from_terms_inner(dimension, terms, Some(scale))
    }

    fn from_terms_inner<I>(dimension: usize, terms: I, scale: Option<f64>) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut map: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        let mut max_in = 0.0_f64;
        for (exp, c) in terms {
            if exp.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: exp.dimension(),
                });
            }
            max_in = max_in.max(c.abs());
            *map.entry(exp).or_insert(0.0) += c;
        }
        let mut p = Polynomial {
            dimension,
            terms: map,
        };
        p.cleanup(scale.unwrap_or(max_in));
        Ok(p)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in graded-lex ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// Coefficient of x^exponent (0.0 when absent).
    pub fn coefficient(&self, exponent: &MultiIndex) -> f64 {
        self.terms.get(exponent).copied().unwrap_or(0.0)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&MultiIndex, f64)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Total degree of the polynomial; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Componentwise maximum exponent over all terms.
    pub fn per_axis_degrees(&self) -> MultiIndex {
        let mut degs = vec![0u32; self.dimension];
        for exp in self.terms.keys() {
            for (d, &e) in degs.iter_mut().zip(exp.orders()) {
                *d = (*d).max(e);
            }
        }
        MultiIndex::new(degs)
    }

    /// Largest coefficient magnitude (the l∞ coefficient norm).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check_same_dimension(&self, other: &Polynomial) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: other.dimension,
            });
        }
        Ok(())
    }

    /// Drop zeros and coefficients negligible relative to `scale`.
    fn cleanup(&mut self, scale: f64) {
        let threshold = CANONICAL_RELATIVE_EPS * scale;
        self.terms.retain(|_, c| c.abs() > threshold && *c != 0.0);
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dimension(other)?;
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        let mut out = self.clone();
        for (exp, &c) in &other.terms {
            *out.terms.entry(exp.clone()).or_insert(0.0) += c;
        }
        out.cleanup(scale);
        Ok(out)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    /// Multiply every coefficient by `factor`.
    pub fn scale(&self, factor: f64) -> Polynomial {
        if factor == 0.0 {
            return Polynomial::zero(self.dimension);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor;
        }
        out.cleanup(out.max_abs_coeff());
        out
    }

    /// Convolution of exponent maps.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same_dimension(other)?;
        let scale = self.max_abs_coeff() * other.max_abs_coeff();
        let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                *terms.entry(ea.add(eb)).or_insert(0.0) += ca * cb;
            }
        }
        let mut out = Polynomial {
            dimension: self.dimension,
            terms,
        };
        out.cleanup(scale);
        Ok(out)
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.dimension, 1.0);
        for _ in 0..n {
            out = out.mul(self).expect("same dimension");
        }
        out
    }

    /// Exact partial derivative D^γ p.
    pub fn differentiate(&self, gamma: &MultiIndex) -> Result<Polynomial> {
        if gamma.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: gamma.dimension(),
            });
        }
        let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (exp, &c) in &self.terms {
            let Some(new_exp) = exp.checked_sub(gamma) else {
                continue; // some exponent below the derivative order: term vanishes
            };
            let mut factor = 1.0;
            for (&e, &g) in exp.orders().iter().zip(gamma.orders()) {
                factor *= super::combin::falling_factorial(e, g);
            }
            *terms.entry(new_exp).or_insert(0.0) += c * factor;
        }
        Ok(Polynomial {
            dimension: self.dimension,
            terms,
        })
    }

    /// Evaluate at a point.
    ///
    /// Terms are summed with Neumaier compensation: high-degree expansions
    /// (Bernstein output) legitimately carry coefficients many orders larger
    /// than the polynomial's values on the cube, and a plain sum would lose
    /// the cancellation to accumulation error.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        let mut sum = 0.0_f64;
        let mut compensation = 0.0_f64;
        for (exp, &c) in &self.terms {
            let mut term = c;
            for (&e, &xi) in exp.orders().iter().zip(x) {
                if e > 0 {
                    term *= xi.powi(e as i32);
                }
            }
            let t = sum + term;
            if sum.abs() >= term.abs() {
                compensation += (sum - t) + term;
            } else {
                compensation += (term - t) + sum;
            }
            sum = t;
        }
        Ok(sum + compensation)
    }

    /// Replace x_axis by a·x_axis + b and expand back to monomial form.
    /// Exact for integer-representable a and b.
    pub fn affine_substitute(&self, axis: usize, a: f64, b: f64) -> Result<Polynomial> {
        if axis >= self.dimension {
            return Err(Error::AxisOutOfRange {
                axis,
                dimension: self.dimension,
            });
        }
        let scale = self.max_abs_coeff();
        let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for (exp, &c) in &self.terms {
            let e = exp.order(axis);
            // (a·x + b)^e = Σ_i C(e,i) a^i b^(e−i) x^i
            for i in 0..=e {
                let coef = c
                    * binomial_f64(e, i)
                    * a.powi(i as i32)
                    * if e == i { 1.0 } else { b.powi((e - i) as i32) };
                if coef == 0.0 {
                    continue;
                }
                let mut orders = exp.orders().to_vec();
                orders[axis] = i;
                *terms.entry(MultiIndex::new(orders)).or_insert(0.0) += coef;
            }
        }
        let mut out = Polynomial {
            dimension: self.dimension,
            terms,
        };
        out.cleanup(scale);
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (exp, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " {} ", if *c < 0.0 { "-" } else { "+" })?;
            } else if *c < 0.0 {
                write!(f, "-")?;
            }
            write!(f, "{}", c.abs())?;
            for (axis, &e) in exp.orders().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", axis + 1)?,
                    _ => write!(f, "*x{}^{}", axis + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Random polynomial with total degree ≤ `max_total_degree` and coefficients
/// uniform in [−coeff_bound, coeff_bound]; each candidate monomial is kept
/// with probability 0.6.
pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    dimension: usize,
    max_total_degree: u32,
    coeff_bound: f64,
) -> Polynomial {
    let mut terms = Vec::new();
    for exp in super::multiindex::cube_iter(dimension, max_total_degree) {
        if exp.total_degree() > max_total_degree {
            continue;
        }
        if rng.gen_bool(0.6) {
            terms.push((exp, rng.gen_range(-coeff_bound..=coeff_bound)));
        }
    }
    Polynomial::from_terms(dimension, terms).expect("dimensions agree by construction")
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
struct PolynomialRepr {
    dimension: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // terms in graded-lex descending order
        let repr = PolynomialRepr {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(e, &c)| TermRepr {
                    exp: e.orders().to_vec(),
                    coef: c,
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = PolynomialRepr::deserialize(deserializer)?;
        Polynomial::from_terms(
            repr.dimension,
            repr.terms
                .into_iter()
                .map(|t| (MultiIndex::new(t.exp), t.coef)),
        )
        .map_err(D::Error::custom)
    }
}
