use std::cmp::Ordering;
use std::fmt;

/// Exponent / derivative-order vector of fixed dimension.
///
/// Two orders live on this type. The `Ord` impl is the graded lexicographic
/// *total* order (total degree first, then lexicographic on entries), which
/// drives map storage and the highest-degree-first solver sweep. The
/// componentwise *partial* order is exposed through [`MultiIndex::le_componentwise`]
/// and [`MultiIndex::lt_componentwise`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(orders: Vec<u32>) -> Self {
        MultiIndex(orders)
    }

    /// The zero multi-index of the given dimension.
    pub fn zero(dimension: usize) -> Self {
        MultiIndex(vec![0; dimension])
    }

    /// The unit multi-index e_axis.
    pub fn unit(dimension: usize, axis: usize) -> Self {
        let mut orders = vec![0; dimension];
        orders[axis] = 1;
        MultiIndex(orders)
    }

    /// The constant multi-index (c, c, ..., c).
    pub fn uniform(dimension: usize, c: u32) -> Self {
        MultiIndex(vec![c; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// Total degree |α| = Σ α_i.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest single entry, |α|_∞.
    pub fn max_order(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise α ≤ β.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict componentwise order: α ≤ β and α ≠ β.
    pub fn lt_componentwise(&self, other: &MultiIndex) -> bool {
        self.le_componentwise(other) && self != other
    }

    /// Componentwise sum.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le_componentwise(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Increment a single axis by one.
    pub fn bump(&self, axis: usize) -> MultiIndex {
        let mut orders = self.0.clone();
        orders[axis] += 1;
        MultiIndex(orders)
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Iterate the box {0..=cap_1} × ... × {0..=cap_N} in graded-free row-major
/// order (last axis fastest). Yields every multi-index α with α_j ≤ cap_j.
pub fn box_iter(caps: &[u32]) -> BoxIter {
    BoxIter {
        caps: caps.to_vec(),
        next: Some(vec![0; caps.len()]),
    }
}

/// Iterate the isotropic box {0..=cap}^dimension.
pub fn cube_iter(dimension: usize, cap: u32) -> BoxIter {
    box_iter(&vec![cap; dimension])
}

pub struct BoxIter {
    caps: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // odometer increment, last axis fastest
        let mut axis = self.caps.len();
        loop {
            if axis == 0 {
                break; // wrapped past the first axis: iteration done
            }
            axis -= 1;
            if succ[axis] < self.caps[axis] {
                succ[axis] += 1;
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(MultiIndex(current))
    }
}
