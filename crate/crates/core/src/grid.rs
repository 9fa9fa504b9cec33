//! Uniform tensor grids on the closed unit cube: the finite stand-in for
//! sup norms over [0,1]^N. Grid maxima are lower bounds of the true sup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid with the same node count on every axis, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    nodes_per_axis: usize,
}

impl GridSpec {
    pub fn new(nodes_per_axis: usize) -> Result<Self> {
        if nodes_per_axis < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 2 nodes per axis, got {nodes_per_axis}"
            )));
        }
        Ok(GridSpec { nodes_per_axis })
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.nodes_per_axis
    }

    /// The 1-D node set {0, 1/(n−1), ..., 1}.
    pub fn axis_nodes(&self) -> Vec<f64> {
        let n = self.nodes_per_axis;
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    /// All grid points of the N-dimensional tensor grid, last axis fastest.
    pub fn points(&self, dimension: usize) -> GridPoints {
        GridPoints {
            axis: self.axis_nodes(),
            dimension,
            index: 0,
            len: self.nodes_per_axis.pow(dimension as u32),
        }
    }

    /// max over the grid of |f|.
    pub fn sup<F: Fn(&[f64]) -> f64>(&self, dimension: usize, f: F) -> f64 {
        self.points(dimension)
            .fold(0.0_f64, |acc, x| acc.max(f(&x).abs()))
    }

    /// Trapezoidal weight of node i on one axis (already divided by n−1).
    pub fn axis_weight(&self, i: usize) -> f64 {
        let h = 1.0 / (self.nodes_per_axis - 1) as f64;
        if i == 0 || i == self.nodes_per_axis - 1 {
            h / 2.0
        } else {
            h
        }
    }
}

/// Iterator over tensor-grid points in row-major order.
pub struct GridPoints {
    axis: Vec<f64>,
    dimension: usize,
    index: usize,
    len: usize,
}

impl GridPoints {
    /// Cartesian index of the current point (before `next` advances it).
    fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let n = self.axis.len();
        let mut idx = vec![0usize; self.dimension];
        for d in (0..self.dimension).rev() {
            idx[d] = flat % n;
            flat /= n;
        }
        idx
    }
}

impl Iterator for GridPoints {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.index >= self.len {
            return None;
        }
        let idx = self.unravel(self.index);
        self.index += 1;
        Some(idx.into_iter().map(|i| self.axis[i]).collect())
    }
}

impl ExactSizeIterator for GridPoints {
    fn len(&self) -> usize {
        self.len - self.index
    }
}

/// Grid points paired with their tensor trapezoidal weights.
pub fn weighted_points(grid: &GridSpec, dimension: usize) -> Vec<(Vec<f64>, f64)> {
    let axis = grid.axis_nodes();
    let n = axis.len();
    let mut out = Vec::with_capacity(n.pow(dimension as u32));
    let mut idx = vec![0usize; dimension];
    loop {
        let point: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        let weight: f64 = idx.iter().map(|&i| grid.axis_weight(i)).product();
        out.push((point, weight));
        // odometer, last axis fastest
        let mut d = dimension;
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            if idx[d] + 1 < n {
                idx[d] += 1;
                break;
            }
            idx[d] = 0;
        }
    }
}
