//! Points, chains and the discrete Fréchet distance.
//!
//! All threshold comparisons use plain `<=` on `f64` with no tolerance, so a
//! given input always produces the same answer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported dimension {0}, expected 2 or 3")]
    UnsupportedDimension(usize),
    #[error("chain must contain at least one point")]
    EmptyChain,
    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weight at index {index} is {value}, weights must be finite and non-negative")]
    InvalidWeight { index: usize, value: f64 },
    #[error("invalid index list: {0}")]
    InvalidIndices(String),
}

/// A point in the plane or in space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: u8,
}

impl Point {
    pub fn new2(x: f64, y: f64) -> Self {
        Point { coords: [x, y, 0.0], dim: 2 }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point { coords: [x, y, z], dim: 3 }
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self, GeometryError> {
        match *coords {
            [x, y] => Ok(Point::new2(x, y)),
            [x, y, z] => Ok(Point::new3(x, y, z)),
            _ => Err(GeometryError::UnsupportedDimension(coords.len())),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    fn is_finite(&self) -> bool {
        self.coords().iter().all(|c| c.is_finite())
    }

    /// Euclidean distance without the dimension check.
    #[inline]
    pub(crate) fn dist(&self, other: &Point) -> f64 {
        let dx = self.coords[0] - other.coords[0];
        let dy = self.coords[1] - other.coords[1];
        let dz = self.coords[2] - other.coords[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

pub fn euclidean_distance(p: &Point, q: &Point) -> Result<f64, GeometryError> {
    if p.dim != q.dim {
        return Err(GeometryError::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    Ok(p.dist(q))
}

/// An ordered, nonempty sequence of points of one dimension, with optional
/// per-vertex weights.
///
/// Weights default to one. Zero weights are admitted because the set
/// partition gadget relies on them; the file loaders reject them.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    points: Vec<Point>,
    weights: Option<Vec<f64>>,
}

impl Chain {
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        let first = points.first().ok_or(GeometryError::EmptyChain)?;
        let dim = first.dim();
        for (i, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch { left: dim, right: p.dim() });
            }
            if !p.is_finite() {
                return Err(GeometryError::NonFinite(i));
            }
        }
        Ok(Chain { points, weights: None })
    }

    pub fn with_weights(points: Vec<Point>, weights: Vec<f64>) -> Result<Self, GeometryError> {
        let chain = Chain::new(points)?;
        chain.weighted(weights)
    }

    /// Replaces the weights of this chain.
    pub fn weighted(mut self, weights: Vec<f64>) -> Result<Self, GeometryError> {
        if weights.len() != self.points.len() {
            return Err(GeometryError::WeightCount { expected: self.points.len(), got: weights.len() });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(GeometryError::InvalidWeight { index, value });
        }
        self.weights = Some(weights);
        Ok(self)
    }

    /// Builds a chain from `[x, y]` or `[x, y, z]` rows.
    pub fn from_coords<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, GeometryError> {
        let points = rows.iter().map(|r| Point::from_slice(r.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Chain::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; chains are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub fn total_weight(&self) -> f64 {
        (0..self.len()).map(|i| self.weight(i)).sum()
    }

    /// The largest distance between two vertices of the chain.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.max(p.dist(q));
            }
        }
        best
    }

    /// The sub-chain at the given indices, carrying the matching weights.
    /// Indices are 0-based and must be strictly increasing.
    pub fn subchain(&self, indices: &[usize]) -> Result<Chain, GeometryError> {
        check_indices(indices, self.len())?;
        Ok(Chain {
            points: indices.iter().map(|&i| self.points[i]).collect(),
            weights: self.weights.as_ref().map(|w| indices.iter().map(|&i| w[i]).collect()),
        })
    }

    /// Swaps the weights for all-ones.
    pub fn unweighted(&self) -> Chain {
        Chain { points: self.points.clone(), weights: None }
    }
}

fn check_indices(indices: &[usize], len: usize) -> Result<(), GeometryError> {
    if indices.is_empty() {
        return Err(GeometryError::InvalidIndices("empty".into()));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= len) {
        return Err(GeometryError::InvalidIndices(format!("index {bad} out of range for chain of length {len}")));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GeometryError::InvalidIndices("not strictly increasing".into()));
    }
    Ok(())
}

fn same_dim(a: &Chain, b: &Chain) -> Result<(), GeometryError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// Discrete Fréchet distance together with one coupling that realizes it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrechetResult {
    pub value: f64,
    /// 0-based index pairs from `(0, 0)` to `(m - 1, n - 1)`.
    pub coupling: Vec<(usize, usize)>,
}

/// Whether `(a_m, b_n)` is reachable from `(a_1, b_1)` when every visited pair
/// is within `delta`.
pub fn frechet_decision(a: &Chain, b: &Chain, delta: f64) -> Result<bool, GeometryError> {
    same_dim(a, b)?;
    let n = b.len();
    let mut prev = vec![false; n];
    let mut cur = vec![false; n];
    for (i, pa) in a.points().iter().enumerate() {
        for (j, pb) in b.points().iter().enumerate() {
            let close = pa.dist(pb) <= delta;
            cur[j] = close
                && if i == 0 && j == 0 {
                    true
                } else {
                    (i > 0 && prev[j]) || (j > 0 && cur[j - 1]) || (i > 0 && j > 0 && prev[j - 1])
                };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[n - 1])
}

pub fn discrete_frechet(a: &Chain, b: &Chain) -> Result<FrechetResult, GeometryError> {
    same_dim(a, b)?;
    let (m, n) = (a.len(), b.len());
    let mut table = vec![0.0f64; m * n];
    for i in 0..m {
        for j in 0..n {
            let d = a.point(i).dist(b.point(j));
            let reach = match (i, j) {
                (0, 0) => d,
                (0, _) => table[j - 1],
                (_, 0) => table[(i - 1) * n],
                _ => table[(i - 1) * n + j].min(table[i * n + j - 1]).min(table[(i - 1) * n + j - 1]),
            };
            table[i * n + j] = d.max(reach);
        }
    }

    // Walk back; among the cheapest predecessors prefer the diagonal, then
    // the one that advanced i, then the one that advanced j.
    let mut coupling = vec![(m - 1, n - 1)];
    let (mut i, mut j) = (m - 1, n - 1);
    while (i, j) != (0, 0) {
        let mut best: Option<((usize, usize), f64)> = None;
        let candidates =
            [(i > 0 && j > 0).then(|| (i - 1, j - 1)), (i > 0).then(|| (i - 1, j)), (j > 0).then(|| (i, j - 1))];
        for cell in candidates.into_iter().flatten() {
            let v = table[cell.0 * n + cell.1];
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((cell, v));
            }
        }
        let (cell, _) = best.expect("non-origin cell has a predecessor");
        (i, j) = cell;
        coupling.push(cell);
    }
    coupling.reverse();
    Ok(FrechetResult { value: table[m * n - 1], coupling })
}

/// Whether the vertices of `a` at `indices` (0-based, strictly increasing)
/// form a chain within discrete Fréchet distance `delta` of `a`.
pub fn verify_simplification(a: &Chain, indices: &[usize], delta: f64) -> Result<bool, GeometryError> {
    let sub = a.subchain(indices)?;
    frechet_decision(a, &sub, delta)
}
