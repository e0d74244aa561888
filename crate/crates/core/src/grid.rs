//! Midpoint quadrature grid over a bounded frequency set `E`, the finite
//! surrogate of `L²(E)`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Finite union of disjoint closed intervals, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct BoundedSet {
    intervals: Vec<[f64; 2]>,
}

impl BoundedSet {
    pub fn new(mut intervals: Vec<[f64; 2]>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Config("bounded set has no intervals".into()));
        }
        for &[a, b] in &intervals {
            if !(a.is_finite() && b.is_finite()) || b <= a {
                return Err(Error::Config(format!("invalid interval [{a}, {b}]")));
            }
        }
        intervals.sort_by(|x, y| x[0].total_cmp(&y[0]));
        for w in intervals.windows(2) {
            if w[1][0] <= w[0][1] {
                return Err(Error::Config(format!(
                    "intervals [{}, {}] and [{}, {}] overlap",
                    w[0][0], w[0][1], w[1][0], w[1][1]
                )));
            }
        }
        Ok(Self { intervals })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![[a, b]])
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|[a, b]| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&[a, b]| a <= x && x <= b)
    }

    /// Intersection with a single interval `[lo, hi]`.
    pub fn intersect(&self, lo: f64, hi: f64) -> Vec<[f64; 2]> {
        self.intervals
            .iter()
            .filter_map(|&[a, b]| {
                let (l, r) = (a.max(lo), b.min(hi));
                (r > l).then_some([l, r])
            })
            .collect()
    }
}

impl TryFrom<Vec<[f64; 2]>> for BoundedSet {
    type Error = Error;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BoundedSet> for Vec<[f64; 2]> {
    fn from(s: BoundedSet) -> Self {
        s.intervals
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    set: BoundedSet,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    sqrt_weights: Vec<f64>,
    nodes_per_unit: usize,
}

impl FrequencyGrid {
    pub fn set(&self) -> &BoundedSet {
        &self.set
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn sqrt_weights(&self) -> &[f64] {
        &self.sqrt_weights
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn nodes_per_unit(&self) -> usize {
        self.nodes_per_unit
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Midpoint grid with `ceil(nodes_per_unit · (b − a))` nodes per interval.
pub fn build_grid(set: BoundedSet, nodes_per_unit: usize) -> Result<Arc<FrequencyGrid>> {
    if nodes_per_unit == 0 {
        return Err(Error::Config("nodes_per_unit must be at least 1".into()));
    }
    if set.intervals.is_empty() || set.measure() <= 0.0 {
        return Err(Error::Config("frequency set is empty".into()));
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for &[a, b] in &set.intervals {
        let target = nodes_per_unit as f64 * (b - a);
        // guard against 8.000000000001 rounding up to 9
        let count = ((target * (1.0 - 1e-12)).ceil() as usize).max(1);
        let h = (b - a) / count as f64;
        for n in 0..count {
            nodes.push(a + (n as f64 + 0.5) * h);
            weights.push(h);
        }
    }
    let sqrt_weights = weights.iter().map(|h| h.sqrt()).collect();
    Ok(Arc::new(FrequencyGrid { set, nodes, weights, sqrt_weights, nodes_per_unit }))
}

/// Complex samples, one per node of a grid.
#[derive(Debug, Clone)]
pub struct GridVector {
    grid: Arc<FrequencyGrid>,
    values: Vec<C64>,
}

impl GridVector {
    pub fn new(grid: Arc<FrequencyGrid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<FrequencyGrid>, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.nodes().iter().map(|&w| f(w)).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Arc<FrequencyGrid>, c: C64) -> Self {
        let values = vec![c; grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<FrequencyGrid> {
        &self.grid
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, h)| h * v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridVector) -> Result<GridVector> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(GridVector { grid: self.grid.clone(), values })
    }

    pub fn sub(&self, other: &GridVector) -> Result<GridVector> {
        self.check_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(GridVector { grid: self.grid.clone(), values })
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> GridVector {
        GridVector { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn check_grid(&self, other: &GridVector) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Coordinates in the √h-scaled Euclidean basis.
    pub fn scaled(&self) -> Vec<C64> {
        self.values.iter().zip(self.grid.sqrt_weights()).map(|(v, s)| v * *s).collect()
    }

    /// Inverse of [`GridVector::scaled`].
    pub fn from_scaled(grid: Arc<FrequencyGrid>, scaled: &[C64]) -> Result<Self> {
        if scaled.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: scaled.len() });
        }
        let values = scaled.iter().zip(grid.sqrt_weights()).map(|(v, s)| v / *s).collect();
        Ok(Self { grid, values })
    }

    /// Time-domain value `f(x) = Σ_n h_n f̂(ω_n) e^{2πi x ω_n}`.
    pub fn inverse_transform_at(&self, x: f64) -> C64 {
        self.values
            .iter()
            .zip(self.grid.nodes())
            .zip(self.grid.weights())
            .map(|((v, &w), &h)| v * C64::from_polar(h, 2.0 * PI * x * w))
            .sum()
    }
}

/// `Σ_n h_n F(ω_n) conj(G(ω_n))`.
pub fn inner_product(f: &GridVector, g: &GridVector) -> Result<C64> {
    f.check_grid(g)?;
    Ok(f.values.iter().zip(&g.values).zip(f.grid.weights()).map(|((a, b), &h)| a * b.conj() * h).sum())
}

/// Samples of `e_λ(ω) = e^{−2πiλω}`.
pub fn exponential_vector(lambda: f64, grid: &Arc<FrequencyGrid>) -> GridVector {
    GridVector::from_fn(grid.clone(), |w| C64::from_polar(1.0, -2.0 * PI * lambda * w))
}
