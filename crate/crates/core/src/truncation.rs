//! The finite index set of a spectral truncation together with its derived data.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::lattice::{
    self, enumerate_ball, enumerate_box, norm_sq, sub, LatticeSet, Point, Radius, Rational,
};
use crate::symbols::SymbolTable;

/// Which projection defines the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Modes with `‖n‖ ≤ Λ`.
    Ball(Radius),
    /// Modes with `|n_i| ≤ N` for every coordinate.
    Cube(u32),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Ball(r) => write!(f, "ball(lambda_sq={r})"),
            Shape::Cube(n) => write!(f, "box(N={n})"),
        }
    }
}

struct Inner {
    dim: usize,
    shape: Shape,
    points: LatticeSet,
    sumset: LatticeSet,
    /// `N_L(p)` for each `p` of the sumset, aligned with its canonical order.
    overlaps: Vec<usize>,
    sumset_lookup: HashMap<Point, usize>,
    diff_index: OnceLock<Vec<u32>>,
}

/// A truncation `P H` of `L²(T^d)`: the lattice set `B` indexing the retained
/// modes, the difference set `B − B` carrying Toeplitz coefficients, and the
/// overlap counts `N_L(p) = #{(k, l) ∈ B² : k − l = p}`.
///
/// Cloning is cheap; all data is shared.
#[derive(Clone)]
pub struct Truncation {
    inner: Arc<Inner>,
}

impl fmt::Debug for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Truncation")
            .field("dim", &self.inner.dim)
            .field("shape", &self.inner.shape)
            .field("size", &self.size())
            .finish()
    }
}

impl PartialEq for Truncation {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dim == other.inner.dim && self.inner.shape == other.inner.shape)
    }
}

impl Truncation {
    /// Euclidean-ball truncation `B̄_Λ ∩ Z^d`.
    pub fn ball(d: usize, r: Radius) -> Result<Self> {
        Self::build(d, Shape::Ball(r), enumerate_ball(d, r)?)
    }

    /// Box truncation `[−N, N]^d ∩ Z^d`.
    pub fn cube(d: usize, half_width: u32) -> Result<Self> {
        Self::build(d, Shape::Cube(half_width), enumerate_box(d, half_width)?)
    }

    pub fn new(d: usize, shape: Shape) -> Result<Self> {
        match shape {
            Shape::Ball(r) => Self::ball(d, r),
            Shape::Cube(n) => Self::cube(d, n),
        }
    }

    fn build(dim: usize, shape: Shape, points: LatticeSet) -> Result<Self> {
        let sumset = lattice::sumset(&points, &points)?;
        let sumset_lookup: HashMap<Point, usize> =
            sumset.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut overlaps = vec![0usize; sumset.len()];
        for k in points.iter() {
            for l in points.iter() {
                overlaps[sumset_lookup[&sub(k, l)]] += 1;
            }
        }
        Ok(Truncation {
            inner: Arc::new(Inner {
                dim,
                shape,
                points,
                sumset,
                overlaps,
                sumset_lookup,
                diff_index: OnceLock::new(),
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn shape(&self) -> Shape {
        self.inner.shape
    }

    /// The retained modes in canonical order.
    pub fn points(&self) -> &LatticeSet {
        &self.inner.points
    }

    /// `N_B`, the number of retained modes.
    pub fn size(&self) -> usize {
        self.inner.points.len()
    }

    /// The difference set `B − B` (equal to `B + B` by symmetry).
    pub fn sumset(&self) -> &LatticeSet {
        &self.inner.sumset
    }

    pub fn sumset_index(&self, p: &[i64]) -> Option<usize> {
        self.inner.sumset_lookup.get(p).copied()
    }

    /// `N_L(p)`; zero off the sumset.
    pub fn overlap(&self, p: &[i64]) -> usize {
        self.sumset_index(p).map_or(0, |i| self.inner.overlaps[i])
    }

    pub fn overlaps(&self) -> &[usize] {
        &self.inner.overlaps
    }

    /// The truncation symbol `m(p) = N_L(p) / N_B`, exactly.
    pub fn symbol_value(&self, p: &[i64]) -> Rational {
        Rational::new(self.overlap(p) as i64, self.size() as i64)
    }

    pub fn symbol_f64(&self, p: &[i64]) -> f64 {
        self.overlap(p) as f64 / self.size() as f64
    }

    pub fn symbol(&self) -> SymbolTable {
        let n = self.size() as i64;
        let values = self.inner.overlaps.iter().map(|&c| Rational::new(c as i64, n)).collect();
        SymbolTable::from_parts(self.dim(), self.sumset().clone(), values)
            .expect("support and values are aligned")
    }

    /// Spinor dimension `2^⌊d/2⌋`.
    pub fn spinor_dim(&self) -> usize {
        1 << (self.dim() / 2)
    }

    /// Largest coordinate magnitude of a retained mode.
    pub fn degree(&self) -> i64 {
        self.points().iter().flat_map(|p| p.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    /// Largest coordinate magnitude of the sumset.
    pub fn sumset_degree(&self) -> i64 {
        2 * self.degree()
    }

    /// Largest squared norm of a retained mode.
    pub fn max_norm_sq(&self) -> i64 {
        self.points().iter().map(|p| norm_sq(p)).max().unwrap_or(0)
    }

    /// Sumset index of `k − l` for every ordered pair, row-major over `B × B`.
    pub(crate) fn diff_index(&self) -> &[u32] {
        self.inner.diff_index.get_or_init(|| {
            let pts = self.points().points();
            let mut idx = Vec::with_capacity(pts.len() * pts.len());
            for k in pts {
                for l in pts {
                    idx.push(self.inner.sumset_lookup[&sub(k, l)] as u32);
                }
            }
            idx
        })
    }

    pub(crate) fn check_point(&self, p: &[i64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: p.len() });
        }
        Ok(())
    }

    pub(crate) fn check_same(&self, other: &Truncation) -> Result<()> {
        if self != other {
            return Err(Error::invalid(format!(
                "operators live on different truncations: {} in d={} vs {} in d={}",
                self.shape(),
                self.dim(),
                other.shape(),
                other.dim()
            )));
        }
        Ok(())
    }
}
