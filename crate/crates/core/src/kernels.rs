//! The spherical Dirichlet kernel, the spectral Fejér kernel `K = |D|²/N_B`,
//! and its good-kernel diagnostics on uniform torus grids.
//!
//! The torus carries normalized Haar measure, so every integral below is a
//! grid mean.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::truncation::{Shape, Truncation};

/// Uniform grid `x_j = 2πj/M`, `j ∈ {0,…,M−1}^d`, with weights `M^{−d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusGrid {
    dim: usize,
    resolution: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, resolution: usize) -> Result<Self> {
        crate::lattice::check_dim(dim)?;
        if resolution < 2 {
            return Err(Error::invalid(format!("grid resolution must be at least 2, got {resolution}")));
        }
        let nodes = (resolution as f64).powi(dim as i32);
        if nodes > 1.0e8 {
            return Err(Error::ScaleLimit(format!("{resolution}^{dim} grid nodes")));
        }
        Ok(TorusGrid { dim, resolution })
    }

    /// `M = 4⌈Λ⌉ + 9` (or `4N + 9` for a box).
    pub fn default_for(trunc: &Truncation) -> Self {
        let m = 4 * ceil_radius(trunc) as usize + 9;
        TorusGrid { dim: trunc.dim(), resolution: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.resolution.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.resolution as f64
    }

    /// Coordinates of the node with flat index `idx`.
    pub fn node(&self, idx: usize) -> Vec<f64> {
        let mut j = vec![0; self.dim];
        fft::unflatten(idx, self.dim, self.resolution, &mut j);
        j.iter().map(|&k| self.spacing() * k as f64).collect()
    }

    /// Flat-torus norm of every node, in grid order.
    pub fn node_norms(&self) -> Vec<f64> {
        let m = self.resolution;
        let axis: Vec<f64> = (0..m)
            .map(|j| {
                let x = self.spacing() * j as f64;
                let r = if 2 * j > m { x - 2.0 * PI } else { x };
                r * r
            })
            .collect();
        let mut j = vec![0; self.dim];
        (0..self.len())
            .map(|idx| {
                fft::unflatten(idx, self.dim, m, &mut j);
                j.iter().map(|&k| axis[k]).sum::<f64>().sqrt()
            })
            .collect()
    }

    pub(crate) fn check(&self, trunc: &Truncation) -> Result<()> {
        if self.dim != trunc.dim() {
            return Err(Error::DimensionMismatch { expected: trunc.dim(), actual: self.dim });
        }
        let required = 4.0 * radius_f64(trunc) + 1.0;
        if (self.resolution as f64) <= required {
            return Err(Error::Resolution { resolution: self.resolution, required });
        }
        Ok(())
    }
}

fn radius_f64(trunc: &Truncation) -> f64 {
    match trunc.shape() {
        Shape::Ball(r) => r.value(),
        Shape::Cube(n) => n as f64,
    }
}

fn ceil_radius(trunc: &Truncation) -> i64 {
    match trunc.shape() {
        Shape::Ball(r) => {
            let k = r.floor();
            if r.lambda_sq() == crate::lattice::Rational::from_integer(k * k) {
                k
            } else {
                k + 1
            }
        }
        Shape::Cube(n) => n as i64,
    }
}

/// Minimal representative of an angle in `(−π, π]`.
pub fn minimal_rep(t: f64) -> f64 {
    let r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Euclidean norm of the minimal representative of `x` on the flat torus.
pub fn torus_norm(x: &[f64]) -> f64 {
    x.iter().map(|&t| minimal_rep(t).powi(2)).sum::<f64>().sqrt()
}

fn check_x(trunc: &Truncation, x: &[f64]) -> Result<()> {
    if x.len() != trunc.dim() {
        return Err(Error::DimensionMismatch { expected: trunc.dim(), actual: x.len() });
    }
    if x.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("non-finite torus coordinate"));
    }
    Ok(())
}

pub(crate) fn phase(n: &[i64], x: &[f64]) -> Complex64 {
    let t: f64 = n.iter().zip(x).map(|(&k, &y)| k as f64 * y).sum();
    Complex64::from_polar(1.0, t)
}

/// `D(x) = Σ_{n ∈ B} e^{i n·x}`.
pub fn dirichlet_eval(trunc: &Truncation, x: &[f64]) -> Result<Complex64> {
    check_x(trunc, x)?;
    Ok(trunc.points().iter().map(|n| phase(n, x)).sum())
}

/// `K(x) = |D(x)|² / N_B`.
pub fn fejer_eval(trunc: &Truncation, x: &[f64]) -> Result<f64> {
    Ok(dirichlet_eval(trunc, x)?.norm_sqr() / trunc.size() as f64)
}

/// `K(x)` through its symbol, `Σ_p m(p) e^{i p·x}`.
pub fn fejer_eval_symbol(trunc: &Truncation, x: &[f64]) -> Result<f64> {
    check_x(trunc, x)?;
    let n = trunc.size() as f64;
    let s: Complex64 = trunc
        .sumset()
        .iter()
        .zip(trunc.overlaps())
        .map(|(p, &c)| phase(p, x) * (c as f64 / n))
        .sum();
    Ok(s.re)
}

/// `K` at every node of `grid`, in grid order.
pub fn fejer_on_grid(trunc: &Truncation, grid: &TorusGrid) -> Result<Vec<f64>> {
    if grid.dim() != trunc.dim() {
        return Err(Error::DimensionMismatch { expected: trunc.dim(), actual: grid.dim() });
    }
    let one = Complex64::new(1.0, 0.0);
    let d = fft::synthesize(
        trunc.dim(),
        grid.resolution(),
        trunc.points().iter().map(|n| (n.as_slice(), one)),
    );
    let nb = trunc.size() as f64;
    Ok(d.iter().map(|v| v.norm_sqr() / nb).collect())
}

/// Pairwise sum for reproducible, accurate reductions.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `∫ K`; exactly 1 up to rounding on grids above the Nyquist bound.
pub fn total_mass(trunc: &Truncation, grid: &TorusGrid) -> Result<f64> {
    grid.check(trunc)?;
    Ok(pairwise_sum(&fejer_on_grid(trunc, grid)?) * grid.weight())
}

/// `∫_{‖x‖ ≥ δ} K`, for `0 < δ < π√d`.
pub fn tail_mass(trunc: &Truncation, delta: f64, grid: &TorusGrid) -> Result<f64> {
    grid.check(trunc)?;
    let cap = PI * (trunc.dim() as f64).sqrt();
    if !(delta > 0.0 && delta < cap) {
        return Err(Error::invalid(format!("delta must lie in (0, {cap}), got {delta}")));
    }
    let k = fejer_on_grid(trunc, grid)?;
    let masked: Vec<f64> = k
        .iter()
        .zip(grid.node_norms())
        .map(|(&v, r)| if r >= delta { v } else { 0.0 })
        .collect();
    Ok(pairwise_sum(&masked) * grid.weight())
}

/// `γ = ∫ K(y) ‖y‖ dy` by grid quadrature.
pub fn gamma_estimate(trunc: &Truncation, grid: &TorusGrid) -> Result<f64> {
    grid.check(trunc)?;
    let k = fejer_on_grid(trunc, grid)?;
    let weighted: Vec<f64> = k.iter().zip(grid.node_norms()).map(|(&v, r)| v * r).collect();
    Ok(pairwise_sum(&weighted) * grid.weight())
}

/// Two-grid estimate of `γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaEstimate {
    pub coarse: f64,
    pub fine: f64,
    /// Richardson extrapolation assuming an `O(h²)` error.
    pub extrapolated: f64,
}

impl GammaEstimate {
    /// Spread between the fine and extrapolated values.
    pub fn error_estimate(&self) -> f64 {
        (self.fine - self.extrapolated).abs()
    }
}

/// `γ` on grids of resolution `M` and `2M`.
pub fn gamma_two_grid(trunc: &Truncation, resolution: usize) -> Result<GammaEstimate> {
    let coarse = gamma_estimate(trunc, &TorusGrid::new(trunc.dim(), resolution)?)?;
    let fine = gamma_estimate(trunc, &TorusGrid::new(trunc.dim(), 2 * resolution)?)?;
    Ok(GammaEstimate { coarse, fine, extrapolated: fine + (fine - coarse) / 3.0 })
}

/// Fourier coefficient of `|y|` on the circle with normalized measure.
pub(crate) fn abs_coefficient(n: i64) -> f64 {
    if n == 0 {
        PI / 2.0
    } else if n % 2 == 0 {
        0.0
    } else {
        -2.0 / (PI * (n * n) as f64)
    }
}

/// Reference value of `γ` used by the defect certifiers.
///
/// In `d = 1` this is the exact series `Σ_n m(n) |·|^(n)`; otherwise the
/// Richardson value on grids of resolution `max(4⌈Λ⌉+9, 64)` and twice that
/// (`32` and `64` when `d = 3`).
pub fn gamma_reference(trunc: &Truncation) -> Result<f64> {
    Ok(gamma_with_error(trunc)?.0)
}

/// [`gamma_reference`] together with an error estimate (zero for the exact
/// series in `d = 1`, the Richardson spread otherwise).
pub fn gamma_with_error(trunc: &Truncation) -> Result<(f64, f64)> {
    if trunc.dim() == 1 {
        let n = trunc.size() as f64;
        let value = trunc
            .sumset()
            .iter()
            .zip(trunc.overlaps())
            .map(|(p, &c)| c as f64 / n * abs_coefficient(p[0]))
            .sum();
        return Ok((value, 0.0));
    }
    let floor = if trunc.dim() >= 3 { 32 } else { 64 };
    let m = TorusGrid::default_for(trunc).resolution().max(floor);
    let est = gamma_two_grid(trunc, m)?;
    Ok((est.extrapolated, est.error_estimate()))
}
