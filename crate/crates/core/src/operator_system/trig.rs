use std::collections::BTreeMap;

use num_complex::Complex64;

use super::gamma::GammaRep;
use crate::error::{Error, Result};
use crate::fft;
use crate::kernels::{phase, TorusGrid};
use crate::lattice::{check_dim, neg, norm_sq, Point};
use crate::symbols::SymbolTable;

/// A finitely supported Fourier series `f = Σ_n f̂(n) e_n` on `T^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    coeffs: BTreeMap<Point, Complex64>,
}

/// Grid supremum of `‖[D, f]‖` together with a rigorous upper estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LipschitzBracket {
    pub lower: f64,
    pub upper: f64,
}

impl TrigPolynomial {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(TrigPolynomial { dim, coeffs: BTreeMap::new() })
    }

    pub fn constant(dim: usize, c: Complex64) -> Result<Self> {
        Self::mode(&vec![0; dim], c)
    }

    /// `c · e_q`.
    pub fn mode(q: &[i64], c: Complex64) -> Result<Self> {
        let mut f = Self::zero(q.len())?;
        f.coeffs.insert(q.to_vec(), c);
        Ok(f)
    }

    /// `e_q + e_{−q} = 2 cos(q·x)`.
    pub fn cosine_mode(q: &[i64]) -> Result<Self> {
        let mut f = Self::zero(q.len())?;
        f.add_coeff(q, Complex64::new(1.0, 0.0))?;
        f.add_coeff(&neg(q), Complex64::new(1.0, 0.0))?;
        Ok(f)
    }

    pub fn from_coeffs(dim: usize, coeffs: impl IntoIterator<Item = (Point, Complex64)>) -> Result<Self> {
        let mut f = Self::zero(dim)?;
        for (n, c) in coeffs {
            f.add_coeff(&n, c)?;
        }
        Ok(f)
    }

    pub fn add_coeff(&mut self, n: &[i64], c: Complex64) -> Result<()> {
        if n.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: n.len() });
        }
        *self.coeffs.entry(n.to_vec()).or_default() += c;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, n: &[i64]) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Point, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|n_i|` over the support.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().flat_map(|n| n.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    /// `f̂(−n) = conj f̂(n)` within `tol`, i.e. `f` is real valued.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(n, c)| (self.coeff(&neg(n)) - c.conj()).norm() <= tol)
    }

    /// `f*`, the pointwise complex conjugate.
    pub fn adjoint(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(n, c)| (neg(n), c.conj())).collect();
        TrigPolynomial { dim: self.dim, coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|(n, c)| (n.clone(), c * s)).collect();
        TrigPolynomial { dim: self.dim, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_coeff(n, -c)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.add_coeff(n, *c)?;
        }
        Ok(out)
    }

    /// `∂_μ f` (axis `mu` is 1-based).
    pub fn partial(&self, mu: usize) -> Result<Self> {
        if mu == 0 || mu > self.dim {
            return Err(Error::invalid(format!("axis index {mu} outside 1..={}", self.dim)));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (n.clone(), c * Complex64::new(0.0, n[mu - 1] as f64)))
            .collect();
        Ok(TrigPolynomial { dim: self.dim, coeffs })
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: x.len() });
        }
        Ok(self.coeffs.iter().map(|(n, c)| c * phase(n, x)).sum())
    }

    /// Values at every node of `grid`, in grid order.
    pub fn sample(&self, grid: &TorusGrid) -> Result<Vec<Complex64>> {
        if grid.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: grid.dim() });
        }
        Ok(fft::synthesize(
            self.dim,
            grid.resolution(),
            self.coeffs.iter().map(|(n, c)| (n.as_slice(), *c)),
        ))
    }

    /// `max_j |f(x_j)|`.
    pub fn grid_sup(&self, grid: &TorusGrid) -> Result<f64> {
        Ok(self.sample(grid)?.iter().map(|v| v.norm()).fold(0.0, f64::max))
    }

    /// `Σ_n |f̂(n)|`, an upper bound for the sup norm.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Bracket for `sup_x ‖Σ_μ ∂_μ f(x) γ^μ‖`.
    ///
    /// The lower value is the grid maximum. Every point is within `h√d/2` of
    /// a node and the gradient moves by at most `Σ|f̂(n)| ‖n‖²` per unit
    /// distance, which gives the upper value (times `√2` for complex `f`).
    pub fn lipschitz_bracket(&self, grid: &TorusGrid) -> Result<LipschitzBracket> {
        let gamma = super::clifford_generators(self.dim)?;
        let lower = self.grid_lipschitz(&gamma, grid)?;
        let curvature: f64 = self.coeffs.iter().map(|(n, c)| c.norm() * norm_sq(n) as f64).sum();
        let reach = grid.spacing() * (self.dim as f64).sqrt() / 2.0;
        let mut slack = reach * curvature;
        if !self.is_self_adjoint(1e-12) {
            slack *= std::f64::consts::SQRT_2;
        }
        Ok(LipschitzBracket { lower, upper: lower + slack })
    }

    fn grid_lipschitz(&self, gamma: &GammaRep, grid: &TorusGrid) -> Result<f64> {
        let grads: Vec<Vec<Complex64>> = (1..=self.dim)
            .map(|mu| self.partial(mu)?.sample(grid))
            .collect::<Result<_>>()?;
        let real = self.is_self_adjoint(1e-12);
        let mut best: f64 = 0.0;
        let mut g = vec![Complex64::default(); self.dim];
        for j in 0..grid.len() {
            for (mu, col) in grads.iter().enumerate() {
                g[mu] = col[j];
            }
            // for real gradients (Σ g_μ γ^μ)² = ‖g‖²
            let v = if real {
                g.iter().map(|z| z.re * z.re).sum::<f64>().sqrt()
            } else {
                super::operator::spectral_norm(&gamma.combine(&g))?
            };
            best = best.max(v);
        }
        Ok(best)
    }
}

/// `sup_x ‖[D, f](x)‖` on `grid` (the lower end of [`TrigPolynomial::lipschitz_bracket`]).
pub fn lipschitz_fn(f: &TrigPolynomial, grid: &TorusGrid) -> Result<f64> {
    Ok(f.lipschitz_bracket(grid)?.lower)
}

/// `f̂(n) ↦ s(n) f̂(n)`, with `s` vanishing off its support.
pub fn fourier_multiply(s: &SymbolTable, f: &TrigPolynomial) -> Result<TrigPolynomial> {
    if s.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), actual: s.dim() });
    }
    let coeffs = f
        .coeffs
        .iter()
        .filter(|(n, _)| s.support().contains(n))
        .map(|(n, c)| (n.clone(), c * s.get_f64(n)))
        .collect();
    Ok(TrigPolynomial { dim: f.dim(), coeffs })
}
