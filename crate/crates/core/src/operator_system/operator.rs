use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::gamma::GammaRep;
use super::trig::TrigPolynomial;
use crate::error::{Error, Result};
use crate::lattice::{neg, LatticeSet, Point};
use crate::symbols::SymbolTable;
use crate::truncation::{Shape, Truncation};

/// A multi-level Toeplitz matrix `(t_{k−l})_{k,l ∈ B}`, stored by its
/// coefficients on the sumset `B − B` in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    trunc: Truncation,
    coeffs: Vec<Complex64>,
}

/// A dense matrix indexed by `(lattice point, spinor index)` pairs, row
/// `k·s + a` for the `k`-th point in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub matrix: DMatrix<Complex64>,
    pub spinor_dim: usize,
    pub points: LatticeSet,
}

impl DenseOperator {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn norm(&self) -> Result<f64> {
        spectral_norm(&self.matrix)
    }
}

impl TruncatedOperator {
    pub fn zeros(trunc: &Truncation) -> Self {
        TruncatedOperator { trunc: trunc.clone(), coeffs: vec![Complex64::default(); trunc.sumset().len()] }
    }

    pub fn identity(trunc: &Truncation) -> Self {
        Self::basis(trunc, &vec![0; trunc.dim()]).expect("0 lies in every sumset")
    }

    /// The basic operator `T_p` with `t_p = 1` and all other coefficients 0.
    pub fn basis(trunc: &Truncation, p: &[i64]) -> Result<Self> {
        trunc.check_point(p)?;
        let i = trunc
            .sumset_index(p)
            .ok_or_else(|| Error::invalid(format!("shift {p:?} lies outside the sumset")))?;
        let mut t = Self::zeros(trunc);
        t.coeffs[i] = Complex64::new(1.0, 0.0);
        Ok(t)
    }

    /// Coefficients aligned with `trunc.sumset()`.
    pub fn from_coeffs(trunc: &Truncation, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != trunc.sumset().len() {
            return Err(Error::DimensionMismatch { expected: trunc.sumset().len(), actual: coeffs.len() });
        }
        Ok(TruncatedOperator { trunc: trunc.clone(), coeffs })
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, p: &[i64]) -> Complex64 {
        self.trunc.sumset_index(p).map_or(Complex64::default(), |i| self.coeffs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &Complex64)> {
        self.trunc.sumset().iter().zip(&self.coeffs)
    }

    /// `t_p ↦ conj(t_{−p})`.
    pub fn adjoint(&self) -> Self {
        let coeffs = self.trunc.sumset().iter().map(|p| self.coeff(&neg(p)).conj()).collect();
        TruncatedOperator { trunc: self.trunc.clone(), coeffs }
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.iter().all(|(p, c)| (self.coeff(&neg(p)) - c.conj()).norm() <= tol)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        TruncatedOperator { trunc: self.trunc.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.trunc.check_same(&other.trunc)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedOperator { trunc: self.trunc.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// The torus action `α_θ`: `t_p ↦ e^{i p·θ} t_p`.
    pub fn rotate(&self, theta: &[f64]) -> Self {
        let coeffs = self.iter().map(|(p, c)| c * crate::kernels::phase(p, theta)).collect();
        TruncatedOperator { trunc: self.trunc.clone(), coeffs }
    }

    /// The `N_B × N_B` matrix `(t_{k−l})`.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.trunc.size();
        let idx = self.trunc.diff_index();
        DMatrix::from_fn(n, n, |k, l| self.coeffs[idx[k * n + l] as usize])
    }

    pub fn to_dense_op(&self) -> DenseOperator {
        DenseOperator { matrix: self.to_dense(), spinor_dim: 1, points: self.trunc.points().clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("operators always serialize")
    }
}

impl Serialize for TruncatedOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TruncatedOperator", 4)?;
        st.serialize_field("dim", &self.dim())?;
        match self.trunc.shape() {
            Shape::Ball(r) => st.serialize_field("lambda_sq", &r.to_string())?,
            Shape::Cube(n) => st.serialize_field("box_half_width", &n)?,
        }
        let entries: Vec<(&Point, f64, f64)> = self.iter().map(|(p, c)| (p, c.re, c.im)).collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// `ρ(f) = P f P`: `t_p = f̂(p)` on the sumset, other coefficients dropped.
pub fn compress(f: &TrigPolynomial, trunc: &Truncation) -> Result<TruncatedOperator> {
    if f.dim() != trunc.dim() {
        return Err(Error::DimensionMismatch { expected: trunc.dim(), actual: f.dim() });
    }
    let coeffs = trunc.sumset().iter().map(|p| f.coeff(p)).collect();
    Ok(TruncatedOperator { trunc: trunc.clone(), coeffs })
}

/// `σ(T) = Σ_p m(p) t_p e_p`.
pub fn expectation(t: &TruncatedOperator) -> TrigPolynomial {
    let n = t.trunc.size() as f64;
    TrigPolynomial::from_coeffs(
        t.dim(),
        t.iter()
            .zip(t.trunc.overlaps())
            .filter(|((_, c), _)| **c != Complex64::default())
            .map(|((p, c), &o)| (p.clone(), c * (o as f64 / n))),
    )
    .expect("dimensions agree")
}

/// Dense `Σ_μ A_μ ⊗ γ^μ` from scalar `N_B × N_B` blocks `A_μ`.
fn spinorize(blocks: &[DMatrix<Complex64>], gamma: &GammaRep) -> DMatrix<Complex64> {
    let n = blocks[0].nrows();
    let s = gamma.spinor_dim();
    let mut out = DMatrix::zeros(n * s, n * s);
    for (a, g) in blocks.iter().zip(gamma.matrices()) {
        out += a.kronecker(g);
    }
    out
}

fn check_gamma(trunc: &Truncation, gamma: &GammaRep) -> Result<()> {
    if gamma.dim() != trunc.dim() {
        return Err(Error::DimensionMismatch { expected: trunc.dim(), actual: gamma.dim() });
    }
    Ok(())
}

/// `P [D, f] P`: the compression of the multiplication operator
/// `Σ_μ (Σ_n n_μ f̂(n) e_n) ⊗ γ^μ` to the truncated spinor space.
pub fn dirac_commutator_fn(f: &TrigPolynomial, gamma: &GammaRep, trunc: &Truncation) -> Result<DenseOperator> {
    check_gamma(trunc, gamma)?;
    let blocks = (1..=trunc.dim())
        .map(|mu| {
            // n_μ f̂(n) = −i · (coefficient of ∂_μ f)
            let g = f.partial(mu)?.scale(Complex64::new(0.0, -1.0));
            Ok(compress(&g, trunc)?.to_dense())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DenseOperator { matrix: spinorize(&blocks, gamma), spinor_dim: gamma.spinor_dim(), points: trunc.points().clone() })
}

/// `[D_Λ, T]` with entries `Σ_μ (k−l)_μ t_{k−l} γ^μ`.
pub fn dirac_commutator_op(t: &TruncatedOperator, gamma: &GammaRep) -> Result<DenseOperator> {
    let trunc = &t.trunc;
    check_gamma(trunc, gamma)?;
    let n = trunc.size();
    let pts = trunc.points().points();
    let dense = t.to_dense();
    let blocks: Vec<DMatrix<Complex64>> = (0..trunc.dim())
        .map(|mu| DMatrix::from_fn(n, n, |k, l| dense[(k, l)] * (pts[k][mu] - pts[l][mu]) as f64))
        .collect();
    Ok(DenseOperator { matrix: spinorize(&blocks, gamma), spinor_dim: gamma.spinor_dim(), points: trunc.points().clone() })
}

/// `‖[D_Λ, T]‖`.
pub fn lipschitz_op(t: &TruncatedOperator) -> Result<f64> {
    let gamma = super::clifford_generators(t.dim())?;
    let c = dirac_commutator_op(t, &gamma)?;
    if t.is_self_adjoint(0.0) {
        // [D_Λ, T] is anti-Hermitian; i[D_Λ, T] is Hermitian
        hermitian_norm(&(c.matrix * Complex64::new(0.0, 1.0)))
    } else {
        spectral_norm(&c.matrix)
    }
}

fn check_finite(a: &DMatrix<Complex64>) -> Result<()> {
    for (idx, v) in a.iter().enumerate() {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { row: idx % a.nrows(), col: idx / a.nrows() });
        }
    }
    Ok(())
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    check_finite(a)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(a.singular_values().max())
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
pub fn hermitian_norm(a: &DMatrix<Complex64>) -> Result<f64> {
    check_finite(a)?;
    if a.is_empty() {
        return Ok(0.0);
    }
    let ev = a.clone().symmetric_eigenvalues();
    Ok(ev.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &DMatrix<Complex64>) -> Result<f64> {
    check_finite(a)?;
    let ev = a.clone().symmetric_eigenvalues();
    Ok(ev.iter().fold(f64::INFINITY, |m, &v| m.min(v)))
}

/// Schur multiplication by a symbol: `t_p ↦ s(p) t_p`.
pub fn schur_multiply(s: &SymbolTable, t: &TruncatedOperator) -> Result<TruncatedOperator> {
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), actual: s.dim() });
    }
    let coeffs = t.iter().map(|(p, c)| c * s.get_f64(p)).collect();
    Ok(TruncatedOperator { trunc: t.trunc.clone(), coeffs })
}
