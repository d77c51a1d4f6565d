//! The compositions `σ∘ρ` and `ρ∘σ` as multipliers by `m`, their defects
//! measured against the Lipschitz seminorm, and the antiderivative identity
//! that expresses the defects through Dirac commutators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{gamma_reference, TorusGrid};
use crate::lattice::norm_sq;
use crate::operator_system::{
    clifford_generators, dirac_commutator_op, hermitian_norm, lipschitz_fn, lipschitz_op,
    TrigPolynomial, TruncatedOperator,
};
use crate::symbols::{to_f64, w_value};
use crate::truncation::Truncation;

/// `σ(ρ(f)) = F_m f`.
pub fn sigma_rho(f: &TrigPolynomial, trunc: &Truncation) -> Result<TrigPolynomial> {
    trunc.check_point(&vec![0; f.dim()])?;
    TrigPolynomial::from_coeffs(
        f.dim(),
        f.coeffs()
            .filter(|(n, _)| trunc.sumset_index(n).is_some())
            .map(|(n, c)| (n.clone(), c * trunc.symbol_f64(n))),
    )
}

/// `ρ(σ(T)) = S_m T`.
pub fn rho_sigma(t: &TruncatedOperator) -> TruncatedOperator {
    let trunc = t.truncation();
    let n = trunc.size() as f64;
    let coeffs = t.coeffs().iter().zip(trunc.overlaps()).map(|(c, &o)| c * (o as f64 / n)).collect();
    TruncatedOperator::from_coeffs(trunc, coeffs).expect("same truncation")
}

/// Outcome of a defect measurement `‖x − x∘‖` against `γ ‖[D, x]‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectReport {
    pub dim: usize,
    pub truncation: String,
    pub object: String,
    pub defect_norm: f64,
    pub lipschitz: f64,
    /// `defect_norm / lipschitz`; absent for inputs with vanishing commutator.
    pub ratio: Option<f64>,
    pub gamma_bound: f64,
}

impl DefectReport {
    pub fn is_degenerate(&self) -> bool {
        self.ratio.is_none()
    }

    /// `ratio ≤ γ + tol` (degenerate reports pass when the defect vanishes).
    pub fn holds(&self, tol: f64) -> bool {
        match self.ratio {
            Some(r) => r <= self.gamma_bound + tol,
            None => self.defect_norm <= tol,
        }
    }
}

/// Computes defect reports for one truncation, sharing its `γ`.
#[derive(Clone, Debug)]
pub struct DefectCertifier {
    trunc: Truncation,
    gamma_bound: f64,
    min_resolution: usize,
}

/// Commutator norms below this multiple of the input scale count as zero.
const DEGENERATE: f64 = 1e-12;

impl DefectCertifier {
    pub fn new(trunc: &Truncation) -> Result<Self> {
        Ok(DefectCertifier {
            trunc: trunc.clone(),
            gamma_bound: gamma_reference(trunc)?,
            min_resolution: if trunc.dim() >= 3 { 24 } else { 64 },
        })
    }

    /// Lower bound on the per-axis grid size used for function suprema.
    pub fn with_min_resolution(mut self, m: usize) -> Self {
        self.min_resolution = m;
        self
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_bound
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    fn function_grid(&self, f: &TrigPolynomial) -> Result<TorusGrid> {
        let m = (8 * f.degree() as usize + 9).max(self.min_resolution);
        TorusGrid::new(self.trunc.dim(), m)
    }

    fn report(&self, object: &str, defect_norm: f64, lipschitz: f64, scale: f64) -> Result<DefectReport> {
        let ratio = if lipschitz > DEGENERATE * scale.max(1.0) {
            Some(defect_norm / lipschitz)
        } else {
            if defect_norm > 1e-9 * scale.max(1.0) {
                return Err(Error::Internal(format!(
                    "{object}: vanishing commutator but defect {defect_norm}"
                )));
            }
            None
        };
        Ok(DefectReport {
            dim: self.trunc.dim(),
            truncation: self.trunc.shape().to_string(),
            object: object.to_string(),
            defect_norm,
            lipschitz,
            ratio,
            gamma_bound: self.gamma_bound,
        })
    }

    /// `sup |f − σρ(f)|` against `sup ‖[D, f]‖`, both on a grid resolving `f`.
    pub fn function_defect(&self, f: &TrigPolynomial) -> Result<DefectReport> {
        if !f.is_self_adjoint(1e-12) {
            return Err(Error::invalid("function defect needs a real-valued polynomial"));
        }
        let grid = self.function_grid(f)?;
        let diff = f.sub(&sigma_rho(f, &self.trunc)?)?;
        let defect = diff.grid_sup(&grid)?;
        let lip = lipschitz_fn(f, &grid)?;
        self.report("function", defect, lip, f.l1_norm())
    }

    /// `‖T − ρσ(T)‖` against `‖[D_Λ, T]‖`.
    pub fn operator_defect(&self, t: &TruncatedOperator) -> Result<DefectReport> {
        self.trunc.check_same(t.truncation())?;
        if !t.is_self_adjoint(1e-12) {
            return Err(Error::invalid("operator defect needs a self-adjoint operator"));
        }
        let diff = t.sub(&rho_sigma(t))?;
        let defect = hermitian_norm(&diff.to_dense())?;
        let lip = lipschitz_op(t)?;
        let scale = t.coeffs().iter().map(|c| c.norm()).sum::<f64>();
        self.report("operator", defect, lip, scale)
    }
}

/// `f − F_m f` against `(1/2) Σ_μ (F_{w^μ} ⊗ {γ^μ, ·})([D, f])`, both
/// sampled on a grid: scalar left side, `s × s` right side per node.
#[derive(Clone, Debug)]
pub struct AntiderivativeSides {
    pub lhs: Vec<Complex64>,
    /// `Σ_μ (F_{w^μ} ⊗ {γ^μ, ·})([D, f])` before any scalar prefactor.
    pub rhs: Vec<DMatrix<Complex64>>,
}

impl AntiderivativeSides {
    /// `max |c_lhs · lhs ⊗ 1 − c_rhs · rhs|` over nodes and entries.
    pub fn residual(&self, c_lhs: Complex64, c_rhs: Complex64) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, r) in self.lhs.iter().zip(&self.rhs) {
            for i in 0..r.nrows() {
                for j in 0..r.ncols() {
                    let left = if i == j { c_lhs * l } else { Complex64::default() };
                    worst = worst.max((left - c_rhs * r[(i, j)]).norm());
                }
            }
        }
        worst
    }
}

fn anticommutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b + b * a
}

/// Both sides of the antiderivative identity on `grid`.
pub fn antiderivative_sides(f: &TrigPolynomial, trunc: &Truncation, grid: &TorusGrid) -> Result<AntiderivativeSides> {
    let d = trunc.dim();
    if f.dim() != d || grid.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: f.dim() });
    }
    let gamma = clifford_generators(d)?;
    let lhs = f.sub(&sigma_rho(f, trunc)?)?.sample(grid)?;
    let s = gamma.spinor_dim();
    let mut rhs = vec![DMatrix::<Complex64>::zeros(s, s); grid.len()];
    for mu in 1..=d {
        let w: Vec<f64> = f
            .coeffs()
            .map(|(n, _)| w_value(trunc, n, mu).map(to_f64))
            .collect::<Result<_>>()?;
        for nu in 1..=d {
            // F_{w^μ} applied to the ν-th component n_ν f̂(n) of [D, f]
            let h = TrigPolynomial::from_coeffs(
                d,
                f.coeffs().zip(&w).map(|((n, c), &wv)| (n.clone(), c * (wv * n[nu - 1] as f64))),
            )?;
            let vals = h.sample(grid)?;
            let anti = anticommutator(gamma.get(mu), gamma.get(nu));
            for (out, v) in rhs.iter_mut().zip(vals) {
                *out += &anti * v;
            }
        }
    }
    Ok(AntiderivativeSides { lhs, rhs })
}

/// Residual of `(f − σρ f) ⊗ 1 = (1/2) Σ_μ (F_{w^μ} ⊗ {γ^μ, ·})([D, f])`.
pub fn antiderivative_reconstruction(f: &TrigPolynomial, trunc: &Truncation, grid: &TorusGrid) -> Result<f64> {
    let sides = antiderivative_sides(f, trunc, grid)?;
    Ok(sides.residual(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)))
}

/// Residual of `(T − ρσ T) ⊗ 1 = (1/2) Σ_μ (S_{w^μ} ⊗ {γ^μ, ·})([D_Λ, T])`
/// as dense matrices.
pub fn operator_antiderivative_residual(t: &TruncatedOperator) -> Result<f64> {
    let trunc = t.truncation();
    let gamma = clifford_generators(trunc.dim())?;
    let s = gamma.spinor_dim();
    let nb = trunc.size();
    let comm = dirac_commutator_op(t, &gamma)?.matrix;
    let pts = trunc.points().points();
    let eye_nb = DMatrix::<Complex64>::identity(nb, nb);
    let mut rhs = DMatrix::<Complex64>::zeros(nb * s, nb * s);
    for mu in 1..=trunc.dim() {
        let mut w = DMatrix::<f64>::zeros(nb, nb);
        for k in 0..nb {
            for l in 0..nb {
                let p: Vec<i64> = pts[k].iter().zip(&pts[l]).map(|(a, b)| a - b).collect();
                if norm_sq(&p) > 0 {
                    w[(k, l)] = to_f64(w_value(trunc, &p, mu)?);
                }
            }
        }
        let schur = DMatrix::from_fn(nb * s, nb * s, |i, j| comm[(i, j)] * w[(i / s, j / s)]);
        let g = eye_nb.kronecker(gamma.get(mu));
        rhs += &schur * &g + &g * &schur;
    }
    let lhs = t.sub(&rho_sigma(t))?.to_dense().kronecker(&DMatrix::<Complex64>::identity(s, s));
    let diff = lhs - rhs * Complex64::new(0.5, 0.0);
    Ok(diff.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
