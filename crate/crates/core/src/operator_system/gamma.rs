use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Self-adjoint generators `γ^1, …, γ^d` of the Clifford algebra on `C^s`,
/// `s = 2^⌊d/2⌋`, with `γ^μ γ^ν + γ^ν γ^μ = 2 δ^{μν}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRep {
    dim: usize,
    spinor_dim: usize,
    matrices: Vec<DMatrix<Complex64>>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli() -> [DMatrix<Complex64>; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

fn even_generators(d: usize) -> Vec<DMatrix<Complex64>> {
    if d == 0 {
        return Vec::new();
    }
    let [s1, s2, s3] = pauli();
    let lower = even_generators(d - 2);
    let id = DMatrix::<Complex64>::identity(1 << ((d - 2) / 2), 1 << ((d - 2) / 2));
    let mut out: Vec<_> = lower.iter().map(|g| g.kronecker(&s3)).collect();
    out.push(id.kronecker(&s1));
    out.push(id.kronecker(&s2));
    out
}

/// Standard recursive construction; odd dimensions append the chirality element.
pub fn clifford_generators(d: usize) -> Result<GammaRep> {
    crate::lattice::check_dim(d)?;
    if d > 12 {
        return Err(Error::ScaleLimit(format!("spinor dimension 2^{} requested", d / 2)));
    }
    let k = d / 2;
    let s = 1usize << k;
    let mut matrices = even_generators(2 * k);
    if d % 2 == 1 {
        // (−i)^k γ^1 ⋯ γ^{2k}
        let mut chi = DMatrix::<Complex64>::identity(s, s);
        for g in &matrices {
            chi *= g;
        }
        let phase = match k % 4 {
            0 => c(1.0, 0.0),
            1 => c(0.0, -1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, 1.0),
        };
        matrices.push(chi * phase);
    }
    let rep = GammaRep { dim: d, spinor_dim: s, matrices };
    rep.verify()?;
    Ok(rep)
}

impl GammaRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    pub fn matrices(&self) -> &[DMatrix<Complex64>] {
        &self.matrices
    }

    /// `γ^μ` with `mu` 1-based.
    pub fn get(&self, mu: usize) -> &DMatrix<Complex64> {
        &self.matrices[mu - 1]
    }

    /// `Σ_μ c_μ γ^μ`.
    pub fn combine(&self, coeffs: &[Complex64]) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.spinor_dim, self.spinor_dim);
        for (g, &w) in self.matrices.iter().zip(coeffs) {
            out += g * w;
        }
        out
    }

    /// Checks self-adjointness and the anticommutation relations exactly.
    ///
    /// All entries lie in `{0, ±1, ±i}`, so floating-point products are exact.
    pub fn verify(&self) -> Result<()> {
        let s = self.spinor_dim;
        let id = DMatrix::<Complex64>::identity(s, s);
        for (m, a) in self.matrices.iter().enumerate() {
            if a.adjoint() != *a {
                return Err(Error::Internal(format!("gamma {} is not self-adjoint", m + 1)));
            }
            for (n, b) in self.matrices.iter().enumerate() {
                let anti = a * b + b * a;
                let expected = if m == n { &id * c(2.0, 0.0) } else { DMatrix::zeros(s, s) };
                if anti != expected {
                    return Err(Error::Internal(format!("gammas {} and {} violate the Clifford relation", m + 1, n + 1)));
                }
            }
        }
        Ok(())
    }
}
