//! The operator system `C(T^d)^(Λ)` of multi-level Toeplitz matrices, trig
//! polynomials, Clifford generators, the compressed Dirac commutator and norms.

mod gamma;
mod operator;
mod trig;

pub use gamma::{clifford_generators, GammaRep};
pub use operator::{
    compress, dirac_commutator_fn, dirac_commutator_op, expectation, hermitian_norm, lipschitz_op,
    min_eigenvalue, schur_multiply, spectral_norm, DenseOperator, TruncatedOperator,
};
pub use trig::{fourier_multiply, lipschitz_fn, LipschitzBracket, TrigPolynomial};

#[cfg(test)]
mod tests;
