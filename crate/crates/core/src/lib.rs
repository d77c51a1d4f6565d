//! Spectral truncations of the flat d-torus.
//!
//! The crate works with the operator system of multi-level Toeplitz matrices
//! obtained by compressing `C(T^d)` to the span of Fourier modes `e_n` with
//! `n` in a finite lattice set (a closed Euclidean ball, or a cube for the
//! box-truncation variant). It provides:
//!
//! * exact lattice enumeration, lense counts, sumsets and convex hulls ([`lattice`]);
//! * the truncation symbol `m = N_L / N_B` and its companions ([`symbols`]);
//! * the spectral Fejer kernel with mass, tail and Lipschitz-rate diagnostics ([`kernels`]);
//! * compression `rho`, expectation `sigma`, Dirac commutators and norms ([`operator_system`]);
//! * defect certificates for the compositions `sigma∘rho` and `rho∘sigma` ([`approximation`]);
//! * Connes distances between truncated states ([`distance`]);
//! * the shell-peeling decomposition of matrix units and propagation certificates ([`propagation`]).
//!
//! Exact integer and rational arithmetic is used wherever a statement is
//! combinatorial; floating point only enters at kernel evaluation and
//! operator-norm boundaries.

pub mod approximation;
pub mod distance;
pub mod error;
pub(crate) mod exact;
pub(crate) mod fft;
pub mod io;
pub mod kernels;
pub mod lattice;
pub mod operator_system;
pub mod propagation;
pub mod random;
pub mod symbols;
pub mod truncation;

pub use approximation::{DefectCertifier, DefectReport};
pub use distance::{DistanceResult, SolverOptions, TruncatedState};
pub use error::{Error, Result};
pub use kernels::TorusGrid;
pub use lattice::{ConvexHullData, Halfspace, LatticeSet, Point, Radius, Rational, SetKind};
pub use operator_system::{DenseOperator, GammaRep, TrigPolynomial, TruncatedOperator};
pub use propagation::{Decomposition, PropagationCertificate};
pub use symbols::SymbolTable;
pub use truncation::{Shape, Truncation};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;
