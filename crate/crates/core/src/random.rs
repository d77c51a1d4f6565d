//! Reproducible random inputs: one ChaCha stream per `(seed, index)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::lattice::{enumerate_ball, enumerate_box, neg, norm_sq, LatticeSet, Radius};
use crate::operator_system::{compress, TrigPolynomial, TruncatedOperator};
use crate::truncation::{Shape, Truncation};

/// Independent generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Real-valued trig polynomial with Gaussian coefficients on `support`
/// (symmetrized), damped by `(1 + ‖n‖²)^{−decay/2}`.
pub fn self_adjoint_poly(support: &LatticeSet, decay: f64, rng: &mut impl Rng) -> TrigPolynomial {
    let mut f = TrigPolynomial::zero(support.dim()).expect("support has positive dimension");
    for n in support.iter() {
        let m = neg(n);
        if *n < m || !support.contains(&m) {
            continue;
        }
        let w = (1.0 + norm_sq(n) as f64).powf(-decay / 2.0);
        let z = gaussian(rng) * w;
        if *n == m {
            f.add_coeff(n, Complex64::new(z.re, 0.0)).expect("dimension checked");
        } else {
            f.add_coeff(n, z).expect("dimension checked");
            f.add_coeff(&m, z.conj()).expect("dimension checked");
        }
    }
    f
}

/// Complex trig polynomial with Gaussian coefficients on `support`.
pub fn complex_poly(support: &LatticeSet, rng: &mut impl Rng) -> TrigPolynomial {
    TrigPolynomial::from_coeffs(support.dim(), support.iter().map(|n| (n.clone(), gaussian(rng))))
        .expect("support has positive dimension")
}

/// `|g|² = g* g` as a trig polynomial.
pub fn abs_square(g: &TrigPolynomial) -> TrigPolynomial {
    let mut out = TrigPolynomial::zero(g.dim()).expect("positive dimension");
    for (a, ca) in g.coeffs() {
        for (b, cb) in g.coeffs() {
            let n: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            out.add_coeff(&n, ca * cb.conj()).expect("dimension checked");
        }
    }
    out
}

/// The natural support of test functions for a truncation: modes up to twice
/// its size (`B̄_{2Λ}`, or the box of half-width `2N`).
pub fn doubled_support(trunc: &Truncation) -> Result<LatticeSet> {
    match trunc.shape() {
        Shape::Ball(r) => enumerate_ball(trunc.dim(), Radius::from_squared(r.lambda_sq() * 4)?),
        Shape::Cube(n) => enumerate_box(trunc.dim(), 2 * n),
    }
}

/// Random self-adjoint `T` with Gaussian coefficients on the sumset.
pub fn self_adjoint_operator(trunc: &Truncation, rng: &mut impl Rng) -> TruncatedOperator {
    let f = self_adjoint_poly(trunc.sumset(), 0.0, rng);
    compress(&f, trunc).expect("dimensions agree")
}

/// Positive semidefinite `ρ(|g|²)` with `g` supported on the truncation's modes.
pub fn psd_operator(trunc: &Truncation, rng: &mut impl Rng) -> TruncatedOperator {
    let g = complex_poly(trunc.points(), rng);
    compress(&abs_square(&g), trunc).expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = sample_rng(7, 3).random();
        let b: u64 = sample_rng(7, 3).random();
        let c: u64 = sample_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_polys_are_self_adjoint() {
        let s = enumerate_ball(2, Radius::squared(8).unwrap()).unwrap();
        let f = self_adjoint_poly(&s, 1.0, &mut sample_rng(1, 0));
        assert!(f.is_self_adjoint(0.0));
        assert_eq!(f.len(), s.len());
        let g = complex_poly(&s, &mut sample_rng(1, 1));
        assert!(abs_square(&g).is_self_adjoint(1e-12));
    }
}
