use nalgebra::DMatrix;
use num_complex::Complex64;

use super::*;
use crate::kernels::TorusGrid;
use crate::lattice::Radius;
use crate::truncation::Truncation;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ball(d: usize, lsq: i64) -> Truncation {
    Truncation::ball(d, Radius::squared(lsq).unwrap()).unwrap()
}

#[test]
fn gamma_examples() {
    let g1 = clifford_generators(1).unwrap();
    assert_eq!(g1.matrices(), &[DMatrix::from_element(1, 1, c(1.0, 0.0))]);
    for d in 2..=5 {
        let g = clifford_generators(d).unwrap();
        assert_eq!(g.matrices().len(), d);
        assert_eq!(g.spinor_dim(), 1 << (d / 2));
        g.verify().unwrap();
    }
    let g3 = clifford_generators(3).unwrap();
    // the third generator is σ3
    assert_eq!(g3.get(3)[(0, 0)], c(1.0, 0.0));
    assert_eq!(g3.get(3)[(1, 1)], c(-1.0, 0.0));
}

#[test]
fn compress_examples() {
    let t = ball(2, 2);
    let one = TrigPolynomial::constant(2, c(1.0, 0.0)).unwrap();
    assert_eq!(compress(&one, &t).unwrap(), TruncatedOperator::identity(&t));
    let far = TrigPolynomial::mode(&[3, 0], c(1.0, 0.0)).unwrap();
    assert!(compress(&far, &t).unwrap().coeffs().iter().all(|z| z.norm() == 0.0));
}

#[test]
fn basic_operator_dense_layout() {
    let t = ball(1, 1);
    let t1 = TruncatedOperator::basis(&t, &[1]).unwrap().to_dense();
    // entry (k, l) = t_{k−l}: ones where k − l = 1, i.e. rows 1, 2 and columns 0, 1
    let expected = DMatrix::from_row_slice(
        3,
        3,
        &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0].map(|x| c(x, 0.0)),
    );
    assert_eq!(t1, expected);
    assert!(TruncatedOperator::basis(&t, &[3]).is_err());
}

#[test]
fn commutator_examples() {
    let t = ball(1, 1);
    let g = clifford_generators(1).unwrap();
    let id = TruncatedOperator::identity(&t);
    assert_eq!(lipschitz_op(&id).unwrap(), 0.0);
    let t1 = TruncatedOperator::basis(&t, &[1]).unwrap();
    let comm = dirac_commutator_op(&t1, &g).unwrap();
    assert!(comm.matrix.iter().all(|z| z.norm() == 0.0 || *z == c(1.0, 0.0)));
    assert!((spectral_norm(&comm.matrix).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn commutator_routes_agree() {
    let t = ball(2, 5);
    let g = clifford_generators(2).unwrap();
    let f = TrigPolynomial::from_coeffs(
        2,
        [
            (vec![1, 0], c(0.5, 0.25)),
            (vec![-1, 2], c(-1.0, 0.0)),
            (vec![2, 2], c(0.0, 2.0)),
            (vec![5, 0], c(1.0, 0.0)),
        ],
    )
    .unwrap();
    let a = dirac_commutator_fn(&f, &g, &t).unwrap();
    let b = dirac_commutator_op(&compress(&f, &t).unwrap(), &g).unwrap();
    assert!((&a.matrix - &b.matrix).iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn lipschitz_fn_examples() {
    let grid = TorusGrid::new(2, 64).unwrap();
    let f = TrigPolynomial::cosine_mode(&[1, 2]).unwrap();
    let b = f.lipschitz_bracket(&grid).unwrap();
    let exact = 2.0 * 5f64.sqrt();
    assert!(b.lower <= exact + 1e-12 && exact <= b.upper);
    assert!((b.lower - exact).abs() < 1e-2);
    let k = TrigPolynomial::constant(2, c(3.0, 0.0)).unwrap();
    assert_eq!(lipschitz_fn(&k, &grid).unwrap(), 0.0);
}

#[test]
fn expectation_of_identity_is_one() {
    let t = ball(3, 2);
    let s = expectation(&TruncatedOperator::identity(&t));
    assert_eq!(s.len(), 1);
    assert!((s.coeff(&[0, 0, 0]) - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn spectral_norm_basics() {
    let id = DMatrix::<Complex64>::identity(4, 4);
    assert!((spectral_norm(&id).unwrap() - 1.0).abs() < 1e-14);
    let mut bad = id.clone();
    bad[(1, 2)] = c(f64::NAN, 0.0);
    assert!(matches!(spectral_norm(&bad), Err(crate::error::Error::NonFinite { row: 1, col: 2 })));
}

#[test]
fn json_shape() {
    let t = ball(1, 0);
    let id = TruncatedOperator::identity(&t);
    assert_eq!(id.to_json(), r#"{"dim":1,"lambda_sq":"0/1","entries":[[[0],1.0,0.0]]}"#);
}
