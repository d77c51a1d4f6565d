use proptest::prelude::*;

use spectrunc::approximation::{rho_sigma, sigma_rho};
use spectrunc::distance::{connes_distance, point_state, SolverOptions};
use spectrunc::io::{read_dense, write_dense};
use spectrunc::lattice::{count_ball, count_lense, enumerate_ball, enumerate_lense, norm_sq, sumset, Radius};
use spectrunc::operator_system::{compress, expectation, schur_multiply};
use spectrunc::propagation::decompose_matrix_unit;
use spectrunc::random::{sample_rng, self_adjoint_operator, self_adjoint_poly};
use spectrunc::symbols::fejer_symbol;
use spectrunc::{Complex64, DMatrix, Rational, Truncation, TrigPolynomial};

fn radius() -> impl Strategy<Value = Radius> {
    (0i64..40, 1i64..4).prop_map(|(a, b)| Radius::from_squared(Rational::new(a, b)).unwrap())
}

fn ball(d: usize, lsq: i64) -> Truncation {
    Truncation::ball(d, Radius::squared(lsq).unwrap()).unwrap()
}

fn translate(f: &TrigPolynomial, theta: &[f64]) -> TrigPolynomial {
    let coeffs = f.coeffs().map(|(n, c)| {
        let phase: f64 = n.iter().zip(theta).map(|(&k, t)| k as f64 * t).sum();
        (n.clone(), c * Complex64::from_polar(1.0, phase))
    });
    TrigPolynomial::from_coeffs(f.dim(), coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn balls_are_symmetric(d in 1usize..=3, r in radius()) {
        let b = enumerate_ball(d, r).unwrap();
        prop_assert_eq!(b.len(), count_ball(d, r).unwrap());
        for p in b.iter() {
            let neg: Vec<i64> = p.iter().map(|x| -x).collect();
            prop_assert!(b.contains(&neg));
            let mut rev = p.clone();
            rev.reverse();
            prop_assert!(b.contains(&rev));
            prop_assert!(r.admits(norm_sq(p)));
        }
    }

    #[test]
    fn lense_is_intersection(d in 1usize..=3, r in radius(), n in prop::collection::vec(-4i64..=4, 3)) {
        let n = &n[..d];
        let b = enumerate_ball(d, r).unwrap();
        let l = enumerate_lense(d, r, n).unwrap();
        prop_assert_eq!(l.len(), count_lense(d, r, n).unwrap());
        let expect = b.iter().filter(|k| {
            let s: Vec<i64> = k.iter().zip(n).map(|(a, b)| a - b).collect();
            b.contains(&s)
        }).count();
        prop_assert_eq!(l.len(), expect);
        prop_assert!(l.is_subset_of(&b));
    }

    #[test]
    fn sumset_lies_in_doubled_ball(d in 1usize..=3, r in radius()) {
        let b = enumerate_ball(d, r).unwrap();
        let s = sumset(&b, &b).unwrap();
        let doubled = enumerate_ball(d, Radius::from_squared(r.lambda_sq() * 4).unwrap()).unwrap();
        prop_assert!(b.is_subset_of(&s));
        prop_assert!(s.is_subset_of(&doubled));
    }

    #[test]
    fn symbol_counts_lense(d in 1usize..=2, r in radius()) {
        let table = fejer_symbol(d, r).unwrap();
        let nb = count_ball(d, r).unwrap() as i64;
        for (n, v) in table.iter() {
            prop_assert_eq!(*v * nb, Rational::from_integer(count_lense(d, r, n).unwrap() as i64));
        }
    }

    #[test]
    fn dense_realization_is_toeplitz(d in 1usize..=2, lsq in 1i64..8, seed in any::<u64>()) {
        let t = ball(d, lsq);
        let op = self_adjoint_operator(&t, &mut sample_rng(seed, 0));
        let m = op.to_dense();
        prop_assert!((&m - m.adjoint()).norm() < 1e-12);
        let pts = t.points();
        for (k, pk) in pts.iter().enumerate() {
            for (l, pl) in pts.iter().enumerate() {
                let p: Vec<i64> = pk.iter().zip(pl).map(|(a, b)| a - b).collect();
                prop_assert_eq!(m[(k, l)], op.coeff(&p));
            }
        }
    }

    #[test]
    fn compositions_are_symbol_multipliers(d in 1usize..=2, lsq in 1i64..10, seed in any::<u64>()) {
        let t = ball(d, lsq);
        let support = enumerate_ball(d, Radius::squared(4 * lsq).unwrap()).unwrap();
        let f = self_adjoint_poly(&support, 1.0, &mut sample_rng(seed, 1));
        let a = expectation(&compress(&f, &t).unwrap());
        let b = sigma_rho(&f, &t).unwrap();
        for (n, c) in b.coeffs() {
            prop_assert!((a.coeff(n) - c).norm() < 1e-14);
        }
        let op = self_adjoint_operator(&t, &mut sample_rng(seed, 2));
        let via_schur = schur_multiply(&t.symbol(), &op).unwrap();
        let via_maps = rho_sigma(&op);
        let via_compose = compress(&expectation(&op), &t).unwrap();
        for ((x, y), z) in via_schur.coeffs().iter().zip(via_maps.coeffs()).zip(via_compose.coeffs()) {
            prop_assert!((x - y).norm() < 1e-14 && (x - z).norm() < 1e-14);
        }
    }

    #[test]
    fn maps_commute_with_translations(
        d in 1usize..=2, lsq in 1i64..8, seed in any::<u64>(), theta in prop::collection::vec(-3.0f64..3.0, 2),
    ) {
        let theta = &theta[..d];
        let t = ball(d, lsq);
        let support = enumerate_ball(d, Radius::squared(4 * lsq).unwrap()).unwrap();
        let f = self_adjoint_poly(&support, 1.0, &mut sample_rng(seed, 3));
        let lhs = compress(&translate(&f, theta), &t).unwrap();
        let rhs = compress(&f, &t).unwrap().rotate(theta);
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        let op = self_adjoint_operator(&t, &mut sample_rng(seed, 4));
        let x = vec![0.4; d];
        let shifted: Vec<f64> = x.iter().zip(theta).map(|(a, b)| a + b).collect();
        let lhs = expectation(&op.rotate(theta)).eval(&x).unwrap();
        let rhs = expectation(&op).eval(&shifted).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn random_matrix_units_decompose(lsq in 1i64..=10, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let t = ball(2, lsq);
        let pts = t.points().points();
        let (p, q) = (&pts[i.index(pts.len())], &pts[j.index(pts.len())]);
        let dec = decompose_matrix_unit(p, q, &t).unwrap();
        prop_assert!(dec.verify(&t).unwrap());
        let mut unit = DMatrix::<i64>::zeros(t.size(), t.size());
        unit[(t.points().index_of(p).unwrap(), t.points().index_of(q).unwrap())] = 1;
        prop_assert_eq!(dec.evaluate(&t).unwrap(), unit);
    }

    #[test]
    fn dense_binary_round_trip(rows in 0usize..6, cols in 0usize..6, seed in any::<u64>()) {
        let mut state = seed;
        let m = DMatrix::from_fn(rows, cols, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            Complex64::new(f64::from_bits(state >> 2), -(state as f64))
        });
        let mut buf = Vec::new();
        write_dense(&mut buf, &m, 1).unwrap();
        let (h, back) = read_dense(buf.as_slice()).unwrap();
        prop_assert_eq!((h.rows, h.cols), (rows, cols));
        let same = m.iter().zip(back.iter()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        prop_assert!(same);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn distance_is_translation_invariant(x in -3.0f64..3.0, y in -3.0f64..3.0, shift in -3.0f64..3.0) {
        let t = ball(1, 4);
        let opts = SolverOptions::default();
        let a = connes_distance(&point_state(&[x], &t).unwrap(), &point_state(&[y], &t).unwrap(), &opts).unwrap();
        let b = connes_distance(
            &point_state(&[x + shift], &t).unwrap(),
            &point_state(&[y + shift], &t).unwrap(),
            &opts,
        ).unwrap();
        prop_assert!(a.lower <= a.upper + 1e-12);
        prop_assert!((a.lower - b.lower).abs() <= (a.upper - a.lower) + (b.upper - b.lower) + 1e-7);
    }
}
