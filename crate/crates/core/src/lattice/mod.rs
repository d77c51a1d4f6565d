//! Exact enumeration of Z^d lattice points in closed balls, lenses, sumsets and cubes.
//!
//! Radii are carried as exact rationals `Λ²`, so every membership test is an
//! integer comparison. All sets are kept in lexicographic order, which is the
//! canonical indexing used for every matrix built on top of them.

mod hull;

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub use hull::{convex_hull, ConvexHullData, Halfspace};

/// An integer vector in Z^d.
pub type Point = Vec<i64>;

/// Exact rational used for radii and symbol values.
pub type Rational = Ratio<i64>;

/// Squared Euclidean norm of an integer vector.
pub fn norm_sq(p: &[i64]) -> i64 {
    p.iter().map(|x| x * x).sum()
}

pub fn add(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> Point {
    a.iter().map(|x| -x).collect()
}

/// A closed-ball radius, stored as the exact value `Λ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Radius {
    lambda_sq: Rational,
}

impl Radius {
    pub fn from_squared(lambda_sq: Rational) -> Result<Self> {
        if lambda_sq < Rational::from_integer(0) {
            return Err(Error::invalid(format!("negative squared radius {lambda_sq}")));
        }
        Ok(Radius { lambda_sq })
    }

    /// Radius `Λ = lambda` for a nonnegative integer.
    pub fn integer(lambda: i64) -> Result<Self> {
        if lambda < 0 {
            return Err(Error::invalid(format!("negative radius {lambda}")));
        }
        Self::from_squared(Rational::from_integer(lambda * lambda))
    }

    /// Radius with `Λ² = lambda_sq`.
    pub fn squared(lambda_sq: i64) -> Result<Self> {
        Self::from_squared(Rational::from_integer(lambda_sq))
    }

    pub fn lambda_sq(&self) -> Rational {
        self.lambda_sq
    }

    pub fn value(&self) -> f64 {
        (*self.lambda_sq.numer() as f64 / *self.lambda_sq.denom() as f64).sqrt()
    }

    /// Whether a vector of squared norm `norm_sq` lies in the closed ball.
    pub fn admits(&self, norm_sq: i64) -> bool {
        (norm_sq as i128) * (*self.lambda_sq.denom() as i128) <= *self.lambda_sq.numer() as i128
    }

    /// `⌊Λ⌋`, the largest integer `k` with `k² ≤ Λ²`.
    pub fn floor(&self) -> i64 {
        let mut k = self.value().floor() as i64;
        while k > 0 && !self.admits(k * k) {
            k -= 1;
        }
        while self.admits((k + 1) * (k + 1)) {
            k += 1;
        }
        k
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lambda_sq.numer(), self.lambda_sq.denom())
    }
}

impl FromStr for Radius {
    type Err = Error;

    /// Parses `Λ²` written as `a/b` or `a`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::invalid(format!("bad rational '{s}'")))
        };
        let value = match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d == 0 {
                    return Err(Error::invalid(format!("zero denominator in '{s}'")));
                }
                Rational::new(parse(n)?, d)
            }
            None => Rational::from_integer(parse(s)?),
        };
        Radius::from_squared(value)
    }
}

/// How a [`LatticeSet`] was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetKind {
    Ball(Radius),
    Lense { radius: Radius, shift: Point },
    Sumset,
    Cube(u32),
    HullExtremes,
    Custom,
}

/// A finite set of integer vectors of a common dimension, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    dim: usize,
    points: Vec<Point>,
    kind: SetKind,
}

impl LatticeSet {
    pub fn new(dim: usize, mut points: Vec<Point>, kind: SetKind) -> Result<Self> {
        check_dim(dim)?;
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: bad.len() });
        }
        points.sort_unstable();
        points.dedup();
        Ok(LatticeSet { dim, points, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    /// Position of `p` in canonical order.
    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_subset_of(&self, other: &LatticeSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("integer vectors always serialize")
    }
}

impl Serialize for LatticeSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.points.len()))?;
        for p in &self.points {
            seq.serialize_element(p)?;
        }
        seq.end()
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(())
}

/// Visits every point of the cube `[lo, hi]^d` in lexicographic order.
pub(crate) fn for_each_in_cube(d: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    if lo > hi {
        return;
    }
    let mut p = vec![lo; d];
    loop {
        f(&p);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if p[i] < hi {
                p[i] += 1;
                break;
            }
            p[i] = lo;
        }
    }
}

/// All `n ∈ Z^d` with `‖n‖² ≤ Λ²`, in lexicographic order.
pub fn enumerate_ball(d: usize, r: Radius) -> Result<LatticeSet> {
    check_dim(d)?;
    let k = r.floor();
    let mut points = Vec::new();
    for_each_in_cube(d, -k, k, |p| {
        if r.admits(norm_sq(p)) {
            points.push(p.to_vec());
        }
    });
    Ok(LatticeSet { dim: d, points, kind: SetKind::Ball(r) })
}

/// `N_B(Λ)`, the number of lattice points in the closed ball.
pub fn count_ball(d: usize, r: Radius) -> Result<usize> {
    check_dim(d)?;
    let k = r.floor();
    let mut count = 0;
    for_each_in_cube(d, -k, k, |p| {
        if r.admits(norm_sq(p)) {
            count += 1;
        }
    });
    Ok(count)
}

fn lense_filter(d: usize, r: Radius, n: &[i64], mut f: impl FnMut(&[i64])) -> Result<()> {
    check_dim(d)?;
    if n.len() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: n.len() });
    }
    let k = r.floor();
    for_each_in_cube(d, -k, k, |p| {
        if r.admits(norm_sq(p)) {
            let shifted: i64 = p.iter().zip(n).map(|(a, b)| (a - b) * (a - b)).sum();
            if r.admits(shifted) {
                f(p);
            }
        }
    });
    Ok(())
}

/// The lense `B̄_Λ ∩ (B̄_Λ + n) ∩ Z^d`.
pub fn enumerate_lense(d: usize, r: Radius, n: &[i64]) -> Result<LatticeSet> {
    let mut points = Vec::new();
    lense_filter(d, r, n, |p| points.push(p.to_vec()))?;
    Ok(LatticeSet {
        dim: d,
        points,
        kind: SetKind::Lense { radius: r, shift: n.to_vec() },
    })
}

/// `N_L(Λ, n)`, the number of lattice points in the lense.
pub fn count_lense(d: usize, r: Radius, n: &[i64]) -> Result<usize> {
    let mut count = 0;
    lense_filter(d, r, n, |_| count += 1)?;
    Ok(count)
}

/// Minkowski sum `{a + b}`, deduplicated and ordered.
pub fn sumset(a: &LatticeSet, b: &LatticeSet) -> Result<LatticeSet> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, actual: b.dim });
    }
    let mut points: Vec<Point> = a
        .points
        .iter()
        .flat_map(|x| b.points.iter().map(move |y| add(x, y)))
        .collect();
    points.sort_unstable();
    points.dedup();
    Ok(LatticeSet { dim: a.dim, points, kind: SetKind::Sumset })
}

/// The cube `{n : |n_i| ≤ N}` with `(2N+1)^d` points.
pub fn enumerate_box(d: usize, half_width: u32) -> Result<LatticeSet> {
    check_dim(d)?;
    let n = half_width as i64;
    let mut points = Vec::with_capacity((2 * half_width as usize + 1).pow(d as u32));
    for_each_in_cube(d, -n, n, |p| points.push(p.to_vec()));
    Ok(LatticeSet { dim: d, points, kind: SetKind::Cube(half_width) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_ball(d: usize, lambda_sq: i64) -> Vec<Point> {
        // independent scan over a generous cube with plain comparisons
        let mut out = Vec::new();
        let k = (lambda_sq as f64).sqrt() as i64 + 2;
        for_each_in_cube(d, -k, k, |p| {
            if norm_sq(p) <= lambda_sq {
                out.push(p.to_vec());
            }
        });
        out
    }

    #[test]
    fn ball_examples() {
        let b = enumerate_ball(1, Radius::integer(2).unwrap()).unwrap();
        assert_eq!(b.points(), &[vec![-2], vec![-1], vec![0], vec![1], vec![2]]);
        assert_eq!(count_ball(2, Radius::squared(2).unwrap()).unwrap(), 9);
        let origin = enumerate_ball(3, Radius::integer(0).unwrap()).unwrap();
        assert_eq!(origin.points(), &[vec![0, 0, 0]]);
        assert_eq!(count_ball(1, Radius::integer(3).unwrap()).unwrap(), 7);
        assert_eq!(
            count_ball(2, Radius::integer(4).unwrap()).unwrap(),
            brute_ball(2, 16).len()
        );
    }

    #[test]
    fn fractional_radius_membership_is_exact() {
        // Λ² = 5/2: ‖(1,1)‖² = 2 ≤ 2.5 but ‖(2,0)‖² = 4 is outside
        let r: Radius = "5/2".parse().unwrap();
        let b = enumerate_ball(2, r).unwrap();
        assert!(b.contains(&[1, 1]));
        assert!(!b.contains(&[2, 0]));
        assert_eq!(r.floor(), 1);
        assert_eq!(Radius::squared(9).unwrap().floor(), 3);
        assert_eq!(Radius::squared(8).unwrap().floor(), 2);
    }

    #[test]
    fn invalid_arguments() {
        assert!(enumerate_ball(0, Radius::integer(1).unwrap()).is_err());
        assert!(Radius::squared(-1).is_err());
        assert!("3/0".parse::<Radius>().is_err());
        assert!("-4".parse::<Radius>().is_err());
        assert!(matches!(
            enumerate_lense(2, Radius::integer(1).unwrap(), &[1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lense_examples() {
        let r = Radius::squared(2).unwrap();
        assert_eq!(
            enumerate_lense(2, r, &[0, 0]).unwrap().points(),
            enumerate_ball(2, r).unwrap().points()
        );
        assert_eq!(count_lense(2, r, &[3, 0]).unwrap(), 0);
        assert_eq!(count_lense(2, r, &[1, 0]).unwrap(), 6);
    }

    #[test]
    fn sumset_examples() {
        let b2 = enumerate_ball(2, Radius::integer(2).unwrap()).unwrap();
        let b4 = enumerate_ball(2, Radius::integer(4).unwrap()).unwrap();
        let s = sumset(&b2, &b2).unwrap();
        assert!(b4.contains(&[3, 2]));
        assert!(!s.contains(&[3, 2]));
        assert!(s.is_subset_of(&b4));

        let b1 = enumerate_ball(3, Radius::integer(1).unwrap()).unwrap();
        let b2 = enumerate_ball(3, Radius::integer(2).unwrap()).unwrap();
        let s = sumset(&b1, &b1).unwrap();
        assert!(b2.contains(&[1, 1, 1]));
        assert!(!s.contains(&[1, 1, 1]));

        let zero = LatticeSet::new(2, vec![vec![0, 0]], SetKind::Custom).unwrap();
        let b = enumerate_ball(2, Radius::squared(5).unwrap()).unwrap();
        assert_eq!(sumset(&zero, &b).unwrap().points(), b.points());
    }

    #[test]
    fn box_examples() {
        assert_eq!(enumerate_box(2, 1).unwrap().len(), 9);
        assert_eq!(
            enumerate_box(1, 3).unwrap().points(),
            enumerate_ball(1, Radius::integer(3).unwrap()).unwrap().points()
        );
        assert_eq!(enumerate_box(3, 2).unwrap().len(), 125);
    }

    #[test]
    fn json_is_array_of_vectors() {
        let b = enumerate_ball(1, Radius::integer(1).unwrap()).unwrap();
        assert_eq!(b.to_json(), "[[-1],[0],[1]]");
    }
}
