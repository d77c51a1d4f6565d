//! Basic Toeplitz operators `T_p`, their products, and the exact decomposition
//! of matrix units into signed products `T_{−k} T_{l+k}`.
//!
//! Everything here is integer arithmetic. Matrix units are indexed by lattice
//! points `E_{a,b}` with `a, b ∈ B`, and `T_p = Σ_{n ∈ L(p)} E_{n−p,n}` where
//! `L(p) = B ∩ (B + p)` is the lense.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{in_rational_span, rank_mod_p, residue, RANK_PRIME};
use crate::lattice::{add, convex_hull, neg, norm_sq, sub, Point};
use crate::operator_system::TruncatedOperator;
use crate::truncation::{Shape, Truncation};

/// Largest `N_B` accepted by [`propagation_number`].
pub const MAX_CERTIFIED_SIZE: usize = 200;

/// `T_p = Σ_{n ∈ L(p)} E_{n−p,n}`.
#[derive(Clone, Debug)]
pub struct BasicOperator {
    trunc: Truncation,
    shift: Point,
    /// Column points `n ∈ L(p)` in canonical order.
    lense: Vec<Point>,
}

impl BasicOperator {
    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    /// Positions `(n − p, n)` of the unit entries.
    pub fn support(&self) -> Vec<(Point, Point)> {
        self.lense.iter().map(|n| (sub(n, &self.shift), n.clone())).collect()
    }

    pub fn to_dense(&self) -> DMatrix<i64> {
        let pts = self.trunc.points();
        let n = pts.len();
        let mut m = DMatrix::zeros(n, n);
        for (a, b) in self.support() {
            m[(index(pts, &a), index(pts, &b))] = 1;
        }
        m
    }

    /// The same matrix as an element of the operator system (entry `(k,l)` is `t_{k−l}`).
    pub fn to_operator(&self) -> Result<TruncatedOperator> {
        TruncatedOperator::basis(&self.trunc, &neg(&self.shift))
    }
}

fn index(pts: &crate::lattice::LatticeSet, p: &[i64]) -> usize {
    pts.index_of(p).expect("point of the truncation")
}

fn check_shift(trunc: &Truncation, p: &[i64]) -> Result<()> {
    trunc.check_point(p)?;
    if trunc.sumset_index(p).is_none() {
        return Err(Error::invalid(format!("{p:?} is not in the sumset")));
    }
    Ok(())
}

fn check_member(trunc: &Truncation, p: &[i64]) -> Result<()> {
    trunc.check_point(p)?;
    if !trunc.points().contains(p) {
        return Err(Error::invalid(format!("{p:?} is not in the truncation")));
    }
    Ok(())
}

/// `L(p) ∩ L(q)` in canonical order.
fn lense_pair(trunc: &Truncation, p: &[i64], q: &[i64]) -> Vec<Point> {
    let pts = trunc.points();
    pts.iter().filter(|n| pts.contains(&sub(n, p)) && pts.contains(&sub(n, q))).cloned().collect()
}

pub fn basic_operator(p: &[i64], trunc: &Truncation) -> Result<BasicOperator> {
    check_shift(trunc, p)?;
    let zero = vec![0; p.len()];
    Ok(BasicOperator { trunc: trunc.clone(), shift: p.to_vec(), lense: lense_pair(trunc, p, &zero) })
}

/// Support of `T_p T_q`: `{(n − p − q, n) : n ∈ L(p+q) ∩ L(q)}`.
pub fn product(p: &[i64], q: &[i64], trunc: &Truncation) -> Result<Vec<(Point, Point)>> {
    check_shift(trunc, p)?;
    check_shift(trunc, q)?;
    let pq = add(p, q);
    Ok(lense_pair(trunc, &pq, q).into_iter().map(|n| (sub(&n, &pq), n)).collect())
}

/// Extreme points of the convex hull of `B`, in lexicographic order.
pub fn extreme_points(trunc: &Truncation) -> Result<Vec<Point>> {
    match trunc.shape() {
        Shape::Cube(n) => {
            let d = trunc.dim();
            let n = n as i64;
            let mut out: Vec<Point> = (0..1usize << d)
                .map(|mask| (0..d).map(|i| if mask >> (d - 1 - i) & 1 == 0 { -n } else { n }).collect())
                .collect();
            out.sort();
            out.dedup();
            Ok(out)
        }
        Shape::Ball(_) => {
            let mut v = convex_hull(trunc.points())?.vertices;
            v.sort();
            Ok(v)
        }
    }
}

/// All `n ∈ B` with `‖n‖ ≤ ‖q‖` and `n − q + m ∈ B` equal `q`.
fn separates(trunc: &Truncation, q: &[i64], m: &[i64]) -> bool {
    let pts = trunc.points();
    let r = norm_sq(q);
    pts.iter()
        .filter(|n| norm_sq(n) <= r)
        .all(|n| n.as_slice() == q || !pts.contains(&add(&sub(n, q), m)))
}

/// First extreme point `m` (lexicographic) such that the ball of radius `‖q‖`
/// meets `B − m + q` only in `q`.
pub fn find_separating_extreme_point(q: &[i64], trunc: &Truncation) -> Result<Point> {
    check_member(trunc, q)?;
    extreme_points(trunc)?
        .into_iter()
        .find(|m| separates(trunc, q, m))
        .ok_or_else(|| Error::Internal(format!("no separating extreme point for {q:?}")))
}

/// Whether the real ball of radius `‖q‖` meets `conv(B) − m + q` only in `q`.
///
/// With `m` a vertex this holds iff `m` minimizes `⟨q, ·⟩` over the vertices.
pub fn verify_convex_separation(q: &[i64], m: &[i64], trunc: &Truncation) -> Result<bool> {
    check_member(trunc, q)?;
    let ex = extreme_points(trunc)?;
    if !ex.iter().any(|v| v.as_slice() == m) {
        return Ok(false);
    }
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let qm = dot(q, m);
    Ok(ex.iter().all(|v| dot(q, v) >= qm))
}

/// `coeff · T_left T_right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub coeff: i64,
    pub left: Point,
    pub right: Point,
}

/// `E_{p,q} = Σ coeff · T_{−k} T_{l+k}` with `l = q − p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub target: (Point, Point),
    pub terms: Vec<Term>,
    /// Number of distinct norm shells visited.
    pub levels: usize,
}

impl Decomposition {
    /// The integer matrix `Σ coeff · T_left T_right`.
    pub fn evaluate(&self, trunc: &Truncation) -> Result<DMatrix<i64>> {
        let n = trunc.size();
        let mut m = DMatrix::zeros(n, n);
        for (pos, c) in self.evaluate_sparse(trunc)? {
            m[pos] = c;
        }
        Ok(m)
    }

    fn evaluate_sparse(&self, trunc: &Truncation) -> Result<HashMap<(usize, usize), i64>> {
        let pts = trunc.points();
        let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
        for t in &self.terms {
            for (a, b) in product(&t.left, &t.right, trunc)? {
                *acc.entry((index(pts, &a), index(pts, &b))).or_default() += t.coeff;
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(acc)
    }

    /// Whether the terms sum exactly to the matrix unit.
    pub fn verify(&self, trunc: &Truncation) -> Result<bool> {
        let pts = trunc.points();
        let acc = self.evaluate_sparse(trunc)?;
        let (Some(a), Some(b)) = (pts.index_of(&self.target.0), pts.index_of(&self.target.1)) else {
            return Ok(false);
        };
        Ok(acc.len() == 1 && acc.get(&(a, b)) == Some(&1))
    }
}

/// Separating extreme points, cached per `q`.
struct Separator<'a> {
    trunc: &'a Truncation,
    extreme: Vec<Point>,
    cache: HashMap<Point, Point>,
}

impl<'a> Separator<'a> {
    fn new(trunc: &'a Truncation) -> Result<Self> {
        Ok(Separator { trunc, extreme: extreme_points(trunc)?, cache: HashMap::new() })
    }

    fn get(&mut self, q: &[i64]) -> Result<Point> {
        if let Some(m) = self.cache.get(q) {
            return Ok(m.clone());
        }
        let m = self
            .extreme
            .iter()
            .find(|m| separates(self.trunc, q, m))
            .cloned()
            .ok_or_else(|| Error::Internal(format!("no separating extreme point for {q:?}")))?;
        self.cache.insert(q.to_vec(), m.clone());
        Ok(m)
    }

    fn decompose(&mut self, p: &[i64], q: &[i64]) -> Result<Decomposition> {
        let trunc = self.trunc;
        let l = sub(q, p);
        // pending units E_{n−l,n} keyed by (‖n‖², n)
        let mut work: BTreeMap<(i64, Point), i64> = BTreeMap::new();
        work.insert((norm_sq(q), q.to_vec()), 1);
        let mut terms = Vec::new();
        let mut shells = Vec::new();
        while let Some(((r, n), c)) = work.pop_first() {
            if c == 0 {
                continue;
            }
            if shells.last() != Some(&r) {
                shells.push(r);
            }
            let m = self.get(&n)?;
            let k = sub(&sub(&n, &l), &m);
            let (left, right) = (neg(&k), add(&l, &k));
            for (_, n2) in product(&left, &right, trunc)? {
                if n2 == n {
                    continue;
                }
                let r2 = norm_sq(&n2);
                if r2 <= r {
                    return Err(Error::Internal(format!("residual {n2:?} does not lie outside the shell of {n:?}")));
                }
                let e = work.entry((r2, n2)).or_default();
                *e = e.checked_sub(c).ok_or(Error::Overflow)?;
            }
            terms.push(Term { coeff: c, left, right });
        }
        Ok(Decomposition { target: (p.to_vec(), q.to_vec()), terms, levels: shells.len() })
    }
}

/// Shell-peeling decomposition of `E_{p,q}`.
pub fn decompose_matrix_unit(p: &[i64], q: &[i64], trunc: &Truncation) -> Result<Decomposition> {
    check_member(trunc, p)?;
    check_member(trunc, q)?;
    Separator::new(trunc)?.decompose(p, q)
}

/// Exact evidence that the propagation number is 2 (or 1 in the scalar case).
#[derive(Clone, Debug, Serialize)]
pub struct PropagationCertificate {
    pub dim: usize,
    pub truncation: String,
    pub size: usize,
    pub propagation_number: u32,
    /// `B = {0}`: the operator system is already the full (scalar) algebra.
    pub trivial: bool,
    pub decompositions: Vec<Decomposition>,
    /// Every decomposition evaluates exactly to its matrix unit.
    pub all_verified: bool,
    /// Rank of the distinct products used, over `Z/pZ` with `p = 2³¹ − 1`.
    pub span_rank: usize,
    pub span_rank_required: usize,
    pub e00_in_span: bool,
    pub max_levels: usize,
}

impl PropagationCertificate {
    pub fn holds(&self) -> bool {
        self.all_verified
            && self.span_rank == self.span_rank_required
            && (self.trivial || !self.e00_in_span)
            && self.propagation_number == if self.trivial { 1 } else { 2 }
    }
}

/// Decomposes every matrix unit and certifies `prop = 2`.
pub fn propagation_number(trunc: &Truncation) -> Result<PropagationCertificate> {
    let nb = trunc.size();
    if nb > MAX_CERTIFIED_SIZE {
        return Err(Error::ScaleLimit(format!("N_B = {nb} exceeds {MAX_CERTIFIED_SIZE}")));
    }
    let pts = trunc.points();
    let mut sep = Separator::new(trunc)?;
    let mut decompositions = Vec::with_capacity(nb * nb);
    let mut all_verified = true;
    // products grouped by the diagonal class l = q − p they live on
    let mut classes: BTreeMap<Point, BTreeMap<(Point, Point), ()>> = BTreeMap::new();
    for p in pts.iter() {
        for q in pts.iter() {
            let dec = sep.decompose(p, q)?;
            all_verified &= dec.verify(trunc)?;
            let class = classes.entry(sub(q, p)).or_default();
            for t in &dec.terms {
                class.insert((t.left.clone(), t.right.clone()), ());
            }
            decompositions.push(dec);
        }
    }
    let mut span_rank = 0;
    for (l, prods) in &classes {
        let cols: Vec<Point> = lense_pair(trunc, l, &vec![0; l.len()]);
        let col_index: HashMap<&Point, usize> = cols.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let rows: Vec<Vec<u64>> = prods
            .keys()
            .map(|(a, b)| {
                let mut row = vec![0u64; cols.len()];
                for (_, n) in product(a, b, trunc)? {
                    let i = col_index.get(&n).ok_or_else(|| Error::Internal("product left its diagonal".into()))?;
                    row[*i] = (row[*i] + residue(1, RANK_PRIME)) % RANK_PRIME;
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        span_rank += rank_mod_p(rows, RANK_PRIME);
    }
    // E_{0,0} against the basis {T_p}, as vectors over the N_B² entries
    let columns: Vec<Vec<(usize, i64)>> = trunc
        .sumset()
        .iter()
        .map(|p| {
            let t = basic_operator(p, trunc)?;
            Ok(t.support().iter().map(|(a, b)| (index(pts, a) * nb + index(pts, b), 1)).collect())
        })
        .collect::<Result<_>>()?;
    let zero = vec![0; trunc.dim()];
    let o = index(pts, &zero);
    let e00_in_span = in_rational_span(nb * nb, &columns, &[(o * nb + o, 1)])?;
    let trivial = nb == 1;
    let max_levels = decompositions.iter().map(|d| d.levels).max().unwrap_or(0);
    Ok(PropagationCertificate {
        dim: trunc.dim(),
        truncation: trunc.shape().to_string(),
        size: nb,
        propagation_number: if e00_in_span { 1 } else { 2 },
        trivial,
        decompositions,
        all_verified,
        span_rank,
        span_rank_required: nb * nb,
        e00_in_span,
        max_levels,
    })
}
