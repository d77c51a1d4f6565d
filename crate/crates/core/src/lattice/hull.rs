//! Exact convex hulls of finite integer point sets in dimension at most 3.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{sub, LatticeSet, Point};
use crate::error::{Error, Result};
use crate::exact::{integer_nullspace, primitive, rank_with_pivots};

/// The closed halfspace `{x : normal · x ≤ offset}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Halfspace {
    pub fn value(&self, x: &[i64]) -> i64 {
        dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.value(x) <= self.offset
    }

    /// Whether `x` lies on the bounding hyperplane.
    pub fn is_active(&self, x: &[i64]) -> bool {
        self.value(x) == self.offset
    }
}

/// Vertex and facet description of `co(S)` for a finite `S ⊂ Z^d`.
///
/// When `S` is not full-dimensional the facet list also contains pairs of
/// opposite halfspaces cutting out its affine hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexHullData {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub facets: Vec<Halfspace>,
}

impl ConvexHullData {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.facets.iter().all(|h| h.contains(x))
    }

    pub fn is_vertex(&self, x: &[i64]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(x)).is_ok()
    }

    /// Normals of the halfspaces whose boundary passes through `x`.
    pub fn active_normals(&self, x: &[i64]) -> Vec<&[i64]> {
        self.facets
            .iter()
            .filter(|h| h.is_active(x))
            .map(|h| h.normal.as_slice())
            .collect()
    }

    pub fn to_set(&self) -> LatticeSet {
        LatticeSet {
            dim: self.dim,
            points: self.vertices.clone(),
            kind: super::SetKind::HullExtremes,
        }
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[i64], b: &[i64]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Convex hull of a nonempty set in dimension `d ≤ 3`.
pub fn convex_hull(s: &LatticeSet) -> Result<ConvexHullData> {
    let d = s.dim();
    if s.is_empty() {
        return Err(Error::invalid("convex hull of an empty set"));
    }
    if d > 3 {
        return Err(Error::invalid(format!("convex hulls are supported for d ≤ 3, got d = {d}")));
    }
    let points = s.points();
    let base = &points[0];
    let diffs: Vec<Vec<i64>> = points[1..].iter().map(|p| sub(p, base)).collect();
    let (rank, pivots) = if diffs.is_empty() {
        (0, Vec::new())
    } else {
        rank_with_pivots(&diffs)?
    };

    let mut facets = BTreeSet::new();
    if rank < d {
        // equalities cutting out the affine hull
        for mut nu in integer_nullspace(&diffs_or_zero(&diffs, d), d)? {
            primitive(&mut nu);
            let c = dot(&nu, base);
            facets.insert(Halfspace { normal: nu.iter().map(|x| -x).collect(), offset: -c });
            facets.insert(Halfspace { normal: nu, offset: c });
        }
    }

    let project = |p: &Point| -> Vec<i64> { pivots.iter().map(|&c| p[c]).collect() };
    let lift = |h: Halfspace| -> Halfspace {
        let mut normal = vec![0; d];
        for (i, &c) in pivots.iter().enumerate() {
            normal[c] = h.normal[i];
        }
        Halfspace { normal, offset: h.offset }
    };

    let projected: Vec<Vec<i64>> = points.iter().map(project).collect();
    let (vertex_idx, reduced) = match rank {
        0 => (vec![0], Vec::new()),
        1 => hull_1d(&projected),
        2 => hull_2d(&projected),
        _ => hull_3d(&projected),
    };
    facets.extend(reduced.into_iter().map(lift));

    let mut vertices: Vec<Point> = vertex_idx.into_iter().map(|i| points[i].clone()).collect();
    vertices.sort_unstable();
    Ok(ConvexHullData { dim: d, vertices, facets: facets.into_iter().collect() })
}

fn diffs_or_zero(diffs: &[Vec<i64>], d: usize) -> Vec<Vec<i64>> {
    if diffs.is_empty() {
        vec![vec![0; d]]
    } else {
        diffs.to_vec()
    }
}

fn hull_1d(pts: &[Vec<i64>]) -> (Vec<usize>, Vec<Halfspace>) {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in pts.iter().enumerate() {
        if p[0] < pts[lo][0] {
            lo = i;
        }
        if p[0] > pts[hi][0] {
            hi = i;
        }
    }
    let facets = vec![
        Halfspace { normal: vec![1], offset: pts[hi][0] },
        Halfspace { normal: vec![-1], offset: -pts[lo][0] },
    ];
    (vec![lo, hi], facets)
}

fn turn(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; collinear boundary points are not vertices.
fn hull_2d(pts: &[Vec<i64>]) -> (Vec<usize>, Vec<Halfspace>) {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    order.dedup_by(|a, b| pts[*a] == pts[*b]);
    let mut chain: Vec<usize> = Vec::with_capacity(2 * order.len());
    for pass in 0..2 {
        let start = chain.len();
        let iter: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(order.iter()) } else { Box::new(order.iter().rev()) };
        for &i in iter {
            while chain.len() >= start + 2
                && turn(&pts[chain[chain.len() - 2]], &pts[chain[chain.len() - 1]], &pts[i]) <= 0
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain.pop();
    }
    let n = chain.len();
    let facets = (0..n)
        .map(|j| {
            let (u, v) = (&pts[chain[j]], &pts[chain[(j + 1) % n]]);
            let mut normal = vec![v[1] - u[1], u[0] - v[0]];
            primitive(&mut normal);
            let offset = dot(&normal, u);
            Halfspace { normal, offset }
        })
        .collect();
    (chain, facets)
}

/// Facets from all supporting planes through triples of candidate points.
fn hull_3d(pts: &[Vec<i64>]) -> (Vec<usize>, Vec<Halfspace>) {
    let set: BTreeSet<&[i64]> = pts.iter().map(Vec::as_slice).collect();
    // a point that is the midpoint of two others is not extreme
    let candidates: Vec<usize> = (0..pts.len())
        .filter(|&i| {
            let p = &pts[i];
            !pts.iter().any(|q| {
                if q == p {
                    return false;
                }
                let mirror: Vec<i64> = p.iter().zip(q).map(|(a, b)| 2 * a - b).collect();
                set.contains(mirror.as_slice())
            })
        })
        .collect();

    let mut facets = BTreeSet::new();
    for (x, &i) in candidates.iter().enumerate() {
        for (y, &j) in candidates.iter().enumerate().skip(x + 1) {
            let a = sub(&pts[j], &pts[i]);
            for &k in &candidates[y + 1..] {
                let mut normal = cross(&a, &sub(&pts[k], &pts[i])).to_vec();
                if normal.iter().all(|&c| c == 0) {
                    continue;
                }
                primitive(&mut normal);
                let offset = dot(&normal, &pts[i]);
                let (mut above, mut below) = (false, false);
                for p in pts {
                    let v = dot(&normal, p);
                    above |= v > offset;
                    below |= v < offset;
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                if above {
                    facets.insert(Halfspace { normal: normal.iter().map(|c| -c).collect(), offset: -offset });
                } else {
                    facets.insert(Halfspace { normal, offset });
                }
            }
        }
    }
    let facets: Vec<Halfspace> = facets.into_iter().collect();
    let vertices = candidates
        .into_iter()
        .filter(|&i| {
            let active: Vec<Vec<i64>> = facets
                .iter()
                .filter(|h| h.is_active(&pts[i]))
                .map(|h| h.normal.clone())
                .collect();
            !active.is_empty() && rank_with_pivots(&active).is_ok_and(|(r, _)| r == 3)
        })
        .collect();
    (vertices, facets)
}
