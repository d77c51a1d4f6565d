//! Small exact linear-algebra kernels over `Q` (as `Ratio<i128>`) and `Z/pZ`.

use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, Zero};

use crate::error::{Error, Result};

pub(crate) type Q = Ratio<i128>;

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides an integer vector by the gcd of its entries.
pub(crate) fn primitive(v: &mut [i64]) {
    let g = v.iter().fold(0, |g, &x| gcd(g, x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// In-place reduced row echelon form. Returns the pivot columns.
pub(crate) fn rref(rows: &mut [Vec<Q>]) -> Result<Vec<usize>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let pv = rows[r][c];
        for x in rows[r].iter_mut() {
            *x = x.checked_div(&pv).ok_or(Error::Overflow)?;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                let t = p.checked_mul(&f).ok_or(Error::Overflow)?;
                *x = x.checked_sub(&t).ok_or(Error::Overflow)?;
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub(crate) fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect()
}

/// Rank of an integer matrix over the rationals, with the pivot columns.
pub(crate) fn rank_with_pivots(rows: &[Vec<i64>]) -> Result<(usize, Vec<usize>)> {
    let mut q = to_q(rows);
    let piv = rref(&mut q)?;
    Ok((piv.len(), piv))
}

/// Integer basis of `{x : rows * x = 0}` for an integer matrix with `ncols` columns.
pub(crate) fn integer_nullspace(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<Vec<i64>>> {
    let mut q = to_q(rows);
    let pivots = rref(&mut q)?;
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::from_integer(1);
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -q[i][free];
        }
        let lcm = v.iter().fold(1i128, |l, x| {
            let d = *x.denom();
            l / num_integer_gcd(l, d) * d
        });
        let mut iv: Vec<i64> = v
            .iter()
            .map(|x| i64::try_from(x.numer() * (lcm / x.denom())).map_err(|_| Error::Overflow))
            .collect::<Result<_>>()?;
        primitive(&mut iv);
        basis.push(iv);
    }
    Ok(basis)
}

fn num_integer_gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Decides whether `target` lies in the rational span of `columns`.
///
/// Each column and the target are given as sparse lists of `(row, value)`
/// over `nrows` rows.
pub(crate) fn in_rational_span(
    nrows: usize,
    columns: &[Vec<(usize, i64)>],
    target: &[(usize, i64)],
) -> Result<bool> {
    let ncols = columns.len() + 1;
    let mut sparse: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nrows];
    for (j, col) in columns.iter().enumerate() {
        for &(i, v) in col {
            sparse[i].push((j, v));
        }
    }
    for &(i, v) in target {
        sparse[i].push((ncols - 1, v));
    }
    // duplicate and all-zero rows do not change the row space
    for r in sparse.iter_mut() {
        r.retain(|&(_, v)| v != 0);
        r.sort_unstable();
    }
    sparse.retain(|r| !r.is_empty());
    sparse.sort_unstable();
    sparse.dedup();
    let mut rows: Vec<Vec<Q>> = sparse
        .iter()
        .map(|r| {
            let mut row = vec![Q::zero(); ncols];
            r.iter().for_each(|&(j, v)| row[j] += Q::from_integer(v as i128));
            row
        })
        .collect();
    let pivots = rref(&mut rows)?;
    Ok(!pivots.contains(&(ncols - 1)))
}

/// Modulus for rank computations; rank mod p never exceeds the rank over Q.
pub(crate) const RANK_PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rank over `Z/pZ` of a matrix given as dense rows of residues.
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = pow_mod(rows[r][c], p - 2, p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - pv * f % p) % p;
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn residue(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_plane() {
        // x + y + z = 0 has a two-dimensional kernel orthogonal to (1,1,1)
        let ns = integer_nullspace(&[vec![1, 1, 1]], 3).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn rank_mod_p_matches_rational_rank() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let (rq, _) = rank_with_pivots(&m).unwrap();
        let mp: Vec<Vec<u64>> = m
            .iter()
            .map(|r| r.iter().map(|&x| residue(x, RANK_PRIME)).collect())
            .collect();
        assert_eq!(rq, 2);
        assert_eq!(rank_mod_p(mp, RANK_PRIME), 2);
    }

    #[test]
    fn span_membership() {
        // columns e0+e1 and e2; target e0 is not in the span, e0+e1+2e2 is
        let cols = vec![vec![(0, 1), (1, 1)], vec![(2, 1)]];
        assert!(!in_rational_span(3, &cols, &[(0, 1)]).unwrap());
        assert!(in_rational_span(3, &cols, &[(0, 1), (1, 1), (2, 2)]).unwrap());
    }
}
