//! Truncation symbols: `m(n) = N_L(n)/N_B`, the antiderivative symbols `w^μ`,
//! their box analogues, and the explicit convergence bound for `1 − m`.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{check_dim, enumerate_box, norm_sq, LatticeSet, Point, Radius, Rational};
use crate::truncation::Truncation;

/// Exact rational values on a finite support; zero everywhere else.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTable {
    dim: usize,
    support: LatticeSet,
    values: Vec<Rational>,
}

impl SymbolTable {
    pub fn from_parts(dim: usize, support: LatticeSet, values: Vec<Rational>) -> Result<Self> {
        if support.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: support.dim() });
        }
        if support.len() != values.len() {
            return Err(Error::invalid("symbol values do not match support size"));
        }
        Ok(SymbolTable { dim, support, values })
    }

    /// The constant symbol 1 on `support`.
    pub fn ones(support: LatticeSet) -> Self {
        let values = vec![Rational::from_integer(1); support.len()];
        SymbolTable { dim: support.dim(), support, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &LatticeSet {
        &self.support
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, n: &[i64]) -> Rational {
        self.support.index_of(n).map_or(Rational::from_integer(0), |i| self.values[i])
    }

    pub fn get_f64(&self, n: &[i64]) -> f64 {
        to_f64(self.get(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, &Rational)> {
        self.support.iter().zip(&self.values)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol tables always serialize")
    }
}

impl Serialize for SymbolTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SymbolTable", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("support", &self.support)?;
        let values: Vec<String> =
            self.values.iter().map(|v| format!("{}/{}", v.numer(), v.denom())).collect();
        st.serialize_field("values", &values)?;
        st.end()
    }
}

pub(crate) fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `m_Λ(n) = N_L(Λ, n) / N_B(Λ)` on the sumset `B̄_Λ + B̄_Λ`.
pub fn fejer_symbol(d: usize, r: Radius) -> Result<SymbolTable> {
    Ok(Truncation::ball(d, r)?.symbol())
}

/// `w^μ(n) = (1 − m(n)) n_μ / ‖n‖²`, with `w^μ(0) = 0`, for any truncation.
///
/// Off the sumset `m` vanishes, so the formula continues as `n_μ / ‖n‖²`.
pub fn w_value(trunc: &Truncation, n: &[i64], mu: usize) -> Result<Rational> {
    trunc.check_point(n)?;
    check_axis(trunc.dim(), mu)?;
    let nn = norm_sq(n);
    if nn == 0 {
        return Ok(Rational::from_integer(0));
    }
    let one_minus = Rational::from_integer(1) - trunc.symbol_value(n);
    Ok(one_minus * Rational::new(n[mu - 1], nn))
}

fn check_axis(d: usize, mu: usize) -> Result<()> {
    if mu == 0 || mu > d {
        return Err(Error::invalid(format!("axis index {mu} outside 1..={d}")));
    }
    Ok(())
}

/// The symbol `w^μ` on the support of `trunc`'s sumset (axis `mu` is 1-based).
pub fn w_table(trunc: &Truncation, mu: usize) -> Result<SymbolTable> {
    check_axis(trunc.dim(), mu)?;
    let values = trunc
        .sumset()
        .iter()
        .map(|n| w_value(trunc, n, mu))
        .collect::<Result<Vec<_>>>()?;
    SymbolTable::from_parts(trunc.dim(), trunc.sumset().clone(), values)
}

/// `w_Λ^μ` for the ball truncation.
pub fn w_symbol(d: usize, r: Radius, mu: usize) -> Result<SymbolTable> {
    check_dim(d)?;
    check_axis(d, mu)?;
    w_table(&Truncation::ball(d, r)?, mu)
}

/// Upper bound `(Λ−√d)^{−d} |(Λ+√d)^d − ((Λ−√d−‖n‖)_+)^d|` for `|1 − m_Λ(n)|`,
/// valid when `Λ > √d`.
pub fn symbol_convergence_bound(d: usize, r: Radius, n: &[i64]) -> Result<f64> {
    check_dim(d)?;
    if n.len() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: n.len() });
    }
    // Λ > √d  ⇔  Λ² > d
    if r.lambda_sq() <= Rational::from_integer(d as i64) {
        return Err(Error::BoundNotApplicable(format!(
            "need lambda_sq > {d}, got {}",
            r.lambda_sq()
        )));
    }
    let lambda = r.value();
    let sd = (d as f64).sqrt();
    let norm = (norm_sq(n) as f64).sqrt();
    let di = d as i32;
    let inner = (lambda - sd - norm).max(0.0);
    Ok(((lambda + sd).powi(di) - inner.powi(di)).abs() / (lambda - sd).powi(di))
}

/// `m^□(n) = Π_μ (2N+1 − |n_μ|)_+ / (2N+1)` on the box of half-width `2N`.
pub fn box_symbol(d: usize, half_width: u32) -> Result<SymbolTable> {
    let support = enumerate_box(d, 2 * half_width)?;
    let side = 2 * half_width as i64 + 1;
    let values = support.iter().map(|n| box_value(side, n)).collect();
    SymbolTable::from_parts(d, support, values)
}

fn box_value(side: i64, n: &[i64]) -> Rational {
    n.iter()
        .map(|x| Rational::new((side - x.abs()).max(0), side))
        .product()
}

/// Upper bound `min(1, ‖n‖₁/(2N+1))` for `|1 − m^□(n)|`.
///
/// Follows from `1 − Π(1 − a_μ) ≤ Σ a_μ` with `a_μ = |n_μ|/(2N+1) ∈ [0,1]`.
pub fn box_convergence_bound(d: usize, half_width: u32, n: &[i64]) -> Result<f64> {
    check_dim(d)?;
    if n.len() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: n.len() });
    }
    let l1: i64 = n.iter().map(|x| x.abs()).sum();
    Ok((l1 as f64 / (2 * half_width + 1) as f64).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn fejer_examples() {
        let m = fejer_symbol(2, Radius::squared(2).unwrap()).unwrap();
        assert_eq!(m.get(&[0, 0]), q(1, 1));
        assert_eq!(m.get(&[1, 0]), q(6, 9));
        assert_eq!(m.get(&[5, 5]), q(0, 1));
        for n in 1..=4i64 {
            let m = fejer_symbol(1, Radius::integer(n).unwrap()).unwrap();
            for k in -2 * n..=2 * n {
                assert_eq!(m.get(&[k]), q(2 * n + 1 - k.abs(), 2 * n + 1));
            }
        }
    }

    #[test]
    fn w_examples() {
        let r = Radius::squared(2).unwrap();
        let w = w_symbol(2, r, 1).unwrap();
        assert_eq!(w.get(&[0, 0]), q(0, 1));
        assert_eq!(w.get(&[1, 0]), q(1, 3));
        assert!(w_symbol(2, r, 0).is_err());
        assert!(w_symbol(2, r, 3).is_err());
        let t = Truncation::ball(2, r).unwrap();
        // outside the sumset m vanishes
        assert_eq!(w_value(&t, &[5, 0], 1).unwrap(), q(1, 5));
    }

    #[test]
    fn convergence_bound_examples() {
        let r = Radius::integer(10).unwrap();
        let m = fejer_symbol(1, r).unwrap();
        let b = symbol_convergence_bound(1, r, &[3]).unwrap();
        assert!((1.0 - m.get_f64(&[3])).abs() <= b);
        assert!(symbol_convergence_bound(1, r, &[0]).unwrap() > 0.0);
        assert!(matches!(
            symbol_convergence_bound(2, Radius::squared(2).unwrap(), &[0, 0]),
            Err(Error::BoundNotApplicable(_))
        ));
        let seq: Vec<f64> = [5, 10, 20, 40]
            .iter()
            .map(|&l| symbol_convergence_bound(1, Radius::integer(l).unwrap(), &[2]).unwrap())
            .collect();
        assert!(seq.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn box_examples() {
        let s = box_symbol(2, 1).unwrap();
        assert_eq!(s.get(&[0, 0]), q(1, 1));
        assert_eq!(s.get(&[1, 1]), q(4, 9));
        assert_eq!(s.get(&[3, 0]), q(0, 1));
        let t = Truncation::cube(2, 1).unwrap();
        for n in s.support().iter() {
            assert_eq!(s.get(n), t.symbol_value(n));
        }
    }

    #[test]
    fn json_shape() {
        let m = fejer_symbol(1, Radius::integer(0).unwrap()).unwrap();
        assert_eq!(m.to_json(), r#"{"dim":1,"support":[[0]],"values":["1/1"]}"#);
    }
}
