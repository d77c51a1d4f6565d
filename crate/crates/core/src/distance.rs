//! Connes distances between states of the truncated operator system.
//!
//! `d(φ, ψ) = sup { (φ − ψ)(T) : T = T*, ‖[D_Λ, T]‖ ≤ 1 }` is a semidefinite
//! program in the real coordinates of self-adjoint `T`. It is solved with a
//! log-barrier interior-point method. The lower bound is the exact ratio
//! `(φ − ψ)(T) / ‖[D_Λ, T]‖` of the returned operator; the upper bound is the
//! smallest of a trace-norm dual certificate, a Frobenius cap and, for point
//! states, the geodesic coupling cost.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{gamma_reference, phase, torus_norm};
use crate::lattice::{neg, norm_sq};
use crate::operator_system::{clifford_generators, dirac_commutator_op, min_eigenvalue, TruncatedOperator};
use crate::random::sample_rng;
use crate::truncation::Truncation;

/// Flat-torus distance: norm of the minimal representative of `x − y`.
pub fn geodesic_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    Ok(torus_norm(&diff))
}

/// How a state was defined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum StateKind {
    /// `φ_x = δ_x ∘ σ`.
    Point(Vec<f64>),
    /// A convex combination of point states.
    Mixture(Vec<(f64, Vec<f64>)>),
    /// `T ↦ tr(ρ T)` for a density matrix `ρ`.
    Density,
}

/// A state `φ(T) = Σ_p c_p t_p` on the truncated operator system.
#[derive(Clone, Debug)]
pub struct TruncatedState {
    trunc: Truncation,
    coeffs: Vec<Complex64>,
    kind: StateKind,
}

impl TruncatedState {
    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// `c_p` aligned with the sumset.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn kind(&self) -> &StateKind {
        &self.kind
    }

    pub fn evaluate(&self, t: &TruncatedOperator) -> Result<Complex64> {
        self.trunc.check_same(t.truncation())?;
        Ok(self.coeffs.iter().zip(t.coeffs()).map(|(c, v)| c * v).sum())
    }
}

fn check_torus_point(trunc: &Truncation, x: &[f64]) -> Result<()> {
    if x.len() != trunc.dim() {
        return Err(Error::DimensionMismatch { expected: trunc.dim(), actual: x.len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite torus coordinate"));
    }
    Ok(())
}

/// `φ_x(T) = σ(T)(x) = Σ_p m(p) t_p e^{i p·x}`.
pub fn point_state(x: &[f64], trunc: &Truncation) -> Result<TruncatedState> {
    check_torus_point(trunc, x)?;
    let coeffs = trunc.sumset().iter().map(|p| phase(p, x) * trunc.symbol_f64(p)).collect();
    Ok(TruncatedState { trunc: trunc.clone(), coeffs, kind: StateKind::Point(x.to_vec()) })
}

/// `Σ_i w_i φ_{x_i}` with nonnegative weights summing to 1.
pub fn mixture_state(parts: &[(f64, Vec<f64>)], trunc: &Truncation) -> Result<TruncatedState> {
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    if parts.is_empty() || parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("mixture weights must be nonnegative and sum to 1"));
    }
    let mut coeffs = vec![Complex64::default(); trunc.sumset().len()];
    for (w, x) in parts {
        let s = point_state(x, trunc)?;
        coeffs.iter_mut().zip(s.coeffs).for_each(|(c, v)| *c += v * w);
    }
    Ok(TruncatedState { trunc: trunc.clone(), coeffs, kind: StateKind::Mixture(parts.to_vec()) })
}

/// `T ↦ tr(ρ T)`; `ρ` must be a positive semidefinite unit-trace `N_B × N_B` matrix.
pub fn density_state(rho: &DMatrix<Complex64>, trunc: &Truncation) -> Result<TruncatedState> {
    let n = trunc.size();
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: rho.nrows() });
    }
    if (rho - rho.adjoint()).iter().any(|z| z.norm() > 1e-12) {
        return Err(Error::invalid("density matrix is not Hermitian"));
    }
    if (rho.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::invalid("density matrix must have unit trace"));
    }
    if min_eigenvalue(rho)? < -1e-10 {
        return Err(Error::invalid("density matrix is not positive semidefinite"));
    }
    let idx = trunc.diff_index();
    let mut coeffs = vec![Complex64::default(); trunc.sumset().len()];
    // tr(ρ T) = Σ_{k,l} ρ_{lk} t_{k−l}
    for k in 0..n {
        for l in 0..n {
            coeffs[idx[k * n + l] as usize] += rho[(l, k)];
        }
    }
    Ok(TruncatedState { trunc: trunc.clone(), coeffs, kind: StateKind::Density })
}

fn upper_bound(phi: &TruncatedState, psi: &TruncatedState, delta: &[Complex64]) -> Result<f64> {
    let trunc = &phi.trunc;
    // ‖[D_Λ,T]‖ ≤ 1 forces Σ_p N_L(p) ‖p‖² |t_p|² ≤ N_B (Frobenius norm)
    let nb = trunc.size() as f64;
    let weighted: f64 = trunc
        .sumset()
        .iter()
        .zip(trunc.overlaps())
        .zip(delta)
        .filter(|((p, _), _)| norm_sq(p) > 0)
        .map(|((p, &o), c)| c.norm_sqr() / (o as f64 * norm_sq(p) as f64))
        .sum();
    let mut cap = (nb * weighted).sqrt();
    // σ is Lipschitz-contractive, so point evaluations are geodesically bounded
    let pts = |s: &TruncatedState| -> Option<Vec<(f64, Vec<f64>)>> {
        match &s.kind {
            StateKind::Point(x) => Some(vec![(1.0, x.clone())]),
            StateKind::Mixture(v) => Some(v.clone()),
            StateKind::Density => None,
        }
    };
    if let (Some(a), Some(b)) = (pts(phi), pts(psi)) {
        let mut coupling = 0.0;
        for (wa, xa) in &a {
            for (wb, xb) in &b {
                coupling += wa * wb * geodesic_distance(xa, xb)?;
            }
        }
        cap = cap.min(coupling);
    }
    Ok(cap)
}

/// Solver budget and seeding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Budget of Newton steps across all barrier stages.
    pub iters: usize,
    /// Seeds the strictly feasible starting point.
    pub seed: u64,
    /// Target duality gap, relative to the size of the objective.
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { iters: 400, seed: 0, tol: 1e-8 }
    }
}

/// A certified bracket `lower ≤ d(φ, ψ) ≤ upper`.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub lower: f64,
    pub upper: f64,
    /// Upper bound from the dual certificate alone.
    pub dual_upper: f64,
    pub iterations: usize,
    /// Whether the duality gap reached the requested tolerance.
    pub converged: bool,
    /// Self-adjoint operator with `‖[D_Λ, T]‖ = 1` attaining `lower`.
    pub maximizer: TruncatedOperator,
}

type Entry = (usize, usize, Complex64);

/// Block pairs `(k, l)` sharing one shift, with that shift's spinor block.
type ShiftBlocks = (Vec<(usize, usize)>, DMatrix<Complex64>);

/// Real coordinates `(a_p, b_p)` for `p >lex 0`, `t_{±p} = a_p ± i b_p`,
/// with the sparse Hermitian matrices `H_j = i[D_Λ, T_j]`.
struct Parametrization {
    trunc: Truncation,
    /// `(index of p, index of −p)` in the sumset, for `p >lex 0`.
    pairs: Vec<(usize, usize)>,
    basis: Vec<Vec<Entry>>,
    /// For each `p >lex 0`: block pairs `(k, l)` with `k − l = p` and `G_p = i Σ_μ p_μ γ^μ`,
    /// so that `H_{a_p} = E_p + E_p*` and `H_{b_p} = i(E_p − E_p*)` with `E_p = Σ E_{kl} ⊗ G_p`.
    blocks: Vec<ShiftBlocks>,
    spinor: usize,
    size: usize,
}

impl Parametrization {
    fn new(trunc: &Truncation) -> Result<Self> {
        let zero = vec![0; trunc.dim()];
        let pairs: Vec<(usize, usize)> = trunc
            .sumset()
            .iter()
            .enumerate()
            .filter(|(_, p)| p.as_slice() > zero.as_slice())
            .map(|(i, p)| (i, trunc.sumset_index(&neg(p)).expect("sumset is symmetric")))
            .collect();
        let gamma = clifford_generators(trunc.dim())?;
        let i = Complex64::new(0.0, 1.0);
        let mut basis = Vec::with_capacity(2 * pairs.len());
        let size = trunc.size() * gamma.spinor_dim();
        for &(ip, im) in &pairs {
            for (cp, cm) in [(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)), (i, -i)] {
                let mut coeffs = vec![Complex64::default(); trunc.sumset().len()];
                coeffs[ip] = cp;
                coeffs[im] = cm;
                let t = TruncatedOperator::from_coeffs(trunc, coeffs)?;
                let h = dirac_commutator_op(&t, &gamma)?.matrix * i;
                let mut entries = Vec::new();
                for c in 0..h.ncols() {
                    for r in 0..h.nrows() {
                        if h[(r, c)] != Complex64::default() {
                            entries.push((r, c, h[(r, c)]));
                        }
                    }
                }
                basis.push(entries);
            }
        }
        let pts = trunc.points();
        let blocks = pairs
            .iter()
            .map(|&(ip, _)| {
                let p = &trunc.sumset().points()[ip];
                let mut list = Vec::new();
                for (l, lp) in pts.iter().enumerate() {
                    let k: Vec<i64> = lp.iter().zip(p).map(|(a, b)| a + b).collect();
                    if let Some(kk) = pts.index_of(&k) {
                        list.push((kk, l));
                    }
                }
                let coeffs: Vec<Complex64> = p.iter().map(|&x| i * x as f64).collect();
                (list, gamma.combine(&coeffs))
            })
            .collect();
        Ok(Parametrization { trunc: trunc.clone(), pairs, basis, blocks, spinor: gamma.spinor_dim(), size })
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn operator(&self, v: &DVector<f64>) -> TruncatedOperator {
        let mut coeffs = vec![Complex64::default(); self.trunc.sumset().len()];
        for (j, &(ip, im)) in self.pairs.iter().enumerate() {
            let (a, b) = (v[2 * j], v[2 * j + 1]);
            coeffs[ip] = Complex64::new(a, b);
            coeffs[im] = Complex64::new(a, -b);
        }
        TruncatedOperator::from_coeffs(&self.trunc, coeffs).expect("aligned")
    }

    /// Linear functional `(φ − ψ)(T(v)) = ⟨c, v⟩`.
    fn objective(&self, delta: &[Complex64]) -> DVector<f64> {
        let mut c = DVector::zeros(self.len());
        for (j, &(ip, im)) in self.pairs.iter().enumerate() {
            // Δ_p (a + ib) + Δ_{−p} (a − ib)
            let (dp, dm) = (delta[ip], delta[im]);
            c[2 * j] = (dp + dm).re;
            c[2 * j + 1] = (Complex64::new(0.0, 1.0) * (dp - dm)).re;
        }
        c
    }

    fn hamiltonian(&self, v: &DVector<f64>) -> DMatrix<Complex64> {
        let mut h = DMatrix::zeros(self.size, self.size);
        for (entries, &x) in self.basis.iter().zip(v.iter()) {
            if x != 0.0 {
                for &(r, c, z) in entries {
                    h[(r, c)] += z * x;
                }
            }
        }
        h
    }

    /// `‖H(v)‖`.
    fn norm(&self, v: &DVector<f64>) -> f64 {
        let ev = self.hamiltonian(v).symmetric_eigenvalues();
        ev.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// `Re tr(A H_j)` for every `j`.
    fn pair_with(&self, a: &DMatrix<Complex64>) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.basis.iter().map(|e| e.iter().map(|&(r, c, z)| (a[(c, r)] * z).re).sum::<f64>()),
        )
    }
}

/// `(I − H)^{-1}`, `(I + H)^{-1}` and `log det(I − H²)`, or `None` unless `‖H‖ < 1`.
fn barrier_inverses(h: &DMatrix<Complex64>) -> Option<(DMatrix<Complex64>, DMatrix<Complex64>, f64)> {
    let n = h.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    let lo = (&id - h).cholesky()?;
    let hi = (&id + h).cholesky()?;
    let logdet = |l: &nalgebra::Cholesky<Complex64, nalgebra::Dyn>| {
        2.0 * l.l_dirty().diagonal().iter().map(|z| z.re.ln()).sum::<f64>()
    };
    let value = logdet(&lo) + logdet(&hi);
    Some((lo.inverse(), hi.inverse(), value))
}

/// `tr(P H_i P H_j) + tr(Q H_i Q H_j)`.
fn barrier_hessian(param: &Parametrization, p: &DMatrix<Complex64>, q: &DMatrix<Complex64>) -> DMatrix<f64> {
    let m = param.len();
    let n = param.size;
    let s = param.spinor;
    let one = Complex64::new(1.0, 0.0);
    let mut hess = DMatrix::<f64>::zeros(m, m);
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for x in [p, q] {
        for (ip, (list, g)) in param.blocks.iter().enumerate() {
            // U_p = X E_p X
            u.fill(Complex64::default());
            for &(k, l) in list {
                let y = x.columns(k * s, s) * g;
                u.gemm(one, &y, &x.rows(l * s, s), one);
            }
            for (iq, (list_q, gq)) in param.blocks.iter().enumerate().skip(ip) {
                let gq_adj = gq.adjoint();
                let (mut alpha, mut beta) = (Complex64::default(), Complex64::default());
                for &(k, l) in list_q {
                    // tr(U E_q) and tr(U E_q*)
                    alpha += (u.view((l * s, k * s), (s, s)) * gq).trace();
                    beta += (u.view((k * s, l * s), (s, s)) * &gq_adj).trace();
                }
                let (ai, bi, aj, bj) = (2 * ip, 2 * ip + 1, 2 * iq, 2 * iq + 1);
                hess[(ai, aj)] += 2.0 * (alpha.re + beta.re);
                hess[(ai, bj)] += 2.0 * (beta.im - alpha.im);
                hess[(bi, aj)] -= 2.0 * (alpha.im + beta.im);
                hess[(bi, bj)] += 2.0 * (beta.re - alpha.re);
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            hess[(i, j)] = hess[(j, i)];
        }
    }
    hess
}

/// Solves `hess · x = grad`, adding diagonal jitter if rounding destroyed definiteness.
fn newton_step(hess: DMatrix<f64>, grad: &DVector<f64>) -> Result<DVector<f64>> {
    let scale = hess.diagonal().max().max(f64::MIN_POSITIVE);
    let mut jitter = 0.0;
    for _ in 0..12 {
        let mut h = hess.clone();
        for i in 0..h.nrows() {
            h[(i, i)] += jitter;
        }
        if let Some(ch) = h.cholesky() {
            return Ok(ch.solve(grad));
        }
        jitter = if jitter == 0.0 { scale * 1e-14 } else { jitter * 100.0 };
    }
    Err(Error::Internal("barrier Hessian is not positive definite".into()))
}

/// Newton decrement below which an iterate counts as centered.
const CENTERING_TOL: f64 = 1e-9;

struct BarrierOutcome {
    v: DVector<f64>,
    /// `(P − Q)/t` at the last centered iterate.
    dual: DMatrix<Complex64>,
    steps: usize,
    converged: bool,
}

/// Log-barrier path following for `max ⟨c, v⟩ s.t. −1 ⪯ H(v) ⪯ 1`.
fn barrier_solve(param: &Parametrization, c: &DVector<f64>, scale: f64, opts: &SolverOptions) -> Result<BarrierOutcome> {
    let m = param.len();
    let n2 = 2.0 * param.size as f64;
    let mut rng = sample_rng(opts.seed, 0);
    let mut v = DVector::from_fn(m, |_, _| rng.random::<f64>() - 0.5);
    let g0 = param.norm(&v);
    if g0 > 0.0 {
        v *= 0.25 / g0;
    }
    let mut t = n2 / scale.max(1e-12);
    let mut steps = 0;
    loop {
        let dual;
        // centering at parameter t
        loop {
            let h = param.hamiltonian(&v);
            let (p, q, logdet) = barrier_inverses(&h)
                .ok_or_else(|| Error::Internal("barrier iterate left the feasible set".into()))?;
            let grad = c * t - param.pair_with(&p) + param.pair_with(&q);
            let step = newton_step(barrier_hessian(param, &p, &q), &grad)?;
            let decrement = grad.dot(&step);
            steps += 1;
            let candidate = (p - q) * Complex64::new(1.0 / t, 0.0);
            if decrement <= CENTERING_TOL {
                dual = candidate;
                break;
            }
            if steps >= opts.iters {
                return Ok(BarrierOutcome { v, dual: candidate, steps, converged: false });
            }
            let phi0 = t * c.dot(&v) + logdet;
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha >= 1e-12 {
                let cand = &v + &step * alpha;
                if let Some((_, _, ld)) = barrier_inverses(&param.hamiltonian(&cand)) {
                    if t * c.dot(&cand) + ld >= phi0 + 0.25 * alpha * decrement {
                        v = cand;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                dual = candidate;
                break;
            }
        }
        if n2 / t <= opts.tol * scale.max(1.0) {
            return Ok(BarrierOutcome { v, dual, steps, converged: true });
        }
        if steps >= opts.iters {
            return Ok(BarrierOutcome { v, dual, steps, converged: false });
        }
        t *= 8.0;
    }
}

/// `‖Z‖₁` for the least-squares correction `Z` of `dual` with `Re tr(H_j Z) = c_j`.
///
/// For `‖H(v)‖ ≤ 1`, `⟨c, v⟩ = Re tr(H(v) Z) ≤ ‖Z‖₁`, so this is an upper bound.
fn dual_bound(param: &Parametrization, c: &DVector<f64>, dual: &DMatrix<Complex64>) -> f64 {
    let residual = c - param.pair_with(dual);
    // coordinates 2j and 2j+1 share a support and different j are disjoint,
    // so the Gram matrix Re tr(H_j H_k) is block diagonal with 2×2 blocks
    let mut z = dual.clone();
    let dot = |x: &[Entry], y: &[Entry]| -> f64 { x.iter().zip(y).map(|(a, b)| (a.2 * b.2.conj()).re).sum() };
    for j in 0..param.pairs.len() {
        let (a, b) = (&param.basis[2 * j], &param.basis[2 * j + 1]);
        let g = nalgebra::Matrix2::new(dot(a, a), dot(a, b), dot(b, a), dot(b, b));
        let rhs = nalgebra::Vector2::new(residual[2 * j], residual[2 * j + 1]);
        if let Some(gi) = g.try_inverse() {
            let alpha = gi * rhs;
            for (k, e) in [a, b].into_iter().enumerate() {
                for &(r, cc, zz) in e {
                    z[(r, cc)] += zz * alpha[k];
                }
            }
        }
    }
    let ev = z.symmetric_eigenvalues();
    ev.iter().map(|x| x.abs()).sum()
}

/// Maximizes `(φ − ψ)(T)` over self-adjoint `T` with `‖[D_Λ, T]‖ ≤ 1`.
pub fn connes_distance(phi: &TruncatedState, psi: &TruncatedState, opts: &SolverOptions) -> Result<DistanceResult> {
    phi.trunc.check_same(&psi.trunc)?;
    let trunc = &phi.trunc;
    let delta: Vec<Complex64> = phi.coeffs.iter().zip(&psi.coeffs).map(|(a, b)| a - b).collect();
    let cap = upper_bound(phi, psi, &delta)?;
    let param = Parametrization::new(trunc)?;
    let c = if param.len() == 0 { DVector::zeros(0) } else { param.objective(&delta) };
    if c.norm() <= 1e-14 {
        return Ok(DistanceResult {
            lower: 0.0,
            upper: 0.0,
            dual_upper: 0.0,
            iterations: 0,
            converged: true,
            maximizer: TruncatedOperator::zeros(trunc),
        });
    }
    let out = barrier_solve(&param, &c, cap, opts)?;
    let g = param.norm(&out.v);
    let lower = (c.dot(&out.v) / g).max(0.0);
    let dual_upper = dual_bound(&param, &c, &out.dual);
    Ok(DistanceResult {
        lower,
        upper: cap.min(dual_upper).max(lower),
        dual_upper,
        iterations: out.steps,
        converged: out.converged,
        maximizer: param.operator(&(&out.v / g)),
    })
}

/// One row of a convergence sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub truncation: String,
    pub lower: f64,
    pub upper: f64,
    pub geodesic: f64,
    pub gamma: f64,
    pub converged: bool,
    /// `upper ≤ geodesic + tol` and `geodesic − lower ≤ 2γ + (upper − lower) + tol`.
    pub bracket_ok: bool,
}

/// Tolerance applied to the bracket checks of [`convergence_sweep`].
pub const BRACKET_TOL: f64 = 1e-6;

/// `d_Λ(φ_x, φ_y)` along a sequence of truncations.
pub fn convergence_sweep(x: &[f64], y: &[f64], truncs: &[Truncation], opts: &SolverOptions) -> Result<Vec<SweepRow>> {
    let geodesic = geodesic_distance(x, y)?;
    truncs
        .iter()
        .map(|t| {
            let res = connes_distance(&point_state(x, t)?, &point_state(y, t)?, opts)?;
            let gamma = gamma_reference(t)?;
            let bracket_ok = res.upper <= geodesic + BRACKET_TOL
                && geodesic - res.lower <= 2.0 * gamma + (res.upper - res.lower) + BRACKET_TOL
                && res.lower <= res.upper + BRACKET_TOL;
            Ok(SweepRow {
                truncation: t.shape().to_string(),
                lower: res.lower,
                upper: res.upper,
                geodesic,
                gamma,
                converged: res.converged,
                bracket_ok,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Radius;
    use std::f64::consts::PI;

    fn ball(d: usize, lsq: i64) -> Truncation {
        Truncation::ball(d, Radius::squared(lsq).unwrap()).unwrap()
    }

    fn slow_hessian(param: &Parametrization, p: &DMatrix<Complex64>, q: &DMatrix<Complex64>) -> DMatrix<f64> {
        let m = param.len();
        let unit = |i: usize| {
            let mut e = DVector::zeros(m);
            e[i] = 1.0;
            param.hamiltonian(&e)
        };
        DMatrix::from_fn(m, m, |i, j| {
            let (hi, hj) = (unit(i), unit(j));
            (p * &hi * p * &hj).trace().re + (q * &hi * q * &hj).trace().re
        })
    }

    #[test]
    fn structured_hessian_matches_definition() {
        for (d, lsq) in [(1, 2), (2, 2), (3, 1)] {
            let param = Parametrization::new(&ball(d, lsq)).unwrap();
            let mut rng = sample_rng(1, 0);
            let v = DVector::from_fn(param.len(), |_, _| rng.random::<f64>() - 0.5);
            let v = &v * (0.5 / param.norm(&v));
            let (p, q, _) = barrier_inverses(&param.hamiltonian(&v)).unwrap();
            let fast = barrier_hessian(&param, &p, &q);
            let slow = slow_hessian(&param, &p, &q);
            assert!((fast - slow).abs().max() < 1e-9);
        }
    }

    #[test]
    fn hamiltonian_is_commutator() {
        let t = ball(2, 2);
        let param = Parametrization::new(&t).unwrap();
        let mut rng = sample_rng(2, 0);
        let v = DVector::from_fn(param.len(), |_, _| rng.random::<f64>() - 0.5);
        let op = param.operator(&v);
        assert!(op.is_self_adjoint(1e-14));
        let gamma = clifford_generators(2).unwrap();
        let comm = dirac_commutator_op(&op, &gamma).unwrap().matrix * Complex64::new(0.0, 1.0);
        assert!((comm - param.hamiltonian(&v)).norm() < 1e-12);
    }

    #[test]
    fn geodesic_wraps() {
        assert!((geodesic_distance(&[0.0], &[1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((geodesic_distance(&[0.1], &[2.0 * PI - 0.1]).unwrap() - 0.2).abs() < 1e-12);
        assert!(geodesic_distance(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn three_by_three_antipodal_bracket() {
        let t = ball(1, 1);
        let r = connes_distance(&point_state(&[0.0], &t).unwrap(), &point_state(&[PI], &t).unwrap(), &SolverOptions::default())
            .unwrap();
        let gamma = gamma_reference(&t).unwrap();
        assert!(r.converged);
        assert!(r.lower <= r.upper + 1e-12);
        assert!(r.upper - r.lower < 1e-6);
        assert!(r.upper <= PI + 1e-12);
        assert!(r.lower >= PI - 2.0 * gamma);
        // the maximizer is feasible and attains the lower bound
        let gamma_rep = clifford_generators(1).unwrap();
        let h = dirac_commutator_op(&r.maximizer, &gamma_rep).unwrap().norm().unwrap();
        assert!((h - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identical_states_are_at_distance_zero() {
        let t = ball(2, 2);
        let s = point_state(&[0.3, -1.0], &t).unwrap();
        let r = connes_distance(&s, &s, &SolverOptions::default()).unwrap();
        assert_eq!((r.lower, r.upper), (0.0, 0.0));
    }

    #[test]
    fn distance_is_symmetric() {
        let t = ball(1, 4);
        let (a, b) = (point_state(&[0.2], &t).unwrap(), point_state(&[1.7], &t).unwrap());
        let opts = SolverOptions::default();
        let (ab, ba) = (connes_distance(&a, &b, &opts).unwrap(), connes_distance(&b, &a, &opts).unwrap());
        assert!((ab.lower - ba.lower).abs() < 1e-6);
    }

    #[test]
    fn density_state_of_constant_vector_matches_evaluation() {
        let t = ball(1, 1);
        // the normalized all-ones vector is the point state at 0 up to the symbol
        let n = t.size();
        let rho = DMatrix::from_element(n, n, Complex64::new(1.0 / n as f64, 0.0));
        let s = density_state(&rho, &t).unwrap();
        let p = point_state(&[0.0], &t).unwrap();
        for (a, b) in s.coeffs().iter().zip(p.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        let bad = DMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
        assert!(density_state(&bad, &t).is_err());
    }

    #[test]
    fn mixture_weights_validated() {
        let t = ball(1, 1);
        assert!(mixture_state(&[(0.5, vec![0.0]), (0.6, vec![1.0])], &t).is_err());
        let m = mixture_state(&[(0.5, vec![0.0]), (0.5, vec![1.0])], &t).unwrap();
        let one = TruncatedOperator::identity(&t);
        assert!((m.evaluate(&one).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn seed_changes_start_not_value() {
        let t = ball(1, 4);
        let (a, b) = (point_state(&[0.0], &t).unwrap(), point_state(&[1.0], &t).unwrap());
        let r0 = connes_distance(&a, &b, &SolverOptions { seed: 0, ..Default::default() }).unwrap();
        let r1 = connes_distance(&a, &b, &SolverOptions { seed: 7, ..Default::default() }).unwrap();
        assert!((r0.lower - r1.lower).abs() < 1e-6);
    }
}
