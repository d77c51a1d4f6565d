//! Multi-dimensional FFT on the uniform `M^d` torus grid (row-major layout).

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Flat row-major index of the grid slot holding mode `n` (taken mod `m`).
pub(crate) fn slot(n: &[i64], m: usize) -> usize {
    n.iter().fold(0, |acc, &x| acc * m + x.rem_euclid(m as i64) as usize)
}

/// Unflattens a row-major grid index into per-axis node indices.
pub(crate) fn unflatten(mut idx: usize, dim: usize, m: usize, out: &mut [usize]) {
    for a in (0..dim).rev() {
        out[a] = idx % m;
        idx /= m;
    }
}

fn transform_axes(data: &mut [Complex64], dim: usize, m: usize, fft: &dyn Fft<f64>) {
    let total = data.len();
    let mut line = vec![Complex64::new(0.0, 0.0); m];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..dim {
        let stride = m.pow((dim - 1 - axis) as u32);
        let block = stride * m;
        for start in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

/// Values `Σ_n c_n e^{i n·x_j}` at the nodes `x_j = 2πj/m`.
///
/// Exact for any degree: modes are folded mod `m`, which is how they sample.
pub(crate) fn synthesize<'a>(
    dim: usize,
    m: usize,
    coeffs: impl IntoIterator<Item = (&'a [i64], Complex64)>,
) -> Vec<Complex64> {
    let mut data = vec![Complex64::new(0.0, 0.0); m.pow(dim as u32)];
    for (n, c) in coeffs {
        data[slot(n, m)] += c;
    }
    let fft = FftPlanner::new().plan_fft_inverse(m);
    transform_axes(&mut data, dim, m, fft.as_ref());
    data
}

/// Discrete Fourier coefficients `(1/m^d) Σ_j f(x_j) e^{−i n·x_j}` in slot layout.
#[cfg(test)]
pub(crate) fn analyze(dim: usize, m: usize, mut values: Vec<Complex64>) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(m);
    transform_axes(&mut values, dim, m, fft.as_ref());
    let scale = 1.0 / values.len() as f64;
    values.iter_mut().for_each(|v| *v *= scale);
    values
}
