use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{CMatrix, C64};

/// Unitary DFT `Ω*v`, entries `Σ_j v_j ω^{-jk} / √n` with `ω = e^{2πi/n}`.
pub fn fft_forward(v: &[C64]) -> Vec<C64> {
    let mut out = v.to_vec();
    if v.is_empty() {
        return out;
    }
    let plan = FftPlanner::new().plan_fft_forward(v.len());
    plan.process(&mut out);
    let s = 1.0 / (v.len() as f64).sqrt();
    out.iter_mut().for_each(|z| *z *= s);
    out
}

/// Inverse of [`fft_forward`], i.e. `Ωv`.
pub fn fft_inverse(v: &[C64]) -> Vec<C64> {
    let mut out = v.to_vec();
    if v.is_empty() {
        return out;
    }
    let plan = FftPlanner::new().plan_fft_inverse(v.len());
    plan.process(&mut out);
    let s = 1.0 / (v.len() as f64).sqrt();
    out.iter_mut().for_each(|z| *z *= s);
    out
}

/// Unitary DFTs applied along every row of a column-major matrix.
#[derive(Clone)]
pub struct RowFft {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RowFft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Replaces `X` by `X Ω̄`, i.e. every row `r` by `fft_forward(r)`.
    pub fn forward_rows(&self, x: &mut CMatrix) {
        self.rows(x, &self.forward);
    }

    /// Replaces every row `r` of `X` by `fft_inverse(r)`.
    pub fn inverse_rows(&self, x: &mut CMatrix) {
        self.rows(x, &self.inverse);
    }

    fn rows(&self, x: &mut CMatrix, plan: &Arc<dyn Fft<f64>>) {
        let (nrows, ncols) = x.shape();
        assert_eq!(ncols, self.len, "row length does not match the planned FFT");
        if nrows == 0 || ncols == 0 {
            return;
        }
        let mut buf = vec![C64::new(0.0, 0.0); nrows * ncols];
        for c in 0..ncols {
            let col = x.column(c);
            for r in 0..nrows {
                buf[r * ncols + c] = col[r];
            }
        }
        let rows_per_task = (nrows / (4 * rayon::current_num_threads())).max(16);
        let scale = 1.0 / (ncols as f64).sqrt();
        buf.par_chunks_mut(rows_per_task * ncols).for_each(|chunk| {
            let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(chunk, &mut scratch);
            chunk.iter_mut().for_each(|z| *z *= scale);
        });
        for c in 0..ncols {
            let mut col = x.column_mut(c);
            for r in 0..nrows {
                col[r] = buf[r * ncols + c];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::la::norm2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct_dft(v: &[C64], sign: f64) -> Vec<C64> {
        let n = v.len();
        (0..n)
            .map(|k| {
                let s: C64 = (0..n)
                    .map(|j| {
                        let th = sign * 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
                        v[j] * C64::from_polar(1.0, th)
                    })
                    .sum();
                s / (n as f64).sqrt()
            })
            .collect()
    }

    fn random_vec(n: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn impulse_and_constant() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let w = fft_forward(&[one, zero, zero, zero]);
        assert!(close(&w, &[C64::new(0.5, 0.0); 4], 1e-15));
        let w = fft_forward(&[one; 4]);
        assert!(close(&w, &[C64::new(2.0, 0.0), zero, zero, zero], 1e-15));
        let w = fft_inverse(&[one, zero, zero, zero]);
        assert!(close(&w, &[C64::new(0.5, 0.0); 4], 1e-15));
    }

    #[test]
    fn round_trip_small() {
        let v: Vec<C64> = [1.0, 2.0, 3.0].iter().map(|&x| C64::new(x, 0.0)).collect();
        assert!(close(&fft_inverse(&fft_forward(&v)), &v, 1e-14));
    }

    #[test]
    fn matches_direct_dft() {
        let v = random_vec(7, 1);
        let w = fft_forward(&v);
        assert!(close(&w, &direct_dft(&v, -1.0), 1e-13));
        assert!((norm2(&w) - norm2(&v)).abs() <= 1e-13 * norm2(&v));
        let v = random_vec(6, 2);
        assert!(close(&fft_inverse(&v), &direct_dft(&v, 1.0), 1e-13));
    }

    #[test]
    fn row_transforms_match_vector_transforms() {
        let (nr, nc) = (37, 10);
        let data = random_vec(nr * nc, 3);
        let x = CMatrix::from_vec(nr, nc, data);
        let plan = RowFft::new(nc);
        let mut y = x.clone();
        plan.forward_rows(&mut y);
        for r in 0..nr {
            let row: Vec<C64> = x.row(r).iter().copied().collect();
            let expect = fft_forward(&row);
            let got: Vec<C64> = y.row(r).iter().copied().collect();
            assert!(close(&got, &expect, 1e-13));
        }
        plan.inverse_rows(&mut y);
        assert!((&y - &x).norm() <= 1e-13 * x.norm());
    }
}
