use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::C64;

/// Product of the Toeplitz matrix with first column `col` and first row
/// `row` with `v`, via circulant embedding.
pub fn toeplitz_matvec(col: &[C64], row: &[C64], v: &[C64]) -> Vec<C64> {
    ToeplitzMatvec::new(col, row).apply(v)
}

/// A Toeplitz matrix with its circulant embedding pre-transformed.
#[derive(Clone)]
pub struct ToeplitzMatvec {
    n: usize,
    symbol: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl ToeplitzMatvec {
    pub fn new(col: &[C64], row: &[C64]) -> Self {
        let n = col.len();
        assert_eq!(row.len(), n, "first row and column lengths differ");
        assert!(n >= 1);
        assert!((col[0] - row[0]).norm() <= 1e-14 * col[0].norm().max(1.0), "corner entries differ");
        let m = (2 * n - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let mut symbol = vec![C64::new(0.0, 0.0); m];
        symbol[..n].copy_from_slice(col);
        for k in 1..n {
            symbol[m - k] = row[k];
        }
        forward.process(&mut symbol);
        let s = 1.0 / m as f64;
        symbol.iter_mut().for_each(|z| *z *= s);
        Self { n, symbol, forward, inverse }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        let mut buf = vec![C64::new(0.0, 0.0); self.symbol.len()];
        buf[..self.n].copy_from_slice(v);
        self.forward.process(&mut buf);
        buf.iter_mut().zip(&self.symbol).for_each(|(a, s)| *a *= s);
        self.inverse.process(&mut buf);
        buf.truncate(self.n);
        buf
    }
}
