use std::f64::consts::PI;

use crate::la::{SparseMatrix, C64};

/// The semidiscrete heat equation `U' = AU`, `A = trid(1,-2,1)(n+1)²`,
/// `U(0)_j = sin(jπ/(n+1))`, on `t ∈ [0, 1]`.
#[derive(Clone, Debug)]
pub struct RkHeat {
    pub a: SparseMatrix<f64>,
    pub x0: Vec<f64>,
    pub n_t: usize,
    pub dt: f64,
    /// The eigenvalue of `A` belonging to `x0`.
    pub lambda: f64,
}

impl RkHeat {
    /// `exp(tA) x0`, exact because `x0` is an eigenvector of `A`.
    pub fn exact(&self, t: f64) -> Vec<f64> {
        let s = (self.lambda * t).exp();
        self.x0.iter().map(|v| v * s).collect()
    }

    pub fn x0_complex(&self) -> Vec<C64> {
        self.x0.iter().map(|&v| C64::new(v, 0.0)).collect()
    }
}

pub fn rk_heat(n: usize, n_t: usize) -> RkHeat {
    assert!(n >= 1 && n_t >= 1);
    let s = ((n + 1) * (n + 1)) as f64;
    let a = super::laplacian_1d(n, -s);
    let x0 = (1..=n).map(|j| (j as f64 * PI / (n + 1) as f64).sin()).collect();
    let lambda = -(2.0 - 2.0 * (PI / (n + 1) as f64).cos()) * s;
    RkHeat { a, x0, n_t, dt: 1.0 / n_t as f64, lambda }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_is_symmetric_eigenvector() {
        let p = rk_heat(9, 4);
        let n = p.x0.len();
        for j in 0..n {
            assert!((p.x0[j] - p.x0[n - 1 - j]).abs() < 1e-14);
        }
        let mut y = vec![C64::new(0.0, 0.0); n];
        p.a.matvec(&p.x0_complex(), &mut y);
        for j in 0..n {
            assert!((y[j].re - p.lambda * p.x0[j]).abs() < 1e-10 * p.lambda.abs());
        }
        assert!(p.exact(0.5)[4] < p.x0[4] && p.exact(0.5)[4] > 0.0);
    }
}
