use nalgebra::{DMatrix, DVector};

use super::ButcherTableau;
use crate::error::{Error, Result};
use crate::la::SparseMatrix;

/// Classical time stepping: each step solves the `ns × ns` stage system
/// `(I - Δt G ⊗ A) k = e ⊗ A x_j + f` densely and sets
/// `x_{j+1} = x_j + Δt Σ b_i k_i`. Returns `x_1, …, x_{n_t}`.
pub fn sequential_rk_oracle(
    a: &SparseMatrix<f64>,
    x0: &[f64],
    f: &dyn Fn(f64) -> Vec<f64>,
    tab: &ButcherTableau,
    n_t: usize,
    dt: f64,
) -> Result<Vec<Vec<f64>>> {
    tab.validate()?;
    let (n, s) = (a.nrows(), tab.s);
    let ad = a.to_dense();
    let g = tab.g_matrix();
    let mut h = DMatrix::<f64>::identity(n * s, n * s);
    for i in 0..s {
        for l in 0..s {
            if g[(i, l)] != 0.0 {
                let mut blk = h.view_mut((i * n, l * n), (n, n));
                blk -= &ad * (dt * g[(i, l)]);
            }
        }
    }
    let lu = h.lu();
    let mut x = DVector::from_column_slice(x0);
    let mut out = Vec::with_capacity(n_t);
    for j in 0..n_t {
        let ax = &ad * &x;
        let mut rhs = DVector::zeros(n * s);
        for i in 0..s {
            let fv = f(j as f64 * dt + tab.c[i] * dt);
            for r in 0..n {
                rhs[i * n + r] = ax[r] + fv[r];
            }
        }
        let k = lu.solve(&rhs).ok_or(Error::NumericallySingular { index: j, pivot: 0.0 })?;
        for i in 0..s {
            x += k.rows(i * n, n) * (dt * tab.b[i]);
        }
        out.push(x.iter().copied().collect());
    }
    Ok(out)
}
