use super::operator::{LinearOperator, LinearSolver};
use super::{dot, norm2, C64};
use crate::error::Result;

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200 }
    }
}

#[derive(Clone, Debug)]
pub struct GmresResult {
    pub x: Vec<C64>,
    pub iterations: usize,
    /// True relative residual `‖b − op(x)‖/‖b‖` of the returned iterate.
    pub relres: f64,
    pub converged: bool,
    /// Least-squares residual estimates, one per iteration (non-increasing).
    pub history: Vec<f64>,
}

fn givens(a: C64, b: C64) -> (f64, C64, C64) {
    let an = a.norm();
    if an == 0.0 {
        return (0.0, C64::new(1.0, 0.0), b);
    }
    let t = (an * an + b.norm_sqr()).sqrt();
    let ph = a / an;
    (an / t, ph * b.conj() / t, ph * t)
}

/// Full (unrestarted) GMRES with right preconditioning.
///
/// Preconditioned directions are stored, so a preconditioner that is itself
/// an inexact iterative solve is admissible. Convergence is decided on the
/// true residual, recomputed every iteration.
pub fn gmres<O: LinearOperator + ?Sized>(
    op: &O,
    precond: Option<&dyn LinearSolver>,
    b: &[C64],
    x0: Option<&[C64]>,
    opts: &GmresOptions,
) -> Result<GmresResult> {
    let n = op.dim();
    assert_eq!(b.len(), n);
    let zero = C64::new(0.0, 0.0);
    let bnorm = norm2(b);
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![zero; n]);
    if bnorm == 0.0 {
        return Ok(GmresResult { x: vec![zero; n], iterations: 0, relres: 0.0, converged: true, history: vec![] });
    }
    let x_start = x.clone();
    let mut ax = vec![zero; n];
    let true_residual = |x: &[C64], ax: &mut Vec<C64>| -> Vec<C64> {
        op.apply(x, ax);
        b.iter().zip(ax.iter()).map(|(bi, ai)| bi - ai).collect()
    };
    let r0 = true_residual(&x, &mut ax);
    let beta = norm2(&r0);
    let mut relres = beta / bnorm;
    if relres <= opts.tol {
        return Ok(GmresResult { x, iterations: 0, relres, converged: true, history: vec![] });
    }

    let mut v: Vec<Vec<C64>> = vec![r0.iter().map(|z| z / beta).collect()];
    let mut z: Vec<Vec<C64>> = Vec::new();
    let mut h: Vec<Vec<C64>> = Vec::new();
    let mut cs: Vec<(f64, C64)> = Vec::new();
    let mut g = vec![C64::new(beta, 0.0)];
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for j in 0..opts.max_iter {
        let mut zj = v[j].clone();
        if let Some(p) = precond {
            p.solve_in_place(&mut zj)?;
        }
        let mut w = vec![zero; n];
        op.apply(&zj, &mut w);
        z.push(zj);

        let mut col = vec![zero; j + 2];
        for _ in 0..2 {
            for (i, vi) in v.iter().enumerate() {
                let hij = dot(vi, &w);
                w.iter_mut().zip(vi).for_each(|(wk, vk)| *wk -= hij * vk);
                col[i] += hij;
            }
        }
        let hnext = norm2(&w);
        col[j + 1] = C64::new(hnext, 0.0);

        for (i, &(c, s)) in cs.iter().enumerate() {
            let (a, bb) = (col[i], col[i + 1]);
            col[i] = c * a + s * bb;
            col[i + 1] = -s.conj() * a + c * bb;
        }
        let (c, s, r) = givens(col[j], col[j + 1]);
        col[j] = r;
        col[j + 1] = zero;
        cs.push((c, s));
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s.conj() * gj);
        h.push(col);
        iterations = j + 1;
        history.push(g[j + 1].norm() / bnorm);

        let m = j + 1;
        let mut y = vec![zero; m];
        for i in (0..m).rev() {
            let mut acc = g[i];
            for k in i + 1..m {
                acc -= h[k][i] * y[k];
            }
            y[i] = acc / h[i][i];
        }
        x.copy_from_slice(&x_start);
        for (k, zk) in z.iter().enumerate() {
            x.iter_mut().zip(zk).for_each(|(xi, zi)| *xi += y[k] * zi);
        }
        let r = true_residual(&x, &mut ax);
        relres = norm2(&r) / bnorm;
        if relres <= opts.tol {
            converged = true;
            break;
        }
        if hnext <= 1e-14 * beta {
            break;
        }
        v.push(w.iter().map(|wk| wk / hnext).collect());
    }

    Ok(GmresResult { x, iterations, relres, converged, history })
}
