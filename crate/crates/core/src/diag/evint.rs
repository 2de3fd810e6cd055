use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::{fast_diag_solve, is_real_matrix, residual, SolveReport, SpaceTimeSystem};
use crate::error::{Error, Result};
use crate::la::{CMatrix, C64};

fn node(rho: f64, k: usize, d: usize) -> C64 {
    C64::from_polar(rho, 2.0 * PI * k as f64 / d as f64)
}

fn evaluate<S: SpaceTimeSystem + ?Sized>(sys: &S, alpha: C64, k: usize) -> Result<CMatrix> {
    fast_diag_solve(sys, alpha).map_err(|e| Error::EvaluationNode { node: k, source: Box::new(e) })
}

/// Averages alpha-circulant solutions at `α = ρ ω_k`, `ω_k = e^{2πik/d}`.
pub fn ev_int<S: SpaceTimeSystem + ?Sized>(sys: &S, rho: f64, d: usize) -> Result<SolveReport> {
    if rho <= 0.0 || d == 0 {
        return Err(Error::InvalidArgument(format!("ev_int needs rho > 0 and d >= 1, got {rho}, {d}")));
    }
    let start = Instant::now();
    // Solutions at conjugate nodes are conjugate when everything is real.
    let paired = sys.is_real() && is_real_matrix(sys.rhs());
    let nodes: Vec<usize> = if paired { (0..=d / 2).collect() } else { (0..d).collect() };
    let sols = nodes
        .par_iter()
        .map(|&k| evaluate(sys, node(rho, k, d), k))
        .collect::<Result<Vec<_>>>()?;
    let (n, n_t) = sys.rhs().shape();
    let mut sum = CMatrix::zeros(n, n_t);
    for (&k, x) in nodes.iter().zip(&sols) {
        if paired && k != 0 && 2 * k != d {
            sum += x.map(|z| C64::new(2.0 * z.re, 0.0));
        } else {
            sum += x;
        }
    }
    if paired {
        sum.iter_mut().for_each(|z| z.im = 0.0);
    }
    let x = sum / C64::new(d as f64, 0.0);
    let mut rep = SolveReport::new("evint", x, 0.0);
    rep.relres = residual(sys, &rep.x)?;
    rep.d = Some(d);
    rep.evaluations = Some(nodes.len());
    rep.wall_time = start.elapsed().as_secs_f64();
    Ok(rep)
}

/// Evaluation-interpolation with `d` doubled from `d0` until successive
/// interpolants agree to `tol`; earlier evaluations are reused.
pub fn ev_int_adaptive<S: SpaceTimeSystem + ?Sized>(
    sys: &S,
    rho: f64,
    tol: f64,
    d0: usize,
    d_max: usize,
) -> Result<SolveReport> {
    if rho <= 0.0 || d0 == 0 || d_max < d0 {
        return Err(Error::InvalidArgument("ev_int_adaptive needs rho > 0 and 1 <= d0 <= d_max".into()));
    }
    let start = Instant::now();
    let mut d = d0;
    let sols = (0..d).into_par_iter().map(|k| evaluate(sys, node(rho, k, d), k)).collect::<Result<Vec<_>>>()?;
    let mut sum = sols.into_iter().fold(CMatrix::zeros(sys.space_dim(), sys.n_t()), |a, b| a + b);
    let mut evaluations = d;
    let mut current = &sum / C64::new(d as f64, 0.0);
    let mut history = Vec::new();
    let mut converged = false;
    while 2 * d <= d_max {
        let fresh = (0..d)
            .into_par_iter()
            .map(|k| evaluate(sys, node(rho, 2 * k + 1, 2 * d), 2 * k + 1))
            .collect::<Result<Vec<_>>>()?;
        evaluations += d;
        for x in fresh {
            sum += x;
        }
        d *= 2;
        let next = &sum / C64::new(d as f64, 0.0);
        let change = (&next - &current).norm() / next.norm();
        history.push(change);
        current = next;
        if change <= tol {
            converged = true;
            break;
        }
    }
    let mut rep = SolveReport::new("evint-adaptive", current, 0.0);
    rep.relres = residual(sys, &rep.x)?;
    rep.d = Some(d);
    rep.evaluations = Some(evaluations);
    rep.converged = converged;
    rep.history = history;
    rep.wall_time = start.elapsed().as_secs_f64();
    Ok(rep)
}
