use std::time::Instant;

use super::{apply_operator, residual, DiagSolver, SolveReport, SpaceTimeSystem};
use crate::error::Result;
use crate::la::operator::FnOperator;
use crate::la::{gmres, CMatrix, GmresOptions, C64};

/// GMRES on the all-at-once system, right preconditioned by the
/// alpha-circulant solver.
pub fn pgmres_solve<S: SpaceTimeSystem + ?Sized>(sys: &S, alpha: C64, tol: f64, max_iter: usize) -> Result<SolveReport> {
    let start = Instant::now();
    let (n, n_t) = (sys.space_dim(), sys.n_t());
    let precond = DiagSolver::new(sys, alpha, true)?;
    let op = FnOperator {
        n: n * n_t,
        f: |x: &[C64], y: &mut [C64]| {
            let xm = CMatrix::from_column_slice(n, n_t, x);
            y.copy_from_slice(apply_operator(sys, &xm).as_slice());
        },
    };
    let out = gmres(&op, Some(&precond), sys.rhs().as_slice(), None, &GmresOptions { tol, max_iter })?;
    let x = CMatrix::from_column_slice(n, n_t, &out.x);
    let mut rep = SolveReport::new("pgmres", x, 0.0);
    rep.relres = residual(sys, &rep.x)?;
    rep.iterations = Some(out.iterations);
    rep.converged = out.converged;
    rep.history = out.history;
    rep.wall_time = start.elapsed().as_secs_f64();
    Ok(rep)
}
