//! Alpha-circulant diagonalization (`fast_diag_solve`), circulant
//! preconditioned GMRES and evaluation-interpolation.

mod evint;
mod fast_diag;
mod pgmres;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use evint::{ev_int, ev_int_adaptive};
pub use fast_diag::{fast_diag_solve, fast_diag_solve_rhs, DiagSolver};
pub use pgmres::pgmres_solve;

#[cfg(test)]
mod tests;

use crate::error::{Error, Result};
use crate::la::operator::dense_of;
use crate::la::{kron_dense, solve_dense, to_complex_matrix, CMatrix, LinearSolver, SpacePencil, C64};
use crate::time_disc::LowerToeplitz;
use crate::zolotarev::Enclosures;

/// A generalized Sylvester equation `A X B2ᵀ + M X B1ᵀ = F` whose space
/// operators are available through actions and frequency solves.
pub trait SpaceTimeSystem: Sync {
    fn space_dim(&self) -> usize;
    fn b1(&self) -> &LowerToeplitz;
    fn b2(&self) -> &LowerToeplitz;
    fn rhs(&self) -> &CMatrix;
    /// Whether `A` and `M` are real.
    fn is_real(&self) -> bool;
    fn apply_a(&self, x: &[C64], y: &mut [C64]);
    fn apply_m(&self, x: &[C64], y: &mut [C64]);
    /// Solver for `lam1·M + lam2·A`.
    fn frequency_solver(&self, lam1: C64, lam2: C64) -> Result<Box<dyn LinearSolver + '_>>;

    fn n_t(&self) -> usize {
        self.b1().n_t()
    }
}

/// The quadruple `(A, M, B1, B2)` with right-hand side and metadata.
#[derive(Clone)]
pub struct SpaceTimeProblem {
    pub name: String,
    pub pencil: Arc<dyn SpacePencil>,
    pub b1: LowerToeplitz,
    pub b2: LowerToeplitz,
    pub rhs: CMatrix,
    pub dt: f64,
    pub enclosures: Option<Enclosures>,
    pub notes: Vec<String>,
}

impl SpaceTimeProblem {
    pub fn new(
        name: impl Into<String>,
        pencil: Arc<dyn SpacePencil>,
        b1: LowerToeplitz,
        b2: LowerToeplitz,
        rhs: CMatrix,
        dt: f64,
    ) -> Result<Self> {
        let (n, n_t) = rhs.shape();
        if pencil.dim() != n || b1.n_t() != n_t || b2.n_t() != n_t {
            return Err(Error::Dimension(format!(
                "A is {0}x{0}, B1 {1}x{1}, B2 {2}x{2}, F {n}x{n_t}",
                pencil.dim(),
                b1.n_t(),
                b2.n_t()
            )));
        }
        Ok(Self { name: name.into(), pencil, b1, b2, rhs, dt, enclosures: None, notes: vec![] })
    }

    pub fn with_enclosures(mut self, e: Enclosures) -> Self {
        self.enclosures = Some(e);
        self
    }
}

impl SpaceTimeSystem for SpaceTimeProblem {
    fn space_dim(&self) -> usize {
        self.pencil.dim()
    }
    fn b1(&self) -> &LowerToeplitz {
        &self.b1
    }
    fn b2(&self) -> &LowerToeplitz {
        &self.b2
    }
    fn rhs(&self) -> &CMatrix {
        &self.rhs
    }
    fn is_real(&self) -> bool {
        self.pencil.is_real()
    }
    fn apply_a(&self, x: &[C64], y: &mut [C64]) {
        self.pencil.apply_a(x, y)
    }
    fn apply_m(&self, x: &[C64], y: &mut [C64]) {
        self.pencil.apply_m(x, y)
    }
    fn frequency_solver(&self, lam1: C64, lam2: C64) -> Result<Box<dyn LinearSolver + '_>> {
        self.pencil.combination_solver(lam1, lam2)
    }
}

/// Outcome of one solver run.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub method: String,
    #[serde(skip)]
    pub x: CMatrix,
    /// `‖A X B2ᵀ + M X B1ᵀ − F‖_F / ‖F‖_F`, recomputed from `x`.
    pub relres: f64,
    pub iterations: Option<usize>,
    pub d: Option<usize>,
    pub evaluations: Option<usize>,
    pub rank: Option<usize>,
    pub dim: Option<usize>,
    /// Fraction of the wall time spent in the rational Krylov solve.
    pub sylvester_fraction: Option<f64>,
    pub converged: bool,
    pub wall_time: f64,
    pub history: Vec<f64>,
}

impl SolveReport {
    pub fn new(method: impl Into<String>, x: CMatrix, relres: f64) -> Self {
        Self {
            method: method.into(),
            x,
            relres,
            iterations: None,
            d: None,
            evaluations: None,
            rank: None,
            dim: None,
            sylvester_fraction: None,
            converged: true,
            wall_time: 0.0,
            history: vec![],
        }
    }
}

pub(crate) fn is_real_matrix(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Applies a space operator to every column of `x`, in parallel.
pub fn map_columns(x: &CMatrix, f: impl Fn(&[C64], &mut [C64]) + Sync) -> CMatrix {
    let (n, k) = x.shape();
    let cols: Vec<Vec<C64>> = (0..k)
        .into_par_iter()
        .map(|j| {
            let mut y = vec![C64::new(0.0, 0.0); n];
            f(x.column(j).as_slice(), &mut y);
            y
        })
        .collect();
    let mut out = CMatrix::zeros(n, k);
    for (j, c) in cols.into_iter().enumerate() {
        out.column_mut(j).copy_from_slice(&c);
    }
    out
}

/// `A X B2ᵀ + M X B1ᵀ`
pub fn apply_operator<S: SpaceTimeSystem + ?Sized>(sys: &S, x: &CMatrix) -> CMatrix {
    let ax = map_columns(x, |u, v| sys.apply_a(u, v));
    let mx = map_columns(x, |u, v| sys.apply_m(u, v));
    let left = if *sys.b2() == LowerToeplitz::identity(sys.n_t()) {
        ax
    } else {
        sys.b2().apply_right_transpose(&ax)
    };
    left + sys.b1().apply_right_transpose(&mx)
}

/// Relative residual of `xhat` for the system's own right-hand side.
pub fn residual<S: SpaceTimeSystem + ?Sized>(sys: &S, xhat: &CMatrix) -> Result<f64> {
    let f = sys.rhs();
    if xhat.shape() != f.shape() {
        return Err(Error::Dimension(format!("X is {:?}, F is {:?}", xhat.shape(), f.shape())));
    }
    let fnorm = f.norm();
    if fnorm == 0.0 {
        return Err(Error::ZeroRightHandSide);
    }
    Ok((apply_operator(sys, xhat) - f).norm() / fnorm)
}

/// Dense Kronecker solve of `(B2 ⊗ A + B1 ⊗ M) vec X = vec F`; only for
/// small problems.
pub fn dense_solve<S: SpaceTimeSystem + ?Sized>(sys: &S) -> Result<CMatrix> {
    let (n, n_t) = (sys.space_dim(), sys.n_t());
    let a = dense_of(n, |x, y| sys.apply_a(x, y));
    let m = dense_of(n, |x, y| sys.apply_m(x, y));
    let big = kron_dense(&to_complex_matrix(&sys.b2().dense()), &a) + kron_dense(&to_complex_matrix(&sys.b1().dense()), &m);
    let x = solve_dense(&big, &CMatrix::from_column_slice(n * n_t, 1, sys.rhs().as_slice()))?;
    Ok(CMatrix::from_column_slice(n, n_t, x.as_slice()))
}
