//! All-at-once implicit Runge-Kutta systems `𝒜 = I ⊗ Â + B1 ⊗ M̂`, with
//! frequency solves by generalized Schur forms and the shifted update
//! equation for the low-rank correction.

mod gen_sylvester;
mod oracle;
mod tableau;
mod update;

use std::sync::Arc;

pub use gen_sylvester::{gen_sylvester_qz, GenSylvester};
pub use oracle::sequential_rk_oracle;
pub use tableau::ButcherTableau;
pub use update::{rk_low_rank_update, rk_update_transform, RkUpdateEquation, DEFAULT_SIGMA};

use crate::diag::{ev_int, fast_diag_solve, pgmres_solve, SolveReport, SpaceTimeProblem};
use crate::error::{Error, Result};
use crate::la::{CMatrix, LinearSolver, SpacePencil, SparseMatrix, C64};
use crate::problems::RkHeat;
use crate::time_disc::{build_euler, LowerToeplitz};

#[cfg(test)]
mod tests;

/// The block pair `(Â, M̂)` acting on `n(s+1)` vectors ordered
/// `[k_1; …; k_s; x]`:
/// `Â = [[-ΔtG, -e], [0, 0]] ⊗ A + [[I, 0], [-b, 0]] ⊗ I`,
/// `M̂ = [[0, e], [0, 0]] ⊗ A + [[0, 0], [0, 1]] ⊗ I`, with `b = Δt·weights`.
pub struct RkPencil {
    a: SparseMatrix<f64>,
    n: usize,
    s: usize,
    dt: f64,
    g: CMatrix,
    b: Vec<f64>,
}

impl RkPencil {
    pub fn new(a: SparseMatrix<f64>, tab: &ButcherTableau, dt: f64) -> Result<Self> {
        tab.validate()?;
        if a.nrows() != a.ncols() {
            return Err(Error::Dimension(format!("A is {}x{}", a.nrows(), a.ncols())));
        }
        let g = tab.g_matrix().map(|v| C64::new(v, 0.0));
        let b = tab.b.iter().map(|w| dt * w).collect();
        Ok(Self { n: a.nrows(), s: tab.s, a, dt, g, b })
    }

    pub fn space_dim(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> usize {
        self.s
    }

    /// `(P, Q)` with `c_m M̂ + c_a Â = P ⊗ A + Q ⊗ I`.
    pub fn coefficient_pair(&self, c_m: C64, c_a: C64) -> (CMatrix, CMatrix) {
        let s = self.s;
        let mut p = CMatrix::zeros(s + 1, s + 1);
        let mut q = CMatrix::zeros(s + 1, s + 1);
        for i in 0..s {
            for j in 0..s {
                p[(i, j)] = -c_a * self.g[(i, j)] * self.dt;
            }
            p[(i, s)] = c_m - c_a;
            q[(i, i)] = c_a;
            q[(s, i)] = -c_a * self.b[i];
        }
        q[(s, s)] = c_m;
        (p, q)
    }

    fn apply_pair(&self, c_m: C64, c_a: C64, x: &[C64], y: &mut [C64]) {
        let (p, q) = self.coefficient_pair(c_m, c_a);
        let k = self.s + 1;
        let xm = CMatrix::from_column_slice(self.n, k, x);
        let mut ax = CMatrix::zeros(self.n, k);
        let mut buf = vec![C64::new(0.0, 0.0); self.n];
        for j in 0..k {
            let col: Vec<C64> = xm.column(j).iter().copied().collect();
            self.a.matvec(&col, &mut buf);
            ax.column_mut(j).copy_from_slice(&buf);
        }
        let out = ax * p.transpose() + xm * q.transpose();
        y.copy_from_slice(out.as_slice());
    }
}

impl SpacePencil for RkPencil {
    fn dim(&self) -> usize {
        self.n * (self.s + 1)
    }
    fn is_real(&self) -> bool {
        true
    }
    fn apply_a(&self, x: &[C64], y: &mut [C64]) {
        self.apply_pair(C64::new(0.0, 0.0), C64::new(1.0, 0.0), x, y)
    }
    fn apply_m(&self, x: &[C64], y: &mut [C64]) {
        self.apply_pair(C64::new(1.0, 0.0), C64::new(0.0, 0.0), x, y)
    }
    fn identity_mass(&self) -> bool {
        false
    }
    fn combination_solver(&self, c_m: C64, c_a: C64) -> Result<Box<dyn LinearSolver>> {
        let (p, q) = self.coefficient_pair(c_m, c_a);
        Ok(Box::new(GenSylvester::new(&self.a, &p.transpose(), &q.transpose())?))
    }
}

/// An assembled all-at-once Runge-Kutta system.
#[derive(Clone)]
pub struct RkAllAtOnce {
    pub problem: SpaceTimeProblem,
    pub pencil: Arc<RkPencil>,
}

impl RkAllAtOnce {
    pub fn n(&self) -> usize {
        self.pencil.n
    }

    pub fn stages(&self) -> usize {
        self.pencil.s
    }

    pub fn n_t(&self) -> usize {
        self.problem.b1.n_t()
    }

    /// The states `x_1, …, x_{n_t}` stored in a solution.
    pub fn states(&self, x: &CMatrix) -> Vec<Vec<C64>> {
        let (n, s) = (self.n(), self.stages());
        (0..x.ncols()).map(|j| x.column(j).rows(n * s, n).iter().copied().collect()).collect()
    }

    pub fn terminal_state(&self, x: &CMatrix) -> Vec<C64> {
        self.states(x).pop().unwrap_or_default()
    }
}

/// Assembles the all-at-once system for `x' = A x + f(t)` with `M = I`.
pub fn assemble_rk(
    a: &SparseMatrix<f64>,
    x0: &[f64],
    f: &dyn Fn(f64) -> Vec<f64>,
    tab: &ButcherTableau,
    n_t: usize,
    dt: f64,
) -> Result<RkAllAtOnce> {
    let n = a.nrows();
    if x0.len() != n || n_t == 0 {
        return Err(Error::Dimension(format!("A is {n}x{n}, x0 has {} entries, n_t = {n_t}", x0.len())));
    }
    let pencil = Arc::new(RkPencil::new(a.clone(), tab, dt)?);
    let s = tab.s;
    let mut rhs = CMatrix::zeros(n * (s + 1), n_t);
    for j in 0..n_t {
        for i in 0..s {
            let fv = f(j as f64 * dt + tab.c[i] * dt);
            if fv.len() != n {
                return Err(Error::Dimension(format!("source returned {} entries, expected {n}", fv.len())));
            }
            for r in 0..n {
                rhs[(i * n + r, j)] = C64::new(fv[r], 0.0);
            }
        }
    }
    let x0c: Vec<C64> = x0.iter().map(|&v| C64::new(v, 0.0)).collect();
    let mut ax0 = vec![C64::new(0.0, 0.0); n];
    a.matvec(&x0c, &mut ax0);
    for i in 0..s {
        for r in 0..n {
            rhs[(i * n + r, 0)] += ax0[r];
        }
    }
    for r in 0..n {
        rhs[(s * n + r, 0)] = x0c[r];
    }
    let (b1, _) = build_euler(n_t, 1.0);
    let problem = SpaceTimeProblem::new(
        format!("rk-{}", tab.s),
        pencil.clone() as Arc<dyn SpacePencil>,
        b1,
        LowerToeplitz::identity(n_t),
        rhs,
        dt,
    )?;
    Ok(RkAllAtOnce { problem, pencil })
}

/// The all-at-once system of the semidiscrete heat benchmark.
pub fn assemble_rk_heat(p: &RkHeat, tab: &ButcherTableau) -> Result<RkAllAtOnce> {
    let n = p.x0.len();
    let mut sys = assemble_rk(&p.a, &p.x0, &|_| vec![0.0; n], tab, p.n_t, p.dt)?;
    sys.problem.name = "rk-heat".into();
    Ok(sys)
}

/// Diagonalization solve of the `α`-circulant all-at-once system.
pub fn rk_fast_diag_solve(sys: &RkAllAtOnce, alpha: C64) -> Result<CMatrix> {
    fast_diag_solve(&sys.problem, alpha)
}

pub fn rk_ev_int(sys: &RkAllAtOnce, rho: f64, d: usize) -> Result<SolveReport> {
    let mut rep = ev_int(&sys.problem, rho, d)?;
    rep.method = "rk-evint".into();
    Ok(rep)
}

pub fn rk_pgmres(sys: &RkAllAtOnce, alpha: C64, tol: f64, max_iter: usize) -> Result<SolveReport> {
    let mut rep = pgmres_solve(&sys.problem, alpha, tol, max_iter)?;
    rep.method = "rk-pgmres".into();
    Ok(rep)
}
