use paradiag::diag::{ev_int, fast_diag_solve, pgmres_solve, residual, SolveReport};
use paradiag::rksm::{low_rank_update, RksmOptions, UpdateOptions, UpdateShifts};
use paradiag::runge_kutta::{rk_ev_int, rk_low_rank_update, rk_pgmres};
use paradiag::C64;
use serde::Serialize;

use crate::config::{BuiltProblem, Method, ProblemConfig, Resolved, SolverParams};
use crate::BenchError;

#[derive(Clone, Debug, Serialize)]
pub struct ProblemInfo {
    pub family: String,
    pub name: String,
    pub n: usize,
    pub n_t: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub problem: ProblemInfo,
    pub params: Resolved,
    pub report: SolveReport,
}

fn update_options(p: &Resolved) -> UpdateOptions {
    UpdateOptions { rksm: RksmOptions { tol: p.tol, max_dim: p.max_dim }, recompress_tol: p.tol }
}

fn need_rk<'a>(built: &'a BuiltProblem, m: Method) -> Result<&'a paradiag::runge_kutta::RkAllAtOnce, BenchError> {
    match built {
        BuiltProblem::Rk(s) => Ok(s),
        BuiltProblem::Plain(p) => Err(BenchError::Usage(format!("method {} needs the rk-heat problem, got {}", m.name(), p.name))),
    }
}

pub fn run_method(built: &BuiltProblem, method: Method, p: &Resolved) -> Result<SolveReport, BenchError> {
    let prob = built.problem();
    let alpha = C64::new(p.alpha, 0.0);
    let update = |shifts| {
        if let BuiltProblem::Rk(_) = built {
            return Err(BenchError::Usage(format!("method {} does not apply to Runge-Kutta systems", method.name())));
        }
        Ok(low_rank_update(prob, shifts, &update_options(p))?)
    };
    let mut rep = match method {
        Method::FastDiag => {
            let start = std::time::Instant::now();
            let x = fast_diag_solve(prob, alpha)?;
            let mut rep = SolveReport::new("fast-diag", x, 0.0);
            rep.wall_time = start.elapsed().as_secs_f64();
            rep
        }
        Method::Pgmres => pgmres_solve(prob, alpha, p.tol, p.max_iter)?,
        Method::Evint => ev_int(prob, p.rho, p.d)?,
        Method::UpdateEds => update(UpdateShifts::Eds)?,
        Method::UpdateZoldi4 => update(UpdateShifts::ZolDiCyclic(4))?,
        Method::Update2discs => update(UpdateShifts::TwoDiscs)?,
        Method::UpdateEk => update(UpdateShifts::Ek)?,
        Method::RkPgmres => rk_pgmres(need_rk(built, method)?, alpha, p.tol, p.max_iter)?,
        Method::RkEvint => rk_ev_int(need_rk(built, method)?, p.rho, p.d)?,
        Method::RkEk => rk_low_rank_update(need_rk(built, method)?, p.sigma, &update_options(p))?,
    };
    rep.method = method.name().into();
    rep.relres = residual(prob, &rep.x)?;
    Ok(rep)
}

pub fn run(problem: &ProblemConfig, method: Method, params: &SolverParams) -> Result<RunOutput, BenchError> {
    let built = problem.build()?;
    let resolved = params.resolve(problem.family());
    let report = run_method(&built, method, &resolved)?;
    let prob = built.problem();
    Ok(RunOutput {
        problem: ProblemInfo {
            family: problem.family().into(),
            name: prob.name.clone(),
            n: prob.rhs.nrows(),
            n_t: prob.rhs.ncols(),
            notes: prob.notes.clone(),
        },
        params: resolved,
        report,
    })
}
