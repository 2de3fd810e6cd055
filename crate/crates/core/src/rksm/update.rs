use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::lowrank::{recompress, LowRankSolution};
use super::operators::{PencilOperator, ToeplitzOperator};
use super::solver::{rksm_sylvester, RksmOptions, RksmOutcome, RksmStep};
use crate::diag::{fast_diag_solve, map_columns, residual, SolveReport, SpaceTimeProblem};
use crate::error::{Error, Result};
use crate::la::{CMatrix, C64};
use crate::time_disc::{delta_lowrank, LowerToeplitz};
use crate::zolotarev::{plan_2discs, plan_eds, plan_zoldi, plan_zoldi_cyclic, shifts_ek, Enclosures, ShiftPlan};

/// Shift strategy of the low-rank update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateShifts {
    TwoDiscs,
    /// The `j` quasi-optimal shifts, used once.
    ZolDi(usize),
    /// The `k` quasi-optimal shifts repeated cyclically.
    ZolDiCyclic(usize),
    Eds,
    Ek,
}

impl UpdateShifts {
    pub fn method_name(&self) -> String {
        match self {
            UpdateShifts::TwoDiscs => "update-2discs".into(),
            UpdateShifts::ZolDi(j) => format!("update-zoldi-{j}"),
            UpdateShifts::ZolDiCyclic(k) => format!("update-zoldi{k}"),
            UpdateShifts::Eds => "update-eds".into(),
            UpdateShifts::Ek => "update-ek".into(),
        }
    }

    /// A plan long enough for `steps` extensions.
    pub fn plan(&self, enc: Option<&Enclosures>, steps: usize, problem: &str) -> Result<ShiftPlan> {
        if let UpdateShifts::Ek = self {
            return Ok(shifts_ek(steps));
        }
        let enc = enc.ok_or_else(|| Error::MissingEnclosure(problem.to_string()))?;
        match *self {
            UpdateShifts::TwoDiscs => plan_2discs(enc, steps),
            UpdateShifts::ZolDi(j) => plan_zoldi(enc, j),
            UpdateShifts::ZolDiCyclic(k) => plan_zoldi_cyclic(enc, k, steps),
            UpdateShifts::Eds => plan_eds(enc, steps),
            UpdateShifts::Ek => unreachable!(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct UpdateOptions {
    pub rksm: RksmOptions,
    /// Relative truncation of the computed correction.
    pub recompress_tol: f64,
}

impl Default for UpdateOptions {
    fn default() -> Self {
        Self { rksm: RksmOptions::default(), recompress_tol: 1e-8 }
    }
}

/// The correction equation `Ã δX + δX B̃ᵀ = U Vᴴ` with `Ã = M^{-1}A`,
/// `B̃ = B2^{-1}B1`, left over after the circulant solve `X0`.
pub struct CorrectionEquation<'a> {
    pub x0: CMatrix,
    pub u: CMatrix,
    pub v: CMatrix,
    pub op_a: PencilOperator<'a>,
    pub op_b: ToeplitzOperator,
}

/// Sets up the correction equation of `p` for `α = 1`.
pub fn correction_equation(p: &SpaceTimeProblem) -> Result<CorrectionEquation<'_>> {
    let one = C64::new(1.0, 0.0);
    let d1 = delta_lowrank(&p.b1, one)?;
    let d2 = delta_lowrank(&p.b2, one)?;
    let x0 = fast_diag_solve(p, one)?;
    let op_a = PencilOperator::standard(p.pencil.as_ref())?;
    let op_b = ToeplitzOperator::standard(&p.b1, &p.b2);
    let (n, n_t) = x0.shape();
    let (r1, r2) = (d1.rank(), d2.rank());
    let ax0 = map_columns(&(&x0 * d2.v.map(|z| z.conj())), |x, y| p.pencil.apply_a(x, y));
    let mx0 = map_columns(&(&x0 * d1.v.map(|z| z.conj())), |x, y| p.pencil.apply_m(x, y));
    let mut l = CMatrix::zeros(n, r1 + r2);
    l.view_mut((0, 0), (n, r2)).copy_from(&ax0);
    l.view_mut((0, r2), (n, r1)).copy_from(&mx0);
    let mut r = CMatrix::zeros(n_t, r1 + r2);
    r.view_mut((0, 0), (n_t, r2)).copy_from(&d2.u);
    r.view_mut((0, r2), (n_t, r1)).copy_from(&d1.u);
    for j in 0..r1 + r2 {
        let mut c: Vec<C64> = l.column(j).iter().copied().collect();
        op_a.solve_p(&mut c)?;
        l.column_mut(j).copy_from_slice(&c);
        let mut c: Vec<C64> = r.column(j).iter().copied().collect();
        op_b.solve_p(&mut c)?;
        r.column_mut(j).copy_from_slice(&c);
    }
    Ok(CorrectionEquation { x0, u: l, v: r.map(|z| z.conj()), op_a, op_b })
}

/// Circulant solve followed by a rational Krylov solve of the correction
/// equation: `X = X0 + δX`.
pub fn low_rank_update(p: &SpaceTimeProblem, shifts: UpdateShifts, opts: &UpdateOptions) -> Result<SolveReport> {
    low_rank_update_observed(p, shifts, opts, None)
}

pub fn low_rank_update_observed(
    p: &SpaceTimeProblem,
    shifts: UpdateShifts,
    opts: &UpdateOptions,
    observer: Option<&mut dyn FnMut(&RksmStep)>,
) -> Result<SolveReport> {
    let start = Instant::now();
    let eq = correction_equation(p)?;
    let steps = opts.rksm.max_dim / eq.u.ncols().max(1) + 1;
    let plan = shifts.plan(p.enclosures.as_ref(), steps, &p.name)?;
    let t_sylv = Instant::now();
    let out = rksm_sylvester(&eq.op_a, &eq.op_b, &eq.u, &eq.v, &plan, &opts.rksm, observer)?;
    let sylv = t_sylv.elapsed().as_secs_f64();
    finish_update(p, &shifts.method_name(), eq.x0, out, opts.recompress_tol, start, sylv)
}

pub(crate) fn finish_update<S: crate::diag::SpaceTimeSystem + ?Sized>(
    p: &S,
    method: &str,
    x0: CMatrix,
    out: RksmOutcome,
    recompress_tol: f64,
    start: Instant,
    sylv: f64,
) -> Result<SolveReport> {
    let dx: LowRankSolution = recompress(&out.solution, recompress_tol);
    let x = x0 + dx.dense();
    let mut rep = SolveReport::new(method, x, 0.0);
    rep.relres = residual(p, &rep.x)?;
    rep.rank = Some(dx.rank());
    rep.dim = Some(out.dim_a);
    rep.iterations = Some(out.steps);
    rep.converged = out.converged;
    rep.history = out.history;
    rep.wall_time = start.elapsed().as_secs_f64();
    rep.sylvester_fraction = Some(if rep.wall_time > 0.0 { sylv / rep.wall_time } else { 0.0 });
    Ok(rep)
}

/// Whether a time matrix admits the low-rank circulant correction.
pub fn update_applicable(t: &LowerToeplitz) -> bool {
    delta_lowrank(t, C64::new(1.0, 0.0)).is_ok()
}

