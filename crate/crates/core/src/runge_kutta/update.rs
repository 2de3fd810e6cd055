use std::time::Instant;

use super::RkAllAtOnce;
use crate::diag::{fast_diag_solve, SolveReport};
use crate::error::{Error, Result};
use crate::la::{CMatrix, SpacePencil, C64};
use crate::rksm::{finish_update, rksm_sylvester, ComplexToeplitz, PencilOperator, ToeplitzOperator, UpdateOptions};
use crate::zolotarev::shifts_ek;

pub const DEFAULT_SIGMA: f64 = -2.0;

/// The update equation `Â δX + M̂ δX B1ᵀ = -M̂ X0 e_{n_t} e_1ᵀ` rewritten
/// as `Ã δX + δX B̃ᵀ = u vᵀ` with `Ã = (M̂ + σÂ)^{-1} Â` and
/// `B̃ = (I - σB1)^{-1} B1`.
pub struct RkUpdateEquation<'a> {
    pub x0: CMatrix,
    pub u: CMatrix,
    pub v: CMatrix,
    pub op_a: PencilOperator<'a>,
    pub op_b: ToeplitzOperator,
}

pub fn rk_update_transform(sys: &RkAllAtOnce, sigma: f64) -> Result<RkUpdateEquation<'_>> {
    let one = C64::new(1.0, 0.0);
    let (zero, s) = (C64::new(0.0, 0.0), C64::new(sigma, 0.0));
    let pencil: &dyn SpacePencil = sys.pencil.as_ref();
    let op_a = PencilOperator::new(pencil, (one, s), (zero, one))
        .map_err(|e| Error::SigmaShift { sigma, source: Box::new(e) })?;
    let n_t = sys.n_t();
    let b1 = ComplexToeplitz::from_real(&sys.problem.b1);
    let mut e1 = vec![zero; n_t];
    e1[0] = one;
    let shifted = ComplexToeplitz::new(e1.clone()).lin_comb(one, &b1, -s);
    let op_b = ToeplitzOperator::new(shifted, b1);

    let x0 = fast_diag_solve(&sys.problem, one)?;
    let last: Vec<C64> = x0.column(n_t - 1).iter().copied().collect();
    let mut u = vec![zero; last.len()];
    pencil.apply_m(&last, &mut u);
    u.iter_mut().for_each(|z| *z = -*z);
    op_a.solve_p(&mut u).map_err(|e| Error::SigmaShift { sigma, source: Box::new(e) })?;
    let mut v = e1;
    op_b.solve_p(&mut v).map_err(|e| Error::SigmaShift { sigma, source: Box::new(e) })?;
    Ok(RkUpdateEquation {
        x0,
        u: CMatrix::from_column_slice(u.len(), 1, &u),
        v: CMatrix::from_column_slice(n_t, 1, &v),
        op_a,
        op_b,
    })
}

/// `X0` from the circulant system plus the extended Krylov solution of the
/// shifted update equation.
pub fn rk_low_rank_update(sys: &RkAllAtOnce, sigma: f64, opts: &UpdateOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let eq = rk_update_transform(sys, sigma)?;
    let plan = shifts_ek(opts.rksm.max_dim + 1);
    let t = Instant::now();
    let out = rksm_sylvester(&eq.op_a, &eq.op_b, &eq.u, &eq.v, &plan, &opts.rksm, None)?;
    let sylv = t.elapsed().as_secs_f64();
    finish_update(&sys.problem, "rk-ek", eq.x0, out, opts.recompress_tol, start, sylv)
}
