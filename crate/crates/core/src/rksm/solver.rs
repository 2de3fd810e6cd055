use super::basis::RationalBasis;
use super::lowrank::LowRankSolution;
use super::operators::KrylovOperator;
use crate::error::{Error, Result};
use crate::la::{sylvester_dense, CMatrix};
use crate::zolotarev::ShiftPlan;

#[derive(Clone, Copy, Debug)]
pub struct RksmOptions {
    /// Threshold on `‖T_A X + X T_Bᵀ - U Vᴴ‖_F / ‖U Vᴴ‖_F`.
    pub tol: f64,
    /// Cap on the dimension of either basis.
    pub max_dim: usize,
}

impl Default for RksmOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_dim: 400 }
    }
}

/// State reported to an observer after every projected solve.
pub struct RksmStep<'s> {
    pub step: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub residual: f64,
    pub solution: &'s LowRankSolution,
}

#[derive(Clone, Debug)]
pub struct RksmOutcome {
    pub solution: LowRankSolution,
    /// Relative residual after each projected solve.
    pub history: Vec<f64>,
    pub dim_a: usize,
    pub dim_b: usize,
    pub steps: usize,
    pub deflated: usize,
    pub converged: bool,
}

/// Two-sided rational Krylov Galerkin solver for `T_A X + X T_Bᵀ = U Vᴴ`.
///
/// Step `i` extends the `T_A` space with `plan.poles_a[i]` and the `T_B`
/// space, started from `conj(V)`, with `plan.poles_b[i]`.
pub fn rksm_sylvester(
    op_a: &dyn KrylovOperator,
    op_b: &dyn KrylovOperator,
    u: &CMatrix,
    v: &CMatrix,
    plan: &ShiftPlan,
    opts: &RksmOptions,
    mut observer: Option<&mut dyn FnMut(&RksmStep)>,
) -> Result<RksmOutcome> {
    let (n, n_t) = (op_a.dim(), op_b.dim());
    if u.nrows() != n || v.nrows() != n_t || u.ncols() != v.ncols() {
        return Err(Error::Dimension(format!("U is {:?}, V is {:?}, operators {n} and {n_t}", u.shape(), v.shape())));
    }
    let rhs_norm = ((u.adjoint() * u) * (v.adjoint() * v)).trace().re.max(0.0).sqrt();
    if rhs_norm == 0.0 {
        return Ok(RksmOutcome {
            solution: LowRankSolution::zeros(n, n_t),
            history: vec![0.0],
            dim_a: 0,
            dim_b: 0,
            steps: 0,
            deflated: 0,
            converged: true,
        });
    }
    let vbar = v.map(|z| z.conj());
    let mut wa = RationalBasis::new(op_a, u)?;
    let mut wb = RationalBasis::new(op_b, &vbar)?;
    let mut history = Vec::new();
    let mut step = 0;
    let mut stalled = false;
    loop {
        let w = wa.matrix();
        let z = wb.matrix();
        let aw = wa.image_matrix();
        let bz = wb.image_matrix();
        let ap = w.adjoint() * &aw;
        let bp = z.adjoint() * &bz;
        let cp = (w.adjoint() * u) * (z.adjoint() * &vbar).transpose();
        let y = sylvester_dense(&ap, &bp, &cp)?;
        let ra = (&aw - &w * &ap) * &y;
        let rb = (&bz - &z * &bp) * y.transpose();
        let res = (ra.norm_squared() + rb.norm_squared()).sqrt() / rhs_norm;
        history.push(res);
        let solution = LowRankSolution { left: w, middle: y, right: z.map(|c| c.conj()) };
        if let Some(obs) = observer.as_mut() {
            obs(&RksmStep { step, dim_a: wa.dim(), dim_b: wb.dim(), residual: res, solution: &solution });
        }
        let converged = res <= opts.tol;
        let exhausted = step >= plan.poles_a.len().min(plan.poles_b.len());
        let full = wa.dim() >= opts.max_dim || wb.dim() >= opts.max_dim;
        if converged || exhausted || full || stalled {
            return Ok(RksmOutcome {
                solution,
                history,
                dim_a: wa.dim(),
                dim_b: wb.dim(),
                steps: step,
                deflated: wa.deflated() + wb.deflated(),
                converged,
            });
        }
        let (sa, sb) = (plan.poles_a[step], plan.poles_b[step]);
        let (ga, gb) = rayon::join(|| wa.extend(sa), || wb.extend(sb));
        let (ga, gb) = (ga?, gb?);
        step += 1;
        stalled = ga == 0 && gb == 0;
    }
}
