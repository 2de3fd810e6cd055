//! Rational Krylov subspace method for Sylvester equations with low-rank
//! right-hand side, and the circulant-plus-correction driver.

mod basis;
mod lowrank;
mod operators;
mod solver;
mod update;

pub use basis::{RationalBasis, DEFLATION_TOL};
pub use lowrank::{recompress, LowRankSolution};
pub use operators::{dense_operator, ComplexToeplitz, KrylovOperator, PencilOperator, ToeplitzOperator};
pub use solver::{rksm_sylvester, RksmOptions, RksmOutcome, RksmStep};
pub use update::{
    correction_equation, low_rank_update, low_rank_update_observed, update_applicable, CorrectionEquation,
    UpdateOptions, UpdateShifts,
};
pub(crate) use update::finish_update;

/// `A Y + Y Bᵀ = C` for the small projected matrices.
pub use crate::la::sylvester_dense as solve_compressed;
