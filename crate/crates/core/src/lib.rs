//! All-at-once space-time solvers for generalized Sylvester equations
//! `A X B2ᵀ + M X B1ᵀ = F`.
//!
//! The crate provides alpha-circulant diagonalization (`diag`), circulant
//! preconditioned GMRES, evaluation-interpolation at scaled roots of unity,
//! low-rank updates solved by rational Krylov methods with Zolotarev shifts
//! (`rksm`, `zolotarev`), the Runge-Kutta all-at-once variant (`runge_kutta`),
//! and generators for the benchmark problems (`problems`).

pub mod diag;
pub mod error;
pub mod la;
pub mod problems;
pub mod rksm;
pub mod runge_kutta;
pub mod time_disc;
pub mod zolotarev;

pub use error::{Error, Result};
pub use la::{CMatrix, C64};
