//! Shift selection for rational Krylov methods from Zolotarev problems on
//! two discs and on a disc and an interval.
//!
//! Conventions: `E` encloses `W(-B̃)` and `F` encloses `W(Ã)`. The rational
//! function `r` is small on `E` and large on `F`; its zeros (inside `E`) are
//! the shifts of the `Ã`-side space `(ξI - Ã)^{-1}` and its negated poles
//! are the shifts of the `B̃`-side space `(ψI - B̃)^{-1}`.

mod elliptic;
mod moebius;
mod plans;

pub use elliptic::{agm, ellipk_complement, jacobi_dn};
pub use moebius::{cayley_disc_interval, moebius_two_discs, shifts_2discs, MoebiusMap, TwoDiscShifts};
pub use plans::{
    decay_bound_di, delta_j, eds_sequence, elliptic_poles, plan_2discs, plan_eds, plan_zoldi, plan_zoldi_cyclic,
    shifts_ek, shifts_zoldi, zolotarev_ratio, Shift, ShiftKind, ShiftPlan,
};

use serde::Serialize;

use crate::la::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Disc {
    pub center: C64,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: C64, radius: f64) -> Self {
        assert!(radius > 0.0, "disc radius must be positive");
        Self { center, radius }
    }

    pub fn contains(&self, z: C64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius * (1.0 + slack)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RealInterval {
    pub a: f64,
    pub b: f64,
}

impl RealInterval {
    pub fn new(a: f64, b: f64) -> Self {
        assert!(a < b, "interval needs a < b");
        Self { a, b }
    }

    /// The disc having the interval as a diameter.
    pub fn enclosing_disc(&self) -> Disc {
        Disc::new(C64::new(0.5 * (self.a + self.b), 0.0), 0.5 * (self.b - self.a))
    }
}

/// Numerical-range enclosures: `W(Ã)` has real parts in `a_interval`,
/// `W(-B̃)` lies in `neg_b_disc`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Enclosures {
    pub a_interval: RealInterval,
    pub neg_b_disc: Disc,
}
