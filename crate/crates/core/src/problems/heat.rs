use std::f64::consts::PI;
use std::sync::Arc;

use crate::diag::SpaceTimeProblem;
use crate::error::{Error, Result};
use crate::la::{CMatrix, SparsePencil, C64};
use crate::time_disc::{build_euler, build_gl_fractional, grunwald_weights, LowerToeplitz};
use crate::zolotarev::{Disc, Enclosures, RealInterval};

use super::laplacian_1d;

pub const HEAT_W: f64 = 0.05;
pub const HEAT_H: f64 = 100.0;

fn source(x: f64, t: f64) -> f64 {
    let c = 0.5 + (0.5 - HEAT_W) * (2.0 * PI * t).sin();
    HEAT_H * (1.0 - (c - x).abs() / HEAT_W).max(0.0)
}

fn initial(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

fn grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
}

fn check_sizes(n: usize, n_t: usize) -> Result<()> {
    if n == 0 || n_t == 0 {
        return Err(Error::InvalidArgument(format!("sizes must be positive, got n={n}, n_t={n_t}")));
    }
    Ok(())
}

/// `W(A) = [λ_min, λ_max]` and `W(-B1) = {|z + 1| ≤ cos(π/(n_t+1))}`
/// for the `Δt`-scaled heat equation.
pub fn heat1d_enclosures(n: usize, n_t: usize) -> Enclosures {
    let s = ((n + 1) * (n + 1)) as f64 / n_t as f64;
    let lmin = (2.0 - 2.0 * (PI / (n + 1) as f64).cos()) * s;
    let lmax = (2.0 - 2.0 * (n as f64 * PI / (n + 1) as f64).cos()) * s;
    Enclosures {
        a_interval: RealInterval::new(lmin, lmax),
        neg_b_disc: Disc::new(C64::new(-1.0, 0.0), (PI / (n_t + 1) as f64).cos()),
    }
}

/// 1D heat equation on `[0,1]²` with a moving hat source, central
/// differences and implicit Euler, multiplied through by `Δt`:
/// `A = Δt·trid(-1,2,-1)(n+1)²`, `B1 = trid(-1,1)`, `B2 = I`.
pub fn heat1d(n: usize, n_t: usize) -> Result<SpaceTimeProblem> {
    check_sizes(n, n_t)?;
    let dt = 1.0 / n_t as f64;
    let x = grid(n);
    let a = laplacian_1d(n, dt * ((n + 1) * (n + 1)) as f64);
    let (b1, b2) = build_euler(n_t, 1.0);
    let mut f = CMatrix::from_fn(n, n_t, |i, k| C64::new(dt * source(x[i], (k + 1) as f64 * dt), 0.0));
    for i in 0..n {
        f[(i, 0)] += initial(x[i]);
    }
    let p = SpaceTimeProblem::new("heat1d", Arc::new(SparsePencil::new(a, None)), b1, b2, f, dt)?;
    Ok(if n >= 2 { p.with_enclosures(heat1d_enclosures(n, n_t)) } else { p })
}

/// The heat problem with the first time derivative replaced by a Caputo
/// derivative of order `gamma`, discretized by Grünwald-Letnikov weights.
/// The initial value enters every column through the Caputo correction.
pub fn frac_time(n: usize, n_t: usize, gamma: f64) -> Result<SpaceTimeProblem> {
    check_sizes(n, n_t)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!("gamma must lie in (0,1), got {gamma}")));
    }
    let dt = 1.0 / n_t as f64;
    let x = grid(n);
    let a = laplacian_1d(n, ((n + 1) * (n + 1)) as f64);
    let b1 = build_gl_fractional(n_t, gamma, dt);
    let g = grunwald_weights(n_t, gamma);
    let mut partial = 0.0;
    let mut f = CMatrix::zeros(n, n_t);
    for k in 0..n_t {
        partial += g[k];
        let w = dt.powf(-gamma) * partial;
        for i in 0..n {
            f[(i, k)] = C64::new(source(x[i], (k + 1) as f64 * dt) + w * initial(x[i]), 0.0);
        }
    }
    let mut p = SpaceTimeProblem::new(
        "frac-time",
        Arc::new(SparsePencil::new(a, None)),
        b1,
        LowerToeplitz::identity(n_t),
        f,
        dt,
    )?;
    p.notes.push("B1 is dense lower triangular; the low-rank update is not applicable".into());
    Ok(p)
}
