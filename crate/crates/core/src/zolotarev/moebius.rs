use serde::Serialize;

use super::{Disc, RealInterval};
use crate::error::{Error, Result};
use crate::la::C64;

/// `z ↦ (p z + q) / (r z + s)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    pub p: C64,
    pub q: C64,
    pub r: C64,
    pub s: C64,
}

impl MoebiusMap {
    pub fn new(p: C64, q: C64, r: C64, s: C64) -> Self {
        assert!(p * s - q * r != C64::new(0.0, 0.0), "degenerate Moebius map");
        Self { p, q, r, s }
    }

    /// Image of `z`; the pole maps to a complex infinity.
    pub fn apply(&self, z: C64) -> C64 {
        let den = self.r * z + self.s;
        if den == C64::new(0.0, 0.0) {
            return C64::new(f64::INFINITY, 0.0);
        }
        (self.p * z + self.q) / den
    }

    /// Image of the point at infinity.
    pub fn at_infinity(&self) -> C64 {
        if self.r == C64::new(0.0, 0.0) {
            C64::new(f64::INFINITY, 0.0)
        } else {
            self.p / self.r
        }
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.s, -self.q, -self.r, self.p)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Self) -> Self {
        Self::new(
            self.p * inner.p + self.q * inner.r,
            self.p * inner.q + self.q * inner.s,
            self.r * inner.p + self.s * inner.r,
            self.r * inner.q + self.s * inner.s,
        )
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Maps `E` to an origin-centered disc and `F` to the exterior of a larger
/// origin-centered disc. Returns `(Φ, α, β)` with `β = 1/ᾱ` the common
/// inverse point of `α` for both transformed circles.
pub fn moebius_two_discs(e: &Disc, f: &Disc) -> Result<(MoebiusMap, C64, C64)> {
    if (e.center - f.center).norm() <= e.radius + f.radius {
        return Err(Error::OverlappingSets);
    }
    let c = (f.center - e.center) / e.radius;
    let dir = c / c.norm();
    let x1 = c + dir * (f.radius / e.radius);
    let x2 = c - dir * (f.radius / e.radius);
    let xt = 0.5 * (x1.inv() + x2.inv());
    let rt = 0.5 * (x1.inv() - x2.inv()).norm();
    let m2 = xt.norm_sqr();
    let s = m2 + 1.0 - rt * rt;
    let alpha = C64::new(s + (s * s - 4.0 * m2).sqrt(), 0.0) / (2.0 * xt.conj());
    let beta = alpha.conj().inv();
    let phi1 = MoebiusMap::new(C64::new(1.0 / e.radius, 0.0), -e.center / e.radius, zero(), one());
    let phi2 = MoebiusMap::new(zero(), one(), one(), zero());
    let phi3 = MoebiusMap::new(one(), -alpha, one(), -beta);
    Ok((phi3.compose(&phi2).compose(&phi1), alpha, beta))
}

/// Optimal single-shift rational function `(z - q*)/(z - p*)` for two discs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwoDiscShifts {
    /// Pole, inside `F`.
    pub p_star: C64,
    /// Zero, inside `E`.
    pub q_star: C64,
    /// Zolotarev number ratio, `Z_j(E, F) = η^j`.
    pub eta: f64,
}

pub fn shifts_2discs(e: &Disc, f: &Disc) -> Result<TwoDiscShifts> {
    let (phi, alpha, _) = moebius_two_discs(e, f)?;
    let p_star = e.center + alpha.conj() * e.radius;
    let q_star = e.center + alpha.inv() * e.radius;
    let eta = phi.apply(e.center + e.radius).norm() / phi.apply(f.center + f.radius).norm();
    Ok(TwoDiscShifts { p_star, q_star, eta })
}

/// `Θ(z) = (z - x_E + ρ_E)/(z - x_E - ρ_E)`, sending `E` to the closed left
/// half-plane and `F` to `[ã, b̃] ⊂ (0, ∞)`.
pub fn cayley_disc_interval(e: &Disc, f: &RealInterval) -> Result<(MoebiusMap, f64, f64)> {
    if e.center.im != 0.0 {
        return Err(Error::InvalidArgument("disc center must be real".into()));
    }
    let (x, r) = (e.center.re, e.radius);
    if !(x + r < f.a || x - r > f.b) {
        return Err(Error::OverlappingSets);
    }
    let theta = MoebiusMap::new(one(), C64::new(r - x, 0.0), one(), C64::new(-x - r, 0.0));
    let ta = theta.apply(C64::new(f.a, 0.0)).re;
    let tb = theta.apply(C64::new(f.b, 0.0)).re;
    Ok((theta, ta.min(tb), ta.max(tb)))
}
