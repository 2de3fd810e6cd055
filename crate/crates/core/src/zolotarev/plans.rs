use std::f64::consts::PI;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use super::{cayley_disc_interval, ellipk_complement, jacobi_dn, shifts_2discs, Disc, Enclosures, RealInterval};
use crate::error::Result;
use crate::la::C64;

/// A rational Krylov shift: a finite point or infinity (a plain matvec step).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shift {
    Finite(C64),
    Infinity,
}

impl Shift {
    pub fn real(x: f64) -> Self {
        Shift::Finite(C64::new(x, 0.0))
    }

    pub fn negated(self) -> Self {
        match self {
            Shift::Finite(z) => Shift::Finite(-z),
            Shift::Infinity => Shift::Infinity,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Shift::Finite(z) => z.im == 0.0,
            Shift::Infinity => true,
        }
    }
}

impl Serialize for Shift {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Shift::Infinity => s.serialize_str("inf"),
            Shift::Finite(z) if z.im == 0.0 => s.serialize_f64(z.re),
            Shift::Finite(z) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("re", &z.re)?;
                m.serialize_entry("im", &z.im)?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ShiftKind {
    TwoDiscs,
    ZolDi,
    ZolDiCyclic(usize),
    Eds,
    Ek,
}

/// Shifts for both sides of a two-sided rational Krylov method, consumed
/// in lockstep: step `i` uses `poles_a[i]` for `(ξI - Ã)^{-1}` and
/// `poles_b[i]` for `(ψI - B̃)^{-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftPlan {
    pub kind: ShiftKind,
    pub poles_a: Vec<Shift>,
    pub poles_b: Vec<Shift>,
    pub nested: bool,
}

impl ShiftPlan {
    pub fn len(&self) -> usize {
        self.poles_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles_a.is_empty()
    }

    /// Whether every finite shift avoids the enclosure of the spectrum it
    /// is applied to.
    pub fn avoids(&self, enc: &Enclosures) -> bool {
        let a_disc = enc.a_interval.enclosing_disc();
        let a_ok = self.poles_a.iter().all(|s| match s {
            Shift::Finite(z) => !a_disc.contains(*z, 0.0),
            Shift::Infinity => true,
        });
        let b_ok = self.poles_b.iter().all(|s| match s {
            Shift::Finite(z) => !enc.neg_b_disc.contains(-*z, 0.0),
            Shift::Infinity => true,
        });
        a_ok && b_ok
    }
}

/// Extended Krylov: `0, ∞, 0, ∞, …` on both sides.
pub fn shifts_ek(count: usize) -> ShiftPlan {
    let poles: Vec<Shift> = (0..count).map(|i| if i % 2 == 0 { Shift::real(0.0) } else { Shift::Infinity }).collect();
    ShiftPlan { kind: ShiftKind::Ek, poles_a: poles.clone(), poles_b: poles, nested: true }
}

/// The two-disc optimal single shifts, repeated `count` times.
pub fn plan_2discs(enc: &Enclosures, count: usize) -> Result<ShiftPlan> {
    let s = shifts_2discs(&enc.neg_b_disc, &enc.a_interval.enclosing_disc())?;
    Ok(ShiftPlan {
        kind: ShiftKind::TwoDiscs,
        poles_a: vec![Shift::Finite(s.q_star); count],
        poles_b: vec![Shift::Finite(-s.p_star); count],
        nested: true,
    })
}

fn elliptic_parameters(a_t: f64, b_t: f64) -> (f64, f64, f64) {
    assert!(0.0 < a_t && a_t < b_t, "need 0 < a < b");
    let kc = a_t / b_t;
    let k = ((1.0 - kc) * (1.0 + kc)).sqrt();
    (k, kc, ellipk_complement(kc))
}

/// Poles `ψ̃_{j,i} = b̃ dn((2i-1)K'/(2j), k')`, `k' = √(1 - (ã/b̃)²)`, of the
/// extremal function for `Z_j([-b̃,-ã],[ã,b̃])`, ascending.
pub fn elliptic_poles(a_t: f64, b_t: f64, j: usize) -> Vec<f64> {
    let (k, kc, kk) = elliptic_parameters(a_t, b_t);
    let mut p: Vec<f64> =
        (1..=j).map(|i| b_t * jacobi_dn((2 * i - 1) as f64 * kk / (2 * j) as f64, k, kc)).collect();
    p.sort_by(f64::total_cmp);
    p
}

/// Nested poles: the equilibrium quantile map `s ↦ b̃ dn(sK', k')` applied
/// to the golden-ratio sequence `s_i = frac(i(√5-1)/2)`.
pub fn eds_sequence(a_t: f64, b_t: f64, count: usize) -> Vec<f64> {
    let (k, kc, kk) = elliptic_parameters(a_t, b_t);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    (1..=count).map(|i| b_t * jacobi_dn((i as f64 * g).fract() * kk, k, kc)).collect()
}

fn disc_interval_plan(e: &Disc, f: &RealInterval, poles: &[f64], kind: ShiftKind, nested: bool) -> Result<ShiftPlan> {
    let (theta, _, _) = cayley_disc_interval(e, f)?;
    let inv = theta.inverse();
    Ok(ShiftPlan {
        kind,
        poles_a: poles.iter().map(|&p| Shift::Finite(inv.apply(C64::new(-p, 0.0)))).collect(),
        poles_b: poles.iter().map(|&p| Shift::Finite(-inv.apply(C64::new(p, 0.0)))).collect(),
        nested,
    })
}

/// Quasi-optimal shifts for a disc `E` and interval `F`: zeros
/// `Θ^{-1}(-ψ̃)` on the `Ã` side, negated poles `-Θ^{-1}(ψ̃)` on the `B̃` side.
pub fn shifts_zoldi(e: &Disc, f: &RealInterval, j: usize) -> Result<ShiftPlan> {
    let (_, a_t, b_t) = cayley_disc_interval(e, f)?;
    disc_interval_plan(e, f, &elliptic_poles(a_t, b_t, j), ShiftKind::ZolDi, false)
}

pub fn plan_zoldi(enc: &Enclosures, j: usize) -> Result<ShiftPlan> {
    shifts_zoldi(&enc.neg_b_disc, &enc.a_interval, j)
}

/// The `k` quasi-optimal shifts repeated cyclically up to `count` entries.
pub fn plan_zoldi_cyclic(enc: &Enclosures, k: usize, count: usize) -> Result<ShiftPlan> {
    let base = plan_zoldi(enc, k)?;
    Ok(ShiftPlan {
        kind: ShiftKind::ZolDiCyclic(k),
        poles_a: (0..count).map(|i| base.poles_a[i % k]).collect(),
        poles_b: (0..count).map(|i| base.poles_b[i % k]).collect(),
        nested: true,
    })
}

pub fn plan_eds(enc: &Enclosures, count: usize) -> Result<ShiftPlan> {
    let (_, a_t, b_t) = cayley_disc_interval(&enc.neg_b_disc, &enc.a_interval)?;
    disc_interval_plan(&enc.neg_b_disc, &enc.a_interval, &eds_sequence(a_t, b_t, count), ShiftKind::Eds, true)
}

/// `|r̃(t)| = Π |t + p| / |t - p|`
pub fn zolotarev_ratio(poles: &[f64], t: f64) -> f64 {
    poles.iter().map(|&p| ((t + p) / (t - p)).abs()).product()
}

/// `δ = 1 / min_{[ã,b̃]} |r̃|`, by a log-spaced grid with golden-section
/// refinement of every grid local minimum.
pub fn delta_j(a_t: f64, b_t: f64, poles: &[f64]) -> f64 {
    const N: usize = 10_000;
    let (la, lb) = (a_t.ln(), b_t.ln());
    let f = |s: f64| zolotarev_ratio(poles, s.exp());
    let grid: Vec<f64> = (0..N).map(|i| la + (lb - la) * i as f64 / (N - 1) as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&s| f(s)).collect();
    let mut best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    for i in 0..N {
        let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
        let right = if i + 1 == N { f64::INFINITY } else { vals[i + 1] };
        if vals[i] <= left && vals[i] <= right {
            let (mut lo, mut hi) = (grid[i.saturating_sub(1)], grid[(i + 1).min(N - 1)]);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..100 {
                let x1 = hi - g * (hi - lo);
                let x2 = lo + g * (hi - lo);
                if f(x1) < f(x2) {
                    hi = x2;
                } else {
                    lo = x1;
                }
            }
            best = best.min(f(0.5 * (lo + hi)));
        }
    }
    1.0 / best
}

/// `2 exp(-jπ² / (2 log(4b̃/ã)))`
pub fn decay_bound_di(a_t: f64, b_t: f64, j: usize) -> f64 {
    2.0 * (-(j as f64) * PI * PI / (2.0 * (4.0 * b_t / a_t).ln())).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn ek_alternates() {
        let p = shifts_ek(4);
        assert_eq!(p.poles_a, vec![Shift::real(0.0), Shift::Infinity, Shift::real(0.0), Shift::Infinity]);
        assert_eq!(shifts_ek(1).poles_a, vec![Shift::real(0.0)]);
        assert!(p.nested);
        assert_eq!(serde_json::to_string(&shifts_ek(3).poles_a).unwrap(), r#"[0.0,"inf",0.0]"#);
    }

    #[test]
    fn single_pole_is_geometric_mean() {
        let p = elliptic_poles(2.0, 18.0, 1);
        assert!((p[0] - 6.0).abs() < 1e-12);
        let d = delta_j(2.0, 18.0, &p);
        let mut best = f64::INFINITY;
        for i in 1..2000 {
            let q = 2.0 + 16.0 * i as f64 / 2000.0;
            best = best.min(delta_j(2.0, 18.0, &[q]));
        }
        assert!(d <= best * (1.0 + 1e-9));
    }

    #[test]
    fn delta_respects_bound_and_decreases() {
        let mut prev = f64::INFINITY;
        for j in 1..=8 {
            let p = elliptic_poles(1.0, 100.0, j);
            assert!(p.iter().all(|&x| (1.0..=100.0).contains(&x)));
            let d = delta_j(1.0, 100.0, &p);
            assert!(d <= decay_bound_di(1.0, 100.0, j));
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn delta_squared_is_symmetric_interval_objective() {
        let (a, b) = (1.0, 100.0);
        let p = elliptic_poles(a, b, 3);
        let d = delta_j(a, b, &p);
        let n = 200_000;
        let mut max_neg: f64 = 0.0;
        let mut min_pos = f64::INFINITY;
        for i in 0..n {
            let t = (a.ln() + (b / a).ln() * i as f64 / (n - 1) as f64).exp();
            max_neg = max_neg.max(zolotarev_ratio(&p, -t));
            min_pos = min_pos.min(zolotarev_ratio(&p, t));
        }
        assert!(((max_neg / min_pos) - d * d).abs() <= 1e-8 * d * d);
    }

    #[test]
    fn poles_are_reversal_symmetric() {
        for j in 1..7 {
            let p = elliptic_poles(0.5, 40.0, j);
            for (x, y) in p.iter().zip(p.iter().rev()) {
                assert!((x * y - 20.0).abs() < 1e-10 * 20.0);
            }
        }
    }

    #[test]
    fn zoldi_single_shift_closed_form() {
        let e = Disc::new(c(0.0), 1.0);
        let f = RealInterval::new(2.0, 3.0);
        let plan = shifts_zoldi(&e, &f, 1).unwrap();
        let inv = |z: f64| (z + 1.0) / (z - 1.0);
        let s6 = 6f64.sqrt();
        match (plan.poles_a[0], plan.poles_b[0]) {
            (Shift::Finite(za), Shift::Finite(zb)) => {
                assert!((za - c(inv(-s6))).norm() < 1e-12);
                assert!((zb + c(inv(s6))).norm() < 1e-12);
            }
            _ => panic!("expected finite shifts"),
        }
    }

    fn heat_like() -> Enclosures {
        Enclosures {
            a_interval: RealInterval::new(0.02, 400.0),
            neg_b_disc: Disc::new(c(-1.0), (std::f64::consts::PI / 101.0).cos()),
        }
    }

    #[test]
    fn plans_avoid_enclosures() {
        let enc = heat_like();
        for plan in [
            plan_zoldi(&enc, 4).unwrap(),
            plan_eds(&enc, 12).unwrap(),
            plan_2discs(&enc, 3).unwrap(),
            shifts_ek(6),
        ] {
            assert!(plan.avoids(&enc), "{:?}", plan.kind);
        }
        let cyc = plan_zoldi_cyclic(&enc, 4, 12).unwrap();
        let base = plan_zoldi(&enc, 4).unwrap();
        assert_eq!(cyc.len(), 12);
        for i in 0..12 {
            assert_eq!(cyc.poles_a[i], base.poles_a[i % 4]);
            assert_eq!(cyc.poles_b[i], base.poles_b[i % 4]);
        }
    }

    #[test]
    fn eds_prefix_and_range() {
        let long = eds_sequence(1.5, 70.0, 8);
        assert_eq!(&long[..4], &eds_sequence(1.5, 70.0, 4)[..]);
        assert!(long.iter().all(|&x| (1.5..=70.0).contains(&x)));
    }

    #[test]
    fn eds_rate_tracks_elliptic_rate() {
        let (a, b) = (1.0, 1000.0);
        let seq = eds_sequence(a, b, 40);
        let d_eds = delta_j(a, b, &seq[..40]);
        let d_opt = delta_j(a, b, &elliptic_poles(a, b, 20));
        assert!(d_eds <= d_opt);
    }

    #[test]
    fn decay_bound_formula() {
        assert_eq!(decay_bound_di(1.0, 10.0, 0), 2.0);
        let v = decay_bound_di(1.0, 1.0, 3);
        assert!((v - 2.0 * (-3.0 * PI * PI / (2.0 * 4f64.ln())).exp()).abs() < 1e-15);
        let (b1, b2) = (decay_bound_di(1.0, 50.0, 3), decay_bound_di(1.0, 50.0, 6));
        assert!((b2 / 2.0 - (b1 / 2.0).powi(2)).abs() < 1e-15);
    }
}
