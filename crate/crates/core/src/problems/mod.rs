//! Generators for the benchmark space-time problems.

mod convdiff;
mod frac_space;
mod heat;
mod rk;
mod wave;

use serde::{Deserialize, Serialize};

pub use convdiff::{convdiff2d, convdiff2d_with, ConvDiffParams};
pub use frac_space::{frac_space, frac_space_with, wsgd_weights, FracSpaceParams, FracSpacePencil};
pub use heat::{frac_time, heat1d, heat1d_enclosures, HEAT_H, HEAT_W};
pub use rk::{rk_heat, RkHeat};
pub use wave::wave2d;

use crate::diag::SpaceTimeProblem;
use crate::error::Result;
use crate::la::SparseMatrix;

/// A named problem with its size parameters, as read from a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ProblemSpec {
    Heat1d { n: usize, nt: usize },
    Convdiff2d { n_side: usize, nt: usize },
    FracSpace { n_side: usize, nt: usize },
    FracTime { n: usize, nt: usize, #[serde(default = "default_gamma")] gamma: f64 },
    Wave2d { n_side: usize, nt: usize },
}

fn default_gamma() -> f64 {
    0.3
}

impl ProblemSpec {
    pub fn build(&self) -> Result<SpaceTimeProblem> {
        match *self {
            ProblemSpec::Heat1d { n, nt } => heat1d(n, nt),
            ProblemSpec::Convdiff2d { n_side, nt } => convdiff2d(n_side, nt),
            ProblemSpec::FracSpace { n_side, nt } => frac_space(n_side, nt),
            ProblemSpec::FracTime { n, nt, gamma } => frac_time(n, nt, gamma),
            ProblemSpec::Wave2d { n_side, nt } => wave2d(n_side, nt),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProblemSpec::Heat1d { .. } => "heat1d",
            ProblemSpec::Convdiff2d { .. } => "convdiff2d",
            ProblemSpec::FracSpace { .. } => "frac-space",
            ProblemSpec::FracTime { .. } => "frac-time",
            ProblemSpec::Wave2d { .. } => "wave2d",
        }
    }
}

/// `trid(-1, 2, -1) · scale`
pub fn laplacian_1d(n: usize, scale: f64) -> SparseMatrix<f64> {
    let mut t = Vec::with_capacity(3 * n);
    for i in 0..n {
        t.push((i, i, 2.0 * scale));
        if i > 0 {
            t.push((i, i - 1, -scale));
            t.push((i - 1, i, -scale));
        }
    }
    SparseMatrix::from_triplets(n, n, &t)
}

/// `I ⊗ L + L ⊗ I` with `L = laplacian_1d(n_side, scale)`.
pub fn laplacian_2d(n_side: usize, scale: f64) -> SparseMatrix<f64> {
    let l = laplacian_1d(n_side, scale);
    let i = SparseMatrix::identity(n_side);
    i.kron(&l).lin_comb(1.0, &l.kron(&i), 1.0)
}

#[cfg(test)]
pub(crate) mod probe {
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::diag::{SpaceTimeProblem, SpaceTimeSystem};
    use crate::la::{dot, CMatrix, C64};

    /// Checks the enclosures against 200 random Rayleigh quotients of
    /// `M⁻¹A` (real parts, `M = I`) and of `-B2⁻¹B1`.
    pub fn check_enclosures(p: &SpaceTimeProblem) {
        let enc = p.enclosures.as_ref().expect("problem without enclosures");
        assert!(p.pencil.identity_mass());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = p.space_dim();
        let b1 = p.b1.dense().map(|v| C64::new(v, 0.0));
        let b2 = p.b2.dense().map(|v| C64::new(v, 0.0));
        let bt: CMatrix = -b2.lu().solve(&b1).unwrap();
        let slack = 1e-10 * enc.a_interval.b.abs();
        for _ in 0..200 {
            let x: Vec<C64> = (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let mut y = vec![C64::new(0.0, 0.0); n];
            p.apply_a(&x, &mut y);
            let q = dot(&x, &y) / dot(&x, &x);
            assert!(q.re >= enc.a_interval.a - slack && q.re <= enc.a_interval.b + slack, "{q} outside {:?}", enc.a_interval);
            let z = DMatrix::from_fn(p.n_t(), 1, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let qb = (z.adjoint() * &bt * &z)[(0, 0)] / z.norm_squared();
            assert!(enc.neg_b_disc.contains(qb, 1e-10), "{qb} outside {:?}", enc.neg_b_disc);
        }
    }
}
