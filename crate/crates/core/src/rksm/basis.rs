use std::collections::HashMap;

use super::operators::KrylovOperator;
use crate::error::Result;
use crate::la::{axpy, dot, norm2, CMatrix, LinearSolver, C64};
use crate::zolotarev::Shift;

/// Relative threshold below which an orthogonalized column is dropped.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Orthonormal basis of a (block) rational Krylov space together with the
/// image of every basis vector under the operator.
pub struct RationalBasis<'a> {
    op: &'a dyn KrylovOperator,
    cols: Vec<Vec<C64>>,
    images: Vec<Vec<C64>>,
    shifts: Vec<Shift>,
    block: usize,
    last_finite: Vec<usize>,
    last_infinite: Vec<usize>,
    deflated: usize,
    solvers: HashMap<(u64, u64), Box<dyn LinearSolver + 'a>>,
}

impl<'a> RationalBasis<'a> {
    /// Orthonormalizes the columns of `start`; the initial block also serves
    /// as the continuation block for both finite and infinite shifts.
    pub fn new(op: &'a dyn KrylovOperator, start: &CMatrix) -> Result<Self> {
        let mut b = Self {
            op,
            cols: vec![],
            images: vec![],
            shifts: vec![],
            block: start.ncols(),
            last_finite: vec![],
            last_infinite: vec![],
            deflated: 0,
            solvers: HashMap::new(),
        };
        let block: Vec<Vec<C64>> = (0..start.ncols()).map(|j| start.column(j).iter().copied().collect()).collect();
        let added = b.append(block)?;
        b.last_finite = added.clone();
        b.last_infinite = added;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn deflated(&self) -> usize {
        self.deflated
    }

    pub fn shifts(&self) -> &[Shift] {
        &self.shifts
    }

    /// Appends orthonormalized versions of `vecs` (two passes of modified
    /// Gram-Schmidt), dropping numerically dependent columns.
    fn append(&mut self, vecs: Vec<Vec<C64>>) -> Result<Vec<usize>> {
        let mut added = Vec::new();
        for mut w in vecs {
            let before = norm2(&w);
            if before == 0.0 {
                self.deflated += 1;
                continue;
            }
            for _ in 0..2 {
                for q in &self.cols {
                    let h = dot(q, &w);
                    axpy(-h, q, &mut w);
                }
            }
            let after = norm2(&w);
            if after <= DEFLATION_TOL * before {
                self.deflated += 1;
                continue;
            }
            w.iter_mut().for_each(|z| *z /= after);
            let mut img = vec![C64::new(0.0, 0.0); w.len()];
            self.op.apply(&w, &mut img)?;
            added.push(self.cols.len());
            self.cols.push(w);
            self.images.push(img);
        }
        Ok(added)
    }

    /// Adds `(ξI - T)^{-1}` (or `T` for `ξ = ∞`) applied to the most recent
    /// block of the same kind. Returns the number of columns added.
    pub fn extend(&mut self, shift: Shift) -> Result<usize> {
        let source = match shift {
            Shift::Infinity => self.last_infinite.clone(),
            Shift::Finite(_) => self.last_finite.clone(),
        };
        let mut fresh = Vec::with_capacity(source.len());
        match shift {
            Shift::Infinity => {
                for &j in &source {
                    fresh.push(self.images[j].clone());
                }
            }
            Shift::Finite(xi) => {
                let key = (xi.re.to_bits(), xi.im.to_bits());
                if !self.solvers.contains_key(&key) {
                    let s = self.op.shifted_solver(xi)?;
                    self.solvers.insert(key, s);
                }
                let solver = &self.solvers[&key];
                for &j in &source {
                    let mut v = self.cols[j].clone();
                    solver.solve_in_place(&mut v)?;
                    fresh.push(v);
                }
            }
        }
        self.shifts.push(shift);
        let added = self.append(fresh)?;
        if !added.is_empty() {
            match shift {
                Shift::Infinity => self.last_infinite = added.clone(),
                Shift::Finite(_) => self.last_finite = added.clone(),
            }
        }
        Ok(added.len())
    }

    pub fn matrix(&self) -> CMatrix {
        self.stack(&self.cols)
    }

    /// `T Q`
    pub fn image_matrix(&self) -> CMatrix {
        self.stack(&self.images)
    }

    fn stack(&self, cols: &[Vec<C64>]) -> CMatrix {
        let n = self.op.dim();
        let mut flat = Vec::with_capacity(n * cols.len());
        for c in cols {
            flat.extend_from_slice(c);
        }
        CMatrix::from_vec(n, cols.len(), flat)
    }
}
