use crate::error::{Error, Result};
use crate::la::{CMatrix, LinearSolver, SpacePencil, ToeplitzMatvec, C64};
use crate::time_disc::LowerToeplitz;

/// `T = P^{-1} Q` available through products and shifted solves
/// `(ξI - T)^{-1} = (ξP - Q)^{-1} P`.
pub trait KrylovOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]) -> Result<()>;
    fn shifted_solver(&self, shift: C64) -> Result<Box<dyn LinearSolver + '_>>;
}

fn combine(pencil: &dyn SpacePencil, c: (C64, C64), x: &[C64], y: &mut [C64]) {
    let zero = C64::new(0.0, 0.0);
    let mut tmp = vec![zero; x.len()];
    y.iter_mut().for_each(|v| *v = zero);
    if c.0 != zero {
        pencil.apply_m(x, &mut tmp);
        y.iter_mut().zip(&tmp).for_each(|(a, b)| *a += c.0 * b);
    }
    if c.1 != zero {
        pencil.apply_a(x, &mut tmp);
        y.iter_mut().zip(&tmp).for_each(|(a, b)| *a += c.1 * b);
    }
}

/// `P^{-1} Q` with `P = p_m M + p_a A` and `Q = q_m M + q_a A`.
pub struct PencilOperator<'a> {
    pencil: &'a dyn SpacePencil,
    p: (C64, C64),
    q: (C64, C64),
    p_solver: Box<dyn LinearSolver>,
}

impl<'a> PencilOperator<'a> {
    pub fn new(pencil: &'a dyn SpacePencil, p: (C64, C64), q: (C64, C64)) -> Result<Self> {
        let p_solver = pencil.combination_solver(p.0, p.1)?;
        Ok(Self { pencil, p, q, p_solver })
    }

    /// `M^{-1} A`
    pub fn standard(pencil: &'a dyn SpacePencil) -> Result<Self> {
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Self::new(pencil, (one, zero), (zero, one))
    }

    /// `P^{-1} x`
    pub fn solve_p(&self, x: &mut [C64]) -> Result<()> {
        self.p_solver.solve_in_place(x)
    }
}

impl KrylovOperator for PencilOperator<'_> {
    fn dim(&self) -> usize {
        self.pencil.dim()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        combine(self.pencil, self.q, x, y);
        self.p_solver.solve_in_place(y)
    }
    fn shifted_solver(&self, shift: C64) -> Result<Box<dyn LinearSolver + '_>> {
        let c = (shift * self.p.0 - self.q.0, shift * self.p.1 - self.q.1);
        let solver = self.pencil.combination_solver(c.0, c.1)?;
        Ok(Box::new(ShiftedPencil { op: self, solver }))
    }
}

struct ShiftedPencil<'o, 'a> {
    op: &'o PencilOperator<'a>,
    solver: Box<dyn LinearSolver>,
}

impl LinearSolver for ShiftedPencil<'_, '_> {
    fn dim(&self) -> usize {
        self.op.dim()
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        let x = b.to_vec();
        combine(self.op.pencil, self.op.p, &x, b);
        self.solver.solve_in_place(b)
    }
}

/// Complex lower-triangular Toeplitz matrix.
#[derive(Clone, Debug)]
pub struct ComplexToeplitz {
    col: Vec<C64>,
    band: usize,
}

impl ComplexToeplitz {
    pub fn new(col: Vec<C64>) -> Self {
        let band = col.iter().rposition(|z| *z != C64::new(0.0, 0.0)).unwrap_or(0);
        Self { col, band }
    }

    pub fn from_real(t: &LowerToeplitz) -> Self {
        Self::new(t.first_col().iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.col.len()
    }

    /// `a·self + b·other`
    pub fn lin_comb(&self, a: C64, other: &Self, b: C64) -> Self {
        Self::new(self.col.iter().zip(&other.col).map(|(x, y)| a * x + b * y).collect())
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        let n = self.n();
        if self.band > 32 {
            let mut row = vec![C64::new(0.0, 0.0); n];
            row[0] = self.col[0];
            y.copy_from_slice(&ToeplitzMatvec::new(&self.col, &row).apply(x));
            return;
        }
        for k in 0..n {
            y[k] = (0..=self.band.min(k)).map(|l| self.col[l] * x[k - l]).sum();
        }
    }

    pub fn solve_in_place(&self, y: &mut [C64]) -> Result<()> {
        let d = self.col[0];
        let scale = self.col.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if d.norm() <= 1e-14 * scale || d.norm() == 0.0 {
            return Err(Error::NumericallySingular { index: 0, pivot: d.norm() });
        }
        for k in 0..self.n() {
            let mut acc = y[k];
            for l in 1..=self.band.min(k) {
                acc -= self.col[l] * y[k - l];
            }
            y[k] = acc / d;
        }
        Ok(())
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.n();
        CMatrix::from_fn(n, n, |i, j| if i >= j { self.col[i - j] } else { C64::new(0.0, 0.0) })
    }
}

/// `P^{-1} Q` for lower-triangular Toeplitz `P, Q` (the time side).
pub struct ToeplitzOperator {
    p: ComplexToeplitz,
    q: ComplexToeplitz,
}

impl ToeplitzOperator {
    pub fn new(p: ComplexToeplitz, q: ComplexToeplitz) -> Self {
        assert_eq!(p.n(), q.n());
        Self { p, q }
    }

    /// `B2^{-1} B1`
    pub fn standard(b1: &LowerToeplitz, b2: &LowerToeplitz) -> Self {
        Self::new(ComplexToeplitz::from_real(b2), ComplexToeplitz::from_real(b1))
    }

    pub fn solve_p(&self, x: &mut [C64]) -> Result<()> {
        self.p.solve_in_place(x)
    }

    pub fn dense(&self) -> Result<CMatrix> {
        let n = self.p.n();
        let mut out = self.q.dense();
        for j in 0..n {
            let mut c: Vec<C64> = out.column(j).iter().copied().collect();
            self.p.solve_in_place(&mut c)?;
            out.column_mut(j).copy_from_slice(&c);
        }
        Ok(out)
    }
}

impl KrylovOperator for ToeplitzOperator {
    fn dim(&self) -> usize {
        self.p.n()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) -> Result<()> {
        self.q.matvec(x, y);
        self.p.solve_in_place(y)
    }
    fn shifted_solver(&self, shift: C64) -> Result<Box<dyn LinearSolver + '_>> {
        let m = self.p.lin_comb(shift, &self.q, C64::new(-1.0, 0.0));
        let d = m.col[0];
        if d.norm() <= 1e-14 * m.col.iter().fold(0.0f64, |a, z| a.max(z.norm())) {
            return Err(Error::NumericallySingular { index: 0, pivot: d.norm() });
        }
        Ok(Box::new(ShiftedToeplitz { p: &self.p, m }))
    }
}

struct ShiftedToeplitz<'a> {
    p: &'a ComplexToeplitz,
    m: ComplexToeplitz,
}

impl LinearSolver for ShiftedToeplitz<'_> {
    fn dim(&self) -> usize {
        self.p.n()
    }
    fn solve_in_place(&self, b: &mut [C64]) -> Result<()> {
        let x = b.to_vec();
        self.p.matvec(&x, b);
        self.m.solve_in_place(b)
    }
}

/// Dense `T` from a [`KrylovOperator`]; for tests and small problems.
pub fn dense_operator(op: &dyn KrylovOperator) -> Result<CMatrix> {
    let n = op.dim();
    let mut out = CMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    let mut y = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        op.apply(&e, &mut y)?;
        out.column_mut(j).copy_from_slice(&y);
        e[j] = C64::new(0.0, 0.0);
    }
    Ok(out)
}
