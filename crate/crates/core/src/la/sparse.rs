use std::collections::VecDeque;

use nalgebra::{ComplexField, DMatrix};

use super::C64;
use crate::error::{Error, Result};

/// Entry type of sparse matrices: `f64` or `C64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + Into<C64> {}
impl Scalar for f64 {}
impl Scalar for C64 {}

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); nrows];
        for &(i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) out of bounds");
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|e| e.0);
            for (j, v) in row {
                if col_idx.len() > *row_ptr.last().unwrap() && *col_idx.last().unwrap() == j {
                    let last = values.last_mut().unwrap();
                    *last += v;
                } else {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n])
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: d.to_vec(),
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: vec![], values: vec![] }
    }

    pub fn from_dense(m: &DMatrix<T>) -> Self {
        let mut t = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != T::zero() {
                    t.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), &t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        (0..self.nrows).flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v))).collect()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i).find(|e| e.0 == j).map(|e| e.1).unwrap_or_else(T::zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v.into() * x[j]).sum();
        }
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, &t)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `a·self + b·other`
    pub fn lin_comb(&self, a: T, other: &Self, b: T) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t: Vec<_> = self.triplets().into_iter().map(|(i, j, v)| (i, j, a * v)).collect();
        t.extend(other.triplets().into_iter().map(|(i, j, v)| (i, j, b * v)));
        Self::from_triplets(self.nrows, self.ncols, &t)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (i1, j1, v1) in self.triplets() {
            for (i2, j2, v2) in other.triplets() {
                t.push((i1 * other.nrows + i2, j1 * other.ncols + j2, v1 * v2));
            }
        }
        Self::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, &t)
    }

    pub fn to_complex(&self) -> SparseMatrix<C64> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| v.into()).collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let t = self.transpose();
        self.lin_comb(T::one(), &t, -T::one()).max_abs() <= tol
    }
}

/// Reverse Cuthill-McKee ordering of the symmetrized pattern; `perm[new] = old`.
pub fn rcm_ordering<T: Scalar>(s: &SparseMatrix<T>) -> Vec<usize> {
    let n = s.nrows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in s.triplets() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    let deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    for a in adj.iter_mut() {
        a.sort_by_key(|&k| (deg[k], k));
    }

    let bfs = |start: usize, mark: &mut Vec<bool>, out: &mut Vec<usize>| -> Vec<usize> {
        let mut level = vec![0usize; n];
        let first = out.len();
        let mut queue = VecDeque::from([start]);
        mark[start] = true;
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &w in &adj[v] {
                if !mark[w] {
                    mark[w] = true;
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let deepest = out[first..].iter().map(|&v| level[v]).max().unwrap_or(0);
        out[first..].iter().copied().filter(|&v| level[v] == deepest).collect()
    };

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&k| (deg[k], k));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let mut start = seed;
        for _ in 0..3 {
            let mut mark = visited.clone();
            let mut scratch = Vec::new();
            let last = bfs(start, &mut mark, &mut scratch);
            let cand = *last.iter().min_by_key(|&&k| (deg[k], k)).unwrap();
            if cand == start {
                break;
            }
            start = cand;
        }
        bfs(start, &mut visited, &mut order);
    }
    order.reverse();
    order
}

/// LU factorization with partial pivoting of a band-reordered sparse matrix.
#[derive(Clone, Debug)]
pub struct SparseLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    perm: Vec<usize>,
    ab: Vec<C64>,
    ipiv: Vec<usize>,
}

pub fn sparse_factor<T: Scalar>(s: &SparseMatrix<T>) -> Result<SparseLu> {
    SparseLu::new(s)
}

impl SparseLu {
    pub fn new<T: Scalar>(s: &SparseMatrix<T>) -> Result<Self> {
        if s.nrows() != s.ncols() {
            return Err(Error::Dimension(format!(
                "sparse_factor needs a square matrix, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        let n = s.nrows();
        let mut col_used = vec![false; n];
        for i in 0..n {
            let mut any = false;
            for (j, v) in s.row(i) {
                if v != T::zero() {
                    any = true;
                    col_used[j] = true;
                }
            }
            if !any {
                return Err(Error::StructurallySingular(i));
            }
        }
        if let Some(j) = col_used.iter().position(|u| !u) {
            return Err(Error::StructurallySingular(j));
        }

        let perm = rcm_ordering(s);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let (mut kl, mut ku) = (0usize, 0usize);
        for (i, j, _) in s.triplets() {
            let (pi, pj) = (inv[i], inv[j]);
            if pi > pj {
                kl = kl.max(pi - pj);
            } else {
                ku = ku.max(pj - pi);
            }
        }
        let kv = kl + ku;
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![C64::new(0.0, 0.0); ldab * n];
        for (i, j, v) in s.triplets() {
            let (pi, pj) = (inv[i], inv[j]);
            ab[kv + pi - pj + pj * ldab] += v.into();
        }
        let mut lu = Self { n, kl, ku, ldab, perm, ab, ipiv: vec![0; n] };
        lu.factorize(s.max_abs())?;
        Ok(lu)
    }

    fn at(&self, i: usize, j: usize) -> usize {
        self.kl + self.ku + i - j + j * self.ldab
    }

    fn factorize(&mut self, scale: f64) -> Result<()> {
        let n = self.n;
        let (kl, kv) = (self.kl, self.kl + self.ku);
        let tiny = 1e-14 * scale;
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = -1.0;
            for t in 0..=km {
                let a = self.ab[self.at(j + t, j)].norm();
                if a > best {
                    best = a;
                    jp = t;
                }
            }
            self.ipiv[j] = j + jp;
            if best <= tiny {
                return Err(Error::NumericallySingular { index: self.perm[j], pivot: best.max(0.0) });
            }
            ju = ju.max((j + self.ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let (a, b) = (self.at(j, c), self.at(j + jp, c));
                    self.ab.swap(a, b);
                }
            }
            let pinv = C64::new(1.0, 0.0) / self.ab[self.at(j, j)];
            for t in 1..=km {
                let k = self.at(j + t, j);
                self.ab[k] *= pinv;
            }
            for c in j + 1..=ju {
                let u = self.ab[self.at(j, c)];
                if u == C64::new(0.0, 0.0) {
                    continue;
                }
                for t in 1..=km {
                    let l = self.ab[self.at(j + t, j)];
                    let k = self.at(j + t, c);
                    debug_assert!(j + t + kv >= c);
                    self.ab[k] -= l * u;
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut y: Vec<C64> = self.perm.iter().map(|&old| b[old]).collect();
        let kv = self.kl + self.ku;
        for j in 0..n {
            let km = self.kl.min(n - 1 - j);
            let p = self.ipiv[j];
            if p != j {
                y.swap(j, p);
            }
            let yj = y[j];
            for t in 1..=km {
                y[j + t] -= self.ab[self.at(j + t, j)] * yj;
            }
        }
        for j in (0..n).rev() {
            y[j] /= self.ab[self.at(j, j)];
            let yj = y[j];
            for i in j.saturating_sub(kv)..j {
                y[i] -= self.ab[self.at(i, j)] * yj;
            }
        }
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = y[new];
        }
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
