use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Butcher tableau `(G, b, c)` of an `s`-stage Runge-Kutta method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ButcherTableau {
    pub s: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ButcherTableau {
    pub fn new(g: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let t = Self { s: b.len(), g, b, c };
        t.validate()?;
        Ok(t)
    }

    /// Four-stage, third-order diagonally implicit method with diagonal 1/2.
    pub fn dirk43() -> Self {
        Self {
            s: 4,
            g: vec![
                vec![0.5, 0.0, 0.0, 0.0],
                vec![1.0 / 6.0, 0.5, 0.0, 0.0],
                vec![-0.5, 0.5, 0.5, 0.0],
                vec![1.5, -1.5, 0.5, 0.5],
            ],
            b: vec![1.5, -1.5, 0.5, 0.5],
            c: vec![0.5, 2.0 / 3.0, 0.5, 1.0],
        }
    }

    pub fn implicit_euler() -> Self {
        Self { s: 1, g: vec![vec![1.0]], b: vec![1.0], c: vec![1.0] }
    }

    /// Looks up a builtin by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "dirk43" | "dirk" => Some(Self::dirk43()),
            "implicit-euler" | "euler" => Some(Self::implicit_euler()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("tableau: {e}")))?;
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.s;
        if s == 0 || self.b.len() != s || self.c.len() != s || self.g.len() != s || self.g.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidArgument(format!("tableau shapes do not match s = {s}")));
        }
        Ok(())
    }

    pub fn g_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.s, self.s, |i, j| self.g[i][j])
    }

    /// Whether each row of `G` sums to the matching node.
    pub fn is_consistent(&self) -> bool {
        self.g.iter().zip(&self.c).all(|(r, c)| (r.iter().sum::<f64>() - c).abs() <= 1e-12)
    }

    pub fn is_diagonally_implicit(&self) -> bool {
        (0..self.s).all(|i| (i + 1..self.s).all(|j| self.g[i][j] == 0.0))
    }
}
