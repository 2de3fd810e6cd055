use std::io::Write;

use paradiag::diag::ev_int;
use paradiag::problems::heat1d;
use serde::{Deserialize, Serialize};

use crate::config::{Method, ProblemConfig, SolverParams};
use crate::output::{method_csv, sci, write_csv};
use crate::run::{run, RunOutput};
use crate::BenchError;

/// A sweep producing one CSV table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TableConfig {
    /// Residuals of evaluation-interpolation on the heat problem with
    /// `n = n_t`, one row per `ρ` and one column per `d`.
    EvintGrid {
        #[serde(default = "default_grid_n")]
        n: usize,
        #[serde(default = "default_rhos")]
        rhos: Vec<f64>,
        #[serde(default = "default_ds")]
        ds: Vec<usize>,
    },
    /// Every listed method on every listed `(size, n_t)` of one family.
    Methods {
        problem: String,
        sizes: Vec<(usize, usize)>,
        methods: Vec<Method>,
        #[serde(default)]
        params: SolverParams,
    },
}

fn default_grid_n() -> usize {
    500
}

pub fn default_rhos() -> Vec<f64> {
    vec![1.0, 1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12]
}

pub fn default_ds() -> Vec<usize> {
    vec![1, 2, 3, 4]
}

pub struct EvintGrid {
    pub n: usize,
    pub rhos: Vec<f64>,
    pub ds: Vec<usize>,
    /// `res[i][j]` for `rhos[i]`, `ds[j]`.
    pub res: Vec<Vec<f64>>,
}

pub fn evint_grid(n: usize, rhos: &[f64], ds: &[usize]) -> Result<EvintGrid, BenchError> {
    let mut res = Vec::with_capacity(rhos.len());
    if !rhos.is_empty() && !ds.is_empty() {
        let p = heat1d(n, n)?;
        for &rho in rhos {
            res.push(ds.iter().map(|&d| ev_int(&p, rho, d).map(|r| r.relres)).collect::<Result<Vec<_>, _>>()?);
        }
    }
    Ok(EvintGrid { n, rhos: rhos.to_vec(), ds: ds.to_vec(), res })
}

impl EvintGrid {
    pub fn write<W: Write>(&self, w: W) -> Result<(), BenchError> {
        let mut header = vec!["n".to_string(), "rho".to_string()];
        header.extend(self.ds.iter().map(|d| format!("d={d}")));
        let rows: Vec<Vec<String>> = self
            .rhos
            .iter()
            .zip(&self.res)
            .map(|(rho, r)| {
                let mut row = vec![self.n.to_string(), sci(*rho)];
                row.extend(r.iter().map(|v| sci(*v)));
                row
            })
            .collect();
        write_csv(w, &header, &rows)
    }
}

pub fn methods_table(
    family: &str,
    sizes: &[(usize, usize)],
    methods: &[Method],
    params: &SolverParams,
) -> Result<Vec<RunOutput>, BenchError> {
    let mut out = Vec::new();
    for &(size, nt) in sizes {
        let cfg = ProblemConfig::from_family(family, size, nt)?;
        for &m in methods {
            out.push(run(&cfg, m, params)?);
        }
    }
    Ok(out)
}

pub fn run_table<W: Write>(cfg: &TableConfig, w: W) -> Result<(), BenchError> {
    match cfg {
        TableConfig::EvintGrid { n, rhos, ds } => evint_grid(*n, rhos, ds)?.write(w),
        TableConfig::Methods { problem, sizes, methods, params } => {
            ProblemConfig::from_family(problem, 1, 1)?;
            method_csv(w, &methods_table(problem, sizes, methods, params)?)
        }
    }
}
