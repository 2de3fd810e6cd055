use std::path::{Path, PathBuf};

use clap::ValueEnum;
use paradiag::problems::{rk_heat, ProblemSpec};
use paradiag::runge_kutta::{assemble_rk_heat, ButcherTableau, RkAllAtOnce};
use paradiag::diag::SpaceTimeProblem;
use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Solver selection, named as in the result tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FastDiag,
    Pgmres,
    Evint,
    UpdateEds,
    UpdateZoldi4,
    #[serde(rename = "update-2discs")]
    #[value(name = "update-2discs")]
    Update2discs,
    UpdateEk,
    RkPgmres,
    RkEvint,
    RkEk,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::FastDiag => "fast-diag",
            Method::Pgmres => "pgmres",
            Method::Evint => "evint",
            Method::UpdateEds => "update-eds",
            Method::UpdateZoldi4 => "update-zoldi4",
            Method::Update2discs => "update-2discs",
            Method::UpdateEk => "update-ek",
            Method::RkPgmres => "rk-pgmres",
            Method::RkEvint => "rk-evint",
            Method::RkEk => "rk-ek",
        }
    }

    pub fn is_rk(&self) -> bool {
        matches!(self, Method::RkPgmres | Method::RkEvint | Method::RkEk)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableauSource {
    Builtin(String),
    Inline(ButcherTableau),
}

impl Default for TableauSource {
    fn default() -> Self {
        TableauSource::Builtin("dirk43".into())
    }
}

impl TableauSource {
    pub fn resolve(&self) -> Result<ButcherTableau, BenchError> {
        match self {
            TableauSource::Builtin(name) => ButcherTableau::builtin(name)
                .ok_or_else(|| BenchError::Usage(format!("unknown tableau '{name}' (builtins: dirk43, implicit-euler)"))),
            TableauSource::Inline(t) => {
                t.validate()?;
                Ok(t.clone())
            }
        }
    }
}

/// A problem family with sizes. For the 2D families `n_side` is the number
/// of interior grid points per direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ProblemConfig {
    Heat1d { n: usize, nt: usize },
    Convdiff2d { n_side: usize, nt: usize },
    FracSpace { n_side: usize, nt: usize },
    FracTime { n: usize, nt: usize, #[serde(default = "default_gamma")] gamma: f64 },
    Wave2d { n_side: usize, nt: usize },
    RkHeat { n: usize, nt: usize, #[serde(default)] tableau: TableauSource },
}

fn default_gamma() -> f64 {
    0.3
}

pub const FAMILIES: [&str; 6] = ["heat1d", "convdiff2d", "frac-space", "frac-time", "wave2d", "rk-heat"];

impl ProblemConfig {
    /// `size` is `n` for 1D families and `n_side` for 2D ones.
    pub fn from_family(family: &str, size: usize, nt: usize) -> Result<Self, BenchError> {
        Ok(match family {
            "heat1d" => ProblemConfig::Heat1d { n: size, nt },
            "convdiff2d" => ProblemConfig::Convdiff2d { n_side: size, nt },
            "frac-space" => ProblemConfig::FracSpace { n_side: size, nt },
            "frac-time" => ProblemConfig::FracTime { n: size, nt, gamma: default_gamma() },
            "wave2d" => ProblemConfig::Wave2d { n_side: size, nt },
            "rk-heat" => ProblemConfig::RkHeat { n: size, nt, tableau: TableauSource::default() },
            other => {
                return Err(BenchError::Usage(format!("unknown problem '{other}' (known: {})", FAMILIES.join(", "))))
            }
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            ProblemConfig::Heat1d { .. } => "heat1d",
            ProblemConfig::Convdiff2d { .. } => "convdiff2d",
            ProblemConfig::FracSpace { .. } => "frac-space",
            ProblemConfig::FracTime { .. } => "frac-time",
            ProblemConfig::Wave2d { .. } => "wave2d",
            ProblemConfig::RkHeat { .. } => "rk-heat",
        }
    }

    pub fn spec(&self) -> Option<ProblemSpec> {
        Some(match *self {
            ProblemConfig::Heat1d { n, nt } => ProblemSpec::Heat1d { n, nt },
            ProblemConfig::Convdiff2d { n_side, nt } => ProblemSpec::Convdiff2d { n_side, nt },
            ProblemConfig::FracSpace { n_side, nt } => ProblemSpec::FracSpace { n_side, nt },
            ProblemConfig::FracTime { n, nt, gamma } => ProblemSpec::FracTime { n, nt, gamma },
            ProblemConfig::Wave2d { n_side, nt } => ProblemSpec::Wave2d { n_side, nt },
            ProblemConfig::RkHeat { .. } => return None,
        })
    }

    pub fn build(&self) -> Result<BuiltProblem, BenchError> {
        match self {
            ProblemConfig::RkHeat { n, nt, tableau } => {
                if *n == 0 || *nt == 0 {
                    return Err(BenchError::Usage("rk-heat needs n, nt >= 1".into()));
                }
                let sys = assemble_rk_heat(&rk_heat(*n, *nt), &tableau.resolve()?)?;
                Ok(BuiltProblem::Rk(Box::new(sys)))
            }
            _ => Ok(BuiltProblem::Plain(self.spec().unwrap().build()?)),
        }
    }
}

pub enum BuiltProblem {
    Plain(SpaceTimeProblem),
    Rk(Box<RkAllAtOnce>),
}

impl BuiltProblem {
    pub fn problem(&self) -> &SpaceTimeProblem {
        match self {
            BuiltProblem::Plain(p) => p,
            BuiltProblem::Rk(s) => &s.problem,
        }
    }
}

/// Solver parameters; unset values take the per-problem defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub tol: Option<f64>,
    pub rho: Option<f64>,
    pub d: Option<usize>,
    pub alpha: Option<f64>,
    pub sigma: Option<f64>,
    pub max_iter: Option<usize>,
    pub max_dim: Option<usize>,
}

/// Parameters after applying the defaults.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Resolved {
    pub tol: f64,
    pub rho: f64,
    pub d: usize,
    pub alpha: f64,
    pub sigma: f64,
    pub max_iter: usize,
    pub max_dim: usize,
}

impl SolverParams {
    pub fn resolve(&self, family: &str) -> Resolved {
        let wave = family == "wave2d";
        let rk = family == "rk-heat";
        Resolved {
            tol: self.tol.unwrap_or(if wave { 1e-7 } else { 1e-8 }),
            rho: self.rho.unwrap_or(if rk { 0.05 } else { 5e-4 }),
            d: self.d.unwrap_or(if wave { 3 } else { 2 }),
            alpha: self.alpha.unwrap_or(if wave { 0.1 } else { 1.0 }),
            sigma: self.sigma.unwrap_or(paradiag::runge_kutta::DEFAULT_SIGMA),
            max_iter: self.max_iter.unwrap_or(200),
            max_dim: self.max_dim.unwrap_or(400),
        }
    }

    /// Values set in `other` win.
    pub fn overlay(&self, other: &SolverParams) -> SolverParams {
        SolverParams {
            tol: other.tol.or(self.tol),
            rho: other.rho.or(self.rho),
            d: other.d.or(self.d),
            alpha: other.alpha.or(self.alpha),
            sigma: other.sigma.or(self.sigma),
            max_iter: other.max_iter.or(self.max_iter),
            max_dim: other.max_dim.or(self.max_dim),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    /// Long-format residual histories.
    pub history: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub method: Method,
    #[serde(default)]
    pub params: SolverParams,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, BenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| BenchError::Usage(format!("invalid config {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_defaults() {
        let p = SolverParams::default();
        let heat = p.resolve("heat1d");
        assert_eq!((heat.tol, heat.rho, heat.d, heat.alpha, heat.sigma), (1e-8, 5e-4, 2, 1.0, -2.0));
        let wave = p.resolve("wave2d");
        assert_eq!((wave.tol, wave.d, wave.alpha), (1e-7, 3, 0.1));
        assert_eq!(p.resolve("rk-heat").rho, 0.05);
    }

    #[test]
    fn overlay_prefers_other() {
        let base = SolverParams { rho: Some(1e-3), d: Some(4), ..Default::default() };
        let flags = SolverParams { d: Some(3), ..Default::default() };
        let r = base.overlay(&flags).resolve("heat1d");
        assert_eq!((r.rho, r.d), (1e-3, 3));
    }

    #[test]
    fn run_config_json() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"problem": {"name": "rk-heat", "n": 10, "nt": 5, "tableau": "implicit-euler"}, "method": "rk-ek"}"#,
        )
        .unwrap();
        assert_eq!(cfg.method, Method::RkEk);
        assert!(cfg.method.is_rk());
        assert_eq!(cfg.problem.family(), "rk-heat");
        assert!(serde_json::from_str::<RunConfig>(r#"{"problem": {"name": "heat1d", "n": 4, "nt": 4}, "method": "lu"}"#).is_err());
    }
}
