//! Benchmark harness for the `paradiag` solvers: problem and solver
//! configuration, result tables and shift-plan inspection.

pub mod config;
pub mod output;
pub mod run;
pub mod shifts;
pub mod table;

use thiserror::Error;

pub use config::{Method, ProblemConfig, RunConfig, SolverParams};
pub use run::{run, run_method, RunOutput};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error("solver failed: {0}")]
    Solver(#[from] paradiag::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// 2 for invalid invocations, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Thread count from the flag, else from `PARADIAG_THREADS`.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>, BenchError> {
    if let Some(n) = flag {
        return if n == 0 { Err(BenchError::Usage("--threads must be positive".into())) } else { Ok(Some(n)) };
    }
    match std::env::var("PARADIAG_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(BenchError::Usage(format!("PARADIAG_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a dedicated pool of `threads` workers (all cores if `None`).
pub fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, BenchError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| BenchError::Io(e.to_string()))?;
    Ok(pool.install(f))
}
