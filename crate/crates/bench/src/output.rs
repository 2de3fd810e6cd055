use std::io::Write;

use crate::run::RunOutput;
use crate::BenchError;

pub const METHOD_HEADER: [&str; 10] = ["problem", "n", "nt", "method", "Time", "Res", "It/d", "rk", "T_sylv%", "Dim"];

/// Scientific notation with four significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn method_row(out: &RunOutput) -> Vec<String> {
    let r = &out.report;
    vec![
        out.problem.family.clone(),
        out.problem.n.to_string(),
        out.problem.n_t.to_string(),
        r.method.clone(),
        sci(r.wall_time),
        sci(r.relres),
        opt(r.iterations.or(r.d)),
        opt(r.rank),
        r.sylvester_fraction.map(|f| format!("{:.1}", 100.0 * f)).unwrap_or_default(),
        opt(r.dim),
    ]
}

pub fn write_csv<W: Write>(w: W, header: &[String], rows: &[Vec<String>]) -> Result<(), BenchError> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(header)?;
    for r in rows {
        wr.write_record(r)?;
    }
    wr.flush().map_err(|e| BenchError::Io(e.to_string()))?;
    Ok(())
}

pub fn method_csv<W: Write>(w: W, outs: &[RunOutput]) -> Result<(), BenchError> {
    let header: Vec<String> = METHOD_HEADER.iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = outs.iter().map(method_row).collect();
    write_csv(w, &header, &rows)
}

/// One row per recorded residual: `problem,n,nt,method,step,residual`.
pub fn history_csv<W: Write>(w: W, outs: &[RunOutput]) -> Result<(), BenchError> {
    let header: Vec<String> = ["problem", "n", "nt", "method", "step", "residual"].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for o in outs {
        for (k, h) in o.report.history.iter().enumerate() {
            rows.push(vec![
                o.problem.family.clone(),
                o.problem.n.to_string(),
                o.problem.n_t.to_string(),
                o.report.method.clone(),
                k.to_string(),
                sci(*h),
            ]);
        }
    }
    write_csv(w, &header, &rows)
}

pub fn to_file(path: &std::path::Path, f: impl FnOnce(std::fs::File) -> Result<(), BenchError>) -> Result<(), BenchError> {
    let file = std::fs::File::create(path).map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
    f(file)
}
