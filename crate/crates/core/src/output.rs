//! CSV and text emitters for run results and study tables.
//!
//! Floats are written with `{:.16e}` (17 significant digits), which
//! round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{EpsilonRow, ExperimentResult, RefineRow, SweepParameter, SweepRow};
use crate::model::{FieldState, Grid1D};

pub const SPEED_SERIES_FILE: &str = "speed_series.csv";
pub const REPORT_FILE: &str = "report.txt";
pub const EXACT_FILE: &str = "exact_vs_numeric.csv";
pub const GNUPLOT_FILE: &str = "plot.gp";

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn snapshot_file_name(index: usize) -> String {
    format!("snapshot_{index:03}.csv")
}

/// `x,u,v[,w]` rows for one state. One-equation states list the healthy
/// tissue recovered from `v`.
pub fn snapshot_csv(state: &FieldState, grid: &Grid1D, d: f64) -> String {
    let u = state.u.clone().unwrap_or_else(|| state.healthy(d));
    let mut out = String::from(if state.w.is_some() { "x,u,v,w\n" } else { "x,u,v\n" });
    for i in 0..grid.n_cells() {
        let _ = write!(out, "{},{},{}", f(grid.center(i)), f(u[i]), f(state.v[i]));
        if let Some(w) = &state.w {
            let _ = write!(out, ",{}", f(w[i]));
        }
        out.push('\n');
    }
    out
}

pub fn report_text(result: &ExperimentResult) -> String {
    let s = &result.spec;
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    put("experiment", s.name.clone());
    put("variant", s.variant().name().into());
    put("n_cells", result.grid.n_cells().to_string());
    put("dx", f(s.dx));
    put("dt", f(s.dt));
    put("t_final", f(result.final_state.t));
    for (k, snap) in result.snapshots.iter().enumerate() {
        put(&format!("snapshot_{k:03}_t"), f(snap.t));
    }
    if let Some(sum) = &result.speed_summary {
        put("speed", f(sum.speed));
        put("speed_spread", f(sum.spread));
        put("tail_fraction", f(sum.tail_fraction));
    }
    if let Some(shape) = &result.shape {
        put("shape_label", shape.label.name().into());
        put("edge_position", f(shape.edge_position));
        put("tail_length", f(shape.tail_length));
        put("edge_slope", f(shape.edge_slope));
        put("tail_ratio", f(shape.tail_ratio));
    }
    if let Some(exact) = &result.exact {
        put("exact_l_inf", f(exact.norms.l_inf));
        put("exact_l2", f(exact.norms.l2));
    }
    for w in &result.warnings {
        put("warning", w.clone());
    }
    out
}

/// Writes snapshot CSVs, the speed series, the report and, when present,
/// the exact comparison into `dir` (created if missing). Returns the paths
/// written, in order.
pub fn write_snapshots(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    let mut emit = |name: &str, contents: String| -> Result<()> {
        let path = dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
        Ok(())
    };
    for (k, snap) in result.snapshots.iter().enumerate() {
        emit(&snapshot_file_name(k), snapshot_csv(snap, &result.grid, result.spec.params.d))?;
    }
    if let Some(series) = &result.speed {
        let mut csv = String::from("t,s\n");
        for &(t, s) in &series.values {
            let _ = writeln!(csv, "{},{}", f(t), f(s));
        }
        emit(SPEED_SERIES_FILE, csv)?;
    }
    emit(REPORT_FILE, report_text(result))?;
    if let Some(exact) = &result.exact {
        let mut csv = String::from("x,v_num,v_exact,abs_err\n");
        for i in 0..exact.x.len() {
            let (n, e) = (exact.numeric[i], exact.exact[i]);
            let _ = writeln!(csv, "{},{},{},{}", f(exact.x[i]), f(n), f(e), f((n - e).abs()));
        }
        emit(EXACT_FILE, csv)?;
    }
    Ok(written)
}

/// Gnuplot script plotting the files written by [`write_snapshots`].
pub fn gnuplot_script(result: &ExperimentResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "set datafile separator ','");
    let _ = writeln!(out, "set key autotitle columnhead");
    let _ = writeln!(out, "set xlabel 'x'");
    let _ = writeln!(out, "set term pngcairo size 900,600");
    let _ = writeln!(out, "set output 'profiles.png'");
    let plots: Vec<String> = result
        .snapshots
        .iter()
        .enumerate()
        .flat_map(|(k, snap)| {
            let file = snapshot_file_name(k);
            let t = snap.t;
            [
                format!("'{file}' using 1:3 with lines lt {} title 'v t={t}'", k + 1),
                format!("'{file}' using 1:2 with lines lt {} dt 2 title 'u t={t}'", k + 1),
            ]
        })
        .collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    if result.speed.is_some() {
        let _ = writeln!(out, "set output 'speed.png'");
        let _ = writeln!(out, "set xlabel 't'");
        let _ = writeln!(out, "plot '{SPEED_SERIES_FILE}' using 1:2 with lines title 's'");
    }
    if result.exact.is_some() {
        let _ = writeln!(out, "set output 'exact.png'");
        let _ = writeln!(out, "set xlabel 'x'");
        let _ = writeln!(
            out,
            "plot '{EXACT_FILE}' using 1:2 with lines title 'numeric', '' using 1:3 with lines dt 2 title 'exact'"
        );
    }
    out
}

pub fn write_gnuplot(result: &ExperimentResult, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(GNUPLOT_FILE);
    write_file(&path, &gnuplot_script(result))?;
    Ok(path)
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// `<parameter>,speed,error`; failed runs leave `speed` empty.
pub fn sweep_csv(parameter: SweepParameter, rows: &[SweepRow]) -> String {
    let mut out = format!("{},speed,error\n", parameter.name());
    for row in rows {
        let _ = match &row.speed {
            Ok(s) => writeln!(out, "{},{},", f(row.value), f(*s)),
            Err(msg) => writeln!(out, "{},,{}", f(row.value), csv_quote(msg)),
        };
    }
    out
}

pub fn epsilon_csv(rows: &[EpsilonRow]) -> String {
    let mut out = String::from("epsilon,speed,l_inf\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", f(r.epsilon), f(r.speed), f(r.l_inf));
    }
    out
}

pub fn refine_csv(rows: &[RefineRow]) -> String {
    let mut out = String::from("dx,dt,speed,l_inf,l2\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", f(r.dx), f(r.dt), f(r.speed), f(r.l_inf), f(r.l2));
    }
    out
}

/// Writes `contents` to `dir/name`, creating `dir`.
pub fn write_table(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = dir.join(name);
    write_file(&path, contents)?;
    Ok(path)
}
