//! Output rendering and atomic file writing.
//!
//! All floating-point CSV fields use 17 significant digits so values
//! round-trip exactly. Files are written to a temporary sibling and
//! renamed into place; nothing time-dependent goes into the data, so a
//! rerun of the same config produces byte-identical files.

use crate::config::AppError;
use dyad_core::analysis::{BasinMap, ScanResult};
use dyad_core::discrete::DiscreteParams;
use dyad_core::influence::AxiomReport;
use dyad_core::{InfluenceFunction, SteadyState, Trajectory};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Environment variable prepended to relative output paths.
pub const OUT_DIR_ENV: &str = "DYAD_OUT_DIR";

fn fl(v: f64) -> String {
    format!("{v:.16e}")
}

/// `t,x,y,segment` with one row per sample.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * traj.len());
    out.push_str("t,x,y,segment\n");
    for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fl(*t),
            fl(s.x),
            fl(s.y),
            traj.segment_of(i)
        );
    }
    out
}

/// JSON array of classified steady states.
pub fn equilibria_json(states: &[SteadyState]) -> String {
    let mut s = serde_json::to_string_pretty(states).expect("steady states serialize");
    s.push('\n');
    s
}

/// Row-major raster of basin labels (attractor index, -1 unresolved,
/// -2 saddle-bound), one grid row per line.
pub fn basin_raster_csv(map: &BasinMap) -> String {
    let mut out = String::with_capacity(4 * map.labels.len());
    for iy in 0..map.grid.ny {
        let row: Vec<String> = (0..map.grid.nx)
            .map(|ix| map.label(ix, iy).code().to_string())
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Legend for a basin raster: the grid, the attractor list and the marker
/// codes.
pub fn basin_legend_json(map: &BasinMap) -> String {
    let legend = serde_json::json!({
        "grid": map.grid,
        "attractors": map.attractors,
        "markers": {"unresolved": -1, "saddle-bound": -2},
    });
    let mut s = serde_json::to_string_pretty(&legend).expect("legend serializes");
    s.push('\n');
    s
}

/// Two-branch separatrix polyline: `branch,x,y` rows.
pub fn separatrix_csv(branches: &[Vec<dyad_core::State>; 2]) -> String {
    let mut out = String::from("branch,x,y\n");
    for (k, branch) in branches.iter().enumerate() {
        for s in branch {
            let _ = writeln!(out, "{k},{},{}", fl(s.x), fl(s.y));
        }
    }
    out
}

/// `param_value,n_states,classes` rows; classes are x-ordered and joined
/// with `|`.
pub fn scan_csv(result: &ScanResult) -> String {
    let mut out = String::from("param_value,n_states,classes\n");
    for (v, classes) in result.values.iter().zip(&result.classes) {
        let names: Vec<&str> = classes.iter().map(|c| c.as_str()).collect();
        let _ = writeln!(out, "{},{},{}", fl(*v), classes.len(), names.join("|"));
    }
    out
}

/// `t,W,H` rows for a discrete round sequence.
pub fn discrete_csv(seq: &[(f64, f64)]) -> String {
    let mut out = String::from("t,W,H\n");
    for (t, (w, h)) in seq.iter().enumerate() {
        let _ = writeln!(out, "{t},{},{}", fl(*w), fl(*h));
    }
    out
}

/// Axiom report plus the function it describes.
pub fn axiom_report_json(f: &InfluenceFunction, report: &AxiomReport) -> String {
    let doc = serde_json::json!({
        "function": f,
        "all_pass": report.all_pass(),
        "checks": report.checks,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// Summary of a discrete run's fixed points.
pub fn discrete_fixed_points_json(dp: &DiscreteParams, fps: &[(f64, f64)]) -> String {
    let doc = serde_json::json!({
        "params": dp,
        "fixed_points": fps,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("fixed points serialize");
    s.push('\n');
    s
}

/// Resolves an output path against [`OUT_DIR_ENV`] when relative.
pub fn resolve_path(path: &str) -> PathBuf {
    let p = Path::new(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return Path::new(&dir).join(p);
            }
        }
    }
    p.to_path_buf()
}

/// Writes atomically: temp file in the destination directory, then rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<(), AppError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))?;
    std::io::Write::write_all(&mut tmp, content.as_bytes())?;
    tmp.persist(path).map_err(|e| {
        AppError::runtime(format!("cannot persist {}: {}", path.display(), e.error))
    })?;
    Ok(())
}

/// Path for the legend that accompanies a basin raster: `out.csv` ->
/// `out.legend.json`.
pub fn legend_path(raster: &Path) -> PathBuf {
    let stem = raster
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "basin".into());
    raster.with_file_name(format!("{stem}.legend.json"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dyad_core::{ParameterSchedule, Parameters, State};

    #[test]
    fn trajectory_csv_has_full_precision_and_segments() {
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, -1.0);
        let sched = ParameterSchedule::constant(p).with_switch(0.5, p);
        let cfg = dyad_core::IntegratorConfig {
            t_end: 1.0,
            sample_interval: 0.25,
            ..Default::default()
        };
        let traj = dyad_core::integrate::integrate(State::new(0.1, 0.2), &sched, &cfg).unwrap();
        let csv = trajectory_csv(&traj);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x,y,segment"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
        assert_eq!(first[1].parse::<f64>().unwrap(), 0.1);
        assert_eq!(first[2].parse::<f64>().unwrap(), 0.2);
        assert_eq!(first[3], "0");
        // the switch row flips the segment column
        let switch_row = csv
            .lines()
            .skip(1)
            .find(|l| l.split(',').next().unwrap().parse::<f64>().unwrap() == 0.5)
            .unwrap();
        assert!(switch_row.ends_with(",1"), "{switch_row}");
    }

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.1, -7.623447895175509, 1.0 / 3.0, 1e-300] {
            let s = fl(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn legend_path_replaces_extension() {
        assert_eq!(
            legend_path(Path::new("runs/basin.csv")),
            Path::new("runs/basin.legend.json")
        );
    }

    #[test]
    fn write_atomic_leaves_no_temp_files() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("data.csv");
        write_atomic(&target, "a,b\n1,2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&target).unwrap(), "a,b\n1,2\n");
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
    }
}
