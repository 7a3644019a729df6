//! One function per subcommand: parse nothing, take a validated config,
//! return rendered output text.

use crate::config::{AppError, OutputFormat, RunConfig};
use crate::output;
use dyad_core::analysis::{
    basin_map, classify_cell, detect_folds, scan_parameter, scan_sample, separatrix, BasinMap,
    ScanResult,
};
use dyad_core::discrete;
use dyad_core::equilibria::{find_steady_states, StabilityClass};
use dyad_core::influence::validate_axioms;
use dyad_core::integrate::integrate;
use dyad_core::InfluenceFunction;
use rayon::prelude::*;

/// Rendered result of a command: the primary document plus an optional
/// companion (the basin legend).
pub struct Rendered {
    pub primary: String,
    pub companion: Option<String>,
}

impl Rendered {
    fn primary(text: String) -> Self {
        Rendered {
            primary: text,
            companion: None,
        }
    }
}

/// Integrate the configured schedule and render the trajectory CSV.
pub fn simulate(cfg: &RunConfig) -> Result<Rendered, AppError> {
    cfg.check_format(OutputFormat::Csv)?;
    let sched = cfg.schedule()?;
    let icfg = cfg.integrator()?;
    let traj = integrate(cfg.initial_state()?, &sched, &icfg)?;
    Ok(Rendered::primary(output::trajectory_csv(&traj)))
}

/// Enumerate and classify the steady states, rendered as JSON.
pub fn equilibria(cfg: &RunConfig) -> Result<Rendered, AppError> {
    cfg.check_format(OutputFormat::Json)?;
    let p = cfg.parameters()?;
    let states = find_steady_states(&p);
    dyad_core::equilibria::count_regime(&p, &states)?;
    Ok(Rendered::primary(output::equilibria_json(&states)))
}

/// Compute the basin raster (cells fan out across threads) and its legend.
pub fn basin(cfg: &RunConfig) -> Result<Rendered, AppError> {
    cfg.check_format(OutputFormat::Csv)?;
    let p = cfg.parameters()?;
    let g = cfg.grid()?;
    let spec = g.spec();
    let all_states = find_steady_states(&p);
    if !all_states.iter().any(|s| s.class.is_attracting()) {
        return Err(AppError::runtime("no attracting steady state to map"));
    }
    let labels: Vec<_> = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let (iy, ix) = (i / spec.nx, i % spec.nx);
            classify_cell(&p, spec.center(ix, iy), &all_states, g.tol, g.t_max)
        })
        .collect();
    let attractors = all_states
        .iter()
        .copied()
        .filter(|s| s.class.is_attracting())
        .collect();
    let map = BasinMap {
        grid: spec,
        labels,
        attractors,
        all_states,
    };
    Ok(Rendered {
        primary: output::basin_raster_csv(&map),
        companion: Some(output::basin_legend_json(&map)),
    })
}

/// Serial reference for [`basin`], used by tests to pin the parallel
/// fan-out to the sequential semantics.
pub fn basin_serial(cfg: &RunConfig) -> Result<BasinMap, AppError> {
    let p = cfg.parameters()?;
    let g = cfg.grid()?;
    Ok(basin_map(&p, &g.spec(), g.tol, g.t_max))
}

/// Trace the separatrix through the saddle and render the two branches.
pub fn separatrix_cmd(cfg: &RunConfig) -> Result<Rendered, AppError> {
    cfg.check_format(OutputFormat::Csv)?;
    let p = cfg.parameters()?;
    let arc = cfg.separatrix.unwrap_or_default().arc_length;
    let states = find_steady_states(&p);
    let saddle = states
        .iter()
        .find(|s| s.class == StabilityClass::Saddle)
        .ok_or_else(|| AppError::runtime("no saddle among the steady states"))?;
    let branches = separatrix(saddle, &p, arc)?;
    Ok(Rendered::primary(output::separatrix_csv(&branches)))
}

/// Scan one parameter (samples fan out across threads) and render the CSV.
pub fn scan(cfg: &RunConfig) -> Result<Rendered, AppError> {
    cfg.check_format(OutputFormat::Csv)?;
    let p = cfg.parameters()?;
    let sc = cfg.scan()?;
    if sc.n < 2 {
        return Err(AppError::config("scan needs at least 2 samples"));
    }
    // validate the range on the serial path first, then fan out
    scan_parameter(&p, sc.name, sc.lo, sc.hi, 2)?;
    let values: Vec<f64> = (0..sc.n)
        .map(|i| sc.lo + (sc.hi - sc.lo) * i as f64 / (sc.n - 1) as f64)
        .collect();
    let classes: Vec<Vec<StabilityClass>> = values
        .par_iter()
        .map(|v| scan_sample(&p, sc.name, *v).map(|ss| ss.iter().map(|s| s.class).collect()))
        .collect::<Result<_, _>>()?;
    let counts: Vec<usize> = classes.iter().map(Vec::len).collect();
    let folds = detect_folds(&values, &counts);
    let result = ScanResult {
        param: sc.name,
        values,
        classes,
        folds,
    };
    Ok(Rendered::primary(output::scan_csv(&result)))
}

/// Check the five admissibility axioms of an influence function.
pub fn validate(
    f: InfluenceFunction,
    half_width: f64,
    points: usize,
    tol: f64,
) -> Result<(Rendered, bool), AppError> {
    f.validate()?;
    let report = validate_axioms(&f, half_width, points, tol)?;
    let all_pass = report.all_pass();
    Ok((
        Rendered::primary(output::axiom_report_json(&f, &report)),
        all_pass,
    ))
}

/// Iterate the discrete round model and render the score sequence.
pub fn discrete_cmd(cfg: &RunConfig) -> Result<Rendered, AppError> {
    cfg.check_format(OutputFormat::Csv)?;
    let d = cfg.discrete()?;
    let seq = discrete::iterate(d.w0, d.h0, &d.params(), d.rounds);
    Ok(Rendered::primary(output::discrete_csv(&seq)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::load_scenario;

    #[test]
    fn parallel_basin_matches_the_serial_reference() {
        let mut cfg = load_scenario("symmetric-separatrix").unwrap();
        if let Some(g) = cfg.grid.as_mut() {
            g.nx = 21;
            g.ny = 21;
        }
        let serial = basin_serial(&cfg).unwrap();
        let rendered = basin(&cfg).unwrap();
        assert_eq!(rendered.primary, output::basin_raster_csv(&serial));
    }

    #[test]
    fn scan_commands_render_fold_free_windows() {
        let cfg = load_scenario("fig3-right").unwrap();
        let rendered = scan(&cfg).unwrap();
        let lines: Vec<&str> = rendered.primary.lines().collect();
        assert_eq!(lines[0], "param_value,n_states,classes");
        assert_eq!(lines.len(), 202);
        assert!(lines[1].contains("stable-node|saddle|stable-"));
    }

    #[test]
    fn simulate_renders_segment_changes() {
        let cfg = load_scenario("switch-revert").unwrap();
        let rendered = simulate(&cfg).unwrap();
        let segs: Vec<&str> = rendered
            .primary
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap())
            .collect();
        assert!(segs.contains(&"0") && segs.contains(&"1") && segs.contains(&"2"));
    }
}
