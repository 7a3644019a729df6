//! The JSON run configuration and its validation.

use dyad_core::analysis::{GridSpec, ScanParam};
use dyad_core::discrete::DiscreteParams;
use dyad_core::{Error, InfluenceFunction, IntegratorConfig, ParameterSchedule, Parameters, State};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Top-level application error, carrying the process exit code.
#[derive(Debug)]
pub enum AppError {
    /// Bad config file, flags, preset name or parameter ranges: exit 2.
    Config(String),
    /// Integration or analysis failure, or an unwritable output: exit 3.
    Runtime(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Runtime(_) => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        AppError::Runtime(msg.into())
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(msg) => write!(f, "config error: {msg}"),
            AppError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_) | Error::InvalidScanRange(_) | Error::NonFiniteInput(_) => {
                AppError::Config(e.to_string())
            }
            other => AppError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

/// Partial parameter replacement applied at a switch time. Unset fields
/// keep their previous-segment values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<InfluenceFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<InfluenceFunction>,
}

impl ParamOverrides {
    pub fn apply(&self, base: &Parameters) -> Parameters {
        let mut p = *base;
        if let Some(v) = self.m1 {
            p.m1 = v;
        }
        if let Some(v) = self.m2 {
            p.m2 = v;
        }
        if let Some(v) = self.b1 {
            p.b1 = v;
        }
        if let Some(v) = self.b2 {
            p.b2 = v;
        }
        if let Some(v) = self.c1 {
            p.c1 = v;
        }
        if let Some(v) = self.c2 {
            p.c2 = v;
        }
        if let Some(f) = self.f1 {
            p.f1 = f;
        }
        if let Some(f) = self.f2 {
            p.f2 = f;
        }
        p
    }
}

/// One attitude switch: at time `t` the listed fields change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchSpec {
    pub t: f64,
    pub overrides: ParamOverrides,
}

/// Basin-map settings: the grid plus convergence controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Field-norm threshold treated as converged.
    #[serde(default = "default_basin_tol")]
    pub tol: f64,
    /// Time budget per cell.
    #[serde(default = "default_basin_t_max")]
    pub t_max: f64,
}

fn default_basin_tol() -> f64 {
    1e-8
}

fn default_basin_t_max() -> f64 {
    200.0
}

impl GridConfig {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.x_min,
            x_max: self.x_max,
            y_min: self.y_min,
            y_max: self.y_max,
            nx: self.nx,
            ny: self.ny,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparatrixConfig {
    #[serde(default = "default_arc_length")]
    pub arc_length: f64,
}

fn default_arc_length() -> f64 {
    5.0
}

impl Default for SeparatrixConfig {
    fn default() -> Self {
        SeparatrixConfig {
            arc_length: default_arc_length(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub name: ScanParam,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteConfig {
    pub r1: f64,
    pub r2: f64,
    pub a: f64,
    pub b: f64,
    pub i_hw: InfluenceFunction,
    pub i_wh: InfluenceFunction,
    pub w0: f64,
    pub h0: f64,
    pub rounds: usize,
}

impl DiscreteConfig {
    pub fn params(&self) -> DiscreteParams {
        DiscreteParams {
            r1: self.r1,
            r2: self.r2,
            a: self.a,
            b: self.b,
            i_hw: self.i_hw,
            i_wh: self.i_wh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Optional; each command has a fixed format, so when set it must agree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

/// The whole run configuration. Unknown keys anywhere are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Parameters>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub schedule: Vec<SwitchSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<State>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrator: Option<IntegratorConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separatrix: Option<SeparatrixConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrete: Option<DiscreteConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, AppError> {
        serde_json::from_str(text).map_err(|e| AppError::config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn parameters(&self) -> Result<Parameters, AppError> {
        let p = self
            .parameters
            .ok_or_else(|| AppError::config("missing required `parameters` block"))?;
        p.validate()?;
        Ok(p)
    }

    /// Expands the override list into a full schedule; overrides accumulate
    /// from one segment to the next.
    pub fn schedule(&self) -> Result<ParameterSchedule, AppError> {
        let initial = self.parameters()?;
        let mut sched = ParameterSchedule::constant(initial);
        let mut current = initial;
        for spec in &self.schedule {
            current = spec.overrides.apply(&current);
            sched = sched.with_switch(spec.t, current);
        }
        sched.validate()?;
        Ok(sched)
    }

    pub fn integrator(&self) -> Result<IntegratorConfig, AppError> {
        let cfg = self.integrator.unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn initial_state(&self) -> Result<State, AppError> {
        let s = self
            .initial_state
            .ok_or_else(|| AppError::config("missing required `initial_state` block"))?;
        if !s.is_finite() {
            return Err(AppError::config("initial_state must be finite"));
        }
        Ok(s)
    }

    pub fn grid(&self) -> Result<GridConfig, AppError> {
        let g = self
            .grid
            .ok_or_else(|| AppError::config("missing required `grid` block"))?;
        g.spec().validate()?;
        if !(g.tol > 0.0) || !(g.t_max > 0.0) {
            return Err(AppError::config("grid tol and t_max must be positive"));
        }
        Ok(g)
    }

    pub fn scan(&self) -> Result<ScanConfig, AppError> {
        self.scan
            .ok_or_else(|| AppError::config("missing required `scan` block"))
    }

    pub fn discrete(&self) -> Result<DiscreteConfig, AppError> {
        let d = self
            .discrete
            .ok_or_else(|| AppError::config("missing required `discrete` block"))?;
        d.params().validate()?;
        if !d.w0.is_finite() || !d.h0.is_finite() {
            return Err(AppError::config("discrete initial scores must be finite"));
        }
        if d.rounds == 0 {
            return Err(AppError::config("discrete rounds must be at least 1"));
        }
        Ok(d)
    }

    /// Output path from the config, unless overridden by a flag.
    pub fn output_path(&self) -> Option<&str> {
        self.output.as_ref().and_then(|o| o.path.as_deref())
    }

    pub fn check_format(&self, fixed: OutputFormat) -> Result<(), AppError> {
        if let Some(requested) = self.output.as_ref().and_then(|o| o.format) {
            if requested != fixed {
                return Err(AppError::config(format!(
                    "this command always writes {fixed:?}; config requests {requested:?}"
                )));
            }
        }
        Ok(())
    }
}
