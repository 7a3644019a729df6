//! Basin-of-attraction maps on a rectangular grid.
//!
//! Each grid node is integrated until the field norm drops below a
//! tolerance, then matched against the attracting steady states. Nodes that
//! settle near a saddle (initial data on the stable manifold) are marked
//! separately from nodes that simply failed to converge in time.

use crate::equilibria::{find_steady_states, SteadyState};
use crate::error::Error;
use crate::integrate::converge;
use crate::model::{Parameters, State};
use alloc::format;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

/// Default matching radius between a converged state and an attractor.
pub const MATCH_RADIUS: f64 = 1e-3;

/// Rectangular node-based grid: `nx * ny` points spanning the ranges
/// inclusively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Square grid covering `[-half, half]^2`.
    pub fn square(half: f64, n: usize) -> Self {
        GridSpec {
            x_min: -half,
            x_max: half,
            y_min: -half,
            y_max: half,
            nx: n,
            ny: n,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.x_min < self.x_max) || !(self.y_min < self.y_max) {
            return Err(Error::InvalidParameters(format!(
                "grid ranges must be nonempty, got x [{}, {}], y [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if !self.x_min.is_finite()
            || !self.x_max.is_finite()
            || !self.y_min.is_finite()
            || !self.y_max.is_finite()
        {
            return Err(Error::InvalidParameters(
                "grid ranges must be finite".into(),
            ));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidParameters(format!(
                "grid needs at least 2x2 nodes, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    pub fn center(&self, ix: usize, iy: usize) -> State {
        State::new(
            self.x_min + (self.x_max - self.x_min) * ix as f64 / (self.nx - 1) as f64,
            self.y_min + (self.y_max - self.y_min) * iy as f64 / (self.ny - 1) as f64,
        )
    }

    pub fn cell_width(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Outcome for one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellLabel {
    /// Index into [`BasinMap::attractors`].
    Attractor(usize),
    /// Did not settle within the time budget, or settled somewhere
    /// unrecognized.
    Unresolved,
    /// Settled at a non-attracting steady state (stable-manifold initial
    /// data).
    SaddleBound,
}

impl CellLabel {
    /// Integer encoding used in raster exports: attractor index, -1 for
    /// unresolved, -2 for saddle-bound.
    pub fn code(self) -> i64 {
        match self {
            CellLabel::Attractor(k) => k as i64,
            CellLabel::Unresolved => -1,
            CellLabel::SaddleBound => -2,
        }
    }
}

/// Basin map: row-major labels (`iy * nx + ix`, y varying slowest) over the
/// grid, plus the attractor legend.
#[derive(Debug, Clone)]
pub struct BasinMap {
    pub grid: GridSpec,
    pub labels: Vec<CellLabel>,
    /// The attracting steady states, in x order.
    pub attractors: Vec<SteadyState>,
    /// Every steady state (attractors, saddles, degenerate), for
    /// saddle-bound matching.
    pub all_states: Vec<SteadyState>,
}

impl BasinMap {
    pub fn label(&self, ix: usize, iy: usize) -> CellLabel {
        self.labels[iy * self.grid.nx + ix]
    }
}

/// Classifies a single grid node: run [`converge`], then match the final
/// state against the attractors (and the remaining steady states for the
/// saddle-bound marker) within [`MATCH_RADIUS`].
pub fn classify_cell(
    p: &Parameters,
    center: State,
    states: &[SteadyState],
    tol: f64,
    t_max: f64,
) -> CellLabel {
    let (end, converged) = converge(center, p, tol, t_max);
    let mut attractor_idx = 0;
    for s in states {
        if s.class.is_attracting() {
            if end.distance(&s.state()) <= MATCH_RADIUS {
                return CellLabel::Attractor(attractor_idx);
            }
            attractor_idx += 1;
        }
    }
    if converged
        && states
            .iter()
            .filter(|s| !s.class.is_attracting())
            .any(|s| end.distance(&s.state()) <= MATCH_RADIUS)
    {
        CellLabel::SaddleBound
    } else {
        CellLabel::Unresolved
    }
}

/// Computes the basin map serially. Cells are independent; callers that
/// want parallelism can fan out [`classify_cell`] over the grid and
/// assemble the same row-major label vector.
pub fn basin_map(p: &Parameters, grid: &GridSpec, tol: f64, t_max: f64) -> BasinMap {
    let all_states = find_steady_states(p);
    let attractors: Vec<SteadyState> = all_states
        .iter()
        .copied()
        .filter(|s| s.class.is_attracting())
        .collect();
    let mut labels = Vec::with_capacity(grid.len());
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            labels.push(classify_cell(
                p,
                grid.center(ix, iy),
                &all_states,
                tol,
                t_max,
            ));
        }
    }
    BasinMap {
        grid: *grid,
        labels,
        attractors,
        all_states,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_attractor_claims_every_cell() {
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 1.0, -1.0);
        let map = basin_map(&p, &GridSpec::square(3.0, 15), 1e-8, 200.0);
        assert_eq!(map.attractors.len(), 1);
        assert!(map.labels.iter().all(|l| *l == CellLabel::Attractor(0)));
    }

    #[test]
    fn strong_friends_split_into_two_basins_along_the_antidiagonal() {
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0);
        let grid = GridSpec::square(4.0, 41);
        let map = basin_map(&p, &grid, 1e-8, 200.0);
        assert_eq!(map.attractors.len(), 2);

        let mut seen = [false, false];
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let c = grid.center(ix, iy);
                match map.label(ix, iy) {
                    CellLabel::Attractor(k) => {
                        seen[k] = true;
                        // basin side matches the sign of x + y
                        let expected_positive = c.x + c.y > 0.0;
                        let is_positive = map.attractors[k].x > 0.0;
                        assert_eq!(
                            expected_positive, is_positive,
                            "cell {c:?} labeled with attractor {k}"
                        );
                    }
                    CellLabel::Unresolved | CellLabel::SaddleBound => {
                        assert!(
                            (c.x + c.y).abs() < 1e-9,
                            "non-attractor label off the separatrix at {c:?}"
                        );
                    }
                }
            }
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn antidiagonal_cells_are_saddle_bound_or_unresolved() {
        let p = Parameters::new(1.0, 1.0, 0.0, 0.0, 2.0, 2.0);
        let states = find_steady_states(&p);
        for v in [0.5, 1.0, 2.5] {
            let label = classify_cell(&p, State::new(v, -v), &states, 1e-8, 200.0);
            assert!(
                matches!(label, CellLabel::SaddleBound | CellLabel::Unresolved),
                "{label:?} at ({v}, {})",
                -v
            );
        }
        // and just off the line the basins take over
        let label = classify_cell(&p, State::new(1.0, -0.5), &states, 1e-8, 200.0);
        assert_eq!(label, CellLabel::Attractor(1));
        let label = classify_cell(&p, State::new(-1.0, 0.5), &states, 1e-8, 200.0);
        assert_eq!(label, CellLabel::Attractor(0));
    }

    #[test]
    fn unresolved_cells_hug_the_separatrix_in_asymmetric_bistability() {
        use crate::analysis::{polyline_distance, separatrix};
        let p = Parameters::new(1.0, 2.0, -4.0, -2.0, -5.0, -4.0);
        let states = find_steady_states(&p);
        let saddle = states[1];
        let branches = separatrix(&saddle, &p, 40.0).unwrap();
        let mut curve = branches[0].clone();
        curve.extend(branches[1].iter().copied());

        let grid = GridSpec {
            x_min: -10.0,
            x_max: 6.0,
            y_min: -6.0,
            y_max: 4.0,
            nx: 33,
            ny: 33,
        };
        let map = basin_map(&p, &grid, 1e-8, 300.0);
        assert_eq!(map.attractors.len(), 2);
        let cell = grid.cell_width().max(grid.cell_height());
        let mut labels_seen = [false, false];
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let c = grid.center(ix, iy);
                match map.label(ix, iy) {
                    CellLabel::Attractor(k) => labels_seen[k] = true,
                    other => {
                        let d = polyline_distance(&curve, c);
                        assert!(
                            d <= 2.0 * cell,
                            "{other:?} cell at {c:?} lies {d} from the separatrix"
                        );
                    }
                }
            }
        }
        assert!(labels_seen[0] && labels_seen[1]);
    }

    #[test]
    fn label_codes_for_raster_export() {
        assert_eq!(CellLabel::Attractor(0).code(), 0);
        assert_eq!(CellLabel::Attractor(2).code(), 2);
        assert_eq!(CellLabel::Unresolved.code(), -1);
        assert_eq!(CellLabel::SaddleBound.code(), -2);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::square(4.0, 41).validate().is_ok());
        assert!(GridSpec::square(4.0, 1).validate().is_err());
        let mut g = GridSpec::square(4.0, 11);
        g.x_max = g.x_min;
        assert!(g.validate().is_err());
    }
}
