//! Time integration on a uniform 1D grid: CFL-limited forward Euler steps of
//! the semi-discrete scheme dU_j/dt = −(Φ_{j+1/2} − Φ_{j−1/2})/h, with
//! first-order (cell-average) convected states, one ghost cell per side, and
//! per-step diagnostics.
//!
//! Diagnostics recorded every step: conservation totals (h·Σ of each
//! conserved field), the per-cell entropy residual
//! Π_j = η(U_j^{n+1}) − η(U_j^n) + Δt/h·(Ψ_{j+1/2} − Ψ_{j−1/2})
//! with the upwinded entropy flux Ψ = η_L·(u*)₊ + η_R·(u*)₋, and the summed
//! interface entropy production Σ(π₊ + π₋). A well-behaved run keeps Π_j ≤ 0
//! up to a slight positive defect at a rarefaction head.

use crate::config::{Problem, SolverConfig};
use crate::euler::{
    conservative_from_primitive, primitive_from_conservative, ConservativeState, EulerError,
    GasModel,
};
use crate::flux::{flux_from_resolution, resolve_interface, ViscosityParams};
use log::{debug, info};
use std::collections::VecDeque;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    /// The update produced (or was handed) a non-physical state; the run is
    /// aborted with the offending cell and step attached.
    #[error("non-physical state in cell {cell} at step {step}: {source}")]
    InvalidState {
        cell: usize,
        step: usize,
        source: EulerError,
    },
}

/// Uniform grid over [x_min, x_max] with n_cells cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl Grid1D {
    /// Panics on a degenerate grid; configuration-level validation is
    /// expected to reject those before a grid is ever built.
    pub fn new(n_cells: usize, x_min: f64, x_max: f64) -> Self {
        assert!(n_cells >= 2, "need at least two cells, got {n_cells}");
        assert!(
            x_min.is_finite() && x_max.is_finite() && x_min < x_max,
            "degenerate domain [{x_min}, {x_max}]"
        );
        Grid1D { n_cells, x_min, x_max }
    }

    /// Cell width h = (x_max − x_min)/n_cells.
    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    /// Center of cell `j`.
    pub fn cell_center(&self, j: usize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.h()
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|j| self.cell_center(j)).collect()
    }
}

/// Ghost-cell policy at the two domain boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// Copy the adjacent interior cell (zero-gradient outflow).
    Transmissive,
    /// Wrap around the domain.
    Periodic,
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "transmissive" => Ok(BoundaryCondition::Transmissive),
            "periodic" => Ok(BoundaryCondition::Periodic),
            other => Err(format!(
                "unknown boundary condition '{other}' (expected 'transmissive' or 'periodic')"
            )),
        }
    }
}

/// The discrete solution at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// Number of completed steps.
    pub step: usize,
    pub t: f64,
    pub cells: Vec<ConservativeState>,
}

/// h-weighted sums of the conserved fields over the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationTotals {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

pub fn conservation_totals(cells: &[ConservativeState], h: f64) -> ConservationTotals {
    let mut totals = ConservationTotals { mass: 0.0, momentum: 0.0, energy: 0.0 };
    for u in cells {
        totals.mass += u.rho;
        totals.momentum += u.momentum;
        totals.energy += u.energy;
    }
    totals.mass *= h;
    totals.momentum *= h;
    totals.energy *= h;
    totals
}

/// Upwinded entropy flux Ψ = η_L·max(u*, 0) + η_R·min(u*, 0).
pub fn entropy_flux(eta_left: f64, eta_right: f64, u_star: f64) -> f64 {
    eta_left * u_star.max(0.0) + eta_right * u_star.min(0.0)
}

/// Everything recorded about one completed step.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    /// Index of the new time level (1 after the first step).
    pub step: usize,
    /// Time after the step.
    pub t: f64,
    /// Time step that was taken.
    pub dt: f64,
    pub totals: ConservationTotals,
    /// Per-cell entropy residual Π_j for this step.
    pub pi: Vec<f64>,
    /// Σ over interfaces of (π₊ + π₋).
    pub pi_half_sum: f64,
}

/// The scalar part of a [`DiagnosticsRecord`], kept for every step of a run
/// (the Π array is retained only in snapshots to keep long runs lean).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub totals: ConservationTotals,
    pub pi_half_sum: f64,
}

impl From<&DiagnosticsRecord> for StepSummary {
    fn from(rec: &DiagnosticsRecord) -> Self {
        StepSummary {
            step: rec.step,
            t: rec.t,
            dt: rec.dt,
            totals: rec.totals,
            pi_half_sum: rec.pi_half_sum,
        }
    }
}

/// Cell data captured at a requested output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub cells: Vec<ConservativeState>,
    /// Entropy residual of the step that landed on this time; all zeros for
    /// the initial snapshot.
    pub pi: Vec<f64>,
}

/// Output of [`run`]: the final state, one summary per step, and snapshots
/// at every requested output time (the final time always included).
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_state: SolverState,
    pub summaries: Vec<StepSummary>,
    pub snapshots: Vec<Snapshot>,
}

/// Grid, gas, coefficients and boundary policy bundled for stepping.
#[derive(Debug, Clone, Copy)]
pub struct Solver {
    pub grid: Grid1D,
    pub gas: GasModel,
    pub viscosity: ViscosityParams,
    pub bc: BoundaryCondition,
    pub cfl: f64,
}

impl Solver {
    /// Largest stable time step: cfl·h/max_j(|u_j| + c_j), additionally
    /// capped by `t_remaining` so a run never overshoots its target time.
    pub fn compute_dt(&self, state: &SolverState, t_remaining: f64) -> Result<f64, SolverError> {
        assert!(
            self.cfl > 0.0 && self.cfl < 0.5,
            "cfl = {} outside the stable range (0, 0.5)",
            self.cfl
        );
        let mut max_speed = 0.0_f64;
        for (j, u) in state.cells.iter().enumerate() {
            let w = primitive_from_conservative(u, &self.gas).map_err(|source| {
                SolverError::InvalidState { cell: j, step: state.step, source }
            })?;
            let c = (self.gas.gamma() * w.p / w.rho).sqrt();
            max_speed = max_speed.max(w.u.abs() + c);
        }
        Ok((self.cfl * self.grid.h() / max_speed).min(t_remaining))
    }

    /// One forward Euler update U_j ← U_j − Δt/h·(Φ_{j+1/2} − Φ_{j−1/2}),
    /// returning the new state and the step's diagnostics.
    pub fn step(
        &self,
        state: &SolverState,
        dt: f64,
    ) -> Result<(SolverState, DiagnosticsRecord), SolverError> {
        let n = self.grid.n_cells;
        assert_eq!(state.cells.len(), n, "state does not match the grid");
        let step = state.step + 1;
        let h = self.grid.h();
        let lambda = dt / h;
        let gamma = self.gas.gamma();

        // Ghost-extended state: ext[0] and ext[n+1] are the ghosts.
        let mut ext = Vec::with_capacity(n + 2);
        ext.push(match self.bc {
            BoundaryCondition::Transmissive => state.cells[0],
            BoundaryCondition::Periodic => state.cells[n - 1],
        });
        ext.extend_from_slice(&state.cells);
        ext.push(match self.bc {
            BoundaryCondition::Transmissive => state.cells[n - 1],
            BoundaryCondition::Periodic => state.cells[0],
        });
        // Interior cell each ghost mirrors, for error context.
        let underlying = |i: usize| -> usize {
            if i == 0 {
                match self.bc {
                    BoundaryCondition::Transmissive => 0,
                    BoundaryCondition::Periodic => n - 1,
                }
            } else if i == n + 1 {
                match self.bc {
                    BoundaryCondition::Transmissive => n - 1,
                    BoundaryCondition::Periodic => 0,
                }
            } else {
                i - 1
            }
        };

        let mut prim = Vec::with_capacity(n + 2);
        let mut eta = Vec::with_capacity(n + 2);
        for (i, u) in ext.iter().enumerate() {
            let w = primitive_from_conservative(u, &self.gas).map_err(|source| {
                SolverError::InvalidState { cell: underlying(i), step: state.step, source }
            })?;
            eta.push(-w.rho * (w.p.ln() - gamma * w.rho.ln()));
            prim.push(w);
        }

        // One resolution and flux per interface; interface i sits between
        // ext[i] and ext[i+1].
        let mut fluxes = Vec::with_capacity(n + 1);
        let mut psi = Vec::with_capacity(n + 1);
        let mut pi_half_sum = 0.0;
        for i in 0..=n {
            let res = resolve_interface(&prim[i], &prim[i + 1], &self.viscosity, &self.gas)
                .map_err(|source| SolverError::InvalidState {
                    cell: underlying(i),
                    step: state.step,
                    source,
                })?;
            debug_assert!(
                res.pi_plus >= 0.0 && res.pi_minus >= 0.0,
                "entropy production went negative at interface {i}"
            );
            fluxes.push(flux_from_resolution(&ext[i], &ext[i + 1], &res));
            psi.push(entropy_flux(eta[i], eta[i + 1], res.u_star));
            pi_half_sum += res.pi_plus + res.pi_minus;
        }

        let mut cells = Vec::with_capacity(n);
        for j in 0..n {
            let u = &state.cells[j];
            let (fl, fr) = (&fluxes[j], &fluxes[j + 1]);
            cells.push(ConservativeState {
                rho: u.rho - lambda * (fr.mass - fl.mass),
                momentum: u.momentum - lambda * (fr.momentum - fl.momentum),
                energy: u.energy - lambda * (fr.energy - fl.energy),
            });
        }

        let mut pi = Vec::with_capacity(n);
        for (j, u) in cells.iter().enumerate() {
            let w = primitive_from_conservative(u, &self.gas)
                .map_err(|source| SolverError::InvalidState { cell: j, step, source })?;
            let eta_new = -w.rho * (w.p.ln() - gamma * w.rho.ln());
            pi.push(eta_new - eta[j + 1] + lambda * (psi[j + 1] - psi[j]));
        }

        let totals = conservation_totals(&cells, h);
        let t = state.t + dt;
        let record = DiagnosticsRecord { step, t, dt, totals, pi, pi_half_sum };
        Ok((SolverState { step, t, cells }, record))
    }
}

/// Builds the solver and the piecewise-constant initial state for a config.
/// The config must already be validated (the CLI layer guarantees this).
pub fn initialize(cfg: &SolverConfig) -> Result<(Solver, SolverState), SolverError> {
    cfg.validate().expect("SolverConfig must be validated before use");
    let gas = GasModel::new(cfg.gamma).expect("validated config has admissible gamma");
    let grid = Grid1D::new(cfg.n_cells, cfg.x_min, cfg.x_max);
    let solver = Solver {
        grid,
        gas,
        viscosity: ViscosityParams { alpha: cfg.alpha, beta: cfg.beta },
        bc: cfg.bc,
        cfl: cfg.cfl,
    };
    let tube = cfg.problem.shock_tube();
    let mut cells = Vec::with_capacity(grid.n_cells);
    for j in 0..grid.n_cells {
        let w = if grid.cell_center(j) < tube.x_diaphragm { tube.left } else { tube.right };
        let u = conservative_from_primitive(&w, &gas)
            .map_err(|source| SolverError::InvalidState { cell: j, step: 0, source })?;
        cells.push(u);
    }
    Ok((solver, SolverState { step: 0, t: 0.0, cells }))
}

/// Runs a configured problem to its final time, capturing snapshots at every
/// requested output time (plus the final time) and a summary of every step.
pub fn run(cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    let (solver, mut state) = initialize(cfg)?;
    let h = solver.grid.h();
    info!(
        "{} on {} cells over [{}, {}], h = {h:.6e}, t_final = {}, bc = {:?}",
        match cfg.problem {
            Problem::Sod => "sod",
            Problem::Custom(_) => "custom",
        },
        cfg.n_cells,
        cfg.x_min,
        cfg.x_max,
        cfg.t_final,
        cfg.bc
    );

    // Output schedule: requested times plus the final time, ascending, no
    // duplicates. A requested t = 0 snapshots the initial data.
    let mut times: Vec<f64> = cfg.output_times.clone();
    times.push(cfg.t_final);
    times.sort_by(|a, b| a.partial_cmp(b).expect("validated times are comparable"));
    times.dedup();
    let mut pending: VecDeque<f64> = times.into();

    let mut snapshots = Vec::new();
    let mut summaries = Vec::new();

    if pending.front() == Some(&state.t) {
        pending.pop_front();
        snapshots.push(Snapshot {
            step: 0,
            t: state.t,
            cells: state.cells.clone(),
            pi: vec![0.0; state.cells.len()],
        });
    }

    while let Some(&target) = pending.front() {
        let remaining = target - state.t;
        let dt = solver.compute_dt(&state, remaining)?;
        let landed = dt >= remaining;
        let (next, record) = solver.step(&state, dt)?;
        state = next;
        if landed {
            // Snap to the exact target so accumulated round-off in t never
            // spawns a spurious extra step.
            state.t = target;
            pending.pop_front();
            snapshots.push(Snapshot {
                step: state.step,
                t: target,
                cells: state.cells.clone(),
                pi: record.pi.clone(),
            });
        }
        debug!(
            "step {:6}  t = {:.9e}  dt = {:.9e}  mass = {:.12e}",
            record.step, state.t, record.dt, record.totals.mass
        );
        let mut summary = StepSummary::from(&record);
        summary.t = state.t;
        summaries.push(summary);
    }

    if let (Some(first), Some(last)) = (summaries.first(), summaries.last()) {
        info!(
            "finished after {} steps; mass drift = {:.3e}",
            last.step,
            (last.totals.mass - first.totals.mass).abs()
        );
    }

    Ok(RunResult { final_state: state, summaries, snapshots })
}
