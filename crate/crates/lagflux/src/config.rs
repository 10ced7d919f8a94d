//! Run configuration: problem selection, numerical parameters, defaults, and
//! the flat `key = value` config-file format.
//!
//! Precedence is command line over config file over built-in defaults; the
//! [`Overrides`] type carries "explicitly set" information so that merging
//! works field by field. [`Overrides::resolve`] applies the layered values to
//! the defaults and validates the result.

use crate::euler::PrimitiveState;
use crate::solver::BoundaryCondition;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Malformed or out-of-range configuration (maps to the CLI usage error).
    #[error("{0}")]
    Usage(String),
    /// The config file could not be read.
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn usage(msg: impl Into<String>) -> ConfigError {
    ConfigError::Usage(msg.into())
}

/// A diaphragm problem: two constant states meeting at `x_diaphragm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockTube {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    pub x_diaphragm: f64,
}

impl ShockTube {
    /// The classic Sod tube: (1, 0, 1) | (0.125, 0, 0.1) split at x = 0.5.
    pub fn sod() -> Self {
        ShockTube {
            left: PrimitiveState { rho: 1.0, u: 0.0, p: 1.0 },
            right: PrimitiveState { rho: 0.125, u: 0.0, p: 0.1 },
            x_diaphragm: 0.5,
        }
    }
}

/// Initial-condition selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Problem {
    Sod,
    Custom(ShockTube),
}

impl Problem {
    pub fn shock_tube(&self) -> ShockTube {
        match self {
            Problem::Sod => ShockTube::sod(),
            Problem::Custom(tube) => *tube,
        }
    }
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub problem: Problem,
    pub n_cells: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub gamma: f64,
    /// Acoustic pseudo-viscosity coefficient α.
    pub alpha: f64,
    /// Quadratic pseudo-viscosity coefficient β; defaults to (γ+1)/2.
    pub beta: f64,
    pub cfl: f64,
    pub t_final: f64,
    pub bc: BoundaryCondition,
    pub output_path: PathBuf,
    /// Extra snapshot times; the final time is always snapshotted.
    pub output_times: Vec<f64>,
    pub emit_plots: bool,
    /// Attach the exact-solution columns to snapshots.
    pub with_reference: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            problem: Problem::Sod,
            n_cells: 400,
            x_min: 0.0,
            x_max: 1.0,
            gamma: 1.4,
            alpha: 0.5,
            beta: 1.2,
            cfl: 0.25,
            t_final: 0.23,
            bc: BoundaryCondition::Transmissive,
            output_path: PathBuf::from("out"),
            output_times: Vec::new(),
            emit_plots: false,
            with_reference: false,
        }
    }
}

impl SolverConfig {
    /// Rejects configurations the solver cannot run: out-of-range numerics,
    /// degenerate domains, non-physical initial states.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.gamma > 1.0 && self.gamma <= 3.0) {
            return Err(usage(format!("gamma = {} outside (1, 3]", self.gamma)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(usage(format!("alpha = {} must be a finite value >= 0", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(usage(format!("beta = {} must be a finite value >= 0", self.beta)));
        }
        if !(self.cfl > 0.0 && self.cfl < 0.5) {
            return Err(usage(format!("cfl = {} outside the stable range (0, 0.5)", self.cfl)));
        }
        if self.n_cells < 2 {
            return Err(usage(format!("n_cells = {} (need at least 2)", self.n_cells)));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(usage(format!("domain [{}, {}] is degenerate", self.x_min, self.x_max)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(usage(format!("t_final = {} must be a finite value >= 0", self.t_final)));
        }
        for &t in &self.output_times {
            if !(t >= 0.0 && t <= self.t_final) {
                return Err(usage(format!(
                    "output time {t} outside the run interval [0, {}]",
                    self.t_final
                )));
            }
        }
        let tube = self.problem.shock_tube();
        for (side, w) in [("left", tube.left), ("right", tube.right)] {
            if !(w.rho > 0.0 && w.rho.is_finite()) {
                return Err(usage(format!("{side} state density {} must be positive", w.rho)));
            }
            if !(w.p > 0.0 && w.p.is_finite()) {
                return Err(usage(format!("{side} state pressure {} must be positive", w.p)));
            }
            if !w.u.is_finite() {
                return Err(usage(format!("{side} state velocity {} must be finite", w.u)));
            }
        }
        if !(tube.x_diaphragm > self.x_min && tube.x_diaphragm < self.x_max) {
            return Err(usage(format!(
                "diaphragm at {} outside the domain ({}, {})",
                tube.x_diaphragm, self.x_min, self.x_max
            )));
        }
        Ok(())
    }
}

/// Values explicitly set on one configuration layer (CLI or file). `None`
/// means "not set here; defer to the layer below".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub problem: Option<String>,
    pub n_cells: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    pub bc: Option<BoundaryCondition>,
    pub output_path: Option<PathBuf>,
    pub output_times: Option<Vec<f64>>,
    pub emit_plots: Option<bool>,
    pub with_reference: Option<bool>,
    // Custom-problem definition (config-file keys).
    pub rho_left: Option<f64>,
    pub u_left: Option<f64>,
    pub p_left: Option<f64>,
    pub rho_right: Option<f64>,
    pub u_right: Option<f64>,
    pub p_right: Option<f64>,
    pub x_diaphragm: Option<f64>,
}

impl Overrides {
    /// Layers `self` on top of `base`: explicitly set values win.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            problem: self.problem.or(base.problem),
            n_cells: self.n_cells.or(base.n_cells),
            x_min: self.x_min.or(base.x_min),
            x_max: self.x_max.or(base.x_max),
            gamma: self.gamma.or(base.gamma),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            cfl: self.cfl.or(base.cfl),
            t_final: self.t_final.or(base.t_final),
            bc: self.bc.or(base.bc),
            output_path: self.output_path.or(base.output_path),
            output_times: self.output_times.or(base.output_times),
            emit_plots: self.emit_plots.or(base.emit_plots),
            with_reference: self.with_reference.or(base.with_reference),
            rho_left: self.rho_left.or(base.rho_left),
            u_left: self.u_left.or(base.u_left),
            p_left: self.p_left.or(base.p_left),
            rho_right: self.rho_right.or(base.rho_right),
            u_right: self.u_right.or(base.u_right),
            p_right: self.p_right.or(base.p_right),
            x_diaphragm: self.x_diaphragm.or(base.x_diaphragm),
        }
    }

    /// Applies the layered overrides to the defaults and validates.
    pub fn resolve(self) -> Result<SolverConfig, ConfigError> {
        let mut cfg = SolverConfig::default();
        if let Some(v) = self.n_cells {
            cfg.n_cells = v;
        }
        if let Some(v) = self.x_min {
            cfg.x_min = v;
        }
        if let Some(v) = self.x_max {
            cfg.x_max = v;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        // β tracks γ unless the user pins it.
        cfg.beta = match self.beta {
            Some(v) => v,
            None => 0.5 * (cfg.gamma + 1.0),
        };
        if let Some(v) = self.cfl {
            cfg.cfl = v;
        }
        if let Some(v) = self.t_final {
            cfg.t_final = v;
        }
        if let Some(v) = self.bc {
            cfg.bc = v;
        }
        if let Some(v) = self.output_path {
            cfg.output_path = v;
        }
        if let Some(v) = self.output_times {
            cfg.output_times = v;
        }
        if let Some(v) = self.emit_plots {
            cfg.emit_plots = v;
        }
        if let Some(v) = self.with_reference {
            cfg.with_reference = v;
        }

        let custom_keys = [
            ("rho_left", self.rho_left.is_some()),
            ("u_left", self.u_left.is_some()),
            ("p_left", self.p_left.is_some()),
            ("rho_right", self.rho_right.is_some()),
            ("u_right", self.u_right.is_some()),
            ("p_right", self.p_right.is_some()),
            ("x_diaphragm", self.x_diaphragm.is_some()),
        ];
        cfg.problem = match self.problem.as_deref() {
            None | Some("sod") => {
                if let Some((key, _)) = custom_keys.iter().find(|(_, set)| *set) {
                    return Err(usage(format!(
                        "'{key}' is only meaningful with problem = custom"
                    )));
                }
                Problem::Sod
            }
            Some("custom") => {
                let state = |which: &str,
                             rho: Option<f64>,
                             u: Option<f64>,
                             p: Option<f64>|
                 -> Result<PrimitiveState, ConfigError> {
                    Ok(PrimitiveState {
                        rho: rho.ok_or_else(|| usage(format!("problem = custom needs rho_{which}")))?,
                        u: u.ok_or_else(|| usage(format!("problem = custom needs u_{which}")))?,
                        p: p.ok_or_else(|| usage(format!("problem = custom needs p_{which}")))?,
                    })
                };
                Problem::Custom(ShockTube {
                    left: state("left", self.rho_left, self.u_left, self.p_left)?,
                    right: state("right", self.rho_right, self.u_right, self.p_right)?,
                    x_diaphragm: self
                        .x_diaphragm
                        .unwrap_or(0.5 * (cfg.x_min + cfg.x_max)),
                })
            }
            Some(other) => {
                return Err(usage(format!(
                    "unknown problem '{other}' (expected 'sod' or 'custom')"
                )))
            }
        };

        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses the flat config-file format: one `key = value` per line, blank
/// lines and `#` comments ignored, later duplicates winning.
pub fn parse_config_text(text: &str) -> Result<Overrides, ConfigError> {
    let mut ovr = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {line_no}: expected 'key = value'")))?;
        let key = key.trim();
        let value = value.trim();

        let bad = |what: &str| usage(format!("config line {line_no}: bad {what} '{value}'"));
        let parse_f64 = || value.parse::<f64>().map_err(|_| bad("number"));
        let parse_bool = || match value {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(bad("boolean")),
        };

        match key {
            "problem" => ovr.problem = Some(value.to_string()),
            "n_cells" => ovr.n_cells = Some(value.parse().map_err(|_| bad("cell count"))?),
            "x_min" => ovr.x_min = Some(parse_f64()?),
            "x_max" => ovr.x_max = Some(parse_f64()?),
            "gamma" => ovr.gamma = Some(parse_f64()?),
            "alpha" => ovr.alpha = Some(parse_f64()?),
            "beta" => ovr.beta = Some(parse_f64()?),
            "cfl" => ovr.cfl = Some(parse_f64()?),
            "t_final" => ovr.t_final = Some(parse_f64()?),
            "bc" => ovr.bc = Some(value.parse().map_err(ConfigError::Usage)?),
            "output" => ovr.output_path = Some(PathBuf::from(value)),
            "output_times" => {
                let times = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|_| bad("time list"))?;
                ovr.output_times = Some(times);
            }
            "emit_plots" => ovr.emit_plots = Some(parse_bool()?),
            "with_reference" => ovr.with_reference = Some(parse_bool()?),
            "rho_left" => ovr.rho_left = Some(parse_f64()?),
            "u_left" => ovr.u_left = Some(parse_f64()?),
            "p_left" => ovr.p_left = Some(parse_f64()?),
            "rho_right" => ovr.rho_right = Some(parse_f64()?),
            "u_right" => ovr.u_right = Some(parse_f64()?),
            "p_right" => ovr.p_right = Some(parse_f64()?),
            "x_diaphragm" => ovr.x_diaphragm = Some(parse_f64()?),
            other => {
                return Err(usage(format!("config line {line_no}: unknown key '{other}'")));
            }
        }
    }
    Ok(ovr)
}

/// Reads and parses a config file.
pub fn load_config_file(path: &Path) -> Result<Overrides, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_text(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_to_the_canonical_sod_setup() {
        let cfg = Overrides::default().resolve().unwrap();
        assert_eq!(cfg.problem, Problem::Sod);
        assert_eq!(cfg.gamma, 1.4);
        assert_eq!(cfg.alpha, 0.5);
        assert_eq!(cfg.beta, 1.2);
        assert_eq!(cfg.cfl, 0.25);
        assert_eq!(cfg.t_final, 0.23);
        assert_eq!((cfg.x_min, cfg.x_max), (0.0, 1.0));
        assert_eq!(cfg.bc, BoundaryCondition::Transmissive);
        assert_eq!(cfg.problem.shock_tube().x_diaphragm, 0.5);
    }

    #[test]
    fn beta_defaults_to_half_gamma_plus_one() {
        let cfg = Overrides { gamma: Some(2.0), ..Default::default() }.resolve().unwrap();
        assert_eq!(cfg.beta, 1.5);
        let pinned = Overrides { gamma: Some(2.0), beta: Some(0.7), ..Default::default() }
            .resolve()
            .unwrap();
        assert_eq!(pinned.beta, 0.7);
    }

    #[test]
    fn layering_prefers_the_upper_layer_per_field() {
        let file = Overrides {
            n_cells: Some(100),
            cfl: Some(0.4),
            t_final: Some(0.1),
            ..Default::default()
        };
        let cli = Overrides { n_cells: Some(250), ..Default::default() };
        let merged = cli.over(file);
        assert_eq!(merged.n_cells, Some(250));
        assert_eq!(merged.cfl, Some(0.4));
        assert_eq!(merged.t_final, Some(0.1));
    }

    #[test]
    fn config_text_round_trips_keys_comments_and_blanks() {
        let text = "\n\
            # canonical shock tube, slightly coarser\n\
            n_cells = 200\n\
            cfl = 0.3   # still stable\n\
            bc = periodic\n\
            output_times = 0.05, 0.1\n\
            emit_plots = true\n";
        let ovr = parse_config_text(text).unwrap();
        assert_eq!(ovr.n_cells, Some(200));
        assert_eq!(ovr.cfl, Some(0.3));
        assert_eq!(ovr.bc, Some(BoundaryCondition::Periodic));
        assert_eq!(ovr.output_times, Some(vec![0.05, 0.1]));
        assert_eq!(ovr.emit_plots, Some(true));
    }

    #[test]
    fn duplicate_keys_keep_the_last_value() {
        let ovr = parse_config_text("cfl = 0.1\ncfl = 0.2\n").unwrap();
        assert_eq!(ovr.cfl, Some(0.2));
    }

    #[test]
    fn unknown_keys_and_malformed_lines_are_usage_errors() {
        assert!(matches!(parse_config_text("nx = 7"), Err(ConfigError::Usage(_))));
        assert!(matches!(parse_config_text("n_cells 7"), Err(ConfigError::Usage(_))));
        assert!(matches!(parse_config_text("cfl = fast"), Err(ConfigError::Usage(_))));
        assert!(matches!(parse_config_text("emit_plots = yes"), Err(ConfigError::Usage(_))));
        assert!(matches!(parse_config_text("bc = reflective"), Err(ConfigError::Usage(_))));
    }

    #[test]
    fn out_of_range_values_fail_validation() {
        let bad = [
            Overrides { cfl: Some(0.6), ..Default::default() },
            Overrides { cfl: Some(0.0), ..Default::default() },
            Overrides { gamma: Some(1.0), ..Default::default() },
            Overrides { gamma: Some(3.2), ..Default::default() },
            Overrides { alpha: Some(-0.1), ..Default::default() },
            Overrides { n_cells: Some(1), ..Default::default() },
            Overrides { x_min: Some(2.0), x_max: Some(1.0), ..Default::default() },
            Overrides { t_final: Some(-0.1), ..Default::default() },
            Overrides { output_times: Some(vec![0.5]), t_final: Some(0.2), ..Default::default() },
        ];
        for ovr in bad {
            assert!(
                matches!(ovr.clone().resolve(), Err(ConfigError::Usage(_))),
                "expected usage error for {ovr:?}"
            );
        }
    }

    #[test]
    fn sod_outside_its_domain_is_rejected() {
        let ovr = Overrides { x_min: Some(2.0), x_max: Some(3.0), ..Default::default() };
        assert!(matches!(ovr.resolve(), Err(ConfigError::Usage(_))));
    }

    #[test]
    fn custom_problem_requires_all_six_state_values() {
        let incomplete = Overrides {
            problem: Some("custom".into()),
            rho_left: Some(1.0),
            u_left: Some(0.0),
            p_left: Some(1.0),
            ..Default::default()
        };
        assert!(matches!(incomplete.resolve(), Err(ConfigError::Usage(_))));

        let complete = Overrides {
            problem: Some("custom".into()),
            rho_left: Some(1.0),
            u_left: Some(0.0),
            p_left: Some(1.0),
            rho_right: Some(0.5),
            u_right: Some(0.0),
            p_right: Some(0.5),
            ..Default::default()
        };
        let cfg = complete.resolve().unwrap();
        match cfg.problem {
            Problem::Custom(tube) => {
                assert_eq!(tube.x_diaphragm, 0.5, "defaults to the domain midpoint");
                assert_eq!(tube.right.rho, 0.5);
            }
            other => panic!("expected a custom problem, got {other:?}"),
        }
    }

    #[test]
    fn custom_state_keys_without_custom_problem_are_rejected() {
        let ovr = Overrides { rho_left: Some(2.0), ..Default::default() };
        assert!(matches!(ovr.resolve(), Err(ConfigError::Usage(_))));
    }

    #[test]
    fn custom_problem_with_non_physical_state_is_rejected() {
        let ovr = Overrides {
            problem: Some("custom".into()),
            rho_left: Some(-1.0),
            u_left: Some(0.0),
            p_left: Some(1.0),
            rho_right: Some(0.5),
            u_right: Some(0.0),
            p_right: Some(0.5),
            ..Default::default()
        };
        assert!(matches!(ovr.resolve(), Err(ConfigError::Usage(_))));
    }

    #[test]
    fn missing_config_file_is_an_io_error() {
        let err = load_config_file(Path::new("/nonexistent/lagflux.conf")).unwrap_err();
        assert!(matches!(err, ConfigError::Io { .. }));
    }
}
