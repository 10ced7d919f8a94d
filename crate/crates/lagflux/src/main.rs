//! Command-line front end: single shock-tube runs and grid-convergence
//! studies, with CSV snapshots and optional SVG plots.
//!
//! Exit codes: 0 success, 2 usage error, 3 non-physical state or failed
//! solve, 4 I/O error. Verbosity is controlled by `LAGFLUX_LOG`
//! (error|warn|info|debug; default warn).

use clap::{Args, Parser, Subcommand};
use lagflux::config::{self, ConfigError, Overrides, SolverConfig};
use lagflux::euler::{primitive_from_conservative, EulerError, GasModel, PrimitiveState};
use lagflux::output::{self, ConvergenceRow, OutputError};
use lagflux::plot;
use lagflux::riemann::{self, L1Errors, RiemannError};
use lagflux::solver::{self, BoundaryCondition, Grid1D, SolverError};
use log::warn;
use std::path::{Path, PathBuf};

const EXIT_USAGE: i32 = 2;
const EXIT_INVALID_STATE: i32 = 3;
const EXIT_IO: i32 = 4;

#[derive(Parser)]
#[command(name = "lagflux", version, about = "1D compressible-flow solver with entropy diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one shock tube and write snapshot CSVs (plus optional SVG plots).
    Run(RunArgs),
    /// Solve the same problem on several grids and tabulate L1 errors.
    Convergence(ConvergenceArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Initial condition: 'sod', or 'custom' with states from the config file.
    #[arg(long)]
    problem: Option<String>,
    /// Left edge of the domain.
    #[arg(long)]
    x_min: Option<f64>,
    /// Right edge of the domain.
    #[arg(long)]
    x_max: Option<f64>,
    /// Adiabatic exponent, in (1, 3].
    #[arg(long)]
    gamma: Option<f64>,
    /// Acoustic pseudo-viscosity coefficient (>= 0).
    #[arg(long)]
    alpha: Option<f64>,
    /// Quadratic pseudo-viscosity coefficient (>= 0); defaults to (gamma+1)/2.
    #[arg(long)]
    beta: Option<f64>,
    /// CFL number, in (0, 0.5).
    #[arg(long)]
    cfl: Option<f64>,
    /// Physical time to advance to.
    #[arg(long)]
    t_final: Option<f64>,
    /// Boundary condition: 'transmissive' or 'periodic'.
    #[arg(long)]
    bc: Option<String>,
    /// Flat `key = value` config file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also render SVG plots of each snapshot.
    #[arg(long)]
    emit_plots: bool,
    /// Attach exact-solution columns to snapshots and error reports.
    #[arg(long)]
    with_reference: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of grid cells.
    #[arg(long)]
    n_cells: Option<usize>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated list of cell counts (default 100,400,1600).
    #[arg(long, value_delimiter = ',')]
    n_cells: Option<Vec<usize>>,
}

/// A terminal failure: what to tell the user and which exit code to use.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    /// Renders the full cause chain, skipping fragments a higher-level
    /// message already embeds.
    fn from_error(code: i32, err: &dyn std::error::Error) -> Self {
        let mut message = err.to_string();
        let mut cause = err.source();
        while let Some(c) = cause {
            let text = c.to_string();
            if !message.contains(&text) {
                message.push_str(": ");
                message.push_str(&text);
            }
            cause = c.source();
        }
        Failure { code, message }
    }
}

impl From<ConfigError> for Failure {
    fn from(err: ConfigError) -> Self {
        let code = match &err {
            ConfigError::Usage(_) => EXIT_USAGE,
            ConfigError::Io { .. } => EXIT_IO,
        };
        Failure::from_error(code, &err)
    }
}

impl From<SolverError> for Failure {
    fn from(err: SolverError) -> Self {
        Failure::from_error(EXIT_INVALID_STATE, &err)
    }
}

impl From<RiemannError> for Failure {
    fn from(err: RiemannError) -> Self {
        Failure::from_error(EXIT_INVALID_STATE, &err)
    }
}

impl From<EulerError> for Failure {
    fn from(err: EulerError) -> Self {
        Failure::from_error(EXIT_INVALID_STATE, &err)
    }
}

impl From<OutputError> for Failure {
    fn from(err: OutputError) -> Self {
        let code = match &err {
            OutputError::Io { .. } | OutputError::Parse { .. } => EXIT_IO,
            OutputError::InvalidSnapshot(_) => EXIT_INVALID_STATE,
        };
        Failure::from_error(code, &err)
    }
}

fn io_failure(path: &Path, source: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("cannot write {}: {source}", path.display()),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LAGFLUX_LOG", "warn"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };

    let outcome = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Convergence(args) => convergence_command(args),
    };
    if let Err(failure) = outcome {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

/// Converts the flag set into one override layer (Nones where flags are
/// absent), rejecting malformed enum-like values.
fn cli_overrides(common: &CommonArgs) -> Result<Overrides, Failure> {
    let bc = match &common.bc {
        None => None,
        Some(text) => Some(text.parse::<BoundaryCondition>().map_err(Failure::usage)?),
    };
    Ok(Overrides {
        problem: common.problem.clone(),
        x_min: common.x_min,
        x_max: common.x_max,
        gamma: common.gamma,
        alpha: common.alpha,
        beta: common.beta,
        cfl: common.cfl,
        t_final: common.t_final,
        bc,
        output_path: common.output.clone(),
        emit_plots: common.emit_plots.then_some(true),
        with_reference: common.with_reference.then_some(true),
        ..Overrides::default()
    })
}

/// CLI flags over config file over built-in defaults.
fn resolve_config(common: &CommonArgs, cli: Overrides) -> Result<SolverConfig, Failure> {
    let file = match &common.config {
        Some(path) => config::load_config_file(path)?,
        None => Overrides::default(),
    };
    Ok(cli.over(file).resolve()?)
}

/// Final-time L1 errors of a cell array against the exact profile.
fn errors_against_reference(
    cells: &[lagflux::euler::ConservativeState],
    reference: &[PrimitiveState],
    gas: &GasModel,
    h: f64,
) -> Result<L1Errors, Failure> {
    let numerical = cells
        .iter()
        .map(|c| primitive_from_conservative(c, gas))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(riemann::l1_errors(&numerical, reference, h))
}

fn run_command(args: RunArgs) -> Result<(), Failure> {
    let mut cli = cli_overrides(&args.common)?;
    cli.n_cells = args.n_cells;
    let cfg = resolve_config(&args.common, cli)?;

    std::fs::create_dir_all(&cfg.output_path).map_err(|e| io_failure(&cfg.output_path, e))?;

    let result = solver::run(&cfg)?;

    let grid = Grid1D::new(cfg.n_cells, cfg.x_min, cfg.x_max);
    let centers = grid.cell_centers();
    let gas = GasModel::new(cfg.gamma).expect("gamma was validated by resolve");
    let tube = cfg.problem.shock_tube();

    for snap in &result.snapshots {
        let reference = if cfg.with_reference {
            Some(riemann::reference_profile(tube.left, tube.right, tube.x_diaphragm, gas, &centers, snap.t)?)
        } else {
            None
        };
        let path = cfg.output_path.join(format!("snapshot_t{:.6}.csv", snap.t));
        output::write_snapshot_csv(&path, &centers, &snap.cells, &snap.pi, &gas, reference.as_deref())?;
        println!("wrote {}", path.display());

        if cfg.emit_plots {
            let table = output::read_numeric_csv(&path)?;
            let prefix = path.with_extension("");
            for plot_path in plot::emit_snapshot_plots(&prefix, &table)? {
                println!("wrote {}", plot_path.display());
            }
        }
    }

    let h = grid.h();
    let (_, initial) = solver::initialize(&cfg)?;
    let start = solver::conservation_totals(&initial.cells, h);
    let end = solver::conservation_totals(&result.final_state.cells, h);
    println!("steps: {}", result.final_state.step);
    // With transmissive boundaries these changes include physical
    // through-flux; with periodic boundaries they are pure solver drift.
    println!(
        "change in totals: mass={:.3e} momentum={:.3e} energy={:.3e}",
        end.mass - start.mass,
        end.momentum - start.momentum,
        end.energy - start.energy
    );
    if cfg.with_reference {
        let reference = riemann::reference_profile(
            tube.left,
            tube.right,
            tube.x_diaphragm,
            gas,
            &centers,
            result.final_state.t,
        )?;
        let errs = errors_against_reference(&result.final_state.cells, &reference, &gas, h)?;
        println!(
            "L1 error vs exact solution: rho={:.6e} u={:.6e} p={:.6e}",
            errs.rho, errs.u, errs.p
        );
    }
    Ok(())
}

fn convergence_command(args: ConvergenceArgs) -> Result<(), Failure> {
    let cli = cli_overrides(&args.common)?;
    let base = resolve_config(&args.common, cli)?;
    if base.emit_plots {
        warn!("--emit-plots has no effect on convergence studies");
    }

    let mut ns = args.n_cells.unwrap_or_else(|| vec![100, 400, 1600]);
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Failure::usage("--n-cells needs at least one cell count"));
    }
    if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
        return Err(Failure::usage(format!("n_cells must be at least 2, got {bad}")));
    }

    let gas = GasModel::new(base.gamma).expect("gamma was validated by resolve");
    let tube = base.problem.shock_tube();

    // The runs are independent, so solve them concurrently; results keep the
    // (sorted) input order regardless of which thread finishes first.
    let case_results: Vec<Result<(usize, f64, L1Errors), Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| {
                let cfg = SolverConfig { n_cells: n, ..base.clone() };
                let gas = &gas;
                let tube = &tube;
                scope.spawn(move || {
                    let result = solver::run(&cfg)?;
                    let grid = Grid1D::new(cfg.n_cells, cfg.x_min, cfg.x_max);
                    let centers = grid.cell_centers();
                    let reference = riemann::reference_profile(
                        tube.left,
                        tube.right,
                        tube.x_diaphragm,
                        *gas,
                        &centers,
                        result.final_state.t,
                    )?;
                    let errs =
                        errors_against_reference(&result.final_state.cells, &reference, gas, grid.h())?;
                    Ok((n, grid.h(), errs))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("a solver thread panicked"))
            .collect()
    });

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for case in case_results {
        let (n_cells, h, errs) = case?;
        rows.push(ConvergenceRow {
            n_cells,
            h,
            err_rho_l1: errs.rho,
            err_u_l1: errs.u,
            err_p_l1: errs.p,
            observed_order: None,
        });
    }
    for i in 1..rows.len() {
        rows[i].observed_order =
            output::observed_order(rows[i - 1].err_rho_l1, rows[i - 1].h, rows[i].err_rho_l1, rows[i].h);
    }

    std::fs::create_dir_all(&base.output_path).map_err(|e| io_failure(&base.output_path, e))?;
    let path = base.output_path.join("convergence.csv");
    output::write_convergence_csv(&path, &rows)?;
    println!("wrote {}", path.display());
    for row in &rows {
        let order = row
            .observed_order
            .map_or_else(|| "     -".to_string(), |o| format!("{o:.4}"));
        println!(
            "n={:>6}  h={:.6e}  err_rho_l1={:.6e}  err_u_l1={:.6e}  err_p_l1={:.6e}  order={order}",
            row.n_cells, row.h, row.err_rho_l1, row.err_u_l1, row.err_p_l1
        );
    }
    Ok(())
}
