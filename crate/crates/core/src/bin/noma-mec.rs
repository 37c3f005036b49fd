//! `noma-mec`: solve single instances, run energy sweeps and convergence
//! traces, and compare the solvers against the grid oracle.
//!
//! Exit codes: 0 success, 1 I/O failure or failed oracle comparison,
//! 2 infeasible instance, 3 convergence failure, 64 bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use noma_mec::experiments::{self, EnergyGrid, SweepSpec};
use noma_mec::{
    grid_min_delay, solve, Error, GridSpec, HnomaMethod, RunManifest, SolverConfig, Spacing,
    System, SystemParams,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_BAD_INPUT: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "noma-mec",
    version,
    about = "Delay-minimizing NOMA-MEC offloading"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance and print the solution as JSON.
    #[command(allow_negative_numbers = true)]
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Sweep the energy budget and write a CSV plus run manifest.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        e_min: Option<f64>,
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_enum)]
        spacing: Option<SpacingArg>,
        /// Re-run from a manifest written by an earlier sweep.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run both H-NOMA solvers and write their iterates as CSV.
    #[command(allow_negative_numbers = true)]
    Trace {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the dispatcher against the brute-force grid oracle.
    #[command(allow_negative_numbers = true)]
    Compare {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Points per power axis.
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[arg(long, default_value_t = 2.0)]
        p2_multiplier: f64,
        #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
        p2_spacing: SpacingArg,
        /// Largest accepted relative gap.
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
}

/// System parameters default to N = 15, D_m = 5 and unit gains.
#[derive(Debug, Args)]
struct InstanceArgs {
    /// JSON file with n_nats, d_m, h_m_sq, h_n_sq, energy; flags override it.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long = "n", alias = "n-nats")]
    n_nats: Option<f64>,
    #[arg(long = "dm", alias = "d-m")]
    d_m: Option<f64>,
    #[arg(long = "hm2", alias = "h-m-sq")]
    h_m_sq: Option<f64>,
    #[arg(long = "hn2", alias = "h-n-sq")]
    h_n_sq: Option<f64>,
    #[arg(long)]
    energy: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialInstance {
    n_nats: Option<f64>,
    d_m: Option<f64>,
    h_m_sq: Option<f64>,
    h_n_sq: Option<f64>,
    energy: Option<f64>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Start Newton at factor * mu_lb(E) instead of the first Dinkelbach step.
    #[arg(long)]
    newton_mu0_factor: Option<f64>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, env = "NOMA_MEC_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Base name of the CSV and manifest files.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Newton,
    Dinkelbach,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<u8, Failure>;

impl InstanceArgs {
    fn load(&self) -> Result<PartialInstance, Failure> {
        let mut inst = match &self.instance {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Failure::Usage(format!("cannot read instance {}: {e}", path.display()))
                })?;
                serde_json::from_str::<PartialInstance>(&text).map_err(|e| {
                    Failure::Usage(format!("malformed instance {}: {e}", path.display()))
                })?
            }
            None => PartialInstance::default(),
        };
        inst.n_nats = self.n_nats.or(inst.n_nats);
        inst.d_m = self.d_m.or(inst.d_m);
        inst.h_m_sq = self.h_m_sq.or(inst.h_m_sq);
        inst.h_n_sq = self.h_n_sq.or(inst.h_n_sq);
        inst.energy = self.energy.or(inst.energy);
        Ok(inst)
    }

    fn params_over(&self, base: SystemParams) -> Result<(SystemParams, Option<f64>), Failure> {
        let inst = self.load()?;
        let params = SystemParams::new(
            inst.n_nats.unwrap_or(base.n_nats),
            inst.d_m.unwrap_or(base.d_m),
            inst.h_m_sq.unwrap_or(base.h_m_sq),
            inst.h_n_sq.unwrap_or(base.h_n_sq),
        )?;
        Ok((params, inst.energy))
    }

    fn params_and_energy(&self) -> Result<(SystemParams, f64), Failure> {
        let (params, energy) = self.params_over(SystemParams::reference())?;
        let energy =
            energy.ok_or_else(|| Failure::Usage("missing field `energy` (use --energy)".into()))?;
        if !(energy.is_finite() && energy >= 0.0) {
            return Err(Failure::Usage(format!(
                "field `energy` must be a finite nonnegative number, got {energy}"
            )));
        }
        Ok((params, energy))
    }
}

impl SolverArgs {
    fn config_over(&self, base: SolverConfig) -> Result<SolverConfig, Failure> {
        let cfg = SolverConfig {
            delta: self.delta.unwrap_or(base.delta),
            max_iters: self.max_iters.unwrap_or(base.max_iters),
            newton_mu0_factor: self.newton_mu0_factor.or(base.newton_mu0_factor),
            method: match self.method {
                Some(MethodArg::Newton) => HnomaMethod::Newton,
                Some(MethodArg::Dinkelbach) => HnomaMethod::Dinkelbach,
                None => base.method,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl OutputArgs {
    fn paths(&self, default_name: &str) -> Result<(PathBuf, PathBuf, String), Failure> {
        fs::create_dir_all(&self.out_dir).map_err(Error::from)?;
        let name = self.name.as_deref().unwrap_or(default_name);
        let csv_name = format!("{name}.csv");
        Ok((
            self.out_dir.join(&csv_name),
            self.out_dir.join(format!("{name}.manifest.json")),
            csv_name,
        ))
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    println!(
        "{}",
        serde_json::to_string_pretty(value).map_err(Error::from)?
    );
    Ok(())
}

fn cmd_solve(instance: &InstanceArgs, solver: &SolverArgs) -> CmdResult {
    let (params, energy) = instance.params_and_energy()?;
    let cfg = solver.config_over(SolverConfig::default())?;
    let sys = System::new(params)?;
    let solution = solve(&sys, energy, &cfg)?;
    print_json(&solution)?;
    Ok(if solution.is_feasible() {
        0
    } else {
        EXIT_INFEASIBLE
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    instance: &InstanceArgs,
    solver: &SolverArgs,
    e_min: Option<f64>,
    e_max: Option<f64>,
    points: Option<usize>,
    spacing: Option<SpacingArg>,
    manifest: Option<&Path>,
    output: &OutputArgs,
) -> CmdResult {
    let base = match manifest {
        Some(path) => Some(RunManifest::read(path)?),
        None => None,
    };
    let base_params = base
        .as_ref()
        .map_or(SystemParams::reference(), |m| m.params);
    let base_cfg = base.as_ref().map_or(SolverConfig::default(), |m| m.solver);
    let base_grid = base.as_ref().and_then(|m| m.sweep).unwrap_or_default();

    let (params, _) = instance.params_over(base_params)?;
    let cfg = solver.config_over(base_cfg)?;
    let energies = EnergyGrid {
        e_min: e_min.unwrap_or(base_grid.e_min),
        e_max: e_max.unwrap_or(base_grid.e_max),
        n_points: points.unwrap_or(base_grid.n_points),
        spacing: spacing.map_or(base_grid.spacing, Spacing::from),
    };
    let spec = SweepSpec {
        energies,
        params,
        cfg,
    };
    let rows = experiments::energy_sweep(&spec)?;

    let (csv_path, manifest_path, csv_name) = output.paths("sweep")?;
    fs::write(&csv_path, experiments::sweep_csv_string(&rows)?).map_err(Error::from)?;
    let mut m = RunManifest::new("sweep", params, cfg);
    m.sweep = Some(energies);
    m.outputs = vec![csv_name];
    m.write(&manifest_path)?;

    let losses: Vec<f64> = rows
        .iter()
        .filter(|r| r.noma_loses())
        .map(|r| r.energy)
        .collect();
    if !losses.is_empty() {
        eprintln!(
            "WARNING: NOMA delay exceeds OMA delay at {} budget(s): {:?}",
            losses.len(),
            losses
        );
    }
    println!(
        "wrote {} rows to {} (manifest {}); NOMA slower than OMA at {} point(s)",
        rows.len(),
        csv_path.display(),
        manifest_path.display(),
        losses.len()
    );
    Ok(0)
}

fn cmd_trace(instance: &InstanceArgs, solver: &SolverArgs, output: &OutputArgs) -> CmdResult {
    let (params, energy) = instance.params_and_energy()?;
    let cfg = solver.config_over(SolverConfig::default())?;
    let sys = System::new(params)?;
    let cmp = experiments::convergence_trace(&sys, energy, &cfg)?;

    let (csv_path, manifest_path, csv_name) = output.paths("trace")?;
    fs::write(&csv_path, experiments::trace_csv_string(&cmp)?).map_err(Error::from)?;
    let mut m = RunManifest::new("trace", params, cfg);
    m.energy = Some(energy);
    m.outputs = vec![csv_name];
    m.write(&manifest_path)?;

    println!(
        "dinkelbach: {} iterations, newton: {} iterations, delay {} vs {} (relative gap {:e}); wrote {}",
        cmp.dinkelbach.iterations,
        cmp.newton.iterations,
        cmp.dinkelbach.allocation.delay,
        cmp.newton.allocation.delay,
        cmp.delay_gap,
        csv_path.display()
    );
    Ok(0)
}

fn cmd_compare(
    instance: &InstanceArgs,
    solver: &SolverArgs,
    grid: GridSpec,
    tolerance: f64,
) -> CmdResult {
    let (params, energy) = instance.params_and_energy()?;
    let cfg = solver.config_over(SolverConfig::default())?;
    let sys = System::new(params)?;
    let oracle = grid_min_delay(&sys, energy, &grid)?;
    let solution = solve(&sys, energy, &cfg)?;
    let delay = solution
        .delay
        .ok_or_else(|| Failure::Check(format!("no feasible mode at E = {energy}")))?;
    let gap = (oracle.delay - delay).abs() / delay;
    let pass = gap <= tolerance;
    print_json(&json!({
        "energy": energy,
        "regime": solution.regime,
        "solver": { "mode": solution.best_mode, "delay": delay, "mu_star": solution.mu_star },
        "oracle": oracle,
        "grid": grid,
        "relative_gap": gap,
        "tolerance": tolerance,
        "pass": pass,
    }))?;
    if pass {
        Ok(0)
    } else {
        Err(Failure::Check(format!(
            "relative gap {gap:e} exceeds {tolerance:e}"
        )))
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Solve { instance, solver } => cmd_solve(&instance, &solver),
        Command::Sweep {
            instance,
            solver,
            e_min,
            e_max,
            points,
            spacing,
            manifest,
            output,
        } => cmd_sweep(
            &instance,
            &solver,
            e_min,
            e_max,
            points,
            spacing,
            manifest.as_deref(),
            &output,
        ),
        Command::Trace {
            instance,
            solver,
            output,
        } => cmd_trace(&instance, &solver, &output),
        Command::Compare {
            instance,
            solver,
            grid,
            p2_multiplier,
            p2_spacing,
            tolerance,
        } => {
            let spec = GridSpec {
                p1_points: grid,
                p2_points: grid,
                p2_max_multiplier: p2_multiplier,
                p2_spacing: p2_spacing.into(),
            };
            cmd_compare(&instance, &solver, spec, tolerance)
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Infeasible { .. } | Error::EmptyGrid { .. } => EXIT_INFEASIBLE,
        Error::Convergence { .. } => EXIT_NO_CONVERGENCE,
        Error::Io(_) | Error::Csv(_) => EXIT_FAILURE,
        Error::InvalidParam { .. }
        | Error::Range { .. }
        | Error::Domain { .. }
        | Error::Regime { .. }
        | Error::NewtonStart { .. }
        | Error::Json(_) => EXIT_BAD_INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Lib(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
