use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use beamplan_cli::render::render_plan;
use beamplan_cli::RunReport;
use beamplan_core::iterative::{greedy_warm_start, IterationConfig, Optimizer};
use beamplan_core::milp::{build_full_model, emit_lp, extract_plan, MilpConfig};
use beamplan_core::model::{read_plan_csv, total_normalized_bandwidth, validate_plan, write_plan_csv};
use beamplan_core::power::{ModCodTable, PowerTables, DEFAULT_POWER_SENTINEL_W};
use beamplan_core::scenario::{
    generate_synthetic, load_scenario, save_scenario, ConstellationGeometry, SyntheticParams,
};
use beamplan_core::solver::{import_solution, solve_exact, SolveLimits, SolveStatus};
use beamplan_core::{BeamWeights, FrequencyGrid, FrequencyPlan, ObjectiveWeights, RestrictionSets, Scenario};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;

/// Frequency planning for multibeam satellite constellations.
#[derive(Parser)]
#[command(name = "beamplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scenario file.
    Generate(GenerateArgs),
    /// Derive handover and interference restrictions and store them in the scenario.
    Derive(DeriveArgs),
    /// Optimize a frequency plan.
    Optimize(OptimizeArgs),
    /// Check a plan against a scenario.
    Validate(ValidateArgs),
    /// Write the full integer model in LP format.
    EmitLp(EmitLpArgs),
    /// Draw a plan as one SVG grid per satellite.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of users to cluster into beams.
    #[arg(long, value_parser = positive)]
    users: usize,
    #[arg(long, short)]
    out: PathBuf,
    #[arg(long, default_value_t = 40)]
    n_bw: u32,
    #[arg(long, default_value_t = 8)]
    n_fr: u32,
    #[arg(long, default_value_t = 2)]
    n_p: u32,
    /// Width of one slot in Hz.
    #[arg(long, default_value_t = 25e6)]
    slot_hz: f64,
    #[arg(long, default_value_t = 7)]
    satellites: u32,
    #[arg(long, default_value_t = 8062.0)]
    altitude_km: f64,
    #[arg(long, default_value_t = 60.0)]
    horizon_min: f64,
    #[arg(long, default_value_t = 1.0)]
    step_min: f64,
    #[arg(long, default_value_t = 1.0)]
    half_cone_deg: f64,
    #[arg(long, default_value_t = 0)]
    gateways: usize,
    #[arg(long, default_value_t = -30.0, allow_negative_numbers = true)]
    lat_min: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    lat_max: f64,
    /// Also store the derived restriction sets in the file.
    #[arg(long)]
    derive: bool,
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(long, short)]
    scenario: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args, Clone, Copy)]
struct WeightArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta3: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta4: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta5: f64,
}

impl WeightArgs {
    fn weights(&self) -> ObjectiveWeights {
        ObjectiveWeights::uniform(BeamWeights {
            beta1: self.beta1,
            beta2: self.beta2,
            beta3: self.beta3,
            beta4: self.beta4,
            beta5: self.beta5,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Full,
    Iterative,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, short)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Iterative)]
    mode: Mode,
    /// Starting plan; defaults to the scenario's plan, then the greedy plan.
    #[arg(long)]
    warm_start: Option<PathBuf>,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 10)]
    n_ch: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "top-per-bw", default_value_t = 10)]
    top_per_bw: usize,
    /// Stop after this many iterations without improvement.
    #[arg(long, default_value_t = 50)]
    window: usize,
    #[arg(long, default_value_t = 10_000)]
    max_iterations: usize,
    /// Node budget per subproblem (iterative) or for the whole search (full); 0 is unlimited.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Time limit of the full-model search in seconds; 0 is unlimited.
    #[arg(long, default_value_t = 0.0)]
    max_seconds: f64,
    /// Let the full model switch beams off.
    #[arg(long)]
    activation: bool,
    /// Use an externally computed solution of the full model instead of solving.
    #[arg(long)]
    import_solution: Option<PathBuf>,
    /// MODCOD table CSV used for power figures.
    #[arg(long)]
    modcod: Option<PathBuf>,
    #[arg(long, short = 'o')]
    plan_out: PathBuf,
    #[arg(long)]
    trace_out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// Print and record wall-clock times; without it the output is reproducible.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, short)]
    plan: PathBuf,
    #[arg(long, short)]
    scenario: PathBuf,
}

#[derive(Args)]
struct EmitLpArgs {
    #[arg(long, short)]
    scenario: PathBuf,
    #[arg(long)]
    activation: bool,
    #[command(flatten)]
    weights: WeightArgs,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long, short)]
    plan: PathBuf,
    #[arg(long, short)]
    scenario: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Derive(a) => derive(a),
        Command::Optimize(a) => optimize(a),
        Command::Validate(a) => validate(a),
        Command::EmitLp(a) => emit(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn positive(text: &str) -> std::result::Result<usize, String> {
    match text.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn read_scenario(path: &Path) -> Result<Scenario> {
    load_scenario(path).with_context(|| format!("cannot load scenario {}", path.display()))
}

fn read_plan(path: &Path) -> Result<FrequencyPlan> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_plan_csv(file).with_context(|| format!("cannot read plan {}", path.display()))
}

fn write_plan(plan: &FrequencyPlan, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    write_plan_csv(plan, &mut out)?;
    out.flush()?;
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<u8> {
    let grid = FrequencyGrid::new(a.n_bw, a.n_fr, a.n_p, a.slot_hz)?;
    let geometry = ConstellationGeometry::new(a.satellites, a.altitude_km)?;
    let mut params = SyntheticParams {
        lat_min_deg: a.lat_min,
        lat_max_deg: a.lat_max,
        gateways: a.gateways,
        ..SyntheticParams::default()
    };
    params.sim.horizon_min = a.horizon_min;
    params.sim.step_min = a.step_min;
    params.sim.half_cone_deg = a.half_cone_deg;
    let mut scenario = generate_synthetic(a.seed, a.users, grid, geometry, &params)?;
    if a.derive {
        scenario.restrictions = Some(scenario.restriction_sets()?);
    }
    save_scenario(&scenario, &a.out)?;
    println!("wrote {} beams to {}", scenario.beams.len(), a.out.display());
    Ok(0)
}

fn derive(a: DeriveArgs) -> Result<u8> {
    let mut scenario = read_scenario(&a.scenario)?;
    scenario.restrictions = None;
    let sets = scenario.restriction_sets()?;
    println!("{} handover pairs, {} interference pairs", sets.intra().len(), sets.inter().len());
    scenario.restrictions = Some(sets);
    save_scenario(&scenario, &a.out)?;
    Ok(0)
}

fn power_tables(scenario: &Scenario, modcod: Option<&Path>) -> Result<PowerTables> {
    let table = match modcod {
        Some(path) => {
            ModCodTable::read_csv(File::open(path).with_context(|| format!("cannot open {}", path.display()))?)?
        }
        None => ModCodTable::dvb_s2_default(),
    };
    Ok(PowerTables::for_beams(
        &scenario.beams,
        &scenario.grid,
        &scenario.link_budget(),
        &table,
        DEFAULT_POWER_SENTINEL_W,
    )?)
}

fn optimize(a: OptimizeArgs) -> Result<u8> {
    let started = Instant::now();
    let scenario = read_scenario(&a.scenario)?;
    let restrictions = scenario.restriction_sets()?;
    let weights = a.weights.weights();
    let power = power_tables(&scenario, a.modcod.as_deref())?;
    let warm = match &a.warm_start {
        Some(path) => Some(read_plan(path)?),
        None => scenario.plan.clone(),
    };
    let bandwidth = |p: &FrequencyPlan| total_normalized_bandwidth(p, &scenario.grid, scenario.geometry.n_s);
    let mode = match a.mode {
        Mode::Full => "full",
        Mode::Iterative => "iterative",
    };
    let mut report = RunReport::new(&scenario, mode, restrictions.intra().len(), restrictions.inter().len());

    let (plan, trace) = match a.mode {
        Mode::Full => {
            let Some(plan) = solve_full(&a, &scenario, &restrictions, &weights)? else {
                return Ok(EXIT_NO_SOLUTION);
            };
            if let Some(w) = &warm {
                report.bw_warm = bandwidth(w)?;
                report.power_warm_w = power.total_power(w);
            }
            (plan, None)
        }
        Mode::Iterative => {
            let warm = warm.unwrap_or_else(|| greedy_warm_start(&scenario, &restrictions));
            let mut config = IterationConfig {
                n_ch: a.n_ch,
                top_per_bandwidth: a.top_per_bw,
                convergence_window: a.window,
                seed: a.seed,
                max_iterations: a.max_iterations,
                ..IterationConfig::default()
            };
            if let Some(n) = a.max_nodes {
                config.max_subproblem_nodes = n;
            }
            let table = weights.uses_power().then_some(&power);
            let optimizer = Optimizer::new(&scenario, &restrictions, &weights, table, &config)?;
            let state = optimizer.run(&warm)?;
            report.bw_warm = bandwidth(&warm)?;
            report.power_warm_w = power.total_power(&warm);
            report.iterations = state.iteration;
            (state.plan, Some(state.trace))
        }
    };

    let violations = validate_plan(&plan, &scenario.grid, &restrictions, &scenario.beams)?;
    if !violations.is_empty() {
        bail!("optimized plan has {} violations; first: {}", violations.len(), violations[0]);
    }
    let table = weights.uses_power().then_some(&power);
    report.objective = beamplan_core::model::objective_value(&plan, &weights, table)?;
    report.bw_final = bandwidth(&plan)?;
    report.power_final_w = power.total_power(&plan);
    report.wall_ms = started.elapsed().as_secs_f64() * 1e3;

    write_plan(&plan, &a.plan_out)?;
    if let (Some(path), Some(trace)) = (&a.trace_out, &trace) {
        let mut out = create(path)?;
        trace.write_csv(&mut out, a.timing)?;
        out.flush()?;
    }
    if let Some(path) = &a.report_out {
        let mut out = create(path)?;
        report.write_csv(&mut out, a.timing)?;
        out.flush()?;
    }
    println!("{report}");
    if a.timing {
        println!("wall time: {:.0} ms", report.wall_ms);
    }
    Ok(0)
}

/// Solves (or imports a solution of) the full model. `None` when no plan is
/// available; the reason has been printed.
fn solve_full(
    a: &OptimizeArgs,
    scenario: &Scenario,
    restrictions: &RestrictionSets,
    weights: &ObjectiveWeights,
) -> Result<Option<FrequencyPlan>> {
    let config = MilpConfig::for_grid(&scenario.grid).with_activation(a.activation);
    let model = build_full_model(scenario, restrictions, weights, &config)?;
    let solution = match &a.import_solution {
        Some(path) => {
            let (solution, violated) = import_solution(path, &model)?;
            if !violated.is_empty() {
                eprintln!("imported solution violates: {}", violated.join(", "));
                return Ok(None);
            }
            solution
        }
        None => {
            let limits =
                SolveLimits { max_nodes: a.max_nodes.unwrap_or(0), max_seconds: a.max_seconds, absolute_gap: 0.0 };
            solve_exact(&model, &limits)?
        }
    };
    match solution.status {
        SolveStatus::Infeasible => {
            eprintln!("the model is infeasible");
            return Ok(None);
        }
        SolveStatus::LimitReached => {
            eprintln!("search limit reached without a feasible plan");
            return Ok(None);
        }
        SolveStatus::Feasible if a.import_solution.is_none() => {
            eprintln!("search limit reached; plan is feasible, bound {}", solution.bound);
        }
        _ => {}
    }
    Ok(Some(extract_plan(&model, &solution, scenario, restrictions)?))
}

fn validate(a: ValidateArgs) -> Result<u8> {
    let scenario = read_scenario(&a.scenario)?;
    let plan = read_plan(&a.plan)?;
    let restrictions = scenario.restriction_sets()?;
    let violations = validate_plan(&plan, &scenario.grid, &restrictions, &scenario.beams)?;
    if violations.is_empty() {
        println!("valid: {} beams, {} active", plan.len(), plan.active_count());
        return Ok(0);
    }
    for v in &violations {
        println!("{v}");
    }
    println!("{} violations", violations.len());
    Ok(EXIT_INVALID)
}

fn emit(a: EmitLpArgs) -> Result<u8> {
    let scenario = read_scenario(&a.scenario)?;
    let restrictions = scenario.restriction_sets()?;
    let config = MilpConfig::for_grid(&scenario.grid).with_activation(a.activation);
    let model = build_full_model(&scenario, &restrictions, &a.weights.weights(), &config)?;
    let text = emit_lp(&model);
    match &a.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn render(a: RenderArgs) -> Result<u8> {
    let scenario = read_scenario(&a.scenario)?;
    let plan = read_plan(&a.plan)?;
    plan.check_total(&scenario.beams)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("cannot create {}", a.out_dir.display()))?;
    for (sat, svg) in render_plan(&plan, &scenario)? {
        let path = a.out_dir.join(format!("satellite_{sat}.svg"));
        fs::write(&path, svg).with_context(|| format!("cannot write {}", path.display()))?;
        writeln!(io::stdout(), "{}", path.display())?;
    }
    Ok(0)
}
