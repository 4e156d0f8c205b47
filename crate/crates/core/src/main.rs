use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multirrt::bench::{metrics_csv, run_bench, timing_csv};
use multirrt::dynamics::{
    curvature_as_degrees, gamma_max, max_total_thrust, pitch_angle, turning_radius, UavParams,
};
use multirrt::error::DynamicsError;
use multirrt::pipeline::{per_path_summary, run_pipeline, PipelineOptions, ResultFile};
use multirrt::scenario::{PlannerSection, ScenarioError, ScenarioFile};
use multirrt::svg;

/// Environment variable overriding the default output directory.
const OUT_DIR_ENV: &str = "MULTIRRT_OUT_DIR";

const EXIT_FAILURE: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "multirrt", version, about = "Multi-goal RRT planner for cooperative UAV missions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan, reduce and smooth paths for every goal of a scenario.
    Plan {
        scenario: PathBuf,
        /// Result file (default: <out dir>/<scenario>.result.json).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Overrides the scenario's planner seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Embed the search tree in the result (for plotting).
        #[arg(long)]
        tree: bool,
    },
    /// Report the turning limits implied by the UAV parameters.
    Derive(DeriveArgs),
    /// Run seeded trials and write per-trial metrics with summary statistics.
    Bench {
        scenario: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// First seed; trial i uses base + i.
        #[arg(long, default_value_t = 0)]
        base_seed: u64,
        /// Run trials concurrently.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Render a result file as SVG.
    Plot {
        result: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Recompute metrics from a result file and check them against the stored values.
    Metrics { result: PathBuf },
}

#[derive(Args)]
struct DeriveArgs {
    /// Take UAV parameters (and the configured angle bound) from a scenario file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    gravity: Option<f64>,
    #[arg(long)]
    forward_speed: Option<f64>,
    #[arg(long)]
    thrust_coeff: Option<f64>,
    #[arg(long)]
    friction_coeff: Option<f64>,
    #[arg(long)]
    max_motor_speed: Option<f64>,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        Self::new(EXIT_INVALID, e.to_string())
    }
}

fn out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    name.strip_suffix(".json").unwrap_or(&name).to_string()
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::new(EXIT_FAILURE, format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::new(EXIT_FAILURE, format!("{}: {e}", path.display())))
}

fn load_result(path: &Path) -> Result<ResultFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_INVALID, format!("{}: {e}", path.display())))?;
    ResultFile::from_json(&text).map_err(|e| {
        CliError::new(EXIT_INVALID, format!("invalid result {}: {e}", path.display()))
    })
}

fn cmd_plan(
    scenario_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    tree: bool,
) -> Result<u8, CliError> {
    let scenario = ScenarioFile::load(scenario_path)?;
    let output = run_pipeline(&scenario, PipelineOptions { seed, keep_tree: tree })
        .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
    let out = out.unwrap_or_else(|| {
        out_dir(None).join(format!("{}.result.json", stem(scenario_path)))
    });
    write(&out, &output.result.to_json())?;
    let timing_path = out.with_extension("timing.json");
    write(
        &timing_path,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&output.timing).expect("timing serializes")
        ),
    )?;

    let r = &output.result;
    let reached = r.reached().count();
    println!(
        "reached {reached}/{} goals in {} iterations ({} tree nodes), F_T = {:.4} s",
        r.goals.len(),
        r.iterations_used,
        r.tree_nodes,
        output.timing.plan
    );
    if let Some(m) = r.metrics.smoothed {
        println!("smoothed: F_L = {:.3} m, F_S = {:.4} rad", m.f_l, m.f_s);
    }
    println!("wrote {}", out.display());
    Ok(if r.all_reached() { 0 } else { EXIT_PARTIAL })
}

fn cmd_derive(args: DeriveArgs) -> Result<u8, CliError> {
    let (mut params, planner) = match &args.scenario {
        Some(path) => {
            let s = ScenarioFile::load(path)?;
            (s.uav, s.planner)
        }
        None => (UavParams::default(), PlannerSection::default()),
    };
    let overrides = [
        (&mut params.mass, args.mass),
        (&mut params.gravity, args.gravity),
        (&mut params.forward_speed, args.forward_speed),
        (&mut params.thrust_coeff, args.thrust_coeff),
        (&mut params.friction_coeff, args.friction_coeff),
        (&mut params.max_motor_speed, args.max_motor_speed),
    ];
    for (field, value) in overrides {
        if let Some(v) = value {
            *field = v;
        }
    }
    params
        .validate()
        .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))?;

    let f_max = max_total_thrust(&params);
    println!("max total thrust f_Tmax      = {f_max:.4} N");
    println!("level-flight thrust          = {:.4} N", params.level_flight_thrust_sq().sqrt());
    println!("trim pitch theta             = {:.6e} rad", pitch_angle(&params));
    let gamma = match gamma_max(&params) {
        Ok(g) => g,
        Err(e @ DynamicsError::InsufficientThrust { .. }) => {
            return Err(CliError::new(
                EXIT_INVALID,
                format!("{e}\nfull thrust cannot hold altitude at this speed, so no turn is possible"),
            ));
        }
        Err(e) => return Err(CliError::new(EXIT_INVALID, e.to_string())),
    };
    match turning_radius(&params, f_max) {
        Ok(r) => println!("minimum turning radius R_min = {r:.4} m"),
        Err(_) => println!("minimum turning radius R_min = inf (zero turning authority)"),
    }
    println!("gamma_max = 1/R_min          = {gamma:.4} 1/m");
    println!(
        "  read as radians            = {:.2} deg",
        curvature_as_degrees(gamma)
    );
    println!("configured planner bound     = {:.2} deg", planner.gamma_max_deg);
    if gamma == 0.0 {
        println!("note: full thrust exactly balances weight and drag; zero turning authority");
    }
    if (curvature_as_degrees(gamma) - planner.gamma_max_deg).abs() > 0.5 {
        println!(
            "note: the planner uses the configured bound; the derived curvature read as an \
             angle differs by {:.2} deg",
            planner.gamma_max_deg - curvature_as_degrees(gamma)
        );
    }
    Ok(0)
}

fn cmd_bench(
    scenario_path: &Path,
    trials: usize,
    base_seed: u64,
    parallel: bool,
    dir: Option<PathBuf>,
) -> Result<u8, CliError> {
    if trials == 0 {
        return Err(CliError::new(EXIT_INVALID, "--trials must be >= 1"));
    }
    let scenario = ScenarioFile::load(scenario_path)?;
    if parallel && !cfg!(feature = "parallel") {
        eprintln!("warning: built without the `parallel` feature; running trials sequentially");
    }
    let report = run_bench(&scenario, trials, base_seed, parallel);
    let dir = out_dir(dir);
    let name = stem(scenario_path);
    let csv_path = dir.join(format!("{name}.bench.csv"));
    write(&csv_path, &metrics_csv(&report))?;
    write(&dir.join(format!("{name}.bench_timing.csv")), &timing_csv(&report))?;
    write(
        &dir.join(format!("{name}.bench_summary.json")),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&report.summary).expect("summary serializes")
        ),
    )?;
    let s = &report.summary;
    println!("{}/{} trials reached every goal", s.succeeded, s.trials);
    for (label, stats) in [("F_L", s.f_l), ("F_S", s.f_s), ("F_T", s.f_t)] {
        if let Some(st) = stats {
            println!(
                "{label}: min {:.4} max {:.4} mean {:.4} std {:.4} median {:.4}",
                st.min, st.max, st.mean, st.stddev, st.median
            );
        }
    }
    println!("wrote {}", csv_path.display());
    Ok(0)
}

fn cmd_plot(result_path: &Path, out: Option<PathBuf>) -> Result<u8, CliError> {
    let result = load_result(result_path)?;
    let out = out.unwrap_or_else(|| out_dir(None).join(format!("{}.svg", stem(result_path))));
    write(&out, &svg::render(&result))?;
    println!("wrote {}", out.display());
    Ok(0)
}

fn cmd_metrics(result_path: &Path) -> Result<u8, CliError> {
    let result = load_result(result_path)?;
    for g in &result.goals {
        if g.status == multirrt::pipeline::GoalStatus::Reached {
            let (len, turn) = per_path_summary(&g.smoothed_path);
            println!(
                "goal {}: length {:.3} m, mean turn {:.4} rad, speed {:.4} m/s, altitude {} m",
                g.index,
                len,
                turn,
                g.speed.unwrap_or(f64::NAN),
                g.altitude
            );
        } else {
            println!("goal {}: unreached", g.index);
        }
    }
    let fresh = result
        .recompute_metrics()
        .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))?;
    for (name, m) in [("raw", fresh.raw), ("reduced", fresh.reduced), ("smoothed", fresh.smoothed)] {
        if let Some(m) = m {
            println!("{name:>8}: F_L = {:.3} m, F_S = {:.4} rad", m.f_l, m.f_s);
        }
    }
    let timing_path = result_path.with_extension("timing.json");
    if let Ok(text) = std::fs::read_to_string(&timing_path) {
        if let Ok(t) = serde_json::from_str::<multirrt::pipeline::Timing>(&text) {
            println!("     F_T = {:.4} s", t.plan);
        }
    }
    let mismatches = result
        .audit()
        .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))?;
    if mismatches.is_empty() {
        println!("self-audit: ok");
        Ok(0)
    } else {
        for m in &mismatches {
            eprintln!("mismatch: {m}");
        }
        Err(CliError::new(EXIT_MISMATCH, "self-audit failed: stored metrics do not match the embedded paths"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Plan {
            scenario,
            out,
            seed,
            tree,
        } => cmd_plan(&scenario, out, seed, tree),
        Command::Derive(args) => cmd_derive(args),
        Command::Bench {
            scenario,
            trials,
            base_seed,
            parallel,
            out_dir,
        } => cmd_bench(&scenario, trials, base_seed, parallel, out_dir),
        Command::Plot { result, out } => cmd_plot(&result, out),
        Command::Metrics { result } => cmd_metrics(&result),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
