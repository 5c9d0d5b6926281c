use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavitation::analysis::{estimate_suite, SuiteOptions};
use cavitation::config::{ConfigFile, RunKnobs};
use cavitation::fields::{build_velocity_field, dump_field};
use cavitation::flow::integrate_flow;
use cavitation::geometry::{
    eleven_disk_lambda_bound, eleven_disk_packing_density, max_admissible_lambda, straight_line_admissible,
    two_cavity_necessary_slack, Configuration,
};
use cavitation::pipeline::{analyze, flow_options, prepare, seed_set, solver_options, Check, Prepared};
use cavitation::{report, Error};
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(name = "cavitate", version, about = "Incompressible cavitating deformations of a disk")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Attainability of a configuration.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Flow, assembly and analysis; writes CSV artifacts.
    Run(RunArgs),
    /// Regularity-estimate suite on the default domain family.
    Estimates {
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Samples the velocity field at time `t` on a polar grid.
    DumpField {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 64)]
        n_r: usize,
        #[arg(long, default_value_t = 128)]
        n_theta: usize,
        #[arg(long)]
        modes: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    steps: Option<usize>,
    /// Initial Fourier modes per circle.
    #[arg(long)]
    modes: Option<usize>,
    /// Reference grid cells per side.
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated, strictly decreasing.
    #[arg(long, value_delimiter = ',')]
    eps_ladder: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Geometry tables only, no solves.
    #[arg(long)]
    dry_run: bool,
}

struct Failure {
    code: u8,
    stage: &'static str,
    error: Error,
}

fn fail(stage: &'static str) -> impl Fn(Error) -> Failure {
    move |error| {
        let code = match error {
            Error::InvalidInput(_) | Error::Config(_) => EXIT_USAGE,
            Error::NotAttainable { .. } | Error::Infeasible(_) | Error::Geometry(_) => EXIT_INFEASIBLE,
            _ => EXIT_NUMERICAL,
        };
        Failure { code, stage, error }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error [usage]: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error [usage]: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let result = match cli.command {
        Command::Check { config } => cmd_check(&config),
        Command::Run(args) => cmd_run(&args),
        Command::Estimates { alpha, out } => cmd_estimates(alpha, out.as_deref()),
        Command::DumpField { config, t, n_r, n_theta, modes, out } => {
            cmd_dump_field(&config, t, n_r, n_theta, modes, out.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error [{}]: {}", f.stage, f.error);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<(ConfigFile, Configuration), Failure> {
    let file = ConfigFile::load(path).map_err(fail("config"))?;
    let config = file.configuration().map_err(fail("config"))?;
    Ok((file, config))
}

fn cmd_check(path: &Path) -> Result<u8, Failure> {
    let (_, config) = load(path)?;
    let sigma = cavitation::geometry::sigma(&config).map_err(fail("geometry"))?;
    let lambda = config.lambda();
    let ok = straight_line_admissible(&config).map_err(fail("geometry"))?;
    println!("cavities              {}", config.len());
    println!("sigma                 {}", report::fmt(sigma));
    println!("lambda                {}", report::fmt(lambda));
    println!("1 - lambda^-2         {}", report::fmt(1.0 - lambda.powi(-2)));
    println!("max admissible lambda {}", report::fmt(max_admissible_lambda(sigma)));
    if config.len() == 2 {
        let v = config.volumes();
        let slack = two_cavity_necessary_slack(config.r0(), v[0], v[1]);
        let scale = std::f64::consts::PI * config.r0().powi(2);
        let verdict = if slack.abs() <= 1e-12 * scale {
            "tight"
        } else if slack > 0.0 {
            "holds"
        } else {
            "violated"
        };
        println!("2 sqrt(v1 v2) <= pi R0^2: {verdict} (slack {})", report::fmt(slack));
    }
    if config.len() == 11 {
        println!(
            "densest 11-disk packing: density {}, lambda bound {}",
            report::fmt(eleven_disk_packing_density()),
            report::fmt(eleven_disk_lambda_bound())
        );
    }
    println!("verdict               {}", if ok { "ATTAINABLE" } else { "NOT ATTAINABLE" });
    Ok(if ok { 0 } else { EXIT_INFEASIBLE })
}

fn knobs_for(file: &ConfigFile, args: &RunArgs) -> RunKnobs {
    let mut k = file.knobs();
    if let Some(v) = args.steps {
        k.steps = v;
    }
    if let Some(v) = args.modes {
        k.modes = v;
        k.max_modes = k.max_modes.max(v);
    }
    if let Some(v) = args.grid {
        k.grid = v;
    }
    if let Some(v) = &args.eps_ladder {
        k.eps_ladder = v.clone();
    }
    if let Some(v) = args.alpha {
        k.alpha = v;
    }
    k
}

fn print_geometry(p: &Prepared) {
    let e = &p.evolution;
    println!("sigma {}  lambda {}", report::fmt(p.sigma), report::fmt(e.lambda()));
    println!("pads: d {}  delta {}  radii {:?}", report::fmt(p.pads.d), report::fmt(p.pads.delta), p.pads.radii);
    println!(
        "evolution: min gap {}  min clearance {}  max area residual {}",
        report::fmt(p.validation.min_gap()),
        report::fmt(p.validation.min_clearance()),
        report::fmt(p.validation.max_area_residual())
    );
    println!("{:>8} {:>6} {:>12} {:>12} {:>12} {:>12}", "t", "cavity", "zx", "zy", "radius", "padded");
    for &t in &e.uniform_grid(5) {
        for i in 0..e.len() {
            let z = e.center(i, t);
            println!(
                "{t:>8.4} {i:>6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                z.x,
                z.y,
                e.radius(i, t),
                p.pads.padded_radius(e, i, t)
            );
        }
    }
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!(
            "{:<4} {:<26} {:>24} <= {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            report::fmt(c.value),
            report::fmt(c.limit)
        );
    }
}

fn cmd_run(args: &RunArgs) -> Result<u8, Failure> {
    let (file, config) = load(&args.config)?;
    let knobs = knobs_for(&file, args);
    let prepared = prepare(&config, &knobs).map_err(fail("geometry"))?;
    print_geometry(&prepared);
    if args.dry_run {
        if let Some(dir) = &args.out {
            std::fs::create_dir_all(dir).map_err(|e| fail("output")(e.into()))?;
            let grid = prepared.evolution.uniform_grid(knobs.time_grid);
            let f = std::fs::File::create(dir.join("evolution.csv")).map_err(|e| fail("output")(e.into()))?;
            report::write_evolution(std::io::BufWriter::new(f), &prepared.evolution, &prepared.pads, &grid)
                .map_err(fail("output"))?;
        }
        return Ok(0);
    }
    let seeds = seed_set(&prepared, &knobs).map_err(fail("seeds"))?;
    let history = integrate_flow(&prepared.evolution, &prepared.pads, &seeds.points, &flow_options(&knobs))
        .map_err(fail("flow"))?;
    let run = analyze(prepared, seeds, history, &knobs).map_err(fail("analysis"))?;
    println!(
        "particles {}  steps {}  sup|Dv| {}  flow energy {}  slope {}",
        run.seeds.points.len(),
        run.history.steps,
        report::fmt(run.history.gradient_sup),
        report::fmt(run.flow_energy),
        report::fmt(run.energy.slope)
    );
    println!(
        "info: boundary det residual {}  finite-difference det gap {}",
        report::fmt(run.boundary_det_residual),
        report::fmt(run.fd_det_gap)
    );
    print_checks(&run.checks);
    if let Some(dir) = &args.out {
        report::write_run(dir, &run, knobs.time_grid).map_err(fail("output"))?;
    }
    let pass = run.passed();
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { EXIT_NUMERICAL })
}

fn cmd_estimates(alpha: f64, out: Option<&Path>) -> Result<u8, Failure> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(fail("usage")(Error::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}"))));
    }
    let suite = estimate_suite(&SuiteOptions { alpha, ..SuiteOptions::default() }).map_err(fail("estimates"))?;
    for s in &suite.summaries {
        println!(
            "{:<4} {:<14} min {:>24} max {:>24}  ({})",
            if s.pass { "PASS" } else { "FAIL" },
            s.check,
            report::fmt(s.min),
            report::fmt(s.max),
            s.rule
        );
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| fail("output")(e.into()))?;
        let f = std::fs::File::create(dir.join("estimates.csv")).map_err(|e| fail("output")(e.into()))?;
        report::write_estimates(std::io::BufWriter::new(f), &suite).map_err(fail("output"))?;
    }
    let pass = suite.passed();
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { EXIT_NUMERICAL })
}

fn cmd_dump_field(
    path: &Path,
    t: f64,
    n_r: usize,
    n_theta: usize,
    modes: Option<usize>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let (file, config) = load(path)?;
    let mut knobs = file.knobs();
    if let Some(m) = modes {
        knobs.modes = m;
        knobs.max_modes = knobs.max_modes.max(m);
    }
    let prepared = prepare(&config, &knobs).map_err(fail("geometry"))?;
    let lambda = prepared.evolution.lambda();
    if !(t >= 1.0 && t <= lambda) || n_r == 0 || n_theta == 0 {
        return Err(fail("usage")(Error::InvalidInput(format!("need 1 <= t <= {lambda} and positive sample counts"))));
    }
    let field = build_velocity_field(&prepared.evolution, &prepared.pads, t, &solver_options(&knobs))
        .map_err(fail("fields"))?;
    let samples = dump_field(&field, n_r, n_theta);
    let res = field.boundary_residuals(256);
    let max_div = samples.iter().map(|s| s.div.abs()).fold(0.0, f64::max);
    println!(
        "t {}  modes {}  samples {}  max |div| {}",
        report::fmt(t),
        field.growth.phi.modes(),
        samples.len(),
        report::fmt(max_div)
    );
    println!(
        "boundary residuals: normal {}  tangential {}  (|g| {})",
        report::fmt(res.normal),
        report::fmt(res.tangential),
        report::fmt(res.scale)
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| fail("output")(e.into()))?;
        let f = std::fs::File::create(dir.join("field.csv")).map_err(|e| fail("output")(e.into()))?;
        report::write_field(std::io::BufWriter::new(f), &samples).map_err(fail("output"))?;
    }
    Ok(0)
}
