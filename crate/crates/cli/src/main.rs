use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;
use twolink::bench::{self, Scenario};
use twolink::cspace::{Config, RobotSpec};
use twolink::environment::parse_environment;
use twolink::io::{parse_angle, parse_config_arg, PathDoc};
use twolink::oracle::validate_path;
use twolink::planner::{plan, Outcome, PlanRequest, PlanResult, Strategy};
use twolink::render::render_svg;

#[derive(Parser)]
#[command(
    name = "twolink",
    version,
    about = "Subdivision path planner for a thick 2-link robot"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Plan a path and write path.json and scene.svg.
    Plan(PlanArgs),
    /// Run the scene suite and print timing tables.
    Bench(BenchArgs),
    /// Write a generated scene as an environment file and print its canonical
    /// plan arguments.
    Scene(SceneArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Environment file.
    #[arg(long)]
    env: PathBuf,
    #[arg(long)]
    l1: f64,
    #[arg(long)]
    l2: f64,
    #[arg(long)]
    tau: f64,
    /// Minimum link separation; negative allows crossing. Radians, or degrees
    /// with a `deg` suffix.
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    kappa: f64,
    #[arg(long)]
    eps: f64,
    /// Start as x,y,t1,t2.
    #[arg(long, allow_hyphen_values = true, value_parser = config)]
    start: Config,
    /// Goal as x,y,t1,t2.
    #[arg(long, allow_hyphen_values = true, value_parser = config)]
    goal: Config,
    #[arg(long, default_value = "gbf", value_parser = strategy)]
    strategy: Strategy,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Check the path with the brute-force validator; fail if it touches an
    /// obstacle or the band.
    #[arg(long)]
    validate: bool,
    /// Samples per path segment for --validate.
    #[arg(long, default_value_t = 1000)]
    density: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Timed runs per row.
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long, default_value = "gbf", value_parser = strategy)]
    strategy: Strategy,
    /// Restrict to these scene kinds.
    #[arg(long = "scene")]
    scenes: Vec<String>,
    /// Also write the rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Leave timing columns empty in the CSV.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct SceneArgs {
    kind: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn config(s: &str) -> Result<Config, String> {
    parse_config_arg(s).map_err(|e| e.to_string())
}

fn strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn exit_code(o: &Outcome) -> u8 {
    match o {
        Outcome::Path(_) => 0,
        Outcome::NoPath => 2,
        Outcome::Timeout => 3,
    }
}

fn stats_line(res: &PlanResult) -> String {
    let s = &res.stats;
    format!(
        "outcome={} time_ms={:.3} boxes={} free={} stuck={} mixed={}",
        res.outcome.label(),
        s.time_ms,
        s.created,
        s.free,
        s.stuck,
        s.mixed
    )
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_plan(a: PlanArgs) -> Result<u8, String> {
    let text = fs::read_to_string(&a.env).map_err(|e| format!("{}: {e}", a.env.display()))?;
    let env = parse_environment(&text).map_err(|e| format!("{}: {e}", a.env.display()))?;
    let robot = RobotSpec::new(a.l1, a.l2, a.tau, a.kappa).map_err(|e| e.to_string())?;
    let mut req = PlanRequest::new(&env, robot, a.start, a.goal, a.eps);
    req.strategy = a.strategy;
    req.threads = a.threads;
    req.timeout = a.timeout_ms.map(Duration::from_millis);
    let res = plan(&req).map_err(|e| e.to_string())?;

    fs::create_dir_all(&a.out).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let doc = PathDoc::new(robot, a.eps, &res.outcome, res.stats);
    write(&a.out.join("path.json"), &doc.to_json())?;
    let path = match &res.outcome {
        Outcome::Path(p) => p.as_slice(),
        _ => &[],
    };
    write(
        &a.out.join("scene.svg"),
        &render_svg(&env, Some(&res.tree), a.eps, &robot, path),
    )?;
    println!("{}", stats_line(&res));

    if a.validate && !path.is_empty() {
        let check = validate_path(path, &env, &robot, a.density).map_err(|e| e.to_string())?;
        println!(
            "validate min_clearance={:.6} band_margin={:.6}",
            check.min_clearance, check.band_margin
        );
        if !check.is_valid() {
            return Err("path failed validation".into());
        }
    }
    Ok(exit_code(&res.outcome))
}

fn run_bench(a: BenchArgs) -> Result<u8, String> {
    let mut scenes: Vec<Scenario> = bench::suite(a.seed);
    if !a.scenes.is_empty() {
        for k in &a.scenes {
            if !bench::SCENE_KINDS.contains(&k.as_str()) && k != "corridor_blocked" {
                return Err(format!("unknown scene `{k}`"));
            }
        }
        scenes.retain(|s| a.scenes.iter().any(|k| scene_kind(&s.name) == k));
    }
    let rows: Vec<_> = bench::run_suite(&scenes, a.strategy, a.runs)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(row, _)| row)
        .collect();
    print!("{}", bench::to_table(&rows));
    if let Some(p) = &a.csv {
        write(
            p,
            &bench::to_csv(&rows, !a.no_timing).map_err(|e| e.to_string())?,
        )?;
    }
    Ok(0)
}

fn scene_kind(name: &str) -> &str {
    if name.contains(",blocked") {
        return "corridor_blocked";
    }
    name.split('(').next().unwrap_or(name)
}

fn fmt_config(c: &Config) -> String {
    format!("{},{},{},{}", c.x, c.y, c.t1.radians(), c.t2.radians())
}

fn run_scene(a: SceneArgs) -> Result<u8, String> {
    let s = bench::generate(&a.kind, a.seed).map_err(|e| e.to_string())?;
    write(&a.out, &s.env.serialize())?;
    let r = &s.robot;
    println!(
        "--l1 {} --l2 {} --tau {} --kappa {} --eps {} --start {} --goal {}",
        r.l1,
        r.l2,
        r.tau,
        r.kappa,
        s.epsilon,
        fmt_config(&s.alpha),
        fmt_config(&s.beta)
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let res = match cli.cmd {
        Cmd::Plan(a) => run_plan(a),
        Cmd::Bench(a) => run_bench(a),
        Cmd::Scene(a) => run_scene(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
