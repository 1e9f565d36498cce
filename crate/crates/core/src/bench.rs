//! Seeded scene generators and a timing harness.

use crate::cspace::{Config, RobotSpec};
use crate::environment::{EnvError, Environment};
use crate::geometry::{Point2, Rect};
use crate::planner::{plan, Outcome, PlanError, PlanRequest, PlanResult, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown scene `{0}`")]
    UnknownScene(String),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("csv: {0}")]
    Csv(String),
}

/// A planning problem with its canonical parameters.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub env: Environment,
    pub robot: RobotSpec,
    pub alpha: Config,
    pub beta: Config,
    pub epsilon: f64,
}

impl Scenario {
    pub fn request(&self, strategy: Strategy) -> PlanRequest<'_> {
        let mut req = PlanRequest::new(&self.env, self.robot, self.alpha, self.beta, self.epsilon);
        req.strategy = strategy;
        req
    }

    pub fn with_robot(mut self, robot: RobotSpec) -> Self {
        self.robot = robot;
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.robot.kappa = kappa;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point2> {
    vec![
        Point2::new(x0, y0),
        Point2::new(x1, y0),
        Point2::new(x1, y1),
        Point2::new(x0, y1),
    ]
}

/// Four slabs of thickness `t` lining the inside of `b`.
fn frame(b: Rect, t: f64) -> Vec<Vec<Point2>> {
    vec![
        rect(b.x0, b.y0, b.x1, b.y0 + t),
        rect(b.x0, b.y1 - t, b.x1, b.y1),
        rect(b.x0, b.y0 + t, b.x0 + t, b.y1 - t),
        rect(b.x1 - t, b.y0 + t, b.x1, b.y1 - t),
    ]
}

fn robot(l1: f64, l2: f64, tau: f64, kappa: f64) -> RobotSpec {
    RobotSpec::new(l1, l2, tau, kappa).expect("valid robot")
}

/// Free space is a T: a horizontal bar of height 12 over a dead-end stem of
/// width `w` and depth 16 centered at `x = 64`. Start and goal sit in the left
/// arm with both links pointing left in opposite orders.
pub fn t_room(w: f64) -> Scenario {
    let b = Rect::new(0.0, 0.0, 128.0, 96.0);
    let (y0, y1) = (60.0, 72.0);
    let floor = y0 - 16.0;
    let (sx0, sx1) = (64.0 - w / 2.0, 64.0 + w / 2.0);
    let polys = vec![
        rect(b.x0, y1, b.x1, b.y1),
        rect(b.x0, b.y0, sx0, y0),
        rect(sx1, b.y0, b.x1, y0),
        rect(sx0, b.y0, sx1, floor),
        rect(b.x0, y0, 4.0, y1),
        rect(124.0, y0, b.x1, y1),
    ];
    let env = Environment::new(b, polys).expect("valid scene");
    let yc = (y0 + y1) / 2.0;
    let spread = 15f64.to_radians();
    Scenario {
        name: format!("t_room(w={w})"),
        seed: 0,
        env,
        robot: robot(14.0, 14.0, 1.0, 7f64.to_radians()),
        alpha: Config::new(40.0, yc, PI + spread, PI - spread),
        beta: Config::new(28.0, yc, PI - spread, PI + spread),
        epsilon: 0.5,
    }
}

/// Perfect maze on a `k × k` cell grid, carved by a seeded depth-first walk.
pub fn maze(seed: u64, k: usize) -> Scenario {
    let cell = 80.0;
    let wall = 8.0;
    let size = cell * k as f64;
    let b = Rect::new(0.0, 0.0, size, size);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // open[i][j][0]: passage to the east, [1]: passage to the north
    let mut open = vec![vec![[false; 2]; k]; k];
    let mut seen = vec![vec![false; k]; k];
    let mut stack = vec![(0usize, 0usize)];
    seen[0][0] = true;
    while let Some(&(i, j)) = stack.last() {
        let mut nbrs = Vec::new();
        if i + 1 < k && !seen[i + 1][j] {
            nbrs.push((i + 1, j));
        }
        if i > 0 && !seen[i - 1][j] {
            nbrs.push((i - 1, j));
        }
        if j + 1 < k && !seen[i][j + 1] {
            nbrs.push((i, j + 1));
        }
        if j > 0 && !seen[i][j - 1] {
            nbrs.push((i, j - 1));
        }
        if nbrs.is_empty() {
            stack.pop();
            continue;
        }
        let (a, c) = nbrs[rng.gen_range(0..nbrs.len())];
        match (a as i64 - i as i64, c as i64 - j as i64) {
            (1, 0) => open[i][j][0] = true,
            (-1, 0) => open[a][c][0] = true,
            (0, 1) => open[i][j][1] = true,
            _ => open[a][c][1] = true,
        }
        seen[a][c] = true;
        stack.push((a, c));
    }
    let h = wall / 2.0;
    let mut polys = frame(b, h);
    for i in 0..k {
        for j in 0..k {
            let (x, y) = (i as f64 * cell, j as f64 * cell);
            if i + 1 < k && !open[i][j][0] {
                polys.push(rect(x + cell - h, y - h, x + cell + h, y + cell + h));
            }
            if j + 1 < k && !open[i][j][1] {
                polys.push(rect(x - h, y + cell - h, x + cell + h, y + cell + h));
            }
        }
    }
    let polys = polys
        .into_iter()
        .map(|p| {
            p.into_iter()
                .map(|q| Point2::new(q.x.clamp(0.0, size), q.y.clamp(0.0, size)))
                .collect()
        })
        .collect();
    let env = Environment::new(b, polys).expect("valid scene");
    let c = cell / 2.0;
    let far = size - c;
    Scenario {
        name: format!("maze(k={k})"),
        seed,
        env,
        robot: robot(16.0, 16.0, 10.0, -1.0),
        alpha: Config::new(c, c, 0.0, PI / 2.0),
        beta: Config::new(far, far, PI, 1.5 * PI),
        epsilon: 2.0,
    }
}

/// A wall across the room with a square hole of side `hole`.
pub fn hole_in_wall(hole: f64) -> Scenario {
    let b = Rect::new(0.0, 0.0, 128.0, 128.0);
    let mut polys = frame(b, 2.0);
    let (lo, hi) = (64.0 - hole / 2.0, 64.0 + hole / 2.0);
    polys.push(rect(60.0, 2.0, 68.0, lo));
    polys.push(rect(60.0, hi, 68.0, 126.0));
    let env = Environment::new(b, polys).expect("valid scene");
    Scenario {
        name: format!("hole_in_wall(h={hole})"),
        seed: 0,
        env,
        robot: robot(20.0, 12.0, 2.0, 0.2),
        alpha: Config::new(30.0, 30.0, 0.5 * PI, 1.5 * PI),
        beta: Config::new(98.0, 98.0, PI, 0.0),
        epsilon: 1.0,
    }
}

/// Eight corridors of width `w` radiating from the center to the border.
pub fn eight_way(w: f64) -> Scenario {
    let b = Rect::new(0.0, 0.0, 160.0, 160.0);
    let c = b.center();
    let unit = |a: f64| Point2::new(a.cos(), a.sin());
    // where a line parallel to direction `a`, offset by `s`, leaves the box
    let exit = |a: f64, s: f64| {
        let d = unit(a);
        let p = c + Point2::new(-d.y, d.x) * s;
        let tx = if d.x > 1e-12 {
            (b.x1 - p.x) / d.x
        } else if d.x < -1e-12 {
            (b.x0 - p.x) / d.x
        } else {
            f64::INFINITY
        };
        let ty = if d.y > 1e-12 {
            (b.y1 - p.y) / d.y
        } else if d.y < -1e-12 {
            (b.y0 - p.y) / d.y
        } else {
            f64::INFINITY
        };
        let q = p + d * tx.min(ty);
        Point2::new(q.x.clamp(b.x0, b.x1), q.y.clamp(b.y0, b.y1))
    };
    let mut polys = frame(b, 2.0);
    for k in 0..8 {
        let a0 = k as f64 * PI / 4.0;
        let a1 = a0 + PI / 4.0;
        let inner = c + unit(a0 + PI / 8.0) * ((w / 2.0) / (PI / 8.0).sin());
        polys.push(vec![inner, exit(a0, w / 2.0), exit(a1, -w / 2.0)]);
    }
    let env = Environment::new(b, polys).expect("valid scene");
    let s = c + unit(PI) * 55.0;
    let g = c + unit(PI / 4.0) * 70.0;
    Scenario {
        name: format!("eight_way(w={w})"),
        seed: 0,
        env,
        robot: robot(10.0, 8.0, 1.5, 0.15),
        alpha: Config::new(s.x, s.y, 0.0, PI),
        beta: Config::new(g.x, g.y, 1.25 * PI, PI / 4.0),
        epsilon: 1.0,
    }
}

/// A cup open to the east with the start inside; the goal is behind it.
pub fn bugtrap(gap: f64) -> Scenario {
    let b = Rect::new(0.0, 0.0, 160.0, 160.0);
    let mut polys = frame(b, 2.0);
    let t = 6.0;
    let (x0, x1, y0, y1) = (40.0, 110.0, 40.0, 120.0);
    polys.push(rect(x0, y0, x0 + t, y1));
    polys.push(rect(x0, y0, x1, y0 + t));
    polys.push(rect(x0, y1 - t, x1, y1));
    let lip = (y1 - y0 - gap) / 2.0;
    polys.push(rect(x1 - t, y0, x1, y0 + lip));
    polys.push(rect(x1 - t, y1 - lip, x1, y1));
    let env = Environment::new(b, polys).expect("valid scene");
    Scenario {
        name: format!("bugtrap(gap={gap})"),
        seed: 0,
        env,
        robot: robot(12.0, 10.0, 1.5, 0.2),
        alpha: Config::new(75.0, 80.0, 0.0, PI),
        beta: Config::new(20.0, 80.0, 0.5 * PI, 1.5 * PI),
        epsilon: 1.0,
    }
}

/// `n` seeded random triangles in a 512 square.
pub fn random_triangles(seed: u64, n: usize) -> Scenario {
    let b = Rect::new(0.0, 0.0, 512.0, 512.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = Config::new(16.0, 16.0, 0.0, 0.5 * PI);
    let beta = Config::new(496.0, 496.0, PI, 1.5 * PI);
    let keep = 40.0;
    let mut polys = Vec::with_capacity(n);
    while polys.len() < n {
        let c = Point2::new(rng.gen_range(0.0..512.0), rng.gen_range(0.0..512.0));
        if c.dist(alpha.position()) < keep || c.dist(beta.position()) < keep {
            continue;
        }
        let r = rng.gen_range(4.0..14.0);
        let a0 = rng.gen_range(0.0..2.0 * PI);
        let mut angs = [a0, a0 + rng.gen_range(1.2..2.4), 0.0];
        angs[2] = angs[1] + rng.gen_range(1.2..(2.0 * PI - (angs[1] - a0) - 0.6));
        let tri: Vec<Point2> = angs
            .iter()
            .map(|a| {
                let p = c + Point2::new(a.cos(), a.sin()) * r;
                Point2::new(p.x.clamp(0.0, 512.0), p.y.clamp(0.0, 512.0))
            })
            .collect();
        let area = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        if area.abs() < 1.0 {
            continue;
        }
        polys.push(tri);
    }
    let env = Environment::new(b, polys).expect("valid scene");
    Scenario {
        name: format!("random_triangles(n={n})"),
        seed,
        env,
        robot: robot(12.0, 9.0, 1.0, -1.0),
        alpha,
        beta,
        epsilon: 2.0,
    }
}

/// A straight corridor of width `w` between two rooms, traversed by a
/// single-link-like robot (second link tiny). `blocked` seals it.
pub fn corridor(w: f64, blocked: bool) -> Scenario {
    let b = Rect::new(0.0, 0.0, 128.0, 64.0);
    let mut polys = frame(b, 2.0);
    let (lo, hi) = (32.0 - w / 2.0, 32.0 + w / 2.0);
    polys.push(rect(44.0, 2.0, 84.0, lo));
    polys.push(rect(44.0, hi, 84.0, 62.0));
    if blocked {
        polys.push(rect(63.0, lo - 1.0, 65.0, hi + 1.0));
    }
    let env = Environment::new(b, polys).expect("valid scene");
    Scenario {
        name: format!("corridor(w={w}{})", if blocked { ",blocked" } else { "" }),
        seed: 0,
        env,
        robot: robot(8.0, 1.0, 1.0, -1.0),
        alpha: Config::new(20.0, 32.0, 0.0, PI),
        beta: Config::new(108.0, 32.0, 0.0, PI),
        epsilon: 0.5,
    }
}

pub const SCENE_KINDS: [&str; 7] = [
    "t_room",
    "maze",
    "hole_in_wall",
    "eight_way",
    "bugtrap",
    "random_triangles",
    "corridor",
];

/// Builds a scene by name with its default parameters.
pub fn generate(kind: &str, seed: u64) -> Result<Scenario, BenchError> {
    Ok(match kind {
        "t_room" => t_room(6.0),
        "maze" => maze(seed, 6),
        "hole_in_wall" => hole_in_wall(30.0),
        "eight_way" => eight_way(14.0),
        "bugtrap" => bugtrap(30.0),
        "random_triangles" => random_triangles(seed, 100),
        "corridor" => corridor(6.0, false),
        "corridor_blocked" => corridor(6.0, true),
        other => return Err(BenchError::UnknownScene(other.to_string())),
    })
}

/// The standard suite: every scene kind, crossing and non-crossing where
/// both make sense, with one seed.
pub fn suite(seed: u64) -> Vec<Scenario> {
    let mut out = Vec::new();
    for kind in SCENE_KINDS
        .iter()
        .copied()
        .chain(std::iter::once("corridor_blocked"))
    {
        let s = generate(kind, seed).expect("known kind");
        if s.robot.kappa < 0.0 {
            let flipped = s.clone().with_kappa(5f64.to_radians());
            out.push(s);
            if !in_band_at(&flipped) {
                out.push(flipped);
            }
        } else {
            out.push(s.clone().with_kappa(-1.0));
            out.push(s);
        }
    }
    out
}

fn in_band_at(s: &Scenario) -> bool {
    crate::cspace::in_band(s.alpha.t1, s.alpha.t2, s.robot.kappa)
        || crate::cspace::in_band(s.beta.t1, s.beta.t2, s.robot.kappa)
}

#[derive(Clone, Debug)]
pub struct Row {
    pub scene: String,
    pub seed: u64,
    pub robot: RobotSpec,
    pub epsilon: f64,
    pub strategy: Strategy,
    pub outcome: &'static str,
    pub avg_ms: f64,
    pub best_ms: f64,
    pub std_ms: f64,
    /// SSS always terminates with a definite answer, so this is 1 unless a
    /// run timed out.
    pub success: f64,
}

/// Plans `s` `runs` times and summarizes the timings. Returns the last result
/// alongside the row.
pub fn run_row(
    s: &Scenario,
    strategy: Strategy,
    runs: usize,
) -> Result<(Row, PlanResult), BenchError> {
    let runs = runs.max(1);
    let mut times = Vec::with_capacity(runs);
    let mut last = None;
    let mut ok = 0usize;
    for _ in 0..runs {
        let res = plan(&s.request(strategy))?;
        times.push(res.stats.time_ms);
        if !matches!(res.outcome, Outcome::Timeout) {
            ok += 1;
        }
        last = Some(res);
    }
    let last = last.expect("at least one run");
    let n = times.len() as f64;
    let avg = times.iter().sum::<f64>() / n;
    let var = times.iter().map(|t| (t - avg).powi(2)).sum::<f64>() / n;
    let row = Row {
        scene: s.name.clone(),
        seed: s.seed,
        robot: s.robot,
        epsilon: s.epsilon,
        strategy,
        outcome: last.outcome.label(),
        avg_ms: avg,
        best_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
        std_ms: var.sqrt(),
        success: ok as f64 / n,
    };
    Ok((row, last))
}

/// Runs every scenario in parallel, one planner per worker.
pub fn run_suite(
    scenes: &[Scenario],
    strategy: Strategy,
    runs: usize,
) -> Result<Vec<(Row, PlanResult)>, BenchError> {
    scenes
        .par_iter()
        .map(|s| run_row(s, strategy, runs))
        .collect()
}

pub const CSV_HEADER: [&str; 13] = [
    "scene", "seed", "l1", "l2", "tau", "kappa", "eps", "strategy", "outcome", "avg_ms", "best_ms",
    "std_ms", "success",
];

/// CSV text; with `timing` false the three timing columns are left empty so
/// the output is reproducible.
pub fn to_csv(rows: &[Row], timing: bool) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| BenchError::Csv(e.to_string());
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in rows {
        let t = |v: f64| {
            if timing {
                format!("{v:.3}")
            } else {
                String::new()
            }
        };
        w.write_record([
            r.scene.clone(),
            r.seed.to_string(),
            r.robot.l1.to_string(),
            r.robot.l2.to_string(),
            r.robot.tau.to_string(),
            r.robot.kappa.to_string(),
            r.epsilon.to_string(),
            r.strategy.name().to_string(),
            r.outcome.to_string(),
            t(r.avg_ms),
            t(r.best_ms),
            t(r.std_ms),
            r.success.to_string(),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii"))
}

/// Aligned table with Avg / Best / STD / Success columns.
pub fn to_table(rows: &[Row]) -> String {
    let head = [
        "scene", "kappa", "eps", "outcome", "Avg(ms)", "Best(ms)", "STD(ms)", "Success",
    ];
    let body: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.scene.clone(),
                format!("{:.4}", r.robot.kappa),
                r.epsilon.to_string(),
                r.outcome.to_string(),
                format!("{:.2}", r.avg_ms),
                format!("{:.2}", r.best_ms),
                format!("{:.2}", r.std_ms),
                format!("{:.2}", r.success),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for row in &body {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(&mut s, &head.map(String::from));
    for row in &body {
        line(&mut s, row);
    }
    s
}
