//! Brute-force checks built only from distances and point-in-polygon tests.
//! Nothing here uses the forbidden-zone or classification code, so agreement
//! with them is independent evidence.

use crate::cspace::{footprints, in_band, Config, RobotSpec};
use crate::environment::Environment;
use crate::geometry::{
    angle_dist, link_clearance, sep_point_feature, sep_segment_feature, Angle, AngularSet,
    FeatureShape, LinkGeom, Point2, Segment2,
};
use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Forbidden angles found by sampling.
#[derive(Clone, Debug)]
pub struct SweepResult {
    /// `samples[i]` covers the angle `2π i / n`.
    pub samples: Vec<bool>,
    /// Each forbidden sample widened by one spacing on both sides.
    pub intervals: AngularSet,
}

/// Marks angle `θ` forbidden when some base in `bases` puts the link within
/// `τ` of `f`.
pub fn sweep_forbidden(bases: &[Point2], f: &FeatureShape, g: &LinkGeom, n: usize) -> SweepResult {
    let step = TAU / n as f64;
    let reach = g.ell + g.tau;
    let near: Vec<Point2> = bases
        .iter()
        .copied()
        .filter(|&b| sep_point_feature(b, f) <= reach)
        .collect();
    let samples: Vec<bool> = (0..n)
        .map(|i| {
            let th = Angle::new(step * i as f64);
            near.iter().any(|&b| link_clearance(b, th, g, f) <= 0.0)
        })
        .collect();
    let pieces = samples
        .iter()
        .enumerate()
        .filter(|(_, &hit)| hit)
        .flat_map(|(i, _)| {
            let c = step * i as f64;
            let (lo, hi) = (c - step, c + step);
            let mut v = vec![(lo.max(0.0), hi.min(TAU))];
            if lo < 0.0 {
                v.push((lo + TAU, TAU));
            }
            if hi > TAU {
                v.push((0.0, hi - TAU));
            }
            v
        })
        .collect();
    SweepResult {
        samples,
        intervals: AngularSet::from_pieces(pieces),
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid of {0} cells exceeds the cap of {MAX_GRID_CELLS}")]
    TooManyCells(u64),
    #[error("empty path")]
    EmptyPath,
}

pub const MAX_GRID_CELLS: u64 = 10_000_000;

/// Signed clearance of one configuration: the smallest thin-link separation
/// to any feature minus `τ`, or a negative depth when a link end point lies
/// inside an obstacle.
pub fn clearance(c: &Config, env: &Environment, r: &RobotSpec) -> f64 {
    let pts = footprints(c, r);
    let links = [Segment2::new(pts[0], pts[1]), Segment2::new(pts[0], pts[2])];
    let mut best = f64::INFINITY;
    for f in env.features() {
        for l in &links {
            best = best.min(sep_segment_feature(l, &f.shape) - r.tau);
        }
    }
    if pts.iter().any(|&p| env.point_in_obstacle(p)) {
        let depth = pts
            .iter()
            .filter(|&&p| env.point_in_obstacle(p))
            .map(|&p| {
                env.features()
                    .iter()
                    .map(|f| sep_point_feature(p, &f.shape))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        return -(r.tau + depth).max(f64::MIN_POSITIVE);
    }
    best
}

/// Collision-free and off the band. Obstacles are closed, so grazing
/// contact counts as a collision.
pub fn config_free(c: &Config, env: &Environment, r: &RobotSpec) -> bool {
    !in_band(c.t1, c.t2, r.kappa) && clearance(c, env, r) > 0.0
}

/// Shortest signed arc from `a` to `b`.
fn arc(a: Angle, b: Angle) -> f64 {
    let d = (b.radians() - a.radians()).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Point at fraction `s` of the straight move from `a` to `b`, turning each
/// link the short way round.
pub fn interpolate(a: &Config, b: &Config, s: f64) -> Config {
    Config::new(
        a.x + s * (b.x - a.x),
        a.y + s * (b.y - a.y),
        a.t1.radians() + s * arc(a.t1, b.t1),
        a.t2.radians() + s * arc(a.t2, b.t2),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathCheck {
    pub min_clearance: f64,
    /// Smallest angular distance between the links.
    pub min_link_gap: f64,
    /// `min_link_gap − κ`; must be positive for a non-crossing path.
    pub band_margin: f64,
}

impl PathCheck {
    pub fn is_valid(&self) -> bool {
        self.min_clearance > 0.0 && self.band_margin > 0.0
    }
}

/// Samples every segment at `density` points (plus the final configuration).
pub fn validate_path(
    path: &[Config],
    env: &Environment,
    r: &RobotSpec,
    density: usize,
) -> Result<PathCheck, OracleError> {
    let first = path.first().ok_or(OracleError::EmptyPath)?;
    let mut samples = vec![*first];
    for w in path.windows(2) {
        for k in 1..=density.max(1) {
            samples.push(interpolate(&w[0], &w[1], k as f64 / density.max(1) as f64));
        }
    }
    let mut check = PathCheck {
        min_clearance: f64::INFINITY,
        min_link_gap: f64::INFINITY,
        band_margin: f64::INFINITY,
    };
    for c in &samples {
        check.min_clearance = check.min_clearance.min(clearance(c, env, r));
        check.min_link_gap = check.min_link_gap.min(angle_dist(c.t1, c.t2));
    }
    check.band_margin = check.min_link_gap - r.kappa;
    Ok(check)
}

/// Lattice resolution: `nxy` cells per side of the bounding box and `ntheta`
/// cells per turn of each angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridResolution {
    pub nxy: usize,
    pub ntheta: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GridOutcome {
    Path(Vec<Config>),
    /// Inconclusive: a finer lattice might still find a path.
    NoPath,
}

/// Breadth-first search over face-adjacent lattice cells. A cell is usable
/// when its center has clearance above the largest displacement of the
/// robot inside the cell and the whole cell stays off the band, so every
/// returned path is collision-free.
pub fn grid_plan(
    env: &Environment,
    r: &RobotSpec,
    alpha: &Config,
    beta: &Config,
    res: GridResolution,
) -> Result<GridOutcome, OracleError> {
    let (n, m) = (res.nxy, res.ntheta);
    let cells = (n as u64) * (n as u64) * (m as u64) * (m as u64);
    if cells > MAX_GRID_CELLS {
        return Err(OracleError::TooManyCells(cells));
    }
    let bb = env.bbox();
    let (hx, hy) = ((bb.x1 - bb.x0) / n as f64, (bb.y1 - bb.y0) / n as f64);
    let ht = TAU / m as f64;
    // joint moves at most half a diagonal, each tip a further ℓ·ht/2
    let margin = 0.5 * hx.hypot(hy) + r.max_len() * ht * 0.5;
    let idx = |i: usize, j: usize, a: usize, b: usize| ((i * n + j) * m + a) * m + b;
    let center = |i: usize, j: usize, a: usize, b: usize| {
        Config::new(
            bb.x0 + (i as f64 + 0.5) * hx,
            bb.y0 + (j as f64 + 0.5) * hy,
            (a as f64 + 0.5) * ht,
            (b as f64 + 0.5) * ht,
        )
    };
    let cell_of = |c: &Config| {
        let i = (((c.x - bb.x0) / hx) as usize).min(n - 1);
        let j = (((c.y - bb.y0) / hy) as usize).min(n - 1);
        let a = ((c.t1.radians() / ht) as usize).min(m - 1);
        let b = ((c.t2.radians() / ht) as usize).min(m - 1);
        (i, j, a, b)
    };
    // 0 unknown, 1 usable, 2 blocked
    let mut state = vec![0u8; cells as usize];
    let usable = |i: usize, j: usize, a: usize, b: usize, state: &mut Vec<u8>| {
        let k = idx(i, j, a, b);
        if state[k] == 0 {
            let c = center(i, j, a, b);
            let band_ok = r.kappa < 0.0 || angle_dist(c.t1, c.t2) - ht > r.kappa;
            state[k] = if band_ok && clearance(&c, env, r) > margin {
                1
            } else {
                2
            };
        }
        state[k] == 1
    };
    let s = cell_of(alpha);
    let t = cell_of(beta);
    if !usable(s.0, s.1, s.2, s.3, &mut state) || !usable(t.0, t.1, t.2, t.3, &mut state) {
        return Ok(GridOutcome::NoPath);
    }
    let mut parent = vec![u32::MAX; cells as usize];
    let start = idx(s.0, s.1, s.2, s.3);
    let goal = idx(t.0, t.1, t.2, t.3);
    parent[start] = start as u32;
    let mut queue = VecDeque::from([s]);
    while let Some((i, j, a, b)) = queue.pop_front() {
        if idx(i, j, a, b) == goal {
            break;
        }
        let mut nbrs = Vec::with_capacity(8);
        if i > 0 {
            nbrs.push((i - 1, j, a, b));
        }
        if i + 1 < n {
            nbrs.push((i + 1, j, a, b));
        }
        if j > 0 {
            nbrs.push((i, j - 1, a, b));
        }
        if j + 1 < n {
            nbrs.push((i, j + 1, a, b));
        }
        nbrs.push((i, j, (a + 1) % m, b));
        nbrs.push((i, j, (a + m - 1) % m, b));
        nbrs.push((i, j, a, (b + 1) % m));
        nbrs.push((i, j, a, (b + m - 1) % m));
        let here = idx(i, j, a, b) as u32;
        for q in nbrs {
            let k = idx(q.0, q.1, q.2, q.3);
            if parent[k] == u32::MAX && usable(q.0, q.1, q.2, q.3, &mut state) {
                parent[k] = here;
                queue.push_back(q);
            }
        }
    }
    if parent[goal] == u32::MAX {
        return Ok(GridOutcome::NoPath);
    }
    let mut chain = vec![goal];
    while *chain.last().unwrap() != start {
        chain.push(parent[*chain.last().unwrap()] as usize);
    }
    chain.reverse();
    let mut path = vec![*alpha];
    for k in chain {
        let b = k % m;
        let a = (k / m) % m;
        let j = (k / (m * m)) % n;
        let i = k / (m * m * n);
        path.push(center(i, j, a, b));
    }
    path.push(*beta);
    Ok(GridOutcome::Path(path))
}
