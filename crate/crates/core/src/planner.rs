//! Subdivision search: refine the boxes of the start and goal until they are
//! free, then keep splitting candidate boxes until both lie in one connected
//! component of free boxes.

use crate::classify::{base_info, classify_with, feature_set, BaseInfo, Class};
use crate::cspace::{contact, in_band, Config, RobotSpec, Status, SubdivisionTree, XBox};
use crate::environment::Environment;
use crate::geometry::Rect;
use crate::union_find::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::str::FromStr;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Bounds on the cells per side of the grid used to find neighbours of new
/// free boxes.
const MIN_HASH_CELLS: usize = 16;
const MAX_HASH_CELLS: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Creation order.
    Bfs,
    /// Nearest to the goal position first.
    Gbf,
    /// Distance to the goal divided by box width.
    DistSize,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Bfs => "bfs",
            Strategy::Gbf => "gbf",
            Strategy::DistSize => "dist_size",
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bfs" => Ok(Strategy::Bfs),
            "gbf" => Ok(Strategy::Gbf),
            "dist_size" | "distsize" => Ok(Strategy::DistSize),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlanRequest<'a> {
    pub env: &'a Environment,
    pub robot: RobotSpec,
    pub alpha: Config,
    pub beta: Config,
    pub epsilon: f64,
    pub b0: Rect,
    pub strategy: Strategy,
    pub timeout: Option<Duration>,
    /// Worker threads for classifying the children of a split; 1 runs inline.
    pub threads: usize,
}

impl<'a> PlanRequest<'a> {
    pub fn new(
        env: &'a Environment,
        robot: RobotSpec,
        alpha: Config,
        beta: Config,
        epsilon: f64,
    ) -> Self {
        PlanRequest {
            env,
            robot,
            alpha,
            beta,
            epsilon,
            b0: env.bbox(),
            strategy: Strategy::Gbf,
            timeout: None,
            threads: 1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("epsilon must be positive and finite")]
    BadEpsilon,
    #[error("{0} configuration lies outside the root box")]
    OutsideRoot(&'static str),
    #[error("{0} configuration has its links within kappa of each other")]
    InBand(&'static str),
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Path(Vec<Config>),
    NoPath,
    Timeout,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Path(_) => "PATH",
            Outcome::NoPath => "NO-PATH",
            Outcome::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanStats {
    /// Boxes created, including the root.
    pub created: usize,
    pub split: usize,
    pub free: usize,
    pub stuck: usize,
    pub mixed: usize,
    pub small: usize,
    pub peak_queue: usize,
    #[serde(skip)]
    pub time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct PlanResult {
    pub outcome: Outcome,
    pub stats: PlanStats,
    pub tree: SubdivisionTree,
    /// Boxes along the channel, start to goal, when a path was found.
    pub channel: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    key: f64,
    seq: u64,
    id: usize,
}

impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Entry {
    // max-heap: smallest key, then earliest creation, is greatest
    fn cmp(&self, o: &Self) -> Ordering {
        o.key.total_cmp(&self.key).then(o.seq.cmp(&self.seq))
    }
}

/// Candidate boxes ordered by strategy, ties by creation order.
#[derive(Clone, Debug)]
pub struct BoxQueue {
    heap: BinaryHeap<Entry>,
    strategy: Strategy,
    goal: crate::geometry::Point2,
}

impl BoxQueue {
    pub fn new(strategy: Strategy, goal: crate::geometry::Point2) -> Self {
        BoxQueue {
            heap: BinaryHeap::new(),
            strategy,
            goal,
        }
    }

    pub fn priority(&self, bt: &Rect) -> f64 {
        let d = bt.center().dist(self.goal);
        match self.strategy {
            Strategy::Bfs => 0.0,
            Strategy::Gbf => d,
            Strategy::DistSize => d / bt.width(),
        }
    }

    /// `seq` must increase with creation order.
    pub fn push(&mut self, id: usize, seq: u64, bt: &Rect) {
        let key = self.priority(bt);
        self.heap.push(Entry { key, seq, id });
    }

    pub fn get_next(&mut self) -> Option<usize> {
        self.heap.pop().map(|e| e.id)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// Free boxes bucketed by the grid cells their base touches.
struct SpatialHash {
    b0: Rect,
    n: usize,
    cells: Vec<Vec<usize>>,
    stamp: Vec<u32>,
    round: u32,
    /// Largest coordinate magnitude of the root box.
    scale: f64,
}

impl SpatialHash {
    fn new(b0: Rect, eps: f64) -> Self {
        let side = b0.width().max(b0.y1 - b0.y0);
        let n = ((side / (2.0 * eps)).ceil() as usize).clamp(MIN_HASH_CELLS, MAX_HASH_CELLS);
        SpatialHash {
            b0,
            n,
            cells: vec![Vec::new(); n * n],
            stamp: Vec::new(),
            round: 0,
            scale: [b0.x0, b0.x1, b0.y0, b0.y1]
                .iter()
                .fold(0.0, |m: f64, v| m.max(v.abs())),
        }
    }

    fn range(&self, bt: &Rect) -> (usize, usize, usize, usize) {
        let pad = 1e-9 * (1.0 + self.b0.width());
        let n = self.n;
        let cell = |v: f64, lo: f64, hi: f64| {
            let f = ((v - lo) / (hi - lo) * n as f64).floor();
            f.clamp(0.0, (n - 1) as f64) as usize
        };
        (
            cell(bt.x0 - pad, self.b0.x0, self.b0.x1),
            cell(bt.x1 + pad, self.b0.x0, self.b0.x1),
            cell(bt.y0 - pad, self.b0.y0, self.b0.y1),
            cell(bt.y1 + pad, self.b0.y0, self.b0.y1),
        )
    }

    fn insert(&mut self, id: usize, bt: &Rect) {
        let (i0, i1, j0, j1) = self.range(bt);
        for i in i0..=i1 {
            for j in j0..=j1 {
                self.cells[i * self.n + j].push(id);
            }
        }
        if self.stamp.len() <= id {
            self.stamp.resize(id + 1, 0);
        }
    }

    /// Stored boxes whose cells meet those of `bt`, in increasing id order.
    fn candidates(&mut self, bt: &Rect) -> Vec<usize> {
        self.round += 1;
        let (i0, i1, j0, j1) = self.range(bt);
        let mut out = Vec::new();
        for i in i0..=i1 {
            for j in j0..=j1 {
                for &id in &self.cells[i * self.n + j] {
                    if self.stamp[id] != self.round {
                        self.stamp[id] = self.round;
                        out.push(id);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Relevant features and base-dependent predicate data of one
/// translational box.
struct Base {
    phi: Vec<u32>,
    info: BaseInfo,
}

fn rect_key(r: &Rect) -> [u64; 4] {
    [
        r.x0.to_bits(),
        r.y0.to_bits(),
        r.x1.to_bits(),
        r.y1.to_bits(),
    ]
}

struct Search<'a> {
    req: &'a PlanRequest<'a>,
    tree: SubdivisionTree,
    bases: Vec<Base>,
    base_of_rect: HashMap<[u64; 4], u32>,
    /// Base index of every tree node.
    node_base: Vec<u32>,
    queue: BoxQueue,
    uf: UnionFind,
    graph: Vec<Vec<(usize, Config)>>,
    hash: SpatialHash,
    stats: PlanStats,
    pool: Option<rayon::ThreadPool>,
}

enum Step {
    Continue,
    Fail,
}

impl<'a> Search<'a> {
    fn new(req: &'a PlanRequest<'a>) -> Result<Self, PlanError> {
        let pool = if req.threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(req.threads)
                    .build()
                    .map_err(|e| PlanError::Threads(e.to_string()))?,
            )
        } else {
            None
        };
        let tree = SubdivisionTree::new(req.b0, req.robot.kappa);
        let all: Vec<u32> = (0..req.env.features().len() as u32).collect();
        let mut s = Search {
            req,
            bases: Vec::new(),
            base_of_rect: HashMap::new(),
            node_base: Vec::new(),
            queue: BoxQueue::new(req.strategy, req.beta.position()),
            uf: UnionFind::new(),
            graph: Vec::new(),
            hash: SpatialHash::new(req.b0, req.epsilon),
            stats: PlanStats::default(),
            pool,
            tree,
        };
        s.stats.created = 1;
        let root = s.intern(vec![(req.b0, all)])[0];
        s.node_base.push(root);
        let kids = s.tree.node(0).children.clone();
        s.register(&kids, &vec![root; kids.len()]);
        Ok(s)
    }

    /// Base indices for `(rect, parent phi)` pairs, computing new ones.
    fn intern(&mut self, items: Vec<(Rect, Vec<u32>)>) -> Vec<u32> {
        let mut fresh: Vec<(Rect, Vec<u32>)> = Vec::new();
        for (bt, phi) in items.iter() {
            let key = rect_key(bt);
            if !self.base_of_rect.contains_key(&key)
                && !fresh.iter().any(|(r, _)| rect_key(r) == key)
            {
                fresh.push((*bt, phi.clone()));
            }
        }
        let (env, r) = (self.req.env, &self.req.robot);
        let job = |(bt, parent): &(Rect, Vec<u32>)| {
            let phi = feature_set(bt, parent, env, r);
            let info = base_info(bt, &phi, env, r);
            Base { phi, info }
        };
        let built: Vec<Base> = match &self.pool {
            Some(pool) => pool.install(|| fresh.par_iter().map(job).collect()),
            None => fresh.iter().map(job).collect(),
        };
        for ((bt, _), base) in fresh.iter().zip(built) {
            self.base_of_rect
                .insert(rect_key(bt), self.bases.len() as u32);
            self.bases.push(base);
        }
        items
            .iter()
            .map(|(bt, _)| self.base_of_rect[&rect_key(bt)])
            .collect()
    }

    /// Classifies new children and files them as free, stuck or candidates.
    fn register(&mut self, ids: &[usize], bases: &[u32]) {
        for (&id, &base) in ids.iter().zip(bases) {
            self.stats.created += 1;
            debug_assert_eq!(self.node_base.len(), id);
            self.node_base.push(base);
            let xbox = self.tree.node(id).xbox;
            let status = match classify_with(&xbox, &self.bases[base as usize].info) {
                Class::Free => Status::Free,
                Class::Stuck => Status::Stuck,
                Class::Mixed if xbox.rot_split => Status::Small,
                Class::Mixed => Status::Mixed,
            };
            self.tree.set_status(id, status);
            match status {
                Status::Free => {
                    self.stats.free += 1;
                    self.add_free(id);
                }
                Status::Stuck => self.stats.stuck += 1,
                Status::Small => self.stats.small += 1,
                Status::Mixed => {
                    self.stats.mixed += 1;
                    self.queue.push(id, id as u64, &xbox.bt);
                    self.stats.peak_queue = self.stats.peak_queue.max(self.queue.len());
                }
                Status::Unknown => unreachable!(),
            }
        }
    }

    fn add_free(&mut self, id: usize) {
        let kappa = self.req.robot.kappa;
        let xbox: XBox = self.tree.node(id).xbox;
        self.uf.make_set(id);
        if self.graph.len() <= id {
            self.graph.resize(id + 1, Vec::new());
        }
        for other in self.hash.candidates(&xbox.bt) {
            let ob = &self.tree.node(other).xbox.bt;
            // looser than the tolerance inside `contact`
            let tol = 1e-6 * (1.0 + self.hash.scale);
            if ob.x0 > xbox.bt.x1 + tol
                || xbox.bt.x0 > ob.x1 + tol
                || ob.y0 > xbox.bt.y1 + tol
                || xbox.bt.y0 > ob.y1 + tol
            {
                continue;
            }
            if let Some(c) = contact(&xbox, &self.tree.node(other).xbox, kappa) {
                let p = c.point();
                self.graph[id].push((other, p));
                self.graph[other].push((id, p));
                self.uf.union(id, other);
            }
        }
        self.hash.insert(id, &xbox.bt);
    }

    fn splittable(&self, id: usize) -> bool {
        self.tree.is_leaf(id) && self.tree.node(id).status == Status::Mixed
    }

    fn split(&mut self, id: usize) {
        debug_assert!(self.splittable(id));
        self.stats.split += 1;
        let xbox = self.tree.node(id).xbox;
        let base = self.node_base[id];
        if xbox.bt.width() > self.req.epsilon {
            let kids = self.tree.split_translational(id);
            let parent = &self.bases[base as usize].phi;
            let items = kids
                .iter()
                .map(|&k| (self.tree.node(k).xbox.bt, parent.clone()))
                .collect();
            let bases = self.intern(items);
            self.register(&kids, &bases);
        } else {
            let [z1, z2] = &self.bases[base as usize].info.zones;
            let kids = self.tree.split_rotational(id, z1, z2);
            if kids.is_empty() {
                // no angle survives the zones; undecided at this resolution
                self.tree.set_status(id, Status::Small);
                self.stats.small += 1;
                return;
            }
            self.register(&kids, &vec![base; kids.len()]);
        }
    }

    /// Refines the box of `c` until it is free.
    fn settle(&mut self, c: &Config, deadline: Option<Instant>) -> Result<Option<usize>, ()> {
        loop {
            if deadline.is_some_and(|d| Instant::now() > d) {
                return Err(());
            }
            let Some(id) = self.tree.locate(c) else {
                return Ok(None);
            };
            match self.tree.node(id).status {
                Status::Free => return Ok(Some(id)),
                Status::Mixed => self.split(id),
                _ => return Ok(None),
            }
        }
    }

    fn step(&mut self) -> Step {
        loop {
            let Some(id) = self.queue.get_next() else {
                return Step::Fail;
            };
            if self.splittable(id) {
                self.split(id);
                return Step::Continue;
            }
        }
    }

    fn channel(&self, from: usize, to: usize) -> Vec<(usize, Option<Config>)> {
        let mut prev: Vec<Option<(usize, Config)>> = vec![None; self.graph.len()];
        let mut seen = vec![false; self.graph.len()];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(u) = q.pop_front() {
            if u == to {
                break;
            }
            for &(v, p) in &self.graph[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, p));
                    q.push_back(v);
                }
            }
        }
        let mut out = vec![(to, None)];
        let mut cur = to;
        while cur != from {
            let (u, p) = prev[cur].expect("connected");
            out.last_mut().unwrap().1 = Some(p);
            out.push((u, None));
            cur = u;
        }
        out.reverse();
        // the face point belongs to the step into the next box
        let mut fixed = Vec::with_capacity(out.len());
        for k in 0..out.len() {
            let face = if k + 1 < out.len() {
                out[k + 1].1
            } else {
                None
            };
            fixed.push((out[k].0, face));
        }
        fixed
    }
}

/// Runs the subdivision search.
pub fn plan(req: &PlanRequest) -> Result<PlanResult, PlanError> {
    if !(req.epsilon > 0.0 && req.epsilon.is_finite()) {
        return Err(PlanError::BadEpsilon);
    }
    for (c, name) in [(&req.alpha, "start"), (&req.beta, "goal")] {
        if !req.b0.contains(c.position()) {
            return Err(PlanError::OutsideRoot(name));
        }
        if in_band(c.t1, c.t2, req.robot.kappa) {
            return Err(PlanError::InBand(name));
        }
    }
    let started = Instant::now();
    let deadline = req.timeout.map(|t| started + t);
    let mut s = Search::new(req)?;
    let finish = |s: Search, outcome: Outcome, channel: Vec<usize>| {
        let mut stats = s.stats;
        stats.time_ms = started.elapsed().as_secs_f64() * 1e3;
        PlanResult {
            outcome,
            stats,
            tree: s.tree,
            channel,
        }
    };

    let a = match s.settle(&req.alpha, deadline) {
        Err(()) => return Ok(finish(s, Outcome::Timeout, Vec::new())),
        Ok(None) => return Ok(finish(s, Outcome::NoPath, Vec::new())),
        Ok(Some(a)) => a,
    };
    let b = match s.settle(&req.beta, deadline) {
        Err(()) => return Ok(finish(s, Outcome::Timeout, Vec::new())),
        Ok(None) => return Ok(finish(s, Outcome::NoPath, Vec::new())),
        Ok(Some(b)) => b,
    };
    // loop 2 may have split the box of the start; it was free, so it is intact
    debug_assert_eq!(s.tree.locate(&req.alpha), Some(a));
    while !s.uf.same(a, b) {
        if deadline.is_some_and(|d| Instant::now() > d) {
            return Ok(finish(s, Outcome::Timeout, Vec::new()));
        }
        if let Step::Fail = s.step() {
            return Ok(finish(s, Outcome::NoPath, Vec::new()));
        }
    }

    let kappa = req.robot.kappa;
    let chain = s.channel(a, b);
    let mut path = vec![req.alpha];
    for &(id, face) in &chain {
        path.push(s.tree.node(id).xbox.center_config(kappa));
        if let Some(f) = face {
            path.push(f);
        }
    }
    path.push(req.beta);
    let channel = chain.iter().map(|&(id, _)| id).collect();
    Ok(finish(s, Outcome::Path(path), channel))
}
