//! Configuration space `ℝ² × 𝕋` of the two-link robot, X-boxes, and the
//! subdivision tree.
//!
//! A configuration is `(x, y, θ₁, θ₂)`: the joint position and the two link
//! directions. With `κ ≥ 0` the links must stay more than `κ` apart in
//! angle, so the torus loses the diagonal band `d(θ₁, θ₂) ≤ κ`. In the chart
//! `[0, 2π]²` what remains splits into the strip `θ₁ < θ₂` ([`Tag::Lt`]) and
//! the strip `θ₁ > θ₂` ([`Tag::Gt`]); the two are glued across `0 ≡ 2π`.

use crate::geometry::{angle_dist, Angle, AngularSet, LinkGeom, Point2, Rect, ANGLE_EPS};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// Tolerance for coordinates that should coincide after exact halving.
const COORD_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CspaceError {
    #[error("invalid robot: {0}")]
    InvalidRobot(String),
    #[error("rotational interval wraps through 0; split it first")]
    WrappingInterval,
}

/// Link lengths, common thickness and minimum link separation `κ` (radians).
/// `κ < 0` lets the links cross.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub l1: f64,
    pub l2: f64,
    pub tau: f64,
    pub kappa: f64,
}

impl RobotSpec {
    pub fn new(l1: f64, l2: f64, tau: f64, kappa: f64) -> Result<Self, CspaceError> {
        let bad = |m: &str| Err(CspaceError::InvalidRobot(m.to_string()));
        if !(l1.is_finite() && l2.is_finite() && tau.is_finite() && kappa.is_finite()) {
            return bad("parameters must be finite");
        }
        if l1 <= 0.0 || l2 <= 0.0 {
            return bad("link lengths must be positive");
        }
        if tau < 0.0 {
            return bad("thickness must be non-negative");
        }
        if kappa >= PI {
            return bad("kappa must be below pi");
        }
        Ok(RobotSpec { l1, l2, tau, kappa })
    }

    pub fn crossing_allowed(&self) -> bool {
        self.kappa < 0.0
    }

    pub fn link(&self, i: usize) -> LinkGeom {
        LinkGeom::new(if i == 0 { self.l1 } else { self.l2 }, self.tau)
    }

    pub fn max_len(&self) -> f64 {
        self.l1.max(self.l2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Config {
    pub x: f64,
    pub y: f64,
    pub t1: Angle,
    pub t2: Angle,
}

impl Config {
    pub fn new(x: f64, y: f64, t1: f64, t2: f64) -> Self {
        Config {
            x,
            y,
            t1: Angle::new(t1),
            t2: Angle::new(t2),
        }
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Joint `A₀` and link tips `A₁`, `A₂`.
pub fn footprints(c: &Config, r: &RobotSpec) -> [Point2; 3] {
    let a0 = c.position();
    [a0, a0 + c.t1.unit() * r.l1, a0 + c.t2.unit() * r.l2]
}

/// Whether the link directions are within `κ` of each other.
pub fn in_band(t1: Angle, t2: Angle, kappa: f64) -> bool {
    kappa >= 0.0 && angle_dist(t1, t2) <= kappa
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    Lt,
    Gt,
    /// Both strips and the band; only used when crossing is allowed.
    Full,
}

impl Tag {
    /// Membership of chart coordinates in the open strip of this tag.
    pub fn admits(self, t1: f64, t2: f64, kappa: f64) -> bool {
        match self {
            Tag::Full => true,
            Tag::Lt => {
                let d = t2 - t1;
                d > kappa && d < TAU - kappa
            }
            Tag::Gt => {
                let d = t1 - t2;
                d > kappa && d < TAU - kappa
            }
        }
    }
}

/// Closed non-wrapping angle range `[lo, hi] ⊆ [0, 2π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Span {
    pub lo: f64,
    pub hi: f64,
}

impl Span {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(0.0 <= lo && lo <= hi && hi <= TAU, "span [{lo}, {hi}]");
        Span { lo, hi }
    }

    pub fn full() -> Self {
        Span { lo: 0.0, hi: TAU }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn overlap(&self, o: &Span) -> Option<Span> {
        let (lo, hi) = (self.lo.max(o.lo), self.hi.min(o.hi));
        (hi > lo).then_some(Span { lo, hi })
    }

    /// Chart values of `theta` inside this span. `0` and `2π` are both tried.
    pub fn chart_values(&self, theta: Angle) -> impl Iterator<Item = f64> + '_ {
        let t = theta.radians();
        let reps = [
            Some(t),
            (t <= ANGLE_EPS).then_some(t + TAU),
            (TAU - t <= ANGLE_EPS).then_some(t - TAU),
        ];
        reps.into_iter()
            .flatten()
            .filter(move |&v| self.lo - ANGLE_EPS <= v && v <= self.hi + ANGLE_EPS)
            .map(move |v| v.clamp(self.lo, self.hi))
    }
}

/// Rotational box `Θ₁ × Θ₂` with non-wrapping sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotBox {
    pub th1: Span,
    pub th2: Span,
}

impl RotBox {
    pub fn new(th1: Span, th2: Span) -> Self {
        RotBox { th1, th2 }
    }

    pub fn full() -> Self {
        RotBox::new(Span::full(), Span::full())
    }

    /// Rejects wrapping intervals.
    pub fn from_intervals(
        i1: &crate::geometry::AngularInterval,
        i2: &crate::geometry::AngularInterval,
    ) -> Result<Self, CspaceError> {
        let span = |i: &crate::geometry::AngularInterval| {
            if i.full {
                Ok(Span::full())
            } else if i.is_wrapping() {
                Err(CspaceError::WrappingInterval)
            } else {
                Ok(Span::new(i.s.radians(), i.t.radians()))
            }
        };
        Ok(RotBox::new(span(i1)?, span(i2)?))
    }

    pub fn intersection(&self, o: &RotBox) -> Option<RotBox> {
        Some(RotBox::new(
            self.th1.overlap(&o.th1)?,
            self.th2.overlap(&o.th2)?,
        ))
    }
}

/// Whether `br ∩ strip(tag)` is empty.
pub fn is_box_empty(br: &RotBox, kappa: f64, tag: Tag) -> bool {
    let (a, b, a2, b2) = (br.th1.lo, br.th1.hi, br.th2.lo, br.th2.hi);
    match tag {
        Tag::Full => false,
        Tag::Lt => kappa >= b2 - a || TAU - kappa <= a2 - b,
        Tag::Gt => kappa >= b - a2 || TAU - kappa <= a - b2,
    }
}

fn tags_for(kappa: f64) -> &'static [Tag] {
    if kappa < 0.0 {
        &[Tag::Full]
    } else {
        &[Tag::Lt, Tag::Gt]
    }
}

/// The four half-turn quadrants of the torus, each cut into its non-empty
/// tagged parts.
pub fn initial_torus_split(kappa: f64) -> Vec<(RotBox, Tag)> {
    let halves = [Span::new(0.0, PI), Span::new(PI, TAU)];
    let mut out = Vec::new();
    for h1 in halves {
        for h2 in halves {
            let br = RotBox::new(h1, h2);
            for &tag in tags_for(kappa) {
                if !is_box_empty(&br, kappa, tag) {
                    out.push((br, tag));
                }
            }
        }
    }
    out
}

/// A configuration-space box restricted to one strip.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XBox {
    pub bt: Rect,
    pub br: RotBox,
    pub tag: Tag,
    /// Set on the children of the single rotational split.
    pub rot_split: bool,
}

impl XBox {
    pub fn contains(&self, c: &Config, kappa: f64) -> bool {
        if !self.bt.contains(c.position()) {
            return false;
        }
        self.br.th1.chart_values(c.t1).any(|t1| {
            self.br
                .th2
                .chart_values(c.t2)
                .any(|t2| self.tag.admits(t1, t2, kappa))
        })
    }

    /// Interior point of `br ∩ strip`: the centroid of that convex polygon.
    pub fn rot_center(&self, kappa: f64) -> (f64, f64) {
        rot_centroid(&self.br, self.tag, kappa)
    }

    pub fn center_config(&self, kappa: f64) -> Config {
        let c = self.bt.center();
        let (t1, t2) = self.rot_center(kappa);
        Config::new(c.x, c.y, t1, t2)
    }
}

/// Quadtree split of `bt`; rotational part inherited.
pub fn split_translational(b: &XBox) -> [XBox; 4] {
    b.bt.quadrants().map(|bt| XBox { bt, ..*b })
}

/// Non-wrapping free pieces of `zones`' complement inside `span`.
fn free_spans(zones: &AngularSet, span: &Span) -> Vec<Span> {
    zones
        .complement()
        .restrict(span.lo, span.hi)
        .pieces()
        .iter()
        .filter(|(lo, hi)| hi - lo > ANGLE_EPS)
        .map(|&(lo, hi)| Span::new(lo, hi))
        .collect()
}

/// The single rotational split: every product of free intervals of the two
/// links, cut into non-empty tagged parts.
pub fn split_rotational_tr(
    b: &XBox,
    zones1: &AngularSet,
    zones2: &AngularSet,
    kappa: f64,
) -> Vec<XBox> {
    let f1 = free_spans(zones1, &b.br.th1);
    let f2 = free_spans(zones2, &b.br.th2);
    let tags: &[Tag] = if b.tag == Tag::Full {
        tags_for(kappa)
    } else {
        std::slice::from_ref(&b.tag)
    };
    let mut out = Vec::new();
    for s1 in &f1 {
        for s2 in &f2 {
            let br = RotBox::new(*s1, *s2);
            for &tag in tags {
                if !is_box_empty(&br, kappa, tag) {
                    out.push(XBox {
                        bt: b.bt,
                        br,
                        tag,
                        rot_split: true,
                    });
                }
            }
        }
    }
    out
}

fn clip_halfplane(poly: &[(f64, f64)], keep: impl Fn(f64, f64) -> f64) -> Vec<(f64, f64)> {
    // keeps points with keep(p) >= 0; keep is affine
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let (fp, fq) = (keep(p.0, p.1), keep(q.0, q.1));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Region `br ∩ closure(strip)` as a convex polygon in the chart.
pub fn rot_polygon(br: &RotBox, tag: Tag, kappa: f64) -> Vec<(f64, f64)> {
    let mut poly = vec![
        (br.th1.lo, br.th2.lo),
        (br.th1.hi, br.th2.lo),
        (br.th1.hi, br.th2.hi),
        (br.th1.lo, br.th2.hi),
    ];
    let (lo, hi) = (kappa, TAU - kappa);
    match tag {
        Tag::Full => {}
        Tag::Lt => {
            poly = clip_halfplane(&poly, |a, b| (b - a) - lo);
            poly = clip_halfplane(&poly, |a, b| hi - (b - a));
        }
        Tag::Gt => {
            poly = clip_halfplane(&poly, |a, b| (a - b) - lo);
            poly = clip_halfplane(&poly, |a, b| hi - (a - b));
        }
    }
    poly
}

fn rot_centroid(br: &RotBox, tag: Tag, kappa: f64) -> (f64, f64) {
    let poly = rot_polygon(br, tag, kappa);
    let n = poly.len();
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (x0, y0) = poly[i];
        let (x1, y1) = poly[(i + 1) % n];
        let cr = x0 * y1 - x1 * y0;
        a += cr;
        cx += (x0 + x1) * cr;
        cy += (y0 + y1) * cr;
    }
    if a.abs() < 1e-18 {
        let k = n.max(1) as f64;
        let sx: f64 = poly.iter().map(|p| p.0).sum();
        let sy: f64 = poly.iter().map(|p| p.1).sum();
        return (sx / k, sy / k);
    }
    (cx / (3.0 * a), cy / (3.0 * a))
}

/// Open range of the free angle on the face `θ_fixed = c` allowed by `tag`.
/// `fixed_is_first` says whether `c` is a value of `θ₁`.
fn face_range(tag: Tag, c: f64, fixed_is_first: bool, kappa: f64) -> (f64, f64) {
    match (tag, fixed_is_first) {
        (Tag::Full, _) => (f64::NEG_INFINITY, f64::INFINITY),
        // θ₂ − θ₁ ∈ (κ, 2π − κ)
        (Tag::Lt, true) => (c + kappa, c + TAU - kappa),
        (Tag::Lt, false) => (c - TAU + kappa, c - kappa),
        (Tag::Gt, true) => (c - TAU + kappa, c - kappa),
        (Tag::Gt, false) => (c + kappa, c + TAU - kappa),
    }
}

/// How two boxes meet in a common 3-dimensional face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contact {
    /// Translational edge shared; the point lies on it with common angles.
    Translational(Config),
    /// Bases overlap; an angle abuts (possibly across `0 ≡ 2π`).
    Rotational(Config),
}

impl Contact {
    pub fn point(&self) -> Config {
        match *self {
            Contact::Translational(c) | Contact::Rotational(c) => c,
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= COORD_EPS * (1.0 + a.abs().max(b.abs()))
}

/// Shared edge of two rectangles with disjoint interiors, as its midpoint.
fn shared_edge(r: &Rect, s: &Rect) -> Option<Point2> {
    let xo = (r.x0.max(s.x0), r.x1.min(s.x1));
    let yo = (r.y0.max(s.y0), r.y1.min(s.y1));
    let x_touch = close(r.x1, s.x0) || close(s.x1, r.x0);
    let y_touch = close(r.y1, s.y0) || close(s.y1, r.y0);
    if x_touch && yo.1 - yo.0 > COORD_EPS {
        let x = if close(r.x1, s.x0) { r.x1 } else { r.x0 };
        return Some(Point2::new(x, 0.5 * (yo.0 + yo.1)));
    }
    if y_touch && xo.1 - xo.0 > COORD_EPS {
        let y = if close(r.y1, s.y0) { r.y1 } else { r.y0 };
        return Some(Point2::new(0.5 * (xo.0 + xo.1), y));
    }
    None
}

fn area_overlap(r: &Rect, s: &Rect) -> Option<Rect> {
    let (x0, x1) = (r.x0.max(s.x0), r.x1.min(s.x1));
    let (y0, y1) = (r.y0.max(s.y0), r.y1.min(s.y1));
    (x1 - x0 > COORD_EPS && y1 - y0 > COORD_EPS).then(|| Rect::new(x0, y0, x1, y1))
}

/// Abutting values of two spans with disjoint interiors: pairs `(c_a, c_b)`
/// with `c_a` on `a`'s boundary and `c_b` on `b`'s, equal on the circle.
fn abutments(a: &Span, b: &Span) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if a.overlap(b).is_some_and(|o| o.len() > COORD_EPS) {
        return out;
    }
    if close(a.hi, b.lo) {
        out.push((a.hi, b.lo));
    }
    if close(b.hi, a.lo) {
        out.push((a.lo, b.hi));
    }
    if close(a.hi, TAU) && close(b.lo, 0.0) {
        out.push((a.hi, b.lo));
    }
    if close(b.hi, TAU) && close(a.lo, 0.0) {
        out.push((a.lo, b.hi));
    }
    out
}

/// Common face of two boxes, with a configuration in its relative interior.
pub fn contact(b1: &XBox, b2: &XBox, kappa: f64) -> Option<Contact> {
    if let Some(edge) = shared_edge(&b1.bt, &b2.bt) {
        let compatible = b1.tag == b2.tag || b1.tag == Tag::Full || b2.tag == Tag::Full;
        if !compatible {
            return None;
        }
        let tag = if b1.tag == Tag::Full { b2.tag } else { b1.tag };
        let common = b1.br.intersection(&b2.br)?;
        if is_box_empty(&common, kappa, tag) {
            return None;
        }
        let (t1, t2) = rot_centroid(&common, tag, kappa);
        return Some(Contact::Translational(Config::new(edge.x, edge.y, t1, t2)));
    }
    let base = area_overlap(&b1.bt, &b2.bt)?.center();
    for fixed_first in [true, false] {
        let (s1, s2, o1, o2) = if fixed_first {
            (&b1.br.th1, &b2.br.th1, &b1.br.th2, &b2.br.th2)
        } else {
            (&b1.br.th2, &b2.br.th2, &b1.br.th1, &b2.br.th1)
        };
        let Some(common) = o1.overlap(o2) else {
            continue;
        };
        for (c1, c2) in abutments(s1, s2) {
            let r1 = face_range(b1.tag, c1, fixed_first, kappa);
            let r2 = face_range(b2.tag, c2, fixed_first, kappa);
            let lo = common.lo.max(r1.0).max(r2.0);
            let hi = common.hi.min(r1.1).min(r2.1);
            if hi - lo > ANGLE_EPS {
                let free = 0.5 * (lo + hi);
                let (t1, t2) = if fixed_first { (c1, free) } else { (free, c1) };
                return Some(Contact::Rotational(Config::new(base.x, base.y, t1, t2)));
            }
        }
    }
    None
}

pub fn adjacent(b1: &XBox, b2: &XBox, kappa: f64) -> bool {
    contact(b1, b2, kappa).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Unknown,
    Free,
    Stuck,
    Mixed,
    /// Still mixed after the rotational split; never split again.
    Small,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub xbox: XBox,
    pub status: Status,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: u32,
}

/// Arena of X-boxes. Node 0 is `B₀ᵗ × 𝕋`; its children are the tagged
/// quadrants.
#[derive(Clone, Debug)]
pub struct SubdivisionTree {
    nodes: Vec<Node>,
    kappa: f64,
}

impl SubdivisionTree {
    pub fn new(b0: Rect, kappa: f64) -> Self {
        let root = XBox {
            bt: b0,
            br: RotBox::full(),
            tag: Tag::Full,
            rot_split: false,
        };
        let mut t = SubdivisionTree {
            nodes: vec![Node {
                xbox: root,
                status: Status::Mixed,
                parent: None,
                children: Vec::new(),
                depth: 0,
            }],
            kappa,
        };
        let kids: Vec<XBox> = initial_torus_split(kappa)
            .into_iter()
            .map(|(br, tag)| XBox {
                bt: b0,
                br,
                tag,
                rot_split: false,
            })
            .collect();
        t.attach(0, kids);
        t
    }

    fn attach(&mut self, parent: usize, kids: Vec<XBox>) -> Vec<usize> {
        let depth = self.nodes[parent].depth + 1;
        let mut ids = Vec::with_capacity(kids.len());
        for xbox in kids {
            ids.push(self.nodes.len());
            self.nodes.push(Node {
                xbox,
                status: Status::Unknown,
                parent: Some(parent),
                children: Vec::new(),
                depth,
            });
        }
        self.nodes[parent].children = ids.clone();
        ids
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn set_status(&mut self, id: usize, s: Status) {
        self.nodes[id].status = s;
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].children.is_empty()
    }

    pub fn split_translational(&mut self, id: usize) -> Vec<usize> {
        assert!(self.is_leaf(id));
        let kids = split_translational(&self.nodes[id].xbox).to_vec();
        self.attach(id, kids)
    }

    /// May yield no children when no angle is free.
    pub fn split_rotational(
        &mut self,
        id: usize,
        zones1: &AngularSet,
        zones2: &AngularSet,
    ) -> Vec<usize> {
        assert!(self.is_leaf(id) && !self.nodes[id].xbox.rot_split);
        let kids = split_rotational_tr(&self.nodes[id].xbox, zones1, zones2, self.kappa);
        let ids = self.attach(id, kids);
        if ids.is_empty() {
            // remember that this leaf was consumed
            self.nodes[id].xbox.rot_split = true;
        }
        ids
    }

    /// Leaf whose represented set contains `c`, preferring earlier children.
    pub fn locate(&self, c: &Config) -> Option<usize> {
        let mut id = 0;
        if !self.nodes[0].xbox.bt.contains(c.position()) {
            return None;
        }
        loop {
            let node = &self.nodes[id];
            if node.children.is_empty() {
                return (id != 0 || node.xbox.contains(c, self.kappa)).then_some(id);
            }
            id = *node
                .children
                .iter()
                .find(|&&k| self.nodes[k].xbox.contains(c, self.kappa))?;
        }
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty())
    }
}
