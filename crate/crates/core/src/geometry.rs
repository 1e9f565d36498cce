//! Scalar, planar and circle primitives.
//!
//! Angles live on S¹, represented by `[0, 2π)` with `0 ≡ 2π`. Closed angular
//! intervals `[s, t]` follow the wrap convention: when `s > t` the interval is
//! `[s, 2π] ∪ [0, t]`. All comparisons on normalized angles use the absolute
//! tolerance [`ANGLE_EPS`].

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Working tolerance for angle comparisons and interval merging (radians).
pub const ANGLE_EPS: f64 = 1e-12;

/// Reduce an arbitrary real to `[0, 2π)`.
pub fn normalize_radians(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of S¹, stored in `[0, 2π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Self {
        Angle(normalize_radians(radians))
    }

    pub fn from_degrees(deg: f64) -> Self {
        Angle::new(deg.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Polar angle of a direction vector. `None` for the zero vector.
    pub fn of_vector(v: Point2) -> Option<Self> {
        if v.x == 0.0 && v.y == 0.0 {
            None
        } else {
            Some(Angle::new(v.y.atan2(v.x)))
        }
    }

    pub fn unit(self) -> Point2 {
        Point2::new(self.0.cos(), self.0.sin())
    }

    pub fn approx_eq(self, other: Angle) -> bool {
        angle_dist(self, other) <= ANGLE_EPS
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Riemannian distance on S¹, in `[0, π]`.
pub fn angle_dist(a: Angle, b: Angle) -> f64 {
    raw_angle_dist(a.0, b.0)
}

/// Circle distance between two raw (not necessarily normalized) angles.
pub fn raw_angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(TAU);
    d.min(TAU - d)
}

/// A closed arc of S¹ under the `[s, t]` wrap convention.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularInterval {
    pub s: Angle,
    pub t: Angle,
    pub full: bool,
}

impl AngularInterval {
    /// Builds `[s, t]` from raw endpoints. `[0, 2π]` (or any arc of length
    /// at least 2π) is the full circle; `[2π, 0]` is the singleton `{0}`.
    pub fn new(s: f64, t: f64) -> Self {
        if s <= t && t - s >= TAU - ANGLE_EPS {
            return Self::full();
        }
        AngularInterval {
            s: Angle::new(s),
            t: Angle::new(t),
            full: false,
        }
    }

    pub fn full() -> Self {
        AngularInterval {
            s: Angle::ZERO,
            t: Angle::ZERO,
            full: true,
        }
    }

    pub fn singleton(a: Angle) -> Self {
        AngularInterval {
            s: a,
            t: a,
            full: false,
        }
    }

    /// The arc `[center - half, center + half]`.
    pub fn around(center: Angle, half: f64) -> Self {
        if half >= PI {
            Self::full()
        } else {
            Self::new(center.0 - half, center.0 + half)
        }
    }

    pub fn is_wrapping(&self) -> bool {
        !self.full && self.s.0 > self.t.0
    }

    pub fn length(&self) -> f64 {
        if self.full {
            TAU
        } else if self.s.0 <= self.t.0 {
            self.t.0 - self.s.0
        } else {
            TAU - self.s.0 + self.t.0
        }
    }

    pub fn contains(&self, theta: Angle) -> bool {
        if self.full {
            return true;
        }
        let th = theta.0;
        let inside = if self.s.0 <= self.t.0 {
            self.s.0 <= th && th <= self.t.0
        } else {
            th >= self.s.0 || th <= self.t.0
        };
        inside || theta.approx_eq(self.s) || theta.approx_eq(self.t)
    }

    pub fn shifted(&self, delta: f64) -> Self {
        if self.full {
            *self
        } else {
            AngularInterval {
                s: Angle::new(self.s.0 + delta),
                t: Angle::new(self.t.0 + delta),
                full: false,
            }
        }
    }

    /// Grows the arc by `pad` on each side.
    pub fn widened(&self, pad: f64) -> Self {
        if self.full || self.length() + 2.0 * pad >= TAU {
            Self::full()
        } else {
            AngularInterval {
                s: Angle::new(self.s.0 - pad),
                t: Angle::new(self.t.0 + pad),
                full: false,
            }
        }
    }

    /// Non-wrapping pieces inside `[0, 2π]` whose union is this arc.
    pub fn pieces(&self) -> Vec<(f64, f64)> {
        if self.full {
            vec![(0.0, TAU)]
        } else if self.s.0 <= self.t.0 {
            vec![(self.s.0, self.t.0)]
        } else {
            vec![(self.s.0, TAU), (0.0, self.t.0)]
        }
    }
}

impl fmt::Display for AngularInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.full {
            write!(f, "S1")
        } else {
            write!(f, "[{:.6}, {:.6}]", self.s.0, self.t.0)
        }
    }
}

/// A closed subset of S¹ made of finitely many arcs.
///
/// Stored as sorted, pairwise separated pieces `(a, b)` with
/// `0 <= a <= b <= 2π`; a wrapping arc appears as a piece starting at 0 plus
/// a piece ending at 2π. Pieces closer than [`ANGLE_EPS`] are merged.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AngularSet {
    pieces: Vec<(f64, f64)>,
}

impl AngularSet {
    pub fn empty() -> Self {
        AngularSet { pieces: Vec::new() }
    }

    pub fn full() -> Self {
        AngularSet {
            pieces: vec![(0.0, TAU)],
        }
    }

    pub fn from_interval(i: AngularInterval) -> Self {
        Self::from_pieces(i.pieces())
    }

    pub fn from_intervals<I: IntoIterator<Item = AngularInterval>>(it: I) -> Self {
        Self::from_pieces(it.into_iter().flat_map(|i| i.pieces()).collect())
    }

    /// Builds a set from raw `[a, b]` pieces (clamped to `[0, 2π]`).
    pub fn from_pieces(mut raw: Vec<(f64, f64)>) -> Self {
        for p in raw.iter_mut() {
            p.0 = p.0.clamp(0.0, TAU);
            p.1 = p.1.clamp(0.0, TAU);
        }
        raw.retain(|p| p.0 <= p.1);
        raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match pieces.last_mut() {
                Some(last) if a <= last.1 + ANGLE_EPS => last.1 = last.1.max(b),
                _ => pieces.push((a, b)),
            }
        }
        if let (Some(first), Some(last)) = (pieces.first(), pieces.last()) {
            if first.0 <= ANGLE_EPS && last.1 >= TAU - ANGLE_EPS && pieces.len() == 1 {
                pieces = vec![(0.0, TAU)];
            }
        }
        AngularSet { pieces }
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0] == (0.0, TAU)
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(|(a, b)| b - a).sum()
    }

    /// Maximal arcs, with a piece touching 0 joined to one touching 2π.
    pub fn intervals(&self) -> Vec<AngularInterval> {
        if self.is_full() {
            return vec![AngularInterval::full()];
        }
        let mut ps = self.pieces.clone();
        let wrap = ps.len() >= 2 && ps[0].0 <= ANGLE_EPS && ps[ps.len() - 1].1 >= TAU - ANGLE_EPS;
        let mut out = Vec::with_capacity(ps.len());
        if wrap {
            let head = ps.remove(0);
            let tail = ps.pop().expect("len >= 2");
            out.extend(ps.iter().map(|&(a, b)| AngularInterval::new(a, b)));
            out.push(AngularInterval {
                s: Angle::new(tail.0),
                t: Angle::new(head.1),
                full: false,
            });
        } else {
            out.extend(ps.iter().map(|&(a, b)| AngularInterval::new(a, b)));
        }
        out.sort_by(|a, b| a.s.0.total_cmp(&b.s.0));
        out
    }

    pub fn union(&self, other: &AngularSet) -> AngularSet {
        let mut raw = self.pieces.clone();
        raw.extend_from_slice(&other.pieces);
        Self::from_pieces(raw)
    }

    pub fn union_interval(&mut self, i: AngularInterval) {
        if self.is_full() {
            return;
        }
        let mut raw = std::mem::take(&mut self.pieces);
        raw.extend(i.pieces());
        *self = Self::from_pieces(raw);
    }

    pub fn complement(&self) -> AngularSet {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        let mut prev = 0.0;
        for &(a, b) in &self.pieces {
            if a > prev {
                out.push((prev, a));
            }
            prev = b;
        }
        if prev < TAU {
            out.push((prev, TAU));
        }
        AngularSet { pieces: out }
    }

    pub fn intersect(&self, other: &AngularSet) -> AngularSet {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a0, a1) = self.pieces[i];
            let (b0, b1) = other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_pieces(out)
    }

    /// Intersection with the raw non-wrapping range `[lo, hi] ⊂ [0, 2π]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> AngularSet {
        self.intersect(&AngularSet {
            pieces: vec![(lo.max(0.0), hi.min(TAU))],
        })
    }

    pub fn contains(&self, theta: Angle) -> bool {
        let th = theta.0;
        self.pieces.iter().any(|&(a, b)| {
            (a - ANGLE_EPS <= th && th <= b + ANGLE_EPS)
                || (a <= ANGLE_EPS && TAU - th <= ANGLE_EPS)
                || (b >= TAU - ANGLE_EPS && th <= ANGLE_EPS)
        })
    }

    /// True when some piece shares interior points with the raw range
    /// `[lo, hi]`. Touching at a single endpoint does not count.
    pub fn overlaps_range(&self, lo: f64, hi: f64) -> bool {
        self.pieces.iter().any(|&(a, b)| {
            if lo == hi {
                a <= lo && lo <= b
            } else {
                a < hi && b > lo
            }
        })
    }

    /// True when the raw range `[lo, hi]` lies inside one piece.
    pub fn covers_range(&self, lo: f64, hi: f64) -> bool {
        self.pieces.iter().any(|&(a, b)| a <= lo && hi <= b)
    }

    /// Rotates every arc by `delta`.
    pub fn shifted(&self, delta: f64) -> AngularSet {
        if self.is_full() || self.is_empty() {
            return self.clone();
        }
        Self::from_intervals(self.intervals().into_iter().map(|i| i.shifted(delta)))
    }

    /// Interval-list equality up to `tol` on every endpoint.
    pub fn approx_eq(&self, other: &AngularSet, tol: f64) -> bool {
        self.pieces.len() == other.pieces.len()
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(p, q)| (p.0 - q.0).abs() <= tol && (p.1 - q.1).abs() <= tol)
    }
}

impl fmt::Display for AngularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.intervals().iter().map(|i| i.to_string()).collect();
        if parts.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{}", parts.join(" u "))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

/// Closed segment `[a, b]`. A zero-length segment stands for a corner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment2 {
    pub a: Point2,
    pub b: Point2,
}

impl Segment2 {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Segment2 { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn at(&self, s: f64) -> Point2 {
        self.a + (self.b - self.a) * s
    }

    pub fn translated(&self, d: Point2) -> Segment2 {
        Segment2::new(self.a + d, self.b + d)
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect {
            x0: x0.min(x1),
            y0: y0.min(y1),
            x1: x0.max(x1),
            y1: y0.max(y1),
        }
    }

    /// The degenerate rectangle holding one point.
    pub fn point(p: Point2) -> Self {
        Rect::new(p.x, p.y, p.x, p.y)
    }

    pub fn centered(c: Point2, half_w: f64, half_h: f64) -> Self {
        Rect::new(c.x - half_w, c.y - half_h, c.x + half_w, c.y + half_h)
    }

    /// Length of the longer side.
    pub fn width(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    /// Half of the diagonal: every point is within this distance of the center.
    pub fn radius(&self) -> f64 {
        0.5 * (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.x0 <= p.x && p.x <= self.x1 && self.y0 <= p.y && p.y <= self.y1
    }

    /// Corners in counterclockwise order starting at `(x0, y0)`.
    pub fn vertices(&self) -> [Point2; 4] {
        [
            Point2::new(self.x0, self.y0),
            Point2::new(self.x1, self.y0),
            Point2::new(self.x1, self.y1),
            Point2::new(self.x0, self.y1),
        ]
    }

    /// Side `i` joins vertex `i` to vertex `i + 1`.
    pub fn sides(&self) -> [Segment2; 4] {
        let v = self.vertices();
        [
            Segment2::new(v[0], v[1]),
            Segment2::new(v[1], v[2]),
            Segment2::new(v[2], v[3]),
            Segment2::new(v[3], v[0]),
        ]
    }

    /// Quadtree split into four congruent children (SW, SE, NE, NW).
    pub fn quadrants(&self) -> [Rect; 4] {
        let c = self.center();
        [
            Rect::new(self.x0, self.y0, c.x, c.y),
            Rect::new(c.x, self.y0, self.x1, c.y),
            Rect::new(c.x, c.y, self.x1, self.y1),
            Rect::new(self.x0, c.y, c.x, self.y1),
        ]
    }

    pub fn intersection(&self, o: &Rect) -> Option<Rect> {
        let r = Rect {
            x0: self.x0.max(o.x0),
            y0: self.y0.max(o.y0),
            x1: self.x1.min(o.x1),
            y1: self.y1.min(o.y1),
        };
        (r.x0 <= r.x1 && r.y0 <= r.y1).then_some(r)
    }
}

/// Thick single link: length ℓ and thickness τ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkGeom {
    pub ell: f64,
    pub tau: f64,
}

impl LinkGeom {
    pub fn new(ell: f64, tau: f64) -> Self {
        debug_assert!(ell > 0.0 && tau >= 0.0);
        LinkGeom { ell, tau }
    }

    /// Thin segment of the link placed at `base` with direction `theta`.
    pub fn segment(&self, base: Point2, theta: Angle) -> Segment2 {
        Segment2::new(base, base + theta.unit() * self.ell)
    }
}

/// Geometry of a boundary feature: a corner point or a wall segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FeatureShape {
    Corner(Point2),
    Wall(Segment2),
}

impl FeatureShape {
    /// Zero-length walls are corners.
    pub fn from_segment(s: Segment2) -> Self {
        if s.is_degenerate() {
            FeatureShape::Corner(s.a)
        } else {
            FeatureShape::Wall(s)
        }
    }

    pub fn as_segment(&self) -> Segment2 {
        match *self {
            FeatureShape::Corner(p) => Segment2::new(p, p),
            FeatureShape::Wall(s) => s,
        }
    }
}

/// Euclidean distance from `p` to the closed segment `s`.
pub fn sep_point_segment(p: Point2, s: &Segment2) -> f64 {
    let d = s.b - s.a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(s.a);
    }
    let t = ((p - s.a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(s.at(t))
}

/// Closest point of the closed segment `s` to `p`.
pub fn closest_point_on_segment(p: Point2, s: &Segment2) -> Point2 {
    let d = s.b - s.a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return s.a;
    }
    s.at(((p - s.a).dot(d) / len2).clamp(0.0, 1.0))
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(p: Point2, s: &Segment2) -> bool {
    p.x >= s.a.x.min(s.b.x)
        && p.x <= s.a.x.max(s.b.x)
        && p.y >= s.a.y.min(s.b.y)
        && p.y <= s.a.y.max(s.b.y)
}

/// Whether two closed segments share a point.
pub fn segments_intersect(s: &Segment2, t: &Segment2) -> bool {
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(s.a, t))
        || (d2 == 0.0 && on_segment(s.b, t))
        || (d3 == 0.0 && on_segment(t.a, s))
        || (d4 == 0.0 && on_segment(t.b, s))
}

/// Separation of two closed segments.
pub fn sep_segment_segment(s: &Segment2, t: &Segment2) -> f64 {
    if segments_intersect(s, t) {
        return 0.0;
    }
    sep_point_segment(s.a, t)
        .min(sep_point_segment(s.b, t))
        .min(sep_point_segment(t.a, s))
        .min(sep_point_segment(t.b, s))
}

pub fn sep_segment_feature(s: &Segment2, f: &FeatureShape) -> f64 {
    match f {
        FeatureShape::Corner(p) => sep_point_segment(*p, s),
        FeatureShape::Wall(w) => sep_segment_segment(s, w),
    }
}

pub fn sep_point_feature(p: Point2, f: &FeatureShape) -> f64 {
    match f {
        FeatureShape::Corner(c) => p.dist(*c),
        FeatureShape::Wall(w) => sep_point_segment(p, w),
    }
}

/// Distance from `p` to the closed rectangle (0 inside).
pub fn sep_point_rect(p: Point2, r: &Rect) -> f64 {
    let dx = (r.x0 - p.x).max(0.0).max(p.x - r.x1);
    let dy = (r.y0 - p.y).max(0.0).max(p.y - r.y1);
    (dx * dx + dy * dy).sqrt()
}

/// Separation of a closed segment and a closed rectangle.
pub fn sep_segment_rect(s: &Segment2, r: &Rect) -> f64 {
    if r.contains(s.a) || r.contains(s.b) {
        return 0.0;
    }
    let mut best = sep_point_rect(s.a, r).min(sep_point_rect(s.b, r));
    for side in r.sides() {
        best = best.min(sep_segment_segment(s, &side));
    }
    best
}

pub fn sep_feature_rect(f: &FeatureShape, r: &Rect) -> f64 {
    match f {
        FeatureShape::Corner(p) => sep_point_rect(*p, r),
        FeatureShape::Wall(w) => sep_segment_rect(w, r),
    }
}

/// `Sep(thin link, f) − τ`: negative on collision, zero on contact.
pub fn link_clearance(base: Point2, theta: Angle, g: &LinkGeom, f: &FeatureShape) -> f64 {
    sep_segment_feature(&g.segment(base, theta), f) - g.tau
}
