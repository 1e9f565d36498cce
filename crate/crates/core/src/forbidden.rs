//! Forbidden angles of a thick link against corners, walls and whole boxes of
//! base positions.
//!
//! A link with base `V`, direction `θ`, length `ℓ` and thickness `τ` collides
//! with a feature `T` when its thin segment is within `τ` of `T`. `Forb(V, T)`
//! is the set of such `θ`. Every returned set is padded outward by
//! [`ANGLE_EPS`] so rounding never loses a forbidden angle.

use crate::geometry::{
    sep_point_rect, sep_point_segment, sep_segment_rect, Angle, AngularInterval, AngularSet,
    FeatureShape, LinkGeom, Point2, Rect, Segment2, ANGLE_EPS,
};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForbidError {
    #[error("direction between coincident points is undefined")]
    CoincidentPoints,
    #[error("stop analysis precondition violated: {0}")]
    StopPrecondition(&'static str),
}

/// Half-width `δ` of the zone of a point at distance `d` with `τ < d ≤ ℓ + τ`.
fn half_width(d: f64, g: &LinkGeom) -> f64 {
    let (l, t) = (g.ell, g.tau);
    if d * d <= t * t + l * l {
        (t / d).clamp(-1.0, 1.0).asin()
    } else {
        // half-angle form of arccos((ℓ² + d² − τ²) / 2dℓ), stable near 0
        let num = ((t - d + l) * (t + d - l)).max(0.0);
        let den = (d + l + t) * (d + l - t);
        2.0 * (num / den).sqrt().atan()
    }
}

/// Polar angle of `c - v`.
pub fn theta_nominal(v: Point2, c: Point2) -> Result<Angle, ForbidError> {
    Angle::of_vector(c - v).ok_or(ForbidError::CoincidentPoints)
}

/// Angles at which a link based at `v` meets the disc `D(c, τ)`.
pub fn forb_point_point(v: Point2, c: Point2, g: &LinkGeom) -> AngularSet {
    let d = v.dist(c);
    if d <= g.tau {
        return AngularSet::full();
    }
    if d > g.ell + g.tau {
        return AngularSet::empty();
    }
    let nu = Angle::of_vector(c - v).expect("d > tau >= 0");
    let delta = half_width(d, g);
    AngularSet::from_interval(AngularInterval::around(nu, delta).widened(ANGLE_EPS))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeftCase {
    L1,
    L2,
    L3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RightCase {
    R1,
    R2,
    R3,
}

/// Extreme contact points of a wall, seen from a vertex.
///
/// In the canonical frame the wall lies on the x-axis with corners
/// `C' = (a, 0)`, `C = (b, 0)`, `a < b`, and the vertex sits at `(0, -σ)`.
/// The left stop bounds the zone clockwise, the right stop counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StopPair {
    pub left: Point2,
    pub right: Point2,
    pub case_tag: (LeftCase, RightCase),
}

/// Wall expressed in the vertex's canonical frame.
struct Canonical {
    foot: Point2,
    ex: Point2,
    sigma: f64,
    a: f64,
    b: f64,
}

impl Canonical {
    /// `None` when `v` lies on the line of `w`.
    fn new(v: Point2, w: &Segment2) -> Option<Self> {
        let dir = w.b - w.a;
        let len = dir.norm();
        if len == 0.0 {
            return None;
        }
        let u = dir * (1.0 / len);
        let foot = w.a + u * (v - w.a).dot(u);
        let sigma = v.dist(foot);
        if sigma == 0.0 {
            return None;
        }
        let ey = (foot - v) * (1.0 / sigma);
        let ex = Point2::new(ey.y, -ey.x);
        let xa = (w.a - foot).dot(ex);
        let xb = (w.b - foot).dot(ex);
        Some(Canonical {
            foot,
            ex,
            sigma,
            a: xa.min(xb),
            b: xa.max(xb),
        })
    }

    fn world(&self, x: f64) -> Point2 {
        self.foot + self.ex * x
    }

    fn offset(&self) -> f64 {
        self.ex.y.atan2(self.ex.x)
    }
}

fn stop_table(x_max: f64, a: f64, b: f64) -> (LeftCase, RightCase) {
    let left = if x_max <= a {
        LeftCase::L1
    } else if x_max < b {
        LeftCase::L2
    } else {
        LeftCase::L3
    };
    let right = if -x_max >= b {
        RightCase::R1
    } else if -x_max > a {
        RightCase::R2
    } else {
        RightCase::R3
    };
    (left, right)
}

/// Stop analysis for a vertex and a wall with both corners in the open
/// annulus `(τ, ℓ + τ)` around `v` and `τ < σ < ℓ + τ`.
pub fn stops_vertex_wall(v: Point2, w: &Segment2, g: &LinkGeom) -> Result<StopPair, ForbidError> {
    let reach = g.ell + g.tau;
    let c = Canonical::new(v, w).ok_or(ForbidError::StopPrecondition("vertex on wall line"))?;
    if !(g.tau < c.sigma && c.sigma < reach) {
        return Err(ForbidError::StopPrecondition(
            "sigma outside (tau, ell + tau)",
        ));
    }
    for p in [w.a, w.b] {
        let d = v.dist(p);
        if !(g.tau < d && d < reach) {
            return Err(ForbidError::StopPrecondition("corner outside annulus"));
        }
    }
    let x_max = (g.ell * g.ell - (c.sigma - g.tau).powi(2)).max(0.0).sqrt();
    Ok(StopPair {
        left: c.world(x_max.clamp(c.a, c.b)),
        right: c.world((-x_max).clamp(c.a, c.b)),
        case_tag: stop_table(x_max, c.a, c.b),
    })
}

/// Angles at which a link based at `v` meets the thick wall `w ⊕ D(0, τ)`.
pub fn forb_vertex_wall(v: Point2, w: &Segment2, g: &LinkGeom) -> AngularSet {
    if w.is_degenerate() {
        return forb_point_point(v, w.a, g);
    }
    if sep_point_segment(v, w) <= g.tau {
        return AngularSet::full();
    }
    let reach = g.ell + g.tau;
    let Some(c) = Canonical::new(v, w) else {
        // v on the wall's line but farther than τ from it
        let near = if v.dist(w.a) <= v.dist(w.b) { w.a } else { w.b };
        return forb_point_point(v, near, g);
    };
    if c.sigma <= g.tau {
        let near = if v.dist(w.a) <= v.dist(w.b) { w.a } else { w.b };
        return forb_point_point(v, near, g);
    }
    if c.sigma > reach {
        return AngularSet::empty();
    }
    // clip to the part of the line within reach
    let x_star = (reach * reach - c.sigma * c.sigma).max(0.0).sqrt();
    let (a, b) = (c.a.max(-x_star), c.b.min(x_star));
    if a > b {
        return AngularSet::empty();
    }
    let x_max = (g.ell * g.ell - (c.sigma - g.tau).powi(2)).max(0.0).sqrt();
    let xl = x_max.clamp(a, b);
    let xr = (-x_max).clamp(a, b);
    let nu = |x: f64| c.sigma.atan2(x);
    let delta = |x: f64| half_width((x * x + c.sigma * c.sigma).sqrt(), g);
    let alpha = nu(xl) - delta(xl);
    let beta = nu(xr) + delta(xr);
    let off = c.offset();
    AngularSet::from_interval(AngularInterval::new(alpha + off, beta + off).widened(ANGLE_EPS))
}

/// Angles at which a link based anywhere on `s` meets the disc `D(c, τ)`.
pub fn forb_side_corner(s: &Segment2, c: Point2, g: &LinkGeom) -> AngularSet {
    forb_vertex_wall(c, s, g).shifted(PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallCase {
    Case0,
    I,
    II,
    III,
}

/// Open outer half-planes of the box sides, in side order bottom, right,
/// top, left.
fn outside_side(r: &Rect, p: Point2) -> [bool; 4] {
    [p.y < r.y0, p.x > r.x1, p.y > r.y1, p.x < r.x0]
}

/// Position of a wall relative to a box. A wall inside the quadrant of two
/// adjacent outer half-planes is reported as `II` even though it also lies in
/// each half-plane alone.
pub fn classify_wall_case(bt: &Rect, w: &Segment2, tau: f64) -> WallCase {
    if sep_segment_rect(w, bt) <= tau {
        return WallCase::Case0;
    }
    let ha = outside_side(bt, w.a);
    let hb = outside_side(bt, w.b);
    let inside: Vec<bool> = (0..4).map(|i| ha[i] && hb[i]).collect();
    if (0..4).any(|i| inside[i] && inside[(i + 1) % 4]) {
        WallCase::II
    } else if inside.iter().any(|&x| x) {
        WallCase::I
    } else {
        WallCase::III
    }
}

/// Which part of the box produced a cone. Vertices and sides use the
/// numbering of [`Rect::vertices`] and [`Rect::sides`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoxPart {
    Vertex(usize),
    Side(usize),
}

/// Which part of the feature produced a cone: the whole wall, or corner `k`
/// (0 for a corner feature; 0 or 1 for the endpoints of a wall).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeaturePart {
    Wall,
    Corner(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConeSource {
    pub box_part: BoxPart,
    pub feature_part: FeaturePart,
}

/// One connected forbidden arc with the pair that generated it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cone {
    pub interval: AngularInterval,
    pub source: ConeSource,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoxZone {
    Full,
    Cones(Vec<Cone>),
}

impl BoxZone {
    pub fn to_set(&self) -> AngularSet {
        match self {
            BoxZone::Full => AngularSet::full(),
            BoxZone::Cones(cs) => AngularSet::from_intervals(cs.iter().map(|c| c.interval)),
        }
    }
}

/// A point `w_k - v_i` of the difference set, tagged with its indices.
#[derive(Clone, Copy, Debug)]
struct Tagged {
    p: Point2,
    k: usize,
    i: usize,
}

fn cross3(o: Point2, a: Point2, b: Point2) -> f64 {
    (a - o).cross(b - o)
}

/// Counterclockwise hull without collinear points.
fn hull(mut pts: Vec<Tagged>) -> Vec<Tagged> {
    pts.sort_by(|u, v| u.p.x.total_cmp(&v.p.x).then(u.p.y.total_cmp(&v.p.y)));
    pts.dedup_by(|u, v| u.p == v.p);
    if pts.len() <= 2 {
        return pts;
    }
    let mut h: Vec<Tagged> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &Tagged>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &q in iter {
            while h.len() >= start + 2 && cross3(h[h.len() - 2].p, h[h.len() - 1].p, q.p) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

fn edge_source(p: &Tagged, q: &Tagged, nw: usize) -> ConeSource {
    let side_of = |i: usize, j: usize| {
        if (i + 1) % 4 == j {
            i
        } else {
            j
        }
    };
    let wall_part = if nw == 1 {
        FeaturePart::Corner(0)
    } else {
        FeaturePart::Wall
    };
    if p.i == q.i {
        ConeSource {
            box_part: BoxPart::Vertex(p.i),
            feature_part: wall_part,
        }
    } else if p.k == q.k {
        ConeSource {
            box_part: BoxPart::Side(side_of(p.i, q.i)),
            feature_part: FeaturePart::Corner(p.k),
        }
    } else {
        // side parallel to the wall
        ConeSource {
            box_part: BoxPart::Side(side_of(p.i, q.i)),
            feature_part: FeaturePart::Wall,
        }
    }
}

/// Cones of `Forb(Bᵗ, T)` for a feature given by its corner points (one for a
/// corner, two for a wall).
///
/// A link based at `p ∈ Bᵗ` meets `T ⊕ D(0, τ)` exactly when a link based
/// at the origin meets `(T - p) ⊕ D(0, τ)`, so the zone is that of the origin
/// against the convex set `T ⊖ Bᵗ`. Outside Case 0 the origin is farther
/// than `τ` from that set and only its edges facing the origin can be hit
/// first, which gives one vertex/wall zone per visible hull edge.
fn box_zone(bt: &Rect, corners: &[Point2], g: &LinkGeom) -> BoxZone {
    let verts = bt.vertices();
    let mut pts = Vec::with_capacity(4 * corners.len());
    for (k, &w) in corners.iter().enumerate() {
        for (i, &v) in verts.iter().enumerate() {
            pts.push(Tagged { p: w - v, k, i });
        }
    }
    let h = hull(pts);
    let nw = corners.len();
    let cone = |set: AngularSet, src: ConeSource| -> Option<Cone> {
        let ivs = set.intervals();
        debug_assert!(ivs.len() <= 1, "a single pair gives a connected zone");
        ivs.first().map(|&interval| Cone {
            interval,
            source: src,
        })
    };
    let mut cones = Vec::new();
    match h.len() {
        0 => {}
        1 => {
            let src = ConeSource {
                box_part: BoxPart::Vertex(h[0].i),
                feature_part: FeaturePart::Corner(h[0].k),
            };
            cones.extend(cone(forb_point_point(Point2::ORIGIN, h[0].p, g), src));
        }
        2 => {
            let src = edge_source(&h[0], &h[1], nw);
            let seg = Segment2::new(h[0].p, h[1].p);
            cones.extend(cone(forb_vertex_wall(Point2::ORIGIN, &seg, g), src));
        }
        n => {
            for j in 0..n {
                let (p, q) = (&h[j], &h[(j + 1) % n]);
                if (q.p - p.p).cross(Point2::ORIGIN - p.p) < 0.0 {
                    let seg = Segment2::new(p.p, q.p);
                    let src = edge_source(p, q, nw);
                    cones.extend(cone(forb_vertex_wall(Point2::ORIGIN, &seg, g), src));
                }
            }
        }
    }
    assert!(cones.len() <= 3, "at most three cones per box and feature");
    BoxZone::Cones(cones)
}

/// Cone decomposition of `Forb(Bᵗ, W)`.
pub fn box_wall_cones(bt: &Rect, w: &Segment2, g: &LinkGeom) -> BoxZone {
    if sep_segment_rect(w, bt) <= g.tau {
        return BoxZone::Full;
    }
    box_zone(bt, &[w.a, w.b], g)
}

/// Cone decomposition of `Forb(Bᵗ, C)`.
pub fn box_corner_cones(bt: &Rect, c: Point2, g: &LinkGeom) -> BoxZone {
    if sep_point_rect(c, bt) <= g.tau {
        return BoxZone::Full;
    }
    box_zone(bt, &[c], g)
}

/// Angles forbidden for a link based somewhere in `bt` by the wall `w`.
pub fn forb_box_wall(bt: &Rect, w: &Segment2, g: &LinkGeom) -> AngularSet {
    box_wall_cones(bt, w, g).to_set()
}

/// Angles forbidden for a link based somewhere in `bt` by the corner `c`.
pub fn forb_box_corner(bt: &Rect, c: Point2, g: &LinkGeom) -> AngularSet {
    box_corner_cones(bt, c, g).to_set()
}

pub fn forb_box_feature(bt: &Rect, f: &FeatureShape, g: &LinkGeom) -> AngularSet {
    match f {
        FeatureShape::Corner(c) => forb_box_corner(bt, *c, g),
        FeatureShape::Wall(w) => forb_box_wall(bt, w, g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{link_clearance, AngularSet};
    use crate::oracle::sweep_forbidden;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment2 {
        Segment2::new(p(ax, ay), p(bx, by))
    }

    fn single(set: &AngularSet) -> AngularInterval {
        let ivs = set.intervals();
        assert_eq!(ivs.len(), 1, "{set}");
        ivs[0]
    }

    /// Bounds of a non-wrapping set found by sweeping `n` angles.
    fn sweep_bounds(base: Point2, f: FeatureShape, g: &LinkGeom, n: usize) -> (f64, f64) {
        let hits: Vec<f64> = (0..n)
            .map(|i| TAU * i as f64 / n as f64)
            .filter(|&t| link_clearance(base, Angle::new(t), g, &f) <= 0.0)
            .collect();
        (hits[0], *hits.last().unwrap())
    }

    #[test]
    fn point_point_examples() {
        let g = LinkGeom::new(3.0, 1.0);
        assert!(forb_point_point(p(0.0, 0.0), p(5.0, 0.0), &g).is_empty());
        let z = single(&forb_point_point(p(0.0, 0.0), p(2.0, 0.0), &g));
        assert!((z.length() - PI / 3.0).abs() < 1e-9);
        assert!(z.contains(Angle::new(0.0)));
        let g = LinkGeom::new(1.0, 1.0);
        let z = single(&forb_point_point(p(0.0, 0.0), p(1.5, 0.0), &g));
        assert!((z.length() / 2.0 - 0.722734).abs() < 1e-6);
        assert!(forb_point_point(p(0.0, 0.0), p(0.5, 0.0), &g).is_full());
        // d = ℓ + τ is a single contact direction
        let z = single(&forb_point_point(p(0.0, 0.0), p(0.0, 2.0), &g));
        assert!(z.length() < 1e-9 && z.contains(Angle::new(PI / 2.0)));
    }

    #[test]
    fn point_point_matches_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10_000;
        for _ in 0..200 {
            let g = LinkGeom::new(rng.gen_range(0.5..4.0), rng.gen_range(0.0..1.0));
            let d = rng.gen_range(g.tau + 0.01..g.ell + g.tau - 0.01);
            let nu = rng.gen_range(0.0..TAU);
            let c = Angle::new(nu).unit() * d;
            let z = single(&forb_point_point(Point2::ORIGIN, c, &g));
            let sw = sweep_forbidden(&[Point2::ORIGIN], &FeatureShape::Corner(c), &g, n);
            let step = TAU / n as f64;
            // sweep is a one-sample widening of the sampled set
            assert!(sw.intervals.measure() + 2.0 * step >= z.length());
            assert!(sw.intervals.measure() <= z.length() + 4.0 * step + 1e-9);
            for (i, &hit) in sw.samples.iter().enumerate() {
                let th = Angle::new(step * i as f64);
                if hit {
                    assert!(z.widened(1e-9).contains(th));
                }
            }
        }
    }

    #[test]
    fn seam_of_half_width_is_continuous() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let g = LinkGeom::new(rng.gen_range(0.1..5.0), rng.gen_range(0.01..2.0));
            let d = (g.tau * g.tau + g.ell * g.ell).sqrt();
            let a = (g.tau / d).asin();
            let b = ((g.ell * g.ell + d * d - g.tau * g.tau) / (2.0 * d * g.ell)).acos();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn theta_nominal_examples() {
        let t = |a: Point2, b: Point2| theta_nominal(a, b).unwrap().radians();
        assert_eq!(t(p(0.0, 0.0), p(1.0, 0.0)), 0.0);
        assert!((t(p(0.0, 0.0), p(0.0, -1.0)) - 1.5 * PI).abs() < 1e-12);
        assert!((t(p(1.0, 1.0), p(2.0, 2.0)) - PI / 4.0).abs() < 1e-12);
        assert_eq!(
            theta_nominal(p(1.0, 1.0), p(1.0, 1.0)),
            Err(ForbidError::CoincidentPoints)
        );
    }

    #[test]
    fn stop_examples() {
        let g = LinkGeom::new(5.0, 1.0);
        let v = p(0.0, -3.0);
        let s = stops_vertex_wall(v, &seg(-2.0, 0.0, 2.0, 0.0), &g).unwrap();
        assert_eq!(s.case_tag, (LeftCase::L3, RightCase::R3));
        assert!(s.left.dist(p(2.0, 0.0)) < 1e-12 && s.right.dist(p(-2.0, 0.0)) < 1e-12);

        let s = stops_vertex_wall(v, &seg(-5.0, 0.0, 5.0, 0.0), &g).unwrap();
        assert_eq!(s.case_tag, (LeftCase::L2, RightCase::R2));
        let xm = 21f64.sqrt();
        assert!(s.left.dist(p(xm, 0.0)) < 1e-12 && s.right.dist(p(-xm, 0.0)) < 1e-12);

        let s = stops_vertex_wall(v, &seg(4.8, 0.0, 5.0, 0.0), &g).unwrap();
        assert_eq!(s.case_tag, (LeftCase::L1, RightCase::R3));
        assert_eq!(s.left, s.right);
        assert!(s.left.dist(p(4.8, 0.0)) < 1e-12);

        assert!(stops_vertex_wall(p(0.0, -0.5), &seg(-2.0, 0.0, 2.0, 0.0), &g).is_err());
        assert!(stops_vertex_wall(v, &seg(-8.0, 0.0, 2.0, 0.0), &g).is_err());
    }

    #[test]
    fn stop_cases_never_impossible() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..20_000 {
            let g = LinkGeom::new(rng.gen_range(1.0..6.0), rng.gen_range(0.0..1.5));
            let v = p(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
            let w = seg(
                rng.gen_range(-8.0..8.0),
                rng.gen_range(-8.0..8.0),
                rng.gen_range(-8.0..8.0),
                rng.gen_range(-8.0..8.0),
            );
            if let Ok(s) = stops_vertex_wall(v, &w, &g) {
                use LeftCase::*;
                use RightCase::*;
                assert!(!matches!(s.case_tag, (L1, R1) | (L1, R2) | (L2, R1)));
                seen.insert(s.case_tag);
            }
        }
        // the (L1, R3) configuration is too thin to hit at random
        let g = LinkGeom::new(5.0, 1.0);
        let s = stops_vertex_wall(p(0.0, -3.0), &seg(4.8, 0.0, 5.0, 0.0), &g).unwrap();
        seen.insert(s.case_tag);
        assert_eq!(seen.len(), 6, "{seen:?}");
    }

    #[test]
    fn vertex_wall_examples() {
        let g = LinkGeom::new(5.0, 1.0);
        assert!(forb_vertex_wall(p(0.0, -10.0), &seg(-1.0, 0.0, 1.0, 0.0), &g).is_empty());
        assert!(forb_vertex_wall(p(0.0, -0.5), &seg(-1.0, 0.0, 1.0, 0.0), &g).is_full());
        let v = p(0.0, -3.0);
        let z = single(&forb_vertex_wall(v, &seg(-2.0, 0.0, 2.0, 0.0), &g));
        let d = 13f64.sqrt();
        let delta = half_width(d, &g);
        let alpha = theta_nominal(v, p(2.0, 0.0)).unwrap().radians() - delta;
        let beta = theta_nominal(v, p(-2.0, 0.0)).unwrap().radians() + delta;
        assert!((z.s.radians() - alpha).abs() < 1e-9);
        assert!((z.t.radians() - beta).abs() < 1e-9);
        let (lo, hi) = sweep_bounds(v, FeatureShape::Wall(seg(-2.0, 0.0, 2.0, 0.0)), &g, 100_000);
        assert!((lo - alpha).abs() < 1e-4 && (hi - beta).abs() < 1e-4);
    }

    #[test]
    fn vertex_wall_matches_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 20_000;
        let step = TAU / n as f64;
        for _ in 0..400 {
            let g = LinkGeom::new(rng.gen_range(0.5..5.0), rng.gen_range(0.0..1.5));
            let v = p(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
            let w = seg(
                rng.gen_range(-6.0..6.0),
                rng.gen_range(-6.0..6.0),
                rng.gen_range(-6.0..6.0),
                rng.gen_range(-6.0..6.0),
            );
            let z = forb_vertex_wall(v, &w, &g);
            let sw = sweep_forbidden(&[v], &FeatureShape::Wall(w), &g, n);
            for (i, &hit) in sw.samples.iter().enumerate() {
                let th = Angle::new(step * i as f64);
                if hit {
                    assert!(z.contains(th), "missed {th} in {z} for {v:?} {w:?} {g:?}");
                }
            }
            // zone is at most one sample wider than the sweep on each side
            assert!(z.measure() <= sw.intervals.measure() + 2.0 * step);
        }
    }

    #[test]
    fn reflection_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let g = LinkGeom::new(rng.gen_range(0.5..5.0), rng.gen_range(0.0..1.5));
            let s = seg(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            );
            let c = p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let lhs = forb_side_corner(&s, c, &g);
            let rhs = forb_vertex_wall(c, &s, &g).shifted(PI);
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }

    #[test]
    fn side_corner_example_against_grid() {
        let g = LinkGeom::new(5.0, 1.0);
        let s = seg(-2.0, 0.0, 2.0, 0.0);
        let c = p(0.0, -3.0);
        let z = forb_side_corner(&s, c, &g);
        assert!(z.approx_eq(&forb_vertex_wall(c, &s, &g).shifted(PI), 0.0));
        let bases: Vec<Point2> = (0..=1000).map(|i| s.at(i as f64 / 1000.0)).collect();
        let sw = sweep_forbidden(&bases, &FeatureShape::Corner(c), &g, 1000);
        for (i, &hit) in sw.samples.iter().enumerate() {
            if hit {
                assert!(z.contains(Angle::new(TAU * i as f64 / 1000.0)));
            }
        }
        assert!(forb_side_corner(&s, p(0.0, 50.0), &g).is_empty());
    }

    #[test]
    fn monotone_in_thickness() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let ell = rng.gen_range(0.5..5.0);
            let t1 = rng.gen_range(0.0..1.0);
            let t2 = t1 + rng.gen_range(0.0..1.0);
            let v = p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let w = seg(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            );
            let z1 = forb_vertex_wall(v, &w, &LinkGeom::new(ell, t1));
            let z2 = forb_vertex_wall(v, &w, &LinkGeom::new(ell, t2));
            assert!(
                z1.intersect(&z2.complement()).measure() < 1e-9,
                "{z1} vs {z2}"
            );
            let bt = Rect::centered(v, 0.3, 0.2);
            let b1 = forb_box_wall(&bt, &w, &LinkGeom::new(ell, t1));
            let b2 = forb_box_wall(&bt, &w, &LinkGeom::new(ell, t2));
            assert!(b1.intersect(&b2.complement()).measure() < 1e-9);
        }
    }

    /// Thin link zone from the visible part of the wall inside the reach disc.
    fn thin_zone(v: Point2, w: &Segment2, ell: f64) -> AngularSet {
        let d = w.b - w.a;
        let f = w.a - v;
        let (qa, qb, qc) = (d.dot(d), 2.0 * f.dot(d), f.dot(f) - ell * ell);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return AngularSet::empty();
        }
        let q = -0.5 * (qb + qb.signum() * disc.sqrt());
        let (r0, r1) = if q == 0.0 {
            (0.0, 0.0)
        } else {
            (q / qa, qc / q)
        };
        let t0 = r0.min(r1).max(0.0);
        let t1 = r0.max(r1).min(1.0);
        if t0 > t1 {
            return AngularSet::empty();
        }
        let a0 = Angle::of_vector(w.at(t0) - v).unwrap().radians();
        let a1 = Angle::of_vector(w.at(t1) - v).unwrap().radians();
        let (s, t) = if (a1 - a0).rem_euclid(TAU) <= PI {
            (a0, a1)
        } else {
            (a1, a0)
        };
        AngularSet::from_interval(AngularInterval::new(s, t))
    }

    #[test]
    fn thin_limit_matches_visibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 5_000 {
            let ell = rng.gen_range(0.5..5.0);
            let v = p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let w = seg(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            );
            if sep_point_segment(v, &w) < 1e-3 {
                continue;
            }
            checked += 1;
            let z = forb_vertex_wall(v, &w, &LinkGeom::new(ell, 0.0));
            let thin = thin_zone(v, &w, ell);
            assert!(
                z.approx_eq(&thin, 1e-9),
                "{:?} vs {:?} for {v:?} {w:?} {ell}",
                z.pieces(),
                thin.pieces()
            );
        }
    }

    #[test]
    fn wall_case_examples() {
        let bt = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert_eq!(
            classify_wall_case(&bt, &seg(-1.0, 0.5, 2.0, 0.5), 0.1),
            WallCase::Case0
        );
        assert_eq!(
            classify_wall_case(&bt, &seg(-3.0, -1.0, -3.0, 2.0), 0.1),
            WallCase::I
        );
        assert_eq!(
            classify_wall_case(&bt, &seg(2.0, 2.0, 3.0, 4.0), 0.1),
            WallCase::II
        );
        // passes by the top-right corner, crossing both extended side lines
        let w = seg(0.5, 3.0, 3.0, 0.5);
        assert!(!(w.a.x > 1.0 && w.b.x > 1.0) && !(w.a.y > 1.0 && w.b.y > 1.0));
        assert_eq!(classify_wall_case(&bt, &w, 0.1), WallCase::III);
    }

    fn grid(bt: &Rect, k: usize) -> Vec<Point2> {
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let fx = i as f64 / (k - 1) as f64;
                let fy = j as f64 / (k - 1) as f64;
                out.push(p(
                    bt.x0 + fx * (bt.x1 - bt.x0),
                    bt.y0 + fy * (bt.y1 - bt.y0),
                ));
            }
        }
        out
    }

    fn assert_contains_sweep(
        z: &AngularSet,
        bases: &[Point2],
        f: FeatureShape,
        g: &LinkGeom,
        n: usize,
    ) {
        let sw = sweep_forbidden(bases, &f, g, n);
        for (i, &hit) in sw.samples.iter().enumerate() {
            let th = Angle::new(TAU * i as f64 / n as f64);
            assert!(!hit || z.contains(th), "missed {th} in {z} for {f:?} {g:?}");
        }
    }

    #[test]
    fn box_examples() {
        let g = LinkGeom::new(5.0, 1.0);
        let bt = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert!(forb_box_wall(&bt, &seg(-1.0, -0.5, 2.0, -0.5), &g).is_full());
        let w = seg(-3.0, -4.0, 3.0, -4.0);
        let BoxZone::Cones(cs) = box_wall_cones(&bt, &w, &g) else {
            panic!()
        };
        assert!(!cs.is_empty() && cs.len() <= 3);
        let z = forb_box_wall(&bt, &w, &g);
        assert_contains_sweep(&z, &grid(&bt, 32), FeatureShape::Wall(w), &g, 3600);

        let g = LinkGeom::new(6.0, 0.5);
        let c = p(5.0, 5.0);
        assert!(forb_box_corner(&bt, p(1.2, 0.5), &g).is_full());
        let z = forb_box_corner(&bt, c, &g);
        assert!(!z.is_empty());
        assert_contains_sweep(&z, &grid(&bt, 32), FeatureShape::Corner(c), &g, 3600);
    }

    #[test]
    fn point_box_reduces_to_vertex_zones() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..2000 {
            let g = LinkGeom::new(rng.gen_range(0.5..5.0), rng.gen_range(0.0..1.5));
            let v = p(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let w = seg(
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            );
            let bt = Rect::point(v);
            let a = forb_box_wall(&bt, &w, &g);
            let b = forb_vertex_wall(v, &w, &g);
            assert!(a.approx_eq(&b, 1e-9), "{a} vs {b}");
            let a = forb_box_corner(&bt, w.a, &g);
            let b = forb_point_point(v, w.a, &g);
            assert!(a.approx_eq(&b, 1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn box_zones_are_conservative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let g = LinkGeom::new(rng.gen_range(0.5..4.0), rng.gen_range(0.0..1.0));
            let c = p(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let bt = Rect::centered(c, rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0));
            let w = seg(
                rng.gen_range(-6.0..6.0),
                rng.gen_range(-6.0..6.0),
                rng.gen_range(-6.0..6.0),
                rng.gen_range(-6.0..6.0),
            );
            let bases = grid(&bt, 4);
            let z = forb_box_wall(&bt, &w, &g);
            assert_contains_sweep(&z, &bases, FeatureShape::Wall(w), &g, 720);
            let z = forb_box_corner(&bt, w.a, &g);
            assert_contains_sweep(&z, &bases, FeatureShape::Corner(w.a), &g, 720);
            if let BoxZone::Cones(cs) = box_wall_cones(&bt, &w, &g) {
                assert!(cs.len() <= 3);
            }
        }
    }

    #[test]
    fn excess_shrinks_with_box() {
        // excess over the union of exact per-base zones on a fixed grid
        let g = LinkGeom::new(5.0, 1.0);
        let w = seg(-3.0, -4.0, 3.0, -4.0);
        let mut excess = Vec::new();
        let mut half = 1.0;
        for _ in 0..6 {
            let bt = Rect::centered(p(0.5, 0.5), half, half);
            let z = forb_box_wall(&bt, &w, &g);
            let union = grid(&bt, 8)
                .into_iter()
                .fold(AngularSet::empty(), |acc, b| {
                    acc.union(&forb_vertex_wall(b, &w, &g))
                });
            assert!(union.intersect(&z.complement()).measure() < 1e-9);
            excess.push(z.measure() - union.measure());
            half /= 2.0;
        }
        // extreme bases are box vertices, so the excess is already zero
        for pair in excess.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-9, "{excess:?}");
        }
        assert!(excess.iter().all(|e| e.abs() < 1e-9), "{excess:?}");
    }
}
