//! Relevant features of a box and the soft box predicate.

use crate::cspace::{RobotSpec, XBox};
use crate::environment::Environment;
use crate::forbidden::{forb_box_feature, forb_point_point, forb_vertex_wall};
use crate::geometry::{sep_point_feature, AngularSet, FeatureShape, LinkGeom, Rect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Free,
    Stuck,
    Mixed,
}

/// Features of `parent` that some placement based in `bt` could touch.
pub fn feature_set(bt: &Rect, parent: &[u32], env: &Environment, r: &RobotSpec) -> Vec<u32> {
    let m = bt.center();
    let reach = bt.radius() + r.max_len() + r.tau;
    parent
        .iter()
        .copied()
        .filter(|&id| sep_point_feature(m, &env.feature(id as usize).shape) <= reach)
        .collect()
}

/// Union of `Forb(bt, f)` over `phi` for link `link` (0 or 1).
pub fn link_zones(
    bt: &Rect,
    phi: &[u32],
    env: &Environment,
    r: &RobotSpec,
    link: usize,
) -> AngularSet {
    let g = r.link(link);
    let m = bt.center();
    let reach = bt.radius() + g.ell + g.tau;
    let mut zones = AngularSet::empty();
    for &id in phi {
        let f = &env.feature(id as usize).shape;
        if sep_point_feature(m, f) > reach {
            continue;
        }
        zones = zones.union(&forb_box_feature(bt, f, &g));
        if zones.is_full() {
            break;
        }
    }
    zones
}

/// Angles forbidden at every base within `radius` of the center: the zone at
/// the center for a link thinned by `radius`.
fn inner_zones(
    bt: &Rect,
    phi: &[u32],
    env: &Environment,
    r: &RobotSpec,
    link: usize,
) -> Option<AngularSet> {
    let rad = bt.radius();
    if r.tau < rad {
        return None;
    }
    let g = LinkGeom::new(r.link(link).ell, r.tau - rad);
    let m = bt.center();
    let mut zones = AngularSet::empty();
    for &id in phi {
        let z = match env.feature(id as usize).shape {
            FeatureShape::Corner(c) => forb_point_point(m, c, &g),
            FeatureShape::Wall(w) => forb_vertex_wall(m, &w, &g),
        };
        zones = zones.union(&z);
    }
    Some(zones)
}

/// Everything the predicate needs that depends only on the translational
/// box; shared by all X-boxes over the same base.
#[derive(Clone, Debug)]
pub struct BaseInfo {
    /// Distance from the center to the nearest feature of `phi`.
    pub nearest: f64,
    pub inside: bool,
    /// Outer zones per link; empty when the joint disc is certainly blocked.
    pub zones: [AngularSet; 2],
    /// Zones common to every base in the box, per link.
    pub inner: [Option<AngularSet>; 2],
    pub blocked: bool,
}

pub fn base_info(bt: &Rect, phi: &[u32], env: &Environment, r: &RobotSpec) -> BaseInfo {
    let m = bt.center();
    let rad = bt.radius();
    let nearest = phi
        .iter()
        .map(|&id| sep_point_feature(m, &env.feature(id as usize).shape))
        .fold(f64::INFINITY, f64::min);
    let inside = env.point_in_obstacle(m);
    // the joint disc hits Ω at every base
    let blocked = nearest + rad < r.tau || (inside && nearest > rad);
    let mut info = BaseInfo {
        nearest,
        inside,
        zones: [AngularSet::empty(), AngularSet::empty()],
        inner: [None, None],
        blocked,
    };
    if blocked {
        return info;
    }
    info.zones = [0, 1].map(|i| link_zones(bt, phi, env, r, i));
    info.inner = [0, 1].map(|i| inner_zones(bt, phi, env, r, i));
    info
}

/// Soft predicate. `Free` and `Stuck` are always correct for every
/// configuration represented by `b`; `Mixed` means undecided.
pub fn classify(b: &XBox, phi: &[u32], env: &Environment, r: &RobotSpec) -> Class {
    classify_with(b, &base_info(&b.bt, phi, env, r))
}

/// [`classify`] with the base-dependent part precomputed for `b.bt`.
pub fn classify_with(b: &XBox, info: &BaseInfo) -> Class {
    if info.blocked {
        return Class::Stuck;
    }
    let spans = [b.br.th1, b.br.th2];
    if !info.inside && (0..2).all(|i| !info.zones[i].overlaps_range(spans[i].lo, spans[i].hi)) {
        return Class::Free;
    }
    for (span, inner) in spans.iter().zip(&info.inner) {
        if inner
            .as_ref()
            .is_some_and(|z| z.covers_range(span.lo, span.hi))
        {
            return Class::Stuck;
        }
    }
    Class::Mixed
}
