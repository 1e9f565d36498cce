//! SVG picture of a scene, the translational leaves of a subdivision and a
//! robot path.

use crate::cspace::{footprints, Config, RobotSpec, Status, SubdivisionTree};
use crate::environment::Environment;
use crate::geometry::Rect;
use crate::oracle::interpolate;
use std::collections::HashMap;
use std::fmt::Write;

/// Robot poses drawn along a path.
const POSES: usize = 24;
const TRACE_STEPS: usize = 8;

pub fn status_color(s: Status, small: bool) -> &'static str {
    match s {
        Status::Free => "#3cb44b",
        Status::Stuck => "#e6194b",
        Status::Small => "#a0a0a0",
        Status::Mixed | Status::Unknown if small => "#a0a0a0",
        Status::Mixed | Status::Unknown => "#ffe119",
    }
}

fn rank(s: Status) -> u8 {
    match s {
        Status::Free => 4,
        Status::Mixed | Status::Unknown => 3,
        Status::Small => 2,
        Status::Stuck => 1,
    }
}

/// One entry per distinct leaf base; the shown status is the most hopeful
/// among the rotational leaves over it.
fn translational_leaves(tree: &SubdivisionTree) -> Vec<(Rect, Status)> {
    let mut order: Vec<(Rect, Status)> = Vec::new();
    let mut index: HashMap<[u64; 4], usize> = HashMap::new();
    for id in tree.leaves() {
        if id == 0 {
            continue;
        }
        let n = tree.node(id);
        let bt = n.xbox.bt;
        let key = [
            bt.x0.to_bits(),
            bt.y0.to_bits(),
            bt.x1.to_bits(),
            bt.y1.to_bits(),
        ];
        match index.get(&key) {
            Some(&k) => {
                if rank(n.status) > rank(order[k].1) {
                    order[k].1 = n.status;
                }
            }
            None => {
                index.insert(key, order.len());
                order.push((bt, n.status));
            }
        }
    }
    order
}

fn f(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

pub fn render_svg(
    env: &Environment,
    tree: Option<&SubdivisionTree>,
    eps: f64,
    robot: &RobotSpec,
    path: &[Config],
) -> String {
    let bb = env.bbox();
    let pad = 0.02 * bb.width().max(bb.y1 - bb.y0);
    let (w, h) = (bb.width() + 2.0 * pad, bb.y1 - bb.y0 + 2.0 * pad);
    let line = 0.002 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        f(bb.x0 - pad),
        f(-(bb.y1 + pad)),
        f(w),
        f(h),
        (800.0 * h / w).round()
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white" stroke="black" stroke-width="{}"/>"#,
        f(bb.x0),
        f(bb.y0),
        f(bb.width()),
        f(bb.y1 - bb.y0),
        f(line)
    );

    if let Some(tree) = tree {
        s.push_str("<g id=\"boxes\" fill-opacity=\"0.45\" stroke=\"#404040\"");
        let _ = writeln!(s, " stroke-width=\"{}\">", f(line / 2.0));
        for (bt, st) in translational_leaves(tree) {
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                f(bt.x0),
                f(bt.y0),
                f(bt.width()),
                f(bt.y1 - bt.y0),
                status_color(st, bt.width() <= eps)
            );
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g id=\"obstacles\" fill=\"#303030\">\n");
    for poly in env.polygons() {
        let pts: Vec<String> = poly
            .vertices()
            .iter()
            .map(|p| format!("{},{}", f(p.x), f(p.y)))
            .collect();
        let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n");

    if !path.is_empty() {
        let mut trace = vec![path[0]];
        for win in path.windows(2) {
            for k in 1..=TRACE_STEPS {
                trace.push(interpolate(&win[0], &win[1], k as f64 / TRACE_STEPS as f64));
            }
        }
        s.push_str("<g id=\"robot\" stroke=\"#4363d8\" stroke-opacity=\"0.35\" stroke-linecap=\"round\" fill=\"none\"");
        let _ = writeln!(s, " stroke-width=\"{}\">", f((2.0 * robot.tau).max(line)));
        let stride = (trace.len() - 1).div_ceil(POSES).max(1);
        let picks = (0..trace.len())
            .step_by(stride)
            .chain(std::iter::once(trace.len() - 1));
        let mut last = usize::MAX;
        for i in picks {
            if i == last {
                continue;
            }
            last = i;
            let [a0, a1, a2] = footprints(&trace[i], robot);
            let _ = writeln!(
                s,
                r#"<polyline points="{},{} {},{} {},{}"/>"#,
                f(a1.x),
                f(a1.y),
                f(a0.x),
                f(a0.y),
                f(a2.x),
                f(a2.y)
            );
        }
        s.push_str("</g>\n");
        let pts: Vec<String> = trace
            .iter()
            .map(|c| format!("{},{}", f(c.x), f(c.y)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline id="trace" points="{}" fill="none" stroke="#000075" stroke-width="{}"/>"##,
            pts.join(" "),
            f(line)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
