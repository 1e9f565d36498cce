//! Polygonal obstacle sets, their boundary features, and the `.env` text format.
//!
//! ```text
//! # comment
//! bbox 0 0 16 16
//! poly 0 0 4 0 0 3
//! ```
//!
//! Polygons are stored counterclockwise, so the obstacle interior lies to the
//! left of every wall `a -> b`. Obstacles are closed sets and may overlap.

use crate::geometry::{sep_point_segment, FeatureShape, Point2, Rect, Segment2};
use std::fmt::Write as _;
use thiserror::Error;

/// Distance under which a point counts as lying on a polygon edge.
const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
    #[error("no bbox line")]
    MissingBbox,
}

/// A simple polygon with counterclockwise vertices and no repeated
/// consecutive vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
    bounds: Rect,
}

impl Polygon {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment2::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len() as f64;
        let s = self.vertices.iter().fold(Point2::ORIGIN, |acc, &p| acc + p);
        s * (1.0 / n)
    }

    /// Closed-set membership via crossing number; boundary counts as inside.
    pub fn contains(&self, p: Point2) -> bool {
        let b = &self.bounds;
        let e = BOUNDARY_EPS;
        if p.x < b.x0 - e || p.x > b.x1 + e || p.y < b.y0 - e || p.y > b.y1 + e {
            return false;
        }
        if self
            .edges()
            .any(|e| sep_point_segment(p, &e) <= BOUNDARY_EPS)
        {
            return true;
        }
        let mut inside = false;
        for e in self.edges() {
            let (a, b) = (e.a, e.b);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureKind {
    /// Vertex `vertex` of the polygon.
    Corner { vertex: usize },
    /// Open edge from vertex `edge` to vertex `edge + 1`; interior on its left.
    Wall { edge: usize },
}

/// A boundary feature of Ω with a stable id.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feature {
    pub id: usize,
    pub polygon: usize,
    pub kind: FeatureKind,
    pub shape: FeatureShape,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Environment {
    bbox: Rect,
    polygons: Vec<Polygon>,
    features: Vec<Feature>,
}

impl Environment {
    /// Validates and normalizes raw polygons. Errors carry the polygon index
    /// (0-based) in place of a line number.
    pub fn new(bbox: Rect, polygons: Vec<Vec<Point2>>) -> Result<Self, EnvError> {
        let lines: Vec<usize> = (0..polygons.len()).collect();
        Self::build(bbox, polygons, &lines)
    }

    fn build(bbox: Rect, raw: Vec<Vec<Point2>>, lines: &[usize]) -> Result<Self, EnvError> {
        if !(bbox.x0 < bbox.x1 && bbox.y0 < bbox.y1) {
            return Err(EnvError::Invalid {
                line: 0,
                msg: "bbox must have positive width and height".into(),
            });
        }
        let mut polygons = Vec::with_capacity(raw.len());
        for (pts, &line) in raw.into_iter().zip(lines) {
            polygons.push(normalize_polygon(pts, &bbox, line)?);
        }
        let features = decompose(&polygons);
        Ok(Environment {
            bbox,
            polygons,
            features,
        })
    }

    pub fn empty(bbox: Rect) -> Self {
        Environment {
            bbox,
            polygons: Vec::new(),
            features: Vec::new(),
        }
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    /// Corners and walls of every polygon: for polygon `p` with `k` vertices,
    /// its `k` corners followed by its `k` walls.
    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature(&self, id: usize) -> &Feature {
        &self.features[id]
    }

    pub fn point_in_obstacle(&self, p: Point2) -> bool {
        self.polygons.iter().any(|poly| poly.contains(p))
    }

    /// Canonical text form: six decimals, polygons in stored order.
    pub fn serialize(&self) -> String {
        let b = &self.bbox;
        let mut out = String::new();
        let _ = writeln!(out, "bbox {:.6} {:.6} {:.6} {:.6}", b.x0, b.y0, b.x1, b.y1);
        for poly in &self.polygons {
            out.push_str("poly");
            for v in &poly.vertices {
                let _ = write!(out, " {:.6} {:.6}", v.x, v.y);
            }
            out.push('\n');
        }
        out
    }
}

fn normalize_polygon(pts: Vec<Point2>, bbox: &Rect, line: usize) -> Result<Polygon, EnvError> {
    let invalid = |msg: String| EnvError::Invalid { line, msg };
    let mut v: Vec<Point2> = Vec::with_capacity(pts.len());
    for p in pts {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    if v.len() < 3 {
        return Err(invalid(format!(
            "polygon needs at least 3 distinct vertices, got {}",
            v.len()
        )));
    }
    if let Some(p) = v.iter().find(|p| !bbox.contains(**p)) {
        return Err(invalid(format!(
            "vertex ({}, {}) lies outside bbox",
            p.x, p.y
        )));
    }
    let area = signed_area(&v);
    if !area.is_finite() || area.abs() < 1e-12 {
        return Err(invalid("polygon has zero area".into()));
    }
    if area < 0.0 {
        v.reverse();
    }
    let bounds = v.iter().fold(Rect::point(v[0]), |r, p| {
        Rect::new(r.x0.min(p.x), r.y0.min(p.y), r.x1.max(p.x), r.y1.max(p.y))
    });
    Ok(Polygon {
        vertices: v,
        bounds,
    })
}

fn decompose(polygons: &[Polygon]) -> Vec<Feature> {
    let mut out = Vec::new();
    for (pi, poly) in polygons.iter().enumerate() {
        for (k, &p) in poly.vertices.iter().enumerate() {
            out.push(Feature {
                id: out.len(),
                polygon: pi,
                kind: FeatureKind::Corner { vertex: k },
                shape: FeatureShape::Corner(p),
            });
        }
        for (k, e) in poly.edges().enumerate() {
            out.push(Feature {
                id: out.len(),
                polygon: pi,
                kind: FeatureKind::Wall { edge: k },
                shape: FeatureShape::from_segment(e),
            });
        }
    }
    out
}

fn parse_numbers(tokens: &[&str], line: usize) -> Result<Vec<f64>, EnvError> {
    tokens
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(EnvError::Syntax {
                line,
                msg: format!("expected a finite number, found `{t}`"),
            }),
        })
        .collect()
}

/// Parses the environment text format.
pub fn parse_environment(text: &str) -> Result<Environment, EnvError> {
    let mut bbox = None;
    let mut polys = Vec::new();
    let mut poly_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else {
            continue;
        };
        match head {
            "bbox" => {
                if bbox.is_some() {
                    return Err(EnvError::Syntax {
                        line,
                        msg: "duplicate bbox".into(),
                    });
                }
                let nums = parse_numbers(rest, line)?;
                if nums.len() != 4 {
                    return Err(EnvError::Syntax {
                        line,
                        msg: format!("bbox takes 4 numbers, found {}", nums.len()),
                    });
                }
                if !(nums[0] < nums[2] && nums[1] < nums[3]) {
                    return Err(EnvError::Invalid {
                        line,
                        msg: "bbox must satisfy x0 < x1 and y0 < y1".into(),
                    });
                }
                bbox = Some(Rect::new(nums[0], nums[1], nums[2], nums[3]));
            }
            "poly" => {
                let nums = parse_numbers(rest, line)?;
                if nums.len() % 2 != 0 {
                    return Err(EnvError::Invalid {
                        line,
                        msg: "open polygon: odd number of coordinates".into(),
                    });
                }
                polys.push(nums.chunks(2).map(|c| Point2::new(c[0], c[1])).collect());
                poly_lines.push(line);
            }
            other => {
                return Err(EnvError::Syntax {
                    line,
                    msg: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let bbox = bbox.ok_or(EnvError::MissingBbox)?;
    Environment::build(bbox, polys, &poly_lines)
}
