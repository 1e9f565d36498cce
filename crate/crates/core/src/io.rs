//! Command-line value parsing and the `path.json` document.

use crate::cspace::{Config, RobotSpec};
use crate::planner::{Outcome, PlanStats};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PATH_FORMAT: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("bad number `{0}`")]
    Number(String),
    #[error("expected 4 comma-separated values, got {0}")]
    Arity(usize),
    #[error("path document: {0}")]
    Json(String),
    #[error("unsupported path format {0}")]
    Format(u32),
    #[error("invalid path document: {0}")]
    Invalid(String),
}

/// Parses an angle in radians, or in degrees with a `deg` suffix.
pub fn parse_angle(s: &str) -> Result<f64, IoError> {
    let t = s.trim();
    let (num, deg) = match t.strip_suffix("deg") {
        Some(rest) => (rest.trim_end(), true),
        None => (t, false),
    };
    let v: f64 = num.parse().map_err(|_| IoError::Number(s.to_string()))?;
    if !v.is_finite() {
        return Err(IoError::Number(s.to_string()));
    }
    Ok(if deg { v.to_radians() } else { v })
}

fn parse_real(s: &str) -> Result<f64, IoError> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(IoError::Number(s.to_string())),
    }
}

/// Parses `x,y,t1,t2`; the angles accept a `deg` suffix.
pub fn parse_config_arg(s: &str) -> Result<Config, IoError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(IoError::Arity(parts.len()));
    }
    Ok(Config::new(
        parse_real(parts[0])?,
        parse_real(parts[1])?,
        parse_angle(parts[2])?,
        parse_angle(parts[3])?,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathDoc {
    pub format: u32,
    pub robot: RobotSpec,
    pub epsilon: f64,
    pub outcome: String,
    pub path: Vec<[f64; 4]>,
    pub stats: PlanStats,
}

impl PathDoc {
    pub fn new(robot: RobotSpec, epsilon: f64, outcome: &Outcome, stats: PlanStats) -> Self {
        let path = match outcome {
            Outcome::Path(p) => p
                .iter()
                .map(|c| [c.x, c.y, c.t1.radians(), c.t2.radians()])
                .collect(),
            _ => Vec::new(),
        };
        PathDoc {
            format: PATH_FORMAT,
            robot,
            epsilon,
            outcome: outcome.label().to_string(),
            path,
            stats,
        }
    }

    pub fn configs(&self) -> Vec<Config> {
        self.path
            .iter()
            .map(|c| Config::new(c[0], c[1], c[2], c[3]))
            .collect()
    }

    /// Pretty JSON with a trailing newline. Wall-clock time is not written.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn parse_path_json(text: &str) -> Result<PathDoc, IoError> {
    let doc: PathDoc = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    if doc.format != PATH_FORMAT {
        return Err(IoError::Format(doc.format));
    }
    if !matches!(doc.outcome.as_str(), "PATH" | "NO-PATH" | "TIMEOUT") {
        return Err(IoError::Invalid(format!("outcome `{}`", doc.outcome)));
    }
    if doc.path.iter().flatten().any(|v| !v.is_finite()) {
        return Err(IoError::Invalid("non-finite coordinate".into()));
    }
    Ok(doc)
}
