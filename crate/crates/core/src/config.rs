//! Plain-text `key=value` graphon configuration.
//!
//! ```text
//! # planted two-block model
//! kind = block
//! rho = 1
//! theta = 0.8 0.1; 0.1 0.8
//! fractions = 0.5, 0.5
//! ```
//!
//! Keys by kind (every data key is optional and falls back to the kind's preset):
//!
//! | kind | keys |
//! |------|------|
//! | `constant` | `level` (default 1) |
//! | `separable` | `g` (values on a uniform grid) or `g_file` |
//! | `block` | `theta` (rows separated by `;`), `fractions` (default equal) |
//! | `lowrank` | `lambdas`, `components` (one grid per row) |
//! | `grid` | `grid` (rows) or `grid_file`, `holder` |
//! | `f1` | none |
//! | `f2` | `a0`, `a1`, `alpha1`, `grid_points` |
//!
//! `rho` applies to every kind and defaults to 1 (0.25 for `f1`). Values within a row
//! may be separated by commas or whitespace. File paths are resolved against the
//! directory of the config file.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graphon::{make_f1, make_f2, GraphonKind, GraphonSpec, DEFAULT_F2_GRID, F2_DEFAULTS};

pub const KIND_NAMES: [&str; 7] = ["constant", "separable", "block", "lowrank", "grid", "f1", "f2"];

/// Default sparsity scale of `f1`, which keeps `ρ · 4xy ≤ 1`.
pub const F1_DEFAULT_RHO: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub enum GraphonConfig {
    Constant { level: f64, rho: f64 },
    Separable { g: Vec<f64>, rho: f64 },
    Block { theta: Vec<Vec<f64>>, fractions: Vec<f64>, rho: f64 },
    LowRank { lambdas: Vec<f64>, components: Vec<Vec<f64>>, rho: f64 },
    Grid { grid: Vec<Vec<f64>>, holder: Option<f64>, rho: f64 },
    F1 { rho: f64 },
    F2 { a0: f64, a1: f64, alpha1: f64, grid_points: usize, rho: f64 },
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_num(key: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| config_err(format!("{key}: cannot parse {s:?} as a number")))
}

fn parse_row(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(key, t))
        .collect()
}

fn parse_rows(key: &str, s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';').filter(|r| !r.trim().is_empty()).map(|r| parse_row(key, r)).collect()
}

fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path)?;
    let key = path.display().to_string();
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| parse_row(&key, l))
        .collect()
}

fn square(rows: Vec<Vec<f64>>, what: &str) -> Result<Vec<Vec<f64>>> {
    let k = rows.len();
    if rows.iter().any(|r| r.len() != k) {
        return Err(config_err(format!("{what} must be a square matrix")));
    }
    Ok(rows)
}

impl GraphonConfig {
    /// Built-in shape for each kind name at sparsity `rho` (`None` takes the kind's default).
    pub fn preset(kind: &str, rho: Option<f64>) -> Result<Self> {
        let r = rho.unwrap_or(1.0);
        Ok(match kind {
            "constant" => GraphonConfig::Constant { level: 1.0, rho: r },
            "separable" => GraphonConfig::Separable { g: vec![0.0, 2.0], rho: rho.unwrap_or(F1_DEFAULT_RHO) },
            "block" => GraphonConfig::Block {
                theta: vec![vec![0.8, 0.1], vec![0.1, 0.8]],
                fractions: vec![0.5, 0.5],
                rho: r,
            },
            "lowrank" => GraphonConfig::LowRank {
                lambdas: vec![0.2, 0.15],
                components: vec![vec![1.0, 1.0], vec![0.0, 2.0]],
                rho: r,
            },
            "grid" | "f2" => {
                let (a0, a1, alpha1) = F2_DEFAULTS;
                let f2 = GraphonConfig::F2 { a0, a1, alpha1, grid_points: DEFAULT_F2_GRID, rho: r };
                if kind == "f2" {
                    f2
                } else {
                    let spec = f2.to_spec()?;
                    let GraphonConfig::Grid { grid, rho, .. } = GraphonConfig::from_spec(&spec) else {
                        unreachable!("f2 tabulates to a grid")
                    };
                    GraphonConfig::Grid { grid, holder: Some(1.0), rho }
                }
            }
            "f1" => GraphonConfig::F1 { rho: rho.unwrap_or(F1_DEFAULT_RHO) },
            other => {
                return Err(config_err(format!("unknown graphon kind {other:?} (expected one of {})", KIND_NAMES.join(", "))))
            }
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GraphonConfig::Constant { .. } => "constant",
            GraphonConfig::Separable { .. } => "separable",
            GraphonConfig::Block { .. } => "block",
            GraphonConfig::LowRank { .. } => "lowrank",
            GraphonConfig::Grid { .. } => "grid",
            GraphonConfig::F1 { .. } => "f1",
            GraphonConfig::F2 { .. } => "f2",
        }
    }

    pub fn rho(&self) -> f64 {
        match self {
            GraphonConfig::Constant { rho, .. }
            | GraphonConfig::Separable { rho, .. }
            | GraphonConfig::Block { rho, .. }
            | GraphonConfig::LowRank { rho, .. }
            | GraphonConfig::Grid { rho, .. }
            | GraphonConfig::F1 { rho }
            | GraphonConfig::F2 { rho, .. } => *rho,
        }
    }

    pub fn set_rho(&mut self, value: f64) {
        match self {
            GraphonConfig::Constant { rho, .. }
            | GraphonConfig::Separable { rho, .. }
            | GraphonConfig::Block { rho, .. }
            | GraphonConfig::LowRank { rho, .. }
            | GraphonConfig::Grid { rho, .. }
            | GraphonConfig::F1 { rho }
            | GraphonConfig::F2 { rho, .. } => *rho = value,
        }
    }

    /// Parses config text; relative file paths are resolved against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: lineno + 1, message: format!("expected key=value, got {t:?}") })?;
            let key = k.trim().to_ascii_lowercase();
            if pairs.iter().any(|(p, _)| *p == key) {
                return Err(Error::Parse { line: lineno + 1, message: format!("duplicate key {key:?}") });
            }
            pairs.push((key, v.trim().to_string()));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let kind = get("kind").ok_or_else(|| config_err("missing kind"))?.to_ascii_lowercase();
        let allowed: &[&str] = match kind.as_str() {
            "constant" => &["level"],
            "separable" => &["g", "g_file"],
            "block" => &["theta", "fractions"],
            "lowrank" => &["lambdas", "components"],
            "grid" => &["grid", "grid_file", "holder"],
            "f1" => &[],
            "f2" => &["a0", "a1", "alpha1", "grid_points"],
            _ => &[],
        };
        for (k, _) in &pairs {
            if k != "kind" && k != "rho" && !allowed.contains(&k.as_str()) {
                return Err(config_err(format!("key {k:?} does not apply to kind {kind:?}")));
            }
        }
        let rho = get("rho").map(|v| parse_num("rho", v)).transpose()?;
        let resolve = |p: &str| -> PathBuf {
            let p = Path::new(p);
            match base_dir {
                Some(d) if p.is_relative() => d.join(p),
                _ => p.to_path_buf(),
            }
        };
        let mut cfg = Self::preset(&kind, rho)?;
        match &mut cfg {
            GraphonConfig::Constant { level, .. } => {
                if let Some(v) = get("level") {
                    *level = parse_num("level", v)?;
                }
            }
            GraphonConfig::Separable { g, .. } => {
                if let Some(v) = get("g") {
                    *g = parse_row("g", v)?;
                } else if let Some(p) = get("g_file") {
                    *g = read_matrix(&resolve(p))?.into_iter().flatten().collect();
                }
            }
            GraphonConfig::Block { theta, fractions, .. } => {
                if let Some(v) = get("theta") {
                    *theta = square(parse_rows("theta", v)?, "theta")?;
                    let k = theta.len();
                    *fractions = vec![1.0 / k as f64; k];
                }
                if let Some(v) = get("fractions") {
                    *fractions = parse_row("fractions", v)?;
                }
            }
            GraphonConfig::LowRank { lambdas, components, .. } => {
                if let Some(v) = get("lambdas") {
                    *lambdas = parse_row("lambdas", v)?;
                }
                if let Some(v) = get("components") {
                    *components = parse_rows("components", v)?;
                }
            }
            GraphonConfig::Grid { grid, holder, .. } => {
                if let Some(v) = get("grid") {
                    *grid = square(parse_rows("grid", v)?, "grid")?;
                    *holder = None;
                } else if let Some(p) = get("grid_file") {
                    *grid = square(read_matrix(&resolve(p))?, "grid_file")?;
                    *holder = None;
                }
                if let Some(v) = get("holder") {
                    *holder = Some(parse_num("holder", v)?);
                }
            }
            GraphonConfig::F1 { .. } => {}
            GraphonConfig::F2 { a0, a1, alpha1, grid_points, .. } => {
                if let Some(v) = get("a0") {
                    *a0 = parse_num("a0", v)?;
                }
                if let Some(v) = get("a1") {
                    *a1 = parse_num("a1", v)?;
                }
                if let Some(v) = get("alpha1") {
                    *alpha1 = parse_num("alpha1", v)?;
                }
                if let Some(v) = get("grid_points") {
                    *grid_points =
                        v.parse().map_err(|_| config_err(format!("grid_points: cannot parse {v:?} as an integer")))?;
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent())
    }

    pub fn to_spec(&self) -> Result<GraphonSpec<f64>> {
        match self {
            GraphonConfig::Constant { level, rho } => GraphonSpec::constant(*level, *rho),
            GraphonConfig::Separable { g, rho } => GraphonSpec::separable(g.clone(), *rho),
            GraphonConfig::Block { theta, fractions, rho } => {
                GraphonSpec::block_constant(theta.iter().flatten().copied().collect(), fractions.clone(), *rho)
            }
            GraphonConfig::LowRank { lambdas, components, rho } => {
                GraphonSpec::low_rank(lambdas.clone(), components.clone(), *rho)
            }
            GraphonConfig::Grid { grid, holder, rho } => {
                GraphonSpec::analytic_grid(grid.len(), grid.iter().flatten().copied().collect(), *holder, *rho)
            }
            GraphonConfig::F1 { rho } => make_f1(*rho),
            GraphonConfig::F2 { a0, a1, alpha1, grid_points, rho } => make_f2(*a0, *a1, *alpha1, *rho, *grid_points),
        }
    }

    /// Inline config describing an existing spec.
    pub fn from_spec(spec: &GraphonSpec<f64>) -> Self {
        let rho = spec.rho();
        let rows = |flat: &[f64], k: usize| flat.chunks(k).map(<[f64]>::to_vec).collect::<Vec<_>>();
        match spec.kind() {
            GraphonKind::Constant { level } => GraphonConfig::Constant { level: *level, rho },
            GraphonKind::Separable { g } => GraphonConfig::Separable { g: g.clone(), rho },
            GraphonKind::BlockConstant { theta, fractions } => {
                GraphonConfig::Block { theta: rows(theta, fractions.len()), fractions: fractions.clone(), rho }
            }
            GraphonKind::LowRank { lambdas, components } => {
                GraphonConfig::LowRank { lambdas: lambdas.clone(), components: components.clone(), rho }
            }
            GraphonKind::AnalyticGrid { m, grid, holder_exponent } => {
                GraphonConfig::Grid { grid: rows(grid, *m), holder: *holder_exponent, rho }
            }
        }
    }
}

fn join(row: &[f64]) -> String {
    row.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
}

fn join_rows(rows: &[Vec<f64>]) -> String {
    rows.iter().map(|r| join(r)).collect::<Vec<_>>().join("; ")
}

impl fmt::Display for GraphonConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind = {}", self.kind_name())?;
        writeln!(f, "rho = {}", self.rho())?;
        match self {
            GraphonConfig::Constant { level, .. } => writeln!(f, "level = {level}"),
            GraphonConfig::Separable { g, .. } => writeln!(f, "g = {}", join(g)),
            GraphonConfig::Block { theta, fractions, .. } => {
                writeln!(f, "theta = {}", join_rows(theta))?;
                writeln!(f, "fractions = {}", join(fractions))
            }
            GraphonConfig::LowRank { lambdas, components, .. } => {
                writeln!(f, "lambdas = {}", join(lambdas))?;
                writeln!(f, "components = {}", join_rows(components))
            }
            GraphonConfig::Grid { grid, holder, .. } => {
                writeln!(f, "grid = {}", join_rows(grid))?;
                match holder {
                    Some(h) => writeln!(f, "holder = {h}"),
                    None => Ok(()),
                }
            }
            GraphonConfig::F1 { .. } => Ok(()),
            GraphonConfig::F2 { a0, a1, alpha1, grid_points, .. } => {
                writeln!(f, "a0 = {a0}")?;
                writeln!(f, "a1 = {a1}")?;
                writeln!(f, "alpha1 = {alpha1}")?;
                writeln!(f, "grid_points = {grid_points}")
            }
        }
    }
}
