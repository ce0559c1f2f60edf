//! Scenario files: a strict TOML schema with named sections, mapped onto
//! geometry, time grid, boundary data and per-command options.
//!
//! ```toml
//! [geometry]
//! kind = "circle"
//! radius = 1.0
//! nodes = 32
//!
//! [grid]
//! c = 1.0
//! dt = 0.2
//! steps = 10
//!
//! [problem]
//! kind = "dirichlet"
//! solution = { type = "plane_wave", direction = [0.6, 0.8], profile = { type = "sin", omega = 2.0 } }
//! ```
//!
//! Data come from a fixed catalog: manufactured solutions (`solution`),
//! time functions on a boundary region (`boundary`), or a tabulated series
//! (`series`, a CSV file with a `t` column followed by one column per node).

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bie::{BvpKind, Scenario};
use crate::error::{Result, WaveError};
use crate::field::{CauchyData, TraceKind, TraceSeries};
use crate::geometry::{BoundaryGeometry, Curve, Interval, Point, Surface, TimeGrid};
use crate::oracle::{analytic_reference, AnalyticKind, AnalyticSolution, Profile};
use crate::representation::RepresentationRule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub geometry: GeometrySpec,
    pub grid: GridSpec,
    pub problem: ProblemSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub represent: Option<RepresentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss: Option<GaussSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock: Option<ShockSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    Interval {
        a1: f64,
        a2: f64,
    },
    Circle {
        #[serde(default)]
        center: Vec<f64>,
        radius: f64,
        nodes: usize,
    },
    Ellipse {
        #[serde(default)]
        center: Vec<f64>,
        a: f64,
        b: f64,
        nodes: usize,
    },
    /// Closed polygon; each side is split into `subdivide` elements.
    Polygon {
        points: Vec<Vec<f64>>,
        #[serde(default = "one")]
        subdivide: usize,
    },
    Icosphere {
        #[serde(default)]
        center: Vec<f64>,
        radius: f64,
        level: usize,
    },
    /// Triangle mesh in OFF format.
    Mesh {
        path: PathBuf,
    },
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub c: f64,
    pub dt: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindSpec {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub kind: KindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<DataSpec>,
    /// Box `[min, max]` outside of which `boundary` data are zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Sin {
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    Power {
        n: i32,
    },
    Gaussian {
        center: f64,
        width: f64,
    },
}

/// Manufactured solutions: boundary and Cauchy data are read off them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolutionSpec {
    PlaneWave {
        direction: Vec<f64>,
        profile: ProfileSpec,
    },
    StandingMode {
        k: f64,
        #[serde(default)]
        cosine: bool,
    },
    SphericalOutgoing {
        #[serde(default)]
        center: Vec<f64>,
        profile: ProfileSpec,
        #[serde(default)]
        r0: f64,
    },
    Dalembert {
        a: f64,
        x0: f64,
        w: f64,
        b: f64,
        x1: f64,
        v: f64,
    },
    RampShock {
        v: f64,
    },
    Quadratic {
        a: f64,
        b: f64,
    },
    Constant {
        value: f64,
    },
}

/// Time functions `g(t)` prescribed on the boundary, with zero Cauchy data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Constant {
        value: f64,
    },
    /// `Σ c_i t^i`
    Polynomial {
        coefficients: Vec<f64>,
    },
    Sine {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `slope · t`
    Ramp {
        slope: f64,
    },
}

impl DataSpec {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            DataSpec::Constant { value } => *value,
            DataSpec::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c),
            DataSpec::Sine { amplitude, omega, phase } => amplitude * (omega * t + phase).sin(),
            DataSpec::Ramp { slope } => slope * t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TracesSpec {
    /// Read both traces off the manufactured solution.
    Exact,
    /// Solve the boundary integral equation for the unknown trace.
    Solved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentSpec {
    pub points: Vec<Vec<f64>>,
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traces: Option<TracesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussMode {
    Static,
    Dynamic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussSpec {
    pub mode: GaussMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
    /// Generated interior, exterior and on-boundary points.
    #[serde(default)]
    pub interior: usize,
    #[serde(default)]
    pub exterior: usize,
    #[serde(default)]
    pub boundary: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeSpec {
    /// The manufactured solution.
    Exact,
    /// The finite-difference oracle of the `[oracle]` section.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySpec {
    pub times: Vec<f64>,
    #[serde(default = "exact_probe")]
    pub field: ProbeSpec,
    /// Bound on both residuals, relative to the peak energy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn exact_probe() -> ProbeSpec {
    ProbeSpec::Exact
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockSpec {
    pub seeds: Vec<Vec<f64>>,
    pub eps: f64,
    pub times: Vec<f64>,
    #[serde(default = "eight")]
    pub directions: usize,
    #[serde(default = "exact_probe")]
    pub field: ProbeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn eight() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub h: f64,
    /// Defaults to `h / (2c)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<f64>,
    /// Points where the oracle is compared with the boundary-integral field.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyCommand {
    Represent,
    Solve,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    pub command: StudyCommand,
    #[serde(default = "three")]
    pub levels: usize,
    /// Smallest acceptable observed order between the finest levels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_order: Option<f64>,
}

fn three() -> usize {
    3
}

/// Keys accepted in each table, by section and variant tag.
fn allowed_keys(path: &str, tag: Option<&str>) -> Option<&'static [&'static str]> {
    Some(match (path, tag) {
        ("", _) => &["geometry", "grid", "problem", "represent", "gauss", "energy", "shock", "oracle", "convergence"],
        ("geometry", Some("interval")) => &["kind", "a1", "a2"],
        ("geometry", Some("circle")) => &["kind", "center", "radius", "nodes"],
        ("geometry", Some("ellipse")) => &["kind", "center", "a", "b", "nodes"],
        ("geometry", Some("polygon")) => &["kind", "points", "subdivide"],
        ("geometry", Some("icosphere")) => &["kind", "center", "radius", "level"],
        ("geometry", Some("mesh")) => &["kind", "path"],
        ("grid", _) => &["c", "dt", "steps"],
        ("problem", _) => &["kind", "solution", "boundary", "region", "series"],
        ("problem.region", _) => &["min", "max"],
        ("problem.solution", Some("plane_wave")) => &["type", "direction", "profile"],
        ("problem.solution", Some("standing_mode")) => &["type", "k", "cosine"],
        ("problem.solution", Some("spherical_outgoing")) => &["type", "center", "profile", "r0"],
        ("problem.solution", Some("dalembert")) => &["type", "a", "x0", "w", "b", "x1", "v"],
        ("problem.solution", Some("ramp_shock")) => &["type", "v"],
        ("problem.solution", Some("quadratic")) => &["type", "a", "b"],
        ("problem.solution", Some("constant")) => &["type", "value"],
        ("problem.solution.profile", Some("sin")) => &["type", "omega", "phase"],
        ("problem.solution.profile", Some("power")) => &["type", "n"],
        ("problem.solution.profile", Some("gaussian")) => &["type", "center", "width"],
        ("problem.boundary", Some("constant")) => &["type", "value"],
        ("problem.boundary", Some("polynomial")) => &["type", "coefficients"],
        ("problem.boundary", Some("sine")) => &["type", "amplitude", "omega", "phase"],
        ("problem.boundary", Some("ramp")) => &["type", "slope"],
        ("represent", _) => &["points", "times", "traces", "tolerance"],
        ("gauss", _) => &["mode", "times", "points", "interior", "exterior", "boundary", "tolerance"],
        ("energy", _) => &["times", "field", "tolerance"],
        ("shock", _) => &["seeds", "eps", "times", "directions", "field", "tolerance"],
        ("oracle", _) => &["h", "dt", "times", "points", "tolerance"],
        ("convergence", _) => &["command", "levels", "min_order"],
        _ => return None,
    })
}

fn unknown_keys(table: &toml::Table, path: &str, out: &mut Vec<String>) {
    let tag = table.get("kind").or_else(|| table.get("type")).and_then(|v| v.as_str());
    let Some(allowed) = allowed_keys(path, tag) else {
        return;
    };
    for (key, value) in table {
        let full = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
        if !allowed.contains(&key.as_str()) {
            out.push(full);
        } else if let Some(t) = value.as_table() {
            unknown_keys(t, &full, out);
        }
    }
}

fn point(v: &[f64], dim: usize, key: &str, errs: &mut Vec<String>) -> Point {
    if v.len() != dim {
        errs.push(format!("{key}: expected {dim} coordinates, got {}", v.len()));
    }
    let mut p = Point::zeros();
    for (k, x) in v.iter().take(3).enumerate() {
        p[k] = *x;
    }
    p
}

fn center(v: &[f64], dim: usize, key: &str, errs: &mut Vec<String>) -> Point {
    if v.is_empty() {
        Point::zeros()
    } else {
        point(v, dim, key, errs)
    }
}

fn positive(v: f64, key: &str, errs: &mut Vec<String>) {
    if !(v > 0.0 && v.is_finite()) {
        errs.push(format!("{key}: must be positive, got {v}"));
    }
}

fn profile(p: &ProfileSpec) -> Profile {
    match *p {
        ProfileSpec::Sin { omega, phase } => Profile::Sin { omega, phase },
        ProfileSpec::Power { n } => Profile::Power { n },
        ProfileSpec::Gaussian { center, width } => Profile::Gaussian { center, width },
    }
}

fn read_off(path: &Path) -> Result<Surface> {
    let text = std::fs::read_to_string(path).map_err(|e| WaveError::Config(format!("geometry.path: {}: {e}", path.display())))?;
    let bad = |what: &str| WaveError::Config(format!("geometry.path: {}: {what}", path.display()));
    let mut tokens = text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace);
    if tokens.next() != Some("OFF") {
        return Err(bad("missing OFF header"));
    }
    let mut num = || -> Result<f64> { tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad("truncated or malformed")) };
    let (nv, nf) = (num()? as usize, num()? as usize);
    num()?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        vertices.push(Point::new(num()?, num()?, num()?));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        if num()? != 3.0 {
            return Err(bad("only triangular faces are supported"));
        }
        triangles.push([num()? as usize, num()? as usize, num()? as usize]);
    }
    Surface::new(vertices, triangles)
}

fn read_series(path: &Path, kind: TraceKind, nodes: usize, grid: &TimeGrid) -> Result<TraceSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| WaveError::Config(format!("problem.series: {}: {e}", path.display())))?;
    let mut values = Vec::with_capacity(nodes * (grid.steps + 1));
    for (row, line) in text.lines().skip(1).filter(|l| !l.trim().is_empty()).enumerate() {
        let cells: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| WaveError::Config(format!("problem.series: row {} is not numeric", row + 2)))?;
        if cells.len() != nodes + 1 {
            return Err(WaveError::Config(format!("problem.series: row {} has {} columns, expected t plus {nodes} nodes", row + 2, cells.len())));
        }
        if (cells[0] - grid.time(row)).abs() > 1e-9 * (1.0 + grid.horizon()) {
            return Err(WaveError::Config(format!("problem.series: row {} has t = {}, expected {}", row + 2, cells[0], grid.time(row))));
        }
        values.extend_from_slice(&cells[1..]);
    }
    if values.len() != nodes * (grid.steps + 1) {
        return Err(WaveError::Config(format!("problem.series: expected {} time rows", grid.steps + 1)));
    }
    TraceSeries::from_values(kind, nodes, grid.dt, values)
}

impl ScenarioConfig {
    /// Parses and validates; every unknown key and every invalid value is
    /// listed in the error.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| WaveError::Config(e.message().to_string()))?;
        let mut unknown = Vec::new();
        unknown_keys(&table, "", &mut unknown);
        if !unknown.is_empty() {
            return Err(WaveError::Config(format!("unknown keys: {}", unknown.join(", "))));
        }
        let cfg: ScenarioConfig = table.try_into().map_err(|e: toml::de::Error| WaveError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| WaveError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        // relative file references are taken from the config's directory
        let base = path.parent().unwrap_or(Path::new(""));
        if let GeometrySpec::Mesh { path } = &mut cfg.geometry {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        if let Some(p) = &mut cfg.problem.series {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| WaveError::Config(e.to_string()))
    }

    pub fn dimension(&self) -> usize {
        match self.geometry {
            GeometrySpec::Interval { .. } => 1,
            GeometrySpec::Circle { .. } | GeometrySpec::Ellipse { .. } | GeometrySpec::Polygon { .. } => 2,
            GeometrySpec::Icosphere { .. } | GeometrySpec::Mesh { .. } => 3,
        }
    }

    /// Value checks that need no files; all failures are collected.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let dim = self.dimension();
        match &self.geometry {
            GeometrySpec::Interval { a1, a2 } => {
                if !(a1 < a2) {
                    errs.push(format!("geometry.a2: must exceed a1 = {a1}, got {a2}"));
                }
            }
            GeometrySpec::Circle { center: c, radius, nodes } => {
                center(c, dim, "geometry.center", &mut errs);
                positive(*radius, "geometry.radius", &mut errs);
                if *nodes < 3 {
                    errs.push(format!("geometry.nodes: need at least 3, got {nodes}"));
                }
            }
            GeometrySpec::Ellipse { center: c, a, b, nodes } => {
                center(c, dim, "geometry.center", &mut errs);
                positive(*a, "geometry.a", &mut errs);
                positive(*b, "geometry.b", &mut errs);
                if *nodes < 3 {
                    errs.push(format!("geometry.nodes: need at least 3, got {nodes}"));
                }
            }
            GeometrySpec::Polygon { points, subdivide } => {
                if points.len() < 3 {
                    errs.push(format!("geometry.points: need at least 3 vertices, got {}", points.len()));
                }
                for p in points {
                    point(p, 2, "geometry.points", &mut errs);
                }
                if *subdivide == 0 {
                    errs.push("geometry.subdivide: must be at least 1".into());
                }
            }
            GeometrySpec::Icosphere { center: c, radius, .. } => {
                center(c, dim, "geometry.center", &mut errs);
                positive(*radius, "geometry.radius", &mut errs);
            }
            GeometrySpec::Mesh { .. } => {}
        }
        positive(self.grid.c, "grid.c", &mut errs);
        positive(self.grid.dt, "grid.dt", &mut errs);
        if self.grid.steps == 0 {
            errs.push("grid.steps: must be at least 1".into());
        }
        let p = &self.problem;
        let sources = [p.solution.is_some(), p.boundary.is_some(), p.series.is_some()].iter().filter(|b| **b).count();
        if sources != 1 {
            errs.push("problem: give exactly one of solution, boundary, series".into());
        }
        if p.region.is_some() && p.boundary.is_none() {
            errs.push("problem.region: only applies to boundary data".into());
        }
        if let Some(r) = &p.region {
            point(&r.min, dim, "problem.region.min", &mut errs);
            point(&r.max, dim, "problem.region.max", &mut errs);
        }
        if let Some(s) = &p.solution {
            match s {
                SolutionSpec::PlaneWave { direction, .. } => {
                    let d = point(direction, dim, "problem.solution.direction", &mut errs);
                    if !(d.norm() > 0.0) {
                        errs.push("problem.solution.direction: must be nonzero".into());
                    }
                }
                SolutionSpec::SphericalOutgoing { center: c, .. } => {
                    center(c, dim, "problem.solution.center", &mut errs);
                }
                SolutionSpec::StandingMode { .. } | SolutionSpec::Dalembert { .. } | SolutionSpec::RampShock { .. } if dim != 1 => {
                    errs.push(format!("problem.solution.type: only defined on an interval, geometry has dimension {dim}"));
                }
                SolutionSpec::Dalembert { w, v, .. } => {
                    positive(*w, "problem.solution.w", &mut errs);
                    positive(*v, "problem.solution.v", &mut errs);
                }
                _ => {}
            }
            let prof = match s {
                SolutionSpec::PlaneWave { profile, .. } | SolutionSpec::SphericalOutgoing { profile, .. } => Some(profile),
                _ => None,
            };
            match prof {
                Some(ProfileSpec::Power { n }) if *n < 1 => errs.push(format!("problem.solution.profile.n: must be at least 1, got {n}")),
                Some(ProfileSpec::Gaussian { width, .. }) => positive(*width, "problem.solution.profile.width", &mut errs),
                _ => {}
            }
        }
        if let Some(r) = &self.represent {
            for x in &r.points {
                point(x, dim, "represent.points", &mut errs);
            }
            if r.times.iter().any(|t| !(*t >= 0.0)) {
                errs.push("represent.times: must be non-negative".into());
            }
            if r.traces == Some(TracesSpec::Exact) && p.solution.is_none() {
                errs.push("represent.traces: exact traces need problem.solution".into());
            }
        }
        if let Some(g) = &self.gauss {
            for x in &g.points {
                point(x, dim, "gauss.points", &mut errs);
            }
            match g.mode {
                GaussMode::Static if dim != 3 => errs.push("gauss.mode: the static formula needs a surface".into()),
                GaussMode::Dynamic if g.times.is_empty() || g.times.iter().any(|t| !(*t > 0.0)) => {
                    errs.push("gauss.times: the dynamic formula needs positive times".into())
                }
                _ => {}
            }
        }
        let needs_oracle = |f: ProbeSpec| f == ProbeSpec::Oracle && self.oracle.is_none();
        let needs_solution = |f: ProbeSpec| f == ProbeSpec::Exact && p.solution.is_none();
        if let Some(e) = &self.energy {
            if e.times.iter().any(|t| !(*t >= 0.0)) {
                errs.push("energy.times: must be non-negative".into());
            }
            if needs_oracle(e.field) {
                errs.push("energy.field: oracle probe needs an [oracle] section".into());
            }
            if needs_solution(e.field) {
                errs.push("energy.field: exact probe needs problem.solution".into());
            }
        }
        if let Some(s) = &self.shock {
            for x in &s.seeds {
                point(x, dim, "shock.seeds", &mut errs);
            }
            if s.seeds.is_empty() {
                errs.push("shock.seeds: need at least one seed".into());
            }
            positive(s.eps, "shock.eps", &mut errs);
            if needs_oracle(s.field) {
                errs.push("shock.field: oracle probe needs an [oracle] section".into());
            }
            if needs_solution(s.field) {
                errs.push("shock.field: exact probe needs problem.solution".into());
            }
        }
        if let Some(o) = &self.oracle {
            positive(o.h, "oracle.h", &mut errs);
            if let Some(dt) = o.dt {
                positive(dt, "oracle.dt", &mut errs);
            }
            for x in &o.points {
                point(x, dim, "oracle.points", &mut errs);
            }
        }
        if let Some(c) = &self.convergence {
            if c.levels < 2 {
                errs.push(format!("convergence.levels: need at least 2, got {}", c.levels));
            }
            if p.solution.is_none() {
                errs.push("convergence: the study needs problem.solution as reference".into());
            }
            let section = match c.command {
                StudyCommand::Represent => self.represent.is_none().then_some("represent"),
                StudyCommand::Oracle => self.oracle.is_none().then_some("oracle"),
                StudyCommand::Solve => None,
            };
            if let Some(s) = section {
                errs.push(format!("convergence.command: needs a [{s}] section"));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(WaveError::Config(errs.join("; ")))
        }
    }

    /// Boundary geometry at refinement `k`: node counts scale with `k`,
    /// icosphere levels grow by `log₂ k`.
    pub fn geometry(&self, refine: usize) -> Result<BoundaryGeometry> {
        let k = refine.max(1);
        let mut errs = Vec::new();
        let dim = self.dimension();
        let g = match &self.geometry {
            GeometrySpec::Interval { a1, a2 } => BoundaryGeometry::Interval(Interval::new(*a1, *a2)?),
            GeometrySpec::Circle { center: c, radius, nodes } => {
                BoundaryGeometry::Curve(Curve::circle(center(c, dim, "", &mut errs), *radius, nodes * k)?)
            }
            GeometrySpec::Ellipse { center: c, a, b, nodes } => {
                BoundaryGeometry::Curve(Curve::ellipse(center(c, dim, "", &mut errs), *a, *b, nodes * k)?)
            }
            GeometrySpec::Polygon { points, subdivide } => {
                let corners: Vec<Point> = points.iter().map(|p| point(p, 2, "", &mut errs)).collect();
                let m = subdivide * k;
                let n = corners.len();
                let mut nodes = Vec::with_capacity(n * m);
                for i in 0..n {
                    let (a, b) = (corners[i], corners[(i + 1) % n]);
                    for j in 0..m {
                        nodes.push(a + (b - a) * (j as f64 / m as f64));
                    }
                }
                BoundaryGeometry::Curve(Curve::polyline(nodes)?)
            }
            GeometrySpec::Icosphere { center: c, radius, level } => {
                let extra = usize::BITS - 1 - k.leading_zeros();
                BoundaryGeometry::Surface(Surface::icosphere(center(c, dim, "", &mut errs), *radius, level + extra as usize)?)
            }
            GeometrySpec::Mesh { path } => BoundaryGeometry::Surface(read_off(path)?),
        };
        Ok(g)
    }

    /// Time grid at refinement `k`: `Δt/k` over the same horizon.
    pub fn grid(&self, refine: usize) -> Result<TimeGrid> {
        let k = refine.max(1);
        TimeGrid::new(self.grid.c, self.grid.dt / k as f64, self.grid.steps * k)
    }

    pub fn rule(&self, refine: usize) -> RepresentationRule {
        RepresentationRule::refined(refine)
    }

    pub fn bvp_kind(&self) -> BvpKind {
        match self.problem.kind {
            KindSpec::Dirichlet => BvpKind::Dirichlet,
            KindSpec::Neumann => BvpKind::Neumann,
        }
    }

    /// The manufactured solution, when the data come from one.
    pub fn solution(&self) -> Result<Option<Arc<AnalyticSolution>>> {
        let Some(s) = &self.problem.solution else {
            return Ok(None);
        };
        let dim = self.dimension();
        let mut errs = Vec::new();
        let kind = match s {
            SolutionSpec::PlaneWave { direction, profile: p } => {
                let d = point(direction, dim, "", &mut errs);
                AnalyticKind::PlaneWave { profile: profile(p), direction: d / d.norm() }
            }
            SolutionSpec::StandingMode { k, cosine } => AnalyticKind::StandingMode1d { k: *k, cosine: *cosine },
            SolutionSpec::SphericalOutgoing { center: c, profile: p, r0 } => {
                AnalyticKind::SphericalOutgoing { center: center(c, dim, "", &mut errs), profile: profile(p), r0: *r0 }
            }
            SolutionSpec::Dalembert { a, x0, w, b, x1, v } => AnalyticKind::DAlembert1d { a: *a, x0: *x0, w: *w, b: *b, x1: *x1, v: *v },
            SolutionSpec::RampShock { v } => AnalyticKind::RampShock1d { v: *v },
            SolutionSpec::Quadratic { a, b } => AnalyticKind::Quadratic { a: *a, b: *b, dim },
            SolutionSpec::Constant { value } => AnalyticKind::Constant { value: *value },
        };
        Ok(Some(Arc::new(analytic_reference(kind, self.grid.c)?)))
    }

    /// The boundary value problem at refinement `k`.
    pub fn scenario(&self, refine: usize) -> Result<Scenario> {
        let geom = self.geometry(refine)?;
        let grid = self.grid(refine)?;
        let kind = self.bvp_kind();
        let sc = if let Some(u) = self.solution()? {
            Scenario::manufactured(geom, grid, kind, &u)?
        } else if let Some(data) = &self.problem.boundary {
            let dim = self.dimension();
            let mut errs = Vec::new();
            let region = self.problem.region.as_ref().map(|r| (point(&r.min, dim, "", &mut errs), point(&r.max, dim, "", &mut errs)));
            let inside = |x: &Point| region.is_none_or(|(lo, hi)| (0..3).all(|k| x[k] >= lo[k] - 1e-12 && x[k] <= hi[k] + 1e-12));
            let nodes = geom.node_count();
            let mut given = TraceSeries::zeros(kind.given_kind(), nodes, &grid);
            for i in 0..nodes {
                if inside(&geom.node_point(i)) {
                    for s in 0..=grid.steps {
                        given.set(i, s, data.value(grid.time(s)));
                    }
                }
            }
            Scenario::new(geom, grid, kind, given, CauchyData::zero())?
        } else {
            let path = self.problem.series.as_ref().expect("validated");
            if refine > 1 {
                return Err(WaveError::Config("problem.series: tabulated data cannot be refined".into()));
            }
            let given = read_series(path, kind.given_kind(), geom.node_count(), &grid)?;
            Scenario::new(geom, grid, kind, given, CauchyData::zero())?
        };
        Ok(sc.with_rule(self.rule(refine)))
    }
}

/// Deterministic samples: interior and exterior points from a Halton
/// sequence over an inflated bounding box, boundary points at element
/// midpoints (or nodes in 1D).
pub fn sample_points(geom: &BoundaryGeometry, interior: usize, exterior: usize, boundary: usize) -> Vec<Point> {
    let (lo, hi) = geom.bounding_box();
    let dim = geom.dimension();
    let pad = 0.5 * (hi - lo);
    let halton = |mut i: usize, base: usize| {
        let (mut f, mut r) = (1.0, 0.0);
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    };
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    let mut i = 1;
    while (ins.len() < interior || outs.len() < exterior) && i < 100_000 {
        let mut x = Point::zeros();
        for (k, base) in [2, 3, 5].into_iter().enumerate().take(dim) {
            x[k] = lo[k] - pad[k] + (hi[k] - lo[k] + 2.0 * pad[k]) * halton(i, base);
        }
        i += 1;
        // keep clear of the boundary so that the expected value is unambiguous
        if geom.distance_to_boundary(&x) < 0.05 * geom.diameter() {
            continue;
        }
        let chi = geom.characteristic_function(&x);
        if chi == 1.0 && ins.len() < interior {
            ins.push(x);
        } else if chi == 0.0 && outs.len() < exterior {
            outs.push(x);
        }
    }
    let mut on = Vec::new();
    let mut seen = BTreeSet::new();
    match geom {
        BoundaryGeometry::Interval(iv) => on.extend([iv.a1, iv.a2].iter().take(boundary).map(|a| Point::new(*a, 0.0, 0.0))),
        BoundaryGeometry::Curve(cv) => {
            let n = cv.element_count();
            for j in 0..boundary.min(n) {
                let e = j * n / boundary.min(n);
                if seen.insert(e) {
                    let (a, b) = cv.element_range(e);
                    on.push(cv.element_position(e, 0.5 * (a + b)));
                }
            }
        }
        BoundaryGeometry::Surface(s) => {
            let n = s.triangles().len();
            for j in 0..boundary.min(n) {
                let t = j * n / boundary.min(n);
                if seen.insert(t) {
                    let c = s.corners(t);
                    on.push((c[0] + c[1] + c[2]) / 3.0);
                }
            }
        }
    }
    ins.into_iter().chain(outs).chain(on).collect()
}

#[cfg(test)]
mod tests;
