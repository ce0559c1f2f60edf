//! Scenario-driven commands. Each command turns a [`ScenarioConfig`] into
//! one or more CSV tables plus a few summary numbers.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::bie::{self, BvpKind, Scenario};
use crate::config::{GaussMode, ProbeSpec, ScenarioConfig, StudyCommand, TracesSpec};
use crate::error::{Result, WaveError};
use crate::field::{Field, TraceKind, TraceSeries};
use crate::geometry::Point;
use crate::oracle::{fd_reference, AnalyticSolution, FdSolution};
use crate::representation::{represent_points, BoundaryData};
use crate::verify::{
    energy_balance_residual, gauss_dynamic, gauss_expected, gauss_static_3d, lagrangian_balance_residual, shock_jump_report,
    total_energy, BalanceRule, FieldProbe, FrontSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Represent,
    Solve,
    VerifyGauss,
    VerifyEnergy,
    VerifyShock,
    Oracle,
    Convergence,
}

/// Homogeneous numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv()).map_err(|e| WaveError::Io(format!("{}: {e}", path.display())))
}

/// Tables (by file stem) and summary numbers of one command run.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub tables: Vec<(String, Table)>,
    pub summary: Vec<(String, f64)>,
}

impl Outcome {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.summary.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Writes `<name>.csv` for each table and returns the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| WaveError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths = Vec::new();
        for (name, table) in &self.tables {
            let p = dir.join(format!("{name}.csv"));
            emit_csv(table, &p)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

fn missing(section: &str) -> WaveError {
    WaveError::Config(format!("{section}: section missing from the config"))
}

fn coordinate_names(dim: usize) -> Vec<String> {
    ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
}

fn coords(x: &Point, dim: usize) -> Vec<f64> {
    (0..dim).map(|k| x[k]).collect()
}

fn to_point(v: &[f64]) -> Point {
    let mut p = Point::zeros();
    for (k, x) in v.iter().take(3).enumerate() {
        p[k] = *x;
    }
    p
}

fn check_tolerance(what: &str, value: f64, tol: Option<f64>) -> Result<()> {
    match tol {
        Some(tol) if !(value <= tol) => Err(WaveError::Verification(format!("{what} = {value:e} exceeds {tol:e}"))),
        _ => Ok(()),
    }
}

/// Runs `command` at refinement `refine` (1 is the config as written).
pub fn run_scenario(cfg: &ScenarioConfig, command: Command, refine: usize) -> Result<Outcome> {
    let k = refine.max(1);
    let name = format!("{command:?}");
    let run = match command {
        Command::Represent => represent(cfg, k),
        Command::Solve => solve(cfg, k),
        Command::VerifyGauss => verify_gauss(cfg, k),
        Command::VerifyEnergy => verify_energy(cfg, k),
        Command::VerifyShock => verify_shock(cfg, k),
        Command::Oracle => oracle(cfg, k),
        Command::Convergence => convergence(cfg, k),
    };
    run.map_err(|e| if matches!(e, WaveError::Config(_) | WaveError::Verification(_)) { e } else { e.context(name) })
}

fn boundary_data(sc: &Scenario, traces: TracesSpec, u: Option<&Arc<AnalyticSolution>>) -> Result<BoundaryData> {
    match (traces, u) {
        (TracesSpec::Exact, Some(u)) => Ok(BoundaryData::sample(&sc.geometry, &sc.grid, u.as_ref())),
        (TracesSpec::Exact, None) => Err(WaveError::Config("represent.traces: exact traces need problem.solution".into())),
        (TracesSpec::Solved, _) => bie::solve(sc),
    }
}

/// Interior field at the configured points and times.
fn represent(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let spec = cfg.represent.as_ref().ok_or_else(|| missing("represent"))?;
    let sc = cfg.scenario(k)?;
    let u = cfg.solution()?;
    let traces = spec.traces.unwrap_or(if u.is_some() { TracesSpec::Exact } else { TracesSpec::Solved });
    let data = boundary_data(&sc, traces, u.as_ref())?;
    let pairs: Vec<(Point, f64)> = spec.points.iter().flat_map(|x| spec.times.iter().map(|t| (to_point(x), *t))).collect();
    let values = represent_points(&sc.geometry, &sc.grid, &data, &sc.cauchy, &pairs, &sc.rule)?;
    let dim = cfg.dimension();
    let mut cols = coordinate_names(dim);
    cols.extend(["t", "u"].map(String::from));
    if u.is_some() {
        cols.extend(["reference", "abs_error"].map(String::from));
    }
    let mut table = Table::new(&cols);
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for ((x, t), v) in pairs.iter().zip(&values) {
        let mut row = coords(x, dim);
        row.extend([*t, *v]);
        if let Some(u) = &u {
            let r = u.value(x, *t);
            row.extend([r, (v - r).abs()]);
            worst = worst.max((v - r).abs());
            scale = scale.max(r.abs());
        }
        table.push(row);
    }
    let mut out = Outcome { tables: vec![("represent".into(), table)], summary: vec![("points".into(), pairs.len() as f64)] };
    if u.is_some() {
        let rel = if scale > 0.0 { worst / scale } else { worst };
        out.summary.push(("max_relative_error".into(), rel));
        check_tolerance("represent max relative error", rel, spec.tolerance)?;
    }
    Ok(out)
}

/// Relative L2 distance of two series over all nodes and steps.
fn relative_l2(a: &TraceSeries, b: &TraceSeries) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.values().iter().zip(b.values()) {
        num += (x - y) * (x - y);
        den += y * y;
    }
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}

/// Unknown boundary series plus the residual of the discrete equation.
fn solve(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let sc = cfg.scenario(k)?;
    let data = bie::solve(&sc)?;
    let (name, unknown, kind) = match sc.kind {
        BvpKind::Dirichlet => ("flux", &data.flux, TraceKind::Flux),
        BvpKind::Neumann => ("trace", &data.trace, TraceKind::Trace),
    };
    let u = cfg.solution()?;
    let reference = u.as_ref().map(|u| TraceSeries::sample(kind, &sc.geometry, &sc.grid, u.as_ref()));
    let dim = cfg.dimension();
    let mut cols: Vec<String> = ["step", "t", "node"].map(String::from).to_vec();
    cols.extend(coordinate_names(dim));
    cols.push(name.into());
    if reference.is_some() {
        cols.extend(["reference", "abs_error"].map(String::from));
    }
    let mut table = Table::new(&cols);
    let nodes = sc.geometry.node_count();
    for s in 0..=sc.grid.steps {
        for i in 0..nodes {
            let mut row = vec![s as f64, sc.grid.time(s), i as f64];
            row.extend(coords(&sc.geometry.node_point(i), dim));
            let v = unknown.get(i, s);
            row.push(v);
            if let Some(r) = &reference {
                row.extend([r.get(i, s), (v - r.get(i, s)).abs()]);
            }
            table.push(row);
        }
    }
    let residual = bie::boundary_residual(&sc, &data)?;
    let mut res = Table::new(&["step", "t", "node", "residual"]);
    for s in 0..=sc.grid.steps {
        for i in 0..residual.nodes {
            res.push(vec![s as f64, sc.grid.time(s), i as f64, residual.get(i, s)]);
        }
    }
    let mut summary = vec![("max_residual".into(), residual.max_abs())];
    if let Some(r) = &reference {
        summary.push(("relative_l2_error".into(), relative_l2(unknown, r)));
    }
    Ok(Outcome { tables: vec![(name.into(), table), ("residual".into(), res)], summary })
}

fn verify_gauss(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let spec = cfg.gauss.as_ref().ok_or_else(|| missing("gauss"))?;
    let geom = cfg.geometry(k)?;
    let grid = cfg.grid(k)?;
    let rule = cfg.rule(k);
    let dim = cfg.dimension();
    let mut points: Vec<Point> = spec.points.iter().map(|p| to_point(p)).collect();
    points.extend(crate::config::sample_points(&geom, spec.interior, spec.exterior, spec.boundary));
    let mut cols = coordinate_names(dim);
    if spec.mode == GaussMode::Dynamic {
        cols.push("t".into());
    }
    cols.extend(["value", "expected", "abs_error"].map(String::from));
    let mut table = Table::new(&cols);
    let mut worst = 0.0f64;
    for x in &points {
        let mut rows = Vec::new();
        match spec.mode {
            GaussMode::Static => {
                let v = gauss_static_3d(&geom, x, &rule.quadrature)?;
                rows.push((None, v, gauss_expected(&geom, x, 1.0)));
            }
            GaussMode::Dynamic => {
                for &t in &spec.times {
                    rows.push((Some(t), gauss_dynamic(&geom, &grid, x, t, &rule)?, gauss_expected(&geom, x, t)));
                }
            }
        }
        for (t, v, e) in rows {
            let mut row = coords(x, dim);
            row.extend(t);
            row.extend([v, e, (v - e).abs()]);
            worst = worst.max((v - e).abs());
            table.push(row);
        }
    }
    check_tolerance("Gauss formula error", worst, spec.tolerance)?;
    Ok(Outcome {
        tables: vec![("gauss".into(), table)],
        summary: vec![("points".into(), points.len() as f64), ("max_abs_error".into(), worst)],
    })
}

fn fd_solution(cfg: &ScenarioConfig, sc: &Scenario, k: usize) -> Result<FdSolution> {
    let spec = cfg.oracle.as_ref().ok_or_else(|| missing("oracle"))?;
    let dt = spec.dt.unwrap_or(0.5 * spec.h / cfg.grid.c);
    fd_reference(sc, spec.h / k as f64, dt / k as f64)
}

fn probe(cfg: &ScenarioConfig, sc: &Scenario, field: ProbeSpec, k: usize) -> Result<Arc<dyn Field>> {
    match field {
        ProbeSpec::Exact => {
            let u = cfg.solution()?.ok_or_else(|| WaveError::Config("exact probe needs problem.solution".into()))?;
            Ok(u)
        }
        ProbeSpec::Oracle => Ok(Arc::new(fd_solution(cfg, sc, k)?)),
    }
}

fn verify_energy(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let spec = cfg.energy.as_ref().ok_or_else(|| missing("energy"))?;
    let sc = cfg.scenario(k)?;
    let probe = FieldProbe::new(probe(cfg, &sc, spec.field, k)?);
    // a declared front splits the volume panels
    let fronts = match &cfg.shock {
        Some(s) => Some(FrontSet::new(s.seeds.iter().map(|p| to_point(p)).collect(), sc.grid.c, s.eps)?),
        None => None,
    };
    let rule = BalanceRule { fronts, ..BalanceRule::default() };
    let mut table = Table::new(&["t", "energy", "energy_residual", "lagrangian_residual"]);
    let mut peak = total_energy(&sc, &probe, 0.0, &rule)?;
    let (mut e_max, mut l_max) = (0.0f64, 0.0f64);
    for &t in &spec.times {
        let energy = total_energy(&sc, &probe, t, &rule)?;
        let e = energy_balance_residual(&sc, &probe, t, &rule)?;
        let l = lagrangian_balance_residual(&sc, &probe, t, &rule)?;
        peak = peak.max(energy);
        e_max = e_max.max(e);
        l_max = l_max.max(l);
        table.push(vec![t, energy, e, l]);
    }
    let scale = if peak > 0.0 { peak } else { 1.0 };
    let (e_rel, l_rel) = (e_max / scale, l_max / scale);
    check_tolerance("energy residual / peak energy", e_rel, spec.tolerance)?;
    check_tolerance("Lagrangian residual / peak energy", l_rel, spec.tolerance)?;
    Ok(Outcome {
        tables: vec![("energy".into(), table)],
        summary: vec![
            ("peak_energy".into(), peak),
            ("energy_residual_relative".into(), e_rel),
            ("lagrangian_residual_relative".into(), l_rel),
        ],
    })
}

fn verify_shock(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let spec = cfg.shock.as_ref().ok_or_else(|| missing("shock"))?;
    let sc = cfg.scenario(k)?;
    let probe = FieldProbe::new(probe(cfg, &sc, spec.field, k)?);
    // the stencil offset shrinks with the grid it probes
    let front = FrontSet::new(spec.seeds.iter().map(|p| to_point(p)).collect(), sc.grid.c, spec.eps / k as f64)?;
    let dim = cfg.dimension();
    let mut cols = coordinate_names(dim);
    cols.extend(["t", "jump_u", "jump_hadamard", "jump_E", "jump_L"].map(String::from));
    let mut table = Table::new(&cols);
    let mut max = [0.0f64; 4];
    let mut worst = 0.0f64;
    for &t in &spec.times {
        let report = shock_jump_report(&sc.geometry, &probe, &front, t, spec.directions)?;
        worst = worst.max(report.worst());
        for s in &report.samples {
            let jumps = [s.jump_u, s.jump_hadamard, s.jump_energy, s.jump_lagrangian];
            for (m, j) in max.iter_mut().zip(jumps) {
                *m = m.max(j.abs());
            }
            let mut row = coords(&s.x, dim);
            row.push(t);
            row.extend(jumps);
            table.push(row);
        }
    }
    check_tolerance("largest jump", worst, spec.tolerance)?;
    Ok(Outcome {
        summary: vec![
            ("samples".into(), table.rows.len() as f64),
            ("max_jump_u".into(), max[0]),
            ("max_jump_hadamard".into(), max[1]),
            ("max_jump_E".into(), max[2]),
            ("max_jump_L".into(), max[3]),
        ],
        tables: vec![("shock".into(), table)],
    })
}

fn oracle(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let spec = cfg.oracle.as_ref().ok_or_else(|| missing("oracle"))?;
    let sc = cfg.scenario(k)?;
    let sol = fd_solution(cfg, &sc, k)?;
    let u = cfg.solution()?;
    let dim = cfg.dimension();
    let times = if spec.times.is_empty() { vec![sc.grid.horizon()] } else { spec.times.clone() };
    let mut cols = coordinate_names(dim);
    cols.extend(["t", "u"].map(String::from));
    if u.is_some() {
        cols.extend(["reference", "abs_error"].map(String::from));
    }
    let mut field = Table::new(&cols);
    let (mut num, mut den) = (0.0, 0.0);
    for &t in &times {
        for n in (0..sol.level(0).len()).filter(|&n| sol.is_inside(n)) {
            let x = sol.node(n);
            let v = sol.value(&x, t);
            let mut row = coords(&x, dim);
            row.extend([t, v]);
            if let Some(u) = &u {
                let r = u.value(&x, t);
                num += (v - r) * (v - r);
                den += r * r;
                row.extend([r, (v - r).abs()]);
            }
            field.push(row);
        }
    }
    let mut out = Outcome { tables: vec![("field".into(), field)], summary: Vec::new() };
    if u.is_some() {
        let rel = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
        out.summary.push(("relative_l2_error".into(), rel));
        if spec.points.is_empty() {
            check_tolerance("oracle relative L2 error", rel, spec.tolerance)?;
        }
    }
    if !spec.points.is_empty() {
        let data = bie::solve(&sc)?;
        let pairs: Vec<(Point, f64)> = spec.points.iter().flat_map(|x| times.iter().map(|t| (to_point(x), *t))).collect();
        let bie_values = represent_points(&sc.geometry, &sc.grid, &data, &sc.cauchy, &pairs, &sc.rule)?;
        let mut cols = coordinate_names(dim);
        cols.extend(["t", "fd", "bie", "abs_diff"].map(String::from));
        let mut cmp = Table::new(&cols);
        let (mut num, mut den) = (0.0, 0.0);
        for ((x, t), b) in pairs.iter().zip(bie_values) {
            let f = sol.value(x, *t);
            num += (f - b) * (f - b);
            den += b * b;
            let mut row = coords(x, dim);
            row.extend([*t, f, b, (f - b).abs()]);
            cmp.push(row);
        }
        let rel = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
        out.summary.push(("bie_fd_relative_l2".into(), rel));
        out.tables.push(("compare".into(), cmp));
        check_tolerance("BIE vs oracle relative L2", rel, spec.tolerance)?;
    }
    Ok(out)
}

/// Error measure of one study level.
fn study_error(cfg: &ScenarioConfig, command: StudyCommand, k: usize) -> Result<(f64, f64)> {
    let (out, key) = match command {
        StudyCommand::Represent => (represent(cfg, k)?, "max_relative_error"),
        StudyCommand::Solve => (solve(cfg, k)?, "relative_l2_error"),
        StudyCommand::Oracle => {
            let mut plain = cfg.clone();
            if let Some(o) = plain.oracle.as_mut() {
                o.points.clear();
                o.tolerance = None;
            }
            (oracle(&plain, k)?, "relative_l2_error")
        }
    };
    let err = out.value(key).ok_or_else(|| WaveError::Config("convergence: the study needs problem.solution".into()))?;
    let h = match command {
        StudyCommand::Oracle => cfg.oracle.as_ref().map_or(f64::NAN, |o| o.h / k as f64),
        _ => cfg.grid(k)?.dt,
    };
    Ok((h, err))
}

/// Runs a command at `levels` resolutions, doubling each time, and reports
/// observed orders `log₂(e_{l-1} / e_l)`.
fn convergence(cfg: &ScenarioConfig, k: usize) -> Result<Outcome> {
    let spec = cfg.convergence.as_ref().ok_or_else(|| missing("convergence"))?;
    let mut study = cfg.clone();
    // tolerances apply to the single runs, not to every level of a study
    if let Some(r) = study.represent.as_mut() {
        r.tolerance = None;
    }
    let mut table = Table::new(&["level", "refine", "resolution", "error", "order"]);
    let mut prev: Option<f64> = None;
    let mut last_order = f64::NAN;
    for level in 0..spec.levels {
        let kk = k << level;
        let (h, err) = study_error(&study, spec.command, kk)?;
        let order = prev.map_or(f64::NAN, |p| (p / err).log2());
        if prev.is_some() {
            last_order = order;
        }
        table.push(vec![level as f64, kk as f64, h, err, order]);
        prev = Some(err);
    }
    if let Some(min) = spec.min_order {
        if !(last_order >= min) {
            return Err(WaveError::Verification(format!("observed order {last_order:.3} is below {min}")));
        }
    }
    Ok(Outcome {
        summary: vec![("finest_error".into(), prev.unwrap_or(f64::NAN)), ("observed_order".into(), last_order)],
        tables: vec![("convergence".into(), table)],
    })
}
