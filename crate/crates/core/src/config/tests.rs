use super::*;

const DISK: &str = r#"
[geometry]
kind = "circle"
radius = 1.0
nodes = 16

[grid]
c = 1.0
dt = 0.2
steps = 5

[problem]
kind = "dirichlet"
solution = { type = "plane_wave", direction = [0.6, 0.8], profile = { type = "sin", omega = 2.0, phase = 0.3 } }

[represent]
points = [[0.1, 0.2], [-0.3, 0.0]]
times = [0.5, 1.0]
"#;

fn config_error(text: &str) -> String {
    match ScenarioConfig::from_toml_str(text) {
        Err(WaveError::Config(m)) => m,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn disk_config_parses_into_a_manufactured_scenario() {
    let cfg = ScenarioConfig::from_toml_str(DISK).unwrap();
    assert_eq!(cfg.dimension(), 2);
    let sc = cfg.scenario(1).unwrap();
    assert_eq!(sc.geometry.node_count(), 16);
    assert_eq!(sc.grid.steps, 5);
    assert_eq!(sc.kind, BvpKind::Dirichlet);
    let u = cfg.solution().unwrap().unwrap();
    let x = sc.geometry.node_point(3);
    assert!((sc.given.get(3, 4) - crate::field::Field::value(u.as_ref(), &x, 0.8)).abs() < 1e-15);
}

#[test]
fn serialized_config_reparses_to_the_same_scenario() {
    let cfg = ScenarioConfig::from_toml_str(DISK).unwrap();
    let text = cfg.to_toml_string().unwrap();
    let again = ScenarioConfig::from_toml_str(&text).unwrap();
    assert_eq!(cfg, again);
    let (a, b) = (cfg.scenario(1).unwrap(), again.scenario(1).unwrap());
    assert_eq!(a.geometry, b.geometry);
    assert_eq!(a.given, b.given);
    assert_eq!(a.grid, b.grid);
}

#[test]
fn negative_wave_speed_names_the_field() {
    let m = config_error(&DISK.replace("c = 1.0", "c = -1.0"));
    assert!(m.contains("grid.c"), "{m}");
}

#[test]
fn every_invalid_value_is_listed() {
    let m = config_error(&DISK.replace("c = 1.0", "c = -1.0").replace("dt = 0.2", "dt = 0.0").replace("radius = 1.0", "radius = -2.0"));
    for key in ["grid.c", "grid.dt", "geometry.radius"] {
        assert!(m.contains(key), "{key} missing from {m}");
    }
}

#[test]
fn every_unknown_key_is_listed() {
    let text = DISK.replace("steps = 5", "steps = 5\nspeed = 3").replace("nodes = 16", "nodes = 16\nsides = 4")
        + "\n[plot]\nwidth = 3\n";
    let m = config_error(&text);
    for key in ["grid.speed", "geometry.sides", "plot"] {
        assert!(m.contains(key), "{key} missing from {m}");
    }
    let nested = config_error(&DISK.replace("phase = 0.3", "phase = 0.3, skew = 1.0"));
    assert!(nested.contains("problem.solution.profile.skew"), "{nested}");
}

#[test]
fn data_must_come_from_exactly_one_source() {
    let both = DISK.replace("[represent]", "boundary = { type = \"ramp\", slope = 1.0 }\n[represent]");
    assert!(config_error(&both).contains("exactly one"));
    let none = DISK.replace("solution = {", "# solution = {");
    assert!(config_error(&none).contains("exactly one"));
}

#[test]
fn wrong_point_dimension_is_reported() {
    let m = config_error(&DISK.replace("[0.1, 0.2]", "[0.1, 0.2, 0.3]"));
    assert!(m.contains("represent.points"), "{m}");
}

#[test]
fn refinement_scales_nodes_steps_and_levels() {
    let cfg = ScenarioConfig::from_toml_str(DISK).unwrap();
    let g = cfg.grid(2).unwrap();
    assert_eq!((g.steps, g.dt), (10, 0.1));
    assert_eq!(cfg.geometry(2).unwrap().node_count(), 32);
    let ball = ScenarioConfig::from_toml_str(
        "[geometry]\nkind = \"icosphere\"\nradius = 1.0\nlevel = 0\n[grid]\nc = 1.0\ndt = 0.5\nsteps = 2\n[problem]\nkind = \"dirichlet\"\nsolution = { type = \"constant\", value = 1.0 }\n",
    )
    .unwrap();
    assert_eq!(ball.geometry(1).unwrap().node_count(), 12);
    assert_eq!(ball.geometry(2).unwrap().node_count(), 42);
    assert_eq!(ball.geometry(4).unwrap().node_count(), 162);
}

#[test]
fn boundary_data_are_restricted_to_the_region() {
    let text = r#"
[geometry]
kind = "polygon"
points = [[0, 0], [2, 0], [2, 1], [0, 1]]
subdivide = 4

[grid]
c = 1.0
dt = 0.1
steps = 4

[problem]
kind = "dirichlet"
boundary = { type = "ramp", slope = 2.0 }
region = { min = [0, 0], max = [0, 1] }
"#;
    let cfg = ScenarioConfig::from_toml_str(text).unwrap();
    let sc = cfg.scenario(1).unwrap();
    assert_eq!(sc.geometry.node_count(), 16);
    for i in 0..16 {
        let x = sc.geometry.node_point(i);
        let want = if x.x.abs() < 1e-12 { 2.0 * 0.3 } else { 0.0 };
        assert!((sc.given.get(i, 3) - want).abs() < 1e-14, "node {i} at {x:?}");
    }
}

#[test]
fn incompatible_initial_boundary_data_are_a_config_error() {
    let text = DISK.replace(
        "solution = { type = \"plane_wave\", direction = [0.6, 0.8], profile = { type = \"sin\", omega = 2.0, phase = 0.3 } }",
        "boundary = { type = \"constant\", value = 1.0 }",
    );
    let cfg = ScenarioConfig::from_toml_str(&text).unwrap();
    assert!(matches!(cfg.scenario(1), Err(WaveError::Config(_))));
}

#[test]
fn data_catalog_values() {
    assert_eq!(DataSpec::Polynomial { coefficients: vec![1.0, -2.0, 3.0] }.value(2.0), 9.0);
    assert_eq!(DataSpec::Ramp { slope: 0.5 }.value(3.0), 1.5);
    assert_eq!(DataSpec::Constant { value: 4.0 }.value(7.0), 4.0);
    assert!((DataSpec::Sine { amplitude: 2.0, omega: 1.0, phase: 0.0 }.value(0.5) - 2.0 * 0.5f64.sin()).abs() < 1e-16);
}

#[test]
fn tabulated_series_and_mesh_files_are_read_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("tet.off"),
        "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n",
    )
    .unwrap();
    let mut csv = String::from("t,n0,n1,n2,n3\n");
    for k in 0..=2 {
        let t = 0.5 * k as f64;
        csv += &format!("{t},{},{},{},{}\n", 0.0, t, 2.0 * t, 3.0 * t);
    }
    std::fs::write(dir.path().join("flux.csv"), csv).unwrap();
    let cfg_path = dir.path().join("tet.toml");
    std::fs::write(
        &cfg_path,
        "[geometry]\nkind = \"mesh\"\npath = \"tet.off\"\n[grid]\nc = 1.0\ndt = 0.5\nsteps = 2\n[problem]\nkind = \"neumann\"\nseries = \"flux.csv\"\n",
    )
    .unwrap();
    let cfg = ScenarioConfig::load(&cfg_path).unwrap();
    let sc = cfg.scenario(1).unwrap();
    assert_eq!(sc.geometry.node_count(), 4);
    assert_eq!(sc.given.get(3, 2), 3.0);
    assert!(matches!(cfg.scenario(2), Err(WaveError::Config(_))));
}

#[test]
fn sampled_points_have_the_requested_placement() {
    let ball = BoundaryGeometry::Surface(Surface::icosphere(Point::zeros(), 1.0, 2).unwrap());
    let pts = sample_points(&ball, 10, 7, 5);
    assert_eq!(pts.len(), 22);
    assert!(pts[..10].iter().all(|x| ball.characteristic_function(x) == 1.0));
    assert!(pts[10..17].iter().all(|x| ball.characteristic_function(x) == 0.0));
    assert!(pts[17..].iter().all(|x| ball.is_on_boundary(x)));
    assert_eq!(pts, sample_points(&ball, 10, 7, 5));
}
