//! The command line front end and the JSON and SVG formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use confocal_nets::io::export::{read_json, to_json, LatticeDocument, NetDocument};
use confocal_nets::io::{parse_config, parse_document};
use confocal_nets::Error;

const BIN: &str = env!("CARGO_BIN_EXE_confocal-nets");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_scene(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn reference() -> String {
    data("data/reference.json").to_str().unwrap().to_owned()
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for word in ["caustics", "trajectory", "net", "lattice", "star"] {
        assert!(text.contains(word), "{text}");
    }
}

#[test]
fn caustics_of_the_reference_line() {
    let out = run(&["--config", &reference(), "caustics"]);
    assert_eq!(code(&out), 0);
    let value: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((value - 2.0).abs() < 1e-12, "{value}");
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_scene(
        dir.path(),
        "bad.json",
        r#"{"semi_axes": [4, 1], "lambdas": [0, 0],
            "initial_line": {"base": [0, 1], "dir": [1, -1]}, "window": [2, 2]}"#,
    );
    let out = run(&["--config", &bad, "net", "verify"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("lambdas must be pairwise distinct"), "{err}");

    let missing = dir.path().join("missing.json");
    let out = run(&["--config", missing.to_str().unwrap(), "caustics"]);
    assert_eq!(code(&out), 2);
    let out = run(&["caustics"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn inadmissible_scene_names_the_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scene(
        dir.path(),
        "far.json",
        r#"{"semi_axes": [4, 1], "lambdas": [0.9, -3],
            "initial_line": {"base": [0, 0.5], "dir": [1, 0]}, "window": [2, 2]}"#,
    );
    let out = run(&["--config", &path, "net", "build"]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("[0, 0]"), "{err}");
}

#[test]
fn built_nets_verify_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(
        dir.path(),
        "scene.json",
        r#"{"semi_axes": [9, 4, 1], "lambdas": [0, -2, -5],
            "initial_line": {"base": [0.3, 0.2, 0.1], "dir": [1, 0.7, -0.4]},
            "window": [1, 1, 1]}"#,
    );
    let net = dir.path().join("net.json");
    let net = net.to_str().unwrap();
    let out = run(&["--config", &scene, "--out", net, "net", "build"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: NetDocument = read_json(Path::new(net)).unwrap();
    assert_eq!(doc.lines.len(), 8);

    // the saved net is checked as stored; no scene is needed
    let out = run(&["net", "verify", "--net", net]);
    let report = String::from_utf8(out.stdout).unwrap();
    let row = |text: &str, check: &str| {
        text.lines()
            .find(|l| l.starts_with(check))
            .map(|l| l.trim_end().ends_with("ok"))
            .unwrap_or_else(|| panic!("no {check} row in {text}"))
    };
    assert!(row(&report, "net edges: reflection"));
    assert!(row(&report, "star triplets: collinear"));

    // moving one line is caught
    let mut moved = doc.clone();
    moved.lines[7].dir[0] += 1e-3;
    let moved_path = dir.path().join("moved.json");
    std::fs::write(&moved_path, to_json(&moved).unwrap()).unwrap();
    let out = run(&["net", "verify", "--net", moved_path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(!row(&report, "net edges: reflection"), "{report}");
}

#[test]
fn star_verification_on_a_small_window() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(
        dir.path(),
        "star.json",
        r#"{"semi_axes": [9, 4, 1], "lambdas": [0, -2, -5],
            "initial_line": {"base": [0.3, 0.2, 0.1], "dir": [1, 0.7, -0.4]},
            "window": [2, 2, 2]}"#,
    );
    let out = run(&["--config", &scene, "star", "verify"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.matches("triplets 8/8, pencils 6/6").count(),
        8,
        "{text}"
    );
}

#[test]
fn three_dimensional_export_lists_one_cuboctahedron() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(
        dir.path(),
        "scene.json",
        r#"{"semi_axes": [9, 4, 1], "lambdas": [0, -2, -5],
            "initial_line": {"base": [0.3, 0.2, 0.1], "dir": [1, 0.7, -0.4]},
            "window": [1, 1, 1]}"#,
    );
    let path = dir.path().join("lattice.json");
    let out = run(&[
        "--config",
        &scene,
        "--out",
        path.to_str().unwrap(),
        "lattice",
        "export",
    ]);
    assert_eq!(code(&out), 0);
    let doc: LatticeDocument = read_json(&path).unwrap();
    assert_eq!(doc.vertices.len(), 12);
    assert_eq!(doc.cells.len(), 1);
    let cell = &doc.cells[0];
    assert_eq!(cell.kind, "rectified_cube");
    assert_eq!((cell.triangle_faces.len(), cell.square_faces.len()), (8, 6));
    assert!(doc.vertices.iter().all(|v| (1..=3).contains(&v.direction)));

    let out = run(&["--config", &scene, "lattice", "render"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn partial_cells_are_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(
        dir.path(),
        "scene.json",
        r#"{"semi_axes": [4, 1], "lambdas": [0, -3],
            "initial_line": {"base": [0, 1], "dir": [1, -1]}, "window": [1, 1]}"#,
    );
    let export = |extra: &[&str]| {
        let path = dir.path().join("out.json");
        let mut args = vec!["--config", &scene, "--out", path.to_str().unwrap()];
        args.extend(["lattice", "export"]);
        args.extend(extra);
        assert_eq!(code(&run(&args)), 0);
        read_json::<LatticeDocument>(&path).unwrap()
    };
    let doc = export(&[]);
    assert_eq!(doc.vertices.len(), 4);
    assert_eq!(doc.cells.len(), 1);
    assert_eq!(doc.cells[0].kind, "rectified_cube");
    let full = export(&["--include-partial"]);
    assert!(full.cells.len() > 1);
    assert!(full.cells[1..].iter().all(|c| c.partial));
}

#[test]
fn exported_floats_round_trip_exactly() {
    let out = run(&["--config", &reference(), "lattice", "export"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: LatticeDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&doc).unwrap(), text);
    let again: LatticeDocument = serde_json::from_str(&to_json(&doc).unwrap()).unwrap();
    for (a, b) in doc.vertices.iter().zip(&again.vertices) {
        for (x, y) in a.hyperplane.iter().zip(&b.hyperplane) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn scene_documents_reject_unknown_and_inconsistent_fields() {
    let base = r#"{"semi_axes": [4, 1], "lambdas": [0, -3],
        "initial_line": {"base": [0, 1], "dir": [1, -1]}, "window": [3, 3]}"#;
    assert!(parse_document(base).is_ok());
    assert!(matches!(
        parse_config(&base.replace("\"window\"", "\"colour\": 1, \"window\"")),
        Err(Error::Parse(_))
    ));
    match parse_config(&base.replace("[4, 1]", "[4, 4]")) {
        Err(Error::Config { field, .. }) => assert_eq!(field, "semi_axes"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn reference_tiling_matches_the_golden_file() {
    let out = run(&["--config", &reference(), "lattice", "render"]);
    assert_eq!(code(&out), 0);
    let svg = String::from_utf8(out.stdout).unwrap();
    let golden = data("golden/reference_tiling.svg");
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(&golden, &svg).unwrap();
    }
    let want = std::fs::read_to_string(&golden).expect("golden file; rerun with BLESS=1");
    assert_eq!(svg, want);
    assert_eq!(svg.matches("<polygon").count(), 13);
}
