//! End-to-end runs of the binary with golden outputs and exit codes.

use std::process::{Command, Output};

fn dihom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dihom"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn fixtures(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn analyze_grid_program() {
    let out = dihom(&["analyze", "-e", "P(a);V(a) || P(a);V(a)"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        stdout,
        "unpruned cells: [9, 12, 4]\ncells: [8, 8]\npotential range: [-2, 0]\nconservative: yes\nverdict: {\"cube_property\":true,\"flag_links\":true,\"geometric\":true,\"npc\":true,\"theorem_agreement\":true,\"unique_fillings\":{},\"witnesses\":[]}\n"
    );
    // Byte-identical across runs.
    let out2 = dihom(&["analyze", "-e", "P(a);V(a) || P(a);V(a)"]);
    assert_eq!(out2.stdout, stdout.as_bytes());
}

#[test]
fn analyze_exit_codes() {
    assert_eq!(dihom(&["analyze", "-e", "P(a)+P(b)"]).status.code(), Some(3));
    assert_eq!(dihom(&["analyze", "-e", "P(a;"]).status.code(), Some(2));
    assert_eq!(dihom(&["analyze", "-e", "1"]).status.code(), Some(0));
    // ∂Y3 is not NPC: exit 1.
    assert_eq!(dihom(&["analyze", "--complex", &fixtures("boundary_y3.json")]).status.code(), Some(1));
}

#[test]
fn equiv_on_cube_without_bottom() {
    let complex = fixtures("cube_without_bottom.json");
    let f = "0 -0-> 1 -5-> 5";
    let g = "0 -4-> 4 -8-> 5";
    let out = dihom(&["equiv", "--complex", &complex, "--path1", f, "--path2", g, "--mode", "di"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "false\n");
    let out = dihom(&[
        "equiv", "--complex", &complex, "--path1", f, "--path2", g, "--mode", "ho", "--budget", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("true ["));
    // Identical paths are trivially equivalent.
    let out = dihom(&["equiv", "--complex", &complex, "--path1", f, "--path2", f, "--mode", "di"]);
    assert_eq!(out.status.code(), Some(0));
    // Malformed path spec.
    let out = dihom(&["equiv", "--complex", &complex, "--path1", "0 -x-> 1", "--path2", f]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classes_counts() {
    let out = dihom(&["classes", "-e", "P(a);V(a) || P(a);V(a)", "--bound", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("2 classes\n"), "{stdout}");
    let out = dihom(&[
        "classes",
        "-e",
        "P(a);P(b);V(b);V(a) || P(b);P(a);V(a);V(b)",
        "--bound",
        "8",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn canonicalize_gamma_only_cell() {
    // The tile of ⟦A||B⟧ as a one-slice cell.
    let dir = std::env::temp_dir().join("dihom-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cell_path = dir.join("cell.json");
    let cell = serde_json::json!({
        "program": "A||B",
        "cell": {
            "source": {"start": 0, "steps": [
                {"edge": 0, "reversed": false}, {"edge": 3, "reversed": false}
            ]},
            "slices": [{
                "left": {"start": 0, "steps": []},
                "gen": {"kind": "gamma",
                    "a": {"edge": 0, "reversed": false},
                    "b": {"edge": 3, "reversed": false},
                    "b_out": {"edge": 2, "reversed": false},
                    "a_out": {"edge": 1, "reversed": false}},
                "right": {"start": 3, "steps": []}
            }]
        }
    });
    std::fs::write(&cell_path, serde_json::to_string_pretty(&cell).unwrap()).unwrap();
    let out = dihom(&["canonicalize", cell_path.to_str().unwrap(), "--extract"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let sexp = stdout.lines().next().unwrap();
    assert!(sexp.starts_with("(G") || sexp.starts_with("(I"), "{sexp}");
    assert!(!sexp.contains("(H") && !sexp.contains("(E"), "{sexp}");
    assert!(stdout.contains("tile @0"), "{stdout}");
}

#[test]
fn realize_and_export() {
    let out = dihom(&["realize", "-e", "A||B", "--k", "8", "--metric", "l2", "--cat0", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("cat0: Pass"));

    let out = dihom(&["export", "-e", "A||B", "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("// square 0"));
    let out2 = dihom(&["export", "-e", "A||B", "--dot"]);
    assert_eq!(out2.stdout.len(), dot.len());

    let out = dihom(&["export", "-e", "A||B", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cells"], serde_json::json!([4, 4, 1]));
}

#[test]
fn dim_bound_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_dihom"))
        .args(["analyze", "-e", "A||B"])
        .env("DIHOM_MAX_DIM", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn all_corners_flag_separates_routes() {
    let out = dihom(&[
        "analyze",
        "--complex",
        &fixtures("half_cube_noncanonical.json"),
        "--all-corners",
    ]);
    // NPC per the four-template definition, so exit 0, but the all-corners
    // check and the link route both reject.
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"theorem_agreement\":false"), "{stdout}");
    assert!(stdout.contains("cube property (all corners): false"), "{stdout}");
}
