use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("extcone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn dualize_square_gives_psi_generators() {
    let o = run(&["dualize", &fixture("square.cone")]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "name: square-dual\ndim: 3\ngen: 1 -1 -1\ngen: 1 -1 1\ngen: 1 1 -1\ngen: 1 1 1\n"
    );
}

#[test]
fn dualize_orthant_is_orthant() {
    let o = run(&["dualize", &fixture("orthant3.cone")]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "name: orthant3-dual\ndim: 3\ngen: 0 0 1\ngen: 0 1 0\ngen: 1 0 0\n"
    );
}

#[test]
fn dualize_twice_is_canonical_original() {
    let once = stdout(&run(&["dualize", &fixture("square.cone")]));
    let path = scratch("dual.cone", &once);
    let twice = stdout(&run(&["dualize", &path]));
    assert_eq!(
        twice,
        "name: square-dual-dual\ndim: 3\ngen: 1 -1 0\ngen: 1 0 -1\ngen: 1 0 1\ngen: 1 1 0\n"
    );
}

#[test]
fn malformed_rational_is_a_parse_error() {
    let path = scratch("bad.cone", "name: bad\ndim: 2\ngen: 1 0\ngen: 1//2 1\n");
    let o = run(&["dualize", &path]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(":4:"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn improper_cone_is_a_semantic_error() {
    let path = scratch(
        "line.cone",
        "name: halfplane\ndim: 2\ngen: 1 0\ngen: -1 0\ngen: 0 1\n",
    );
    assert_eq!(code(&run(&["dualize", &path])), 3);
    let path = scratch("flat.cone", "name: flat\ndim: 3\ngen: 1 0 0\ngen: 0 1 0\n");
    assert_eq!(code(&run(&["dualize", &path])), 3);
}

#[test]
fn missing_file_is_a_usage_error() {
    assert_eq!(code(&run(&["dualize", "/nonexistent/x.cone"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
}

#[test]
fn square_collapse_at_level_two() {
    let o = run(&[
        "ext-check",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square.cone"),
        "--k",
        "2",
        "--point",
        &fixture("square-max-image-k2.tensor"),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: MEMBER\n"));
    let o = run(&[
        "ext-check",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square.cone"),
        "--k",
        "2",
        "--point",
        &fixture("square-max-ray.tensor"),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("verdict: NON-MEMBER\ncertificate: witness\n"));
}

#[test]
fn shipped_gap_point() {
    let ext = run(&[
        "ext-check",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square-skewed.cone"),
        "--k",
        "2",
        "--point",
        &fixture("gap-k2.tensor"),
    ]);
    assert_eq!(code(&ext), 0);
    assert!(stdout(&ext).contains("verdict: MEMBER\n"));
    let min = run(&[
        "min-check",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square-skewed.cone"),
        "--point",
        &fixture("gap-k2.tensor"),
    ]);
    assert_eq!(code(&min), 1);
    assert!(stdout(&min).contains("verdict: NON-MEMBER\n"));
}

#[test]
fn phi_override_matches_skewed_file() {
    let args = |b: &str, extra: &[&str]| {
        let mut v = vec![
            "ext-check".to_string(),
            "--cone-a".into(),
            fixture("square.cone"),
            "--cone-b".into(),
            fixture(b),
            "--k".into(),
            "2".into(),
            "--point".into(),
            fixture("gap-k2.tensor"),
        ];
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let a = args("square.cone", &["--phi", "1 1/5 0"]);
    let b = args("square-skewed.cone", &[]);
    let oa = run(&a.iter().map(String::as_str).collect::<Vec<_>>());
    let ob = run(&b.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&oa), 0);
    assert_eq!(
        stdout(&oa).replace("cone-b: square\n", "cone-b: square-skewed\n"),
        stdout(&ob)
    );
    let bad = args("square.cone", &["--phi", "1 2 0"]);
    assert_eq!(
        code(&run(&bad.iter().map(String::as_str).collect::<Vec<_>>())),
        3
    );
}

#[test]
fn level_zero_is_a_usage_error() {
    let o = run(&[
        "ext-check",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square.cone"),
        "--k",
        "0",
        "--point",
        &fixture("gap-k2.tensor"),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn gap_search_reproduces_fixture() {
    let o = run(&[
        "gap-search",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square-skewed.cone"),
        "--k",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    let shipped = std::fs::read_to_string(fixture("gap-k2.tensor")).unwrap();
    assert_eq!(stdout(&o), shipped);
    let none = run(&[
        "gap-search",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square.cone"),
        "--k",
        "2",
    ]);
    assert_eq!(code(&none), 1);
}

#[test]
fn prism_factors() {
    let o = run(&["factor", &fixture("prism.poly")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("factors: [1, 2]\n"));
    let o = run(&["factor", &fixture("square.cone")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("factors: [1, 1]\n"));
    let o = run(&["factor", &fixture("square-skewed.cone")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("factors: none\n"));
}

#[test]
fn pentagon_violation() {
    let o = run(&["theorem3", &fixture("pentagon.poly")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("violated: edges {1,3}\n"));
    for p in ["triangle.poly", "square.poly", "cube.poly", "prism.poly"] {
        let o = run(&["theorem3", &fixture(p)]);
        assert_eq!(code(&o), 0, "{p}");
        assert!(stdout(&o).contains("verdict: COMMUTES\n"));
    }
    for p in ["quadrilateral.poly", "octahedron.poly"] {
        assert_eq!(code(&run(&["theorem3", &fixture(p)])), 1, "{p}");
    }
}

#[test]
fn eb_levels_of_the_square() {
    let at = |k: &str| run(&["eb-check", "--cone-b", &fixture("square.cone"), "--k", k]);
    assert_eq!(code(&at("1")), 1);
    let o = at("2");
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verdict: BREAKING\nfactors: [1, 1]\n"));
    let skew = run(&[
        "eb-check",
        "--cone-b",
        &fixture("square-skewed.cone"),
        "--k",
        "3",
    ]);
    assert_eq!(code(&skew), 1);
}

#[test]
fn quantum_demo_passes() {
    let o = run(&["quantum-demo"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for claim in [
        "decomposition",
        "psd-extension",
        "max-extension",
        "obstruction",
    ] {
        assert!(out.contains(&format!("claim: {claim} PASS\n")), "{out}");
    }
    assert!(out.contains("value: tr(YW) = 0\n"));
    assert!(out.ends_with("verdict: ALL PASS\n"));
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "ext-check",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square-skewed.cone"),
        "--k",
        "2",
        "--point",
        &fixture("gap-k2.tensor"),
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let t = ["theorem3", &fixture("octahedron.poly")];
    assert_eq!(run(&t).stdout, run(&t).stdout);
}

#[test]
fn json_lines_report() {
    let o = run(&[
        "--report",
        "json-lines",
        "theorem3",
        &fixture("pentagon.poly"),
    ]);
    assert_eq!(code(&o), 1);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines
        .iter()
        .any(|v| v["key"] == "violated" && v["value"] == "edges {1,3}"));
}

#[test]
fn dual_hierarchy_on_square() {
    let point = scratch(
        "interior.tensor",
        "name: p\nshape: 3 3\nrow: 4 0 0\nrow: 0 1 1\nrow: 0 1 -1\n",
    );
    let o = run(&[
        "hierarchy",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square.cone"),
        "--point",
        &point,
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: FOUND\n"));
    let boundary = run(&[
        "hierarchy",
        "--cone-a",
        &fixture("square.cone"),
        "--cone-b",
        &fixture("square.cone"),
        "--point",
        &fixture("square-max-ray.tensor"),
    ]);
    assert_eq!(code(&boundary), 3);
}
