use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tropconf"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("run tropconf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tropconf-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn stats_of_the_hexagonal_fan() {
    let o = run(&["stats", fixture("permutahedral-2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("rank 2, maximal 6, total 13, complete"));
}

#[test]
fn reference_output_matches_fixtures() {
    for (kind, n, name) in [
        ("perm", "3", "permutahedral-3.json"),
        ("biperm", "2", "bipermutahedral-2.json"),
    ] {
        let o = run(&["reference", "--kind", kind, "--n", n]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), fs::read_to_string(fixture(name)).unwrap(), "{name}");
    }
}

#[test]
fn diff_of_identical_and_refined_fans() {
    let f = fixture("permutahedral-2.json");
    let o = run(&["diff", f.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");

    let quad = scratch("quadrants.json");
    let o = run(&["reference", "--kind", "perm2", "--n", "1", "-o", quad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "diff",
        quad.to_str().unwrap(),
        fixture("bipermutahedral-1.json").to_str().unwrap(),
    ]);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with('<')).count(), 2);
    assert_eq!(out.lines().filter(|l| l.starts_with('>')).count(), 4);
    assert!(out.contains("2 left cones split on the right"), "{out}");
}

#[test]
fn quotient_and_locate_reproduce_fixtures() {
    let s = scratch("sqrt.json");
    let c = scratch("sqrt-config.json");
    assert_eq!(
        run(&["scaffold", "build", "--kind", "sqrt-stack", "-o", s.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let o = run(&[
        "quotient",
        "-i",
        s.to_str().unwrap(),
        "-o",
        c.to_str().unwrap(),
        "--certify",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(&c).unwrap(),
        fs::read_to_string(fixture("sqrt-stack-config.json")).unwrap()
    );

    let s3 = scratch("l3.json");
    let c3 = scratch("c3.json");
    run(&[
        "scaffold",
        "build",
        "--kind",
        "lambda0",
        "--n",
        "3",
        "-o",
        s3.to_str().unwrap(),
    ]);
    run(&["quotient", "-i", s3.to_str().unwrap(), "-o", c3.to_str().unwrap()]);
    let o = run(&[
        "locate",
        "-i",
        c3.to_str().unwrap(),
        "--point",
        "1,1,2",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), fs::read_to_string(fixture("chain-stratum.json")).unwrap());
    let o = run(&[
        "stratum",
        "-i",
        c3.to_str().unwrap(),
        "--cone",
        "a0<=a1=a2<=a3",
        "--output",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // base point differs (relative interior sample), the rest agrees
    assert!(stdout(&o).contains("\"marking_vertices\": [0,1,1,2]"));
    let o = run(&["stratum", "-i", c3.to_str().unwrap(), "--cone", "a1<=a2<=a3<=a1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bisequence_labels() {
    let o = run(&["bisequence", "--n", "2", "--point", "-1,2,1,1"]);
    assert_eq!(stdout(&o).trim(), "2|0|12|1");
    let o = run(&["bisequence", "--n", "2", "--point", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.json");
    fs::write(&bad, "{\"ambient_rank\": 1,\n \"complete\": tru}").unwrap();
    let o = run(&["stats", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let wrong = scratch("wrong.json");
    fs::write(
        &wrong,
        r#"{"ambient_rank": 1, "complete": true, "maximal_cones": [{"rays": [["1", "2"]], "lineality": []}]}"#,
    )
    .unwrap();
    let o = run(&["stats", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("$.maximal_cones[0].rays[0]"), "{}", stderr(&o));

    // the quadrant fan is not a scaffold: the diagonal section is not a union of cones
    let quad = scratch("quad-scaffold.json");
    let o = run(&["reference", "--kind", "perm2", "--n", "1"]);
    let text = stdout(&o).replacen('{', "{\n  \"kind\": \"custom\", \"n\": 1, \"d\": 1,", 1);
    fs::write(&quad, text).unwrap();
    let o = run(&["scaffold", "validate", quad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));

    assert_eq!(run(&["verify", "no-such-target"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_small_targets() {
    let o = run(&["verify", "sqrt-stack", "chain-stratum", "from-fan", "--max-n", "2"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 3, "{out}");
    let o = run(&["verify", "permutahedron", "--max-n", "4", "--output", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["ok"], true);
}

#[test]
fn verify_all() {
    let o = run(&["verify", "all", "--seed", "3"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 9, "{out}");
}

#[test]
fn svg_for_planar_fibers() {
    let s = scratch("sq1.json");
    let c = scratch("csq1.json");
    let svg = scratch("fiber.svg");
    run(&[
        "scaffold",
        "build",
        "--kind",
        "square",
        "--n",
        "1",
        "-o",
        s.to_str().unwrap(),
    ]);
    run(&["quotient", "-i", s.to_str().unwrap(), "-o", c.to_str().unwrap()]);
    let o = run(&[
        "locate",
        "-i",
        c.to_str().unwrap(),
        "--point",
        "1,-1",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(
        text.starts_with("<svg") && text.matches("<polygon").count() == 9,
        "{text}"
    );
}
