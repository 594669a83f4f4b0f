use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witnesskit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary launches")
}

fn assert_ok(out: &Output, what: &str) {
    assert_eq!(
        out.status.code(),
        Some(0),
        "{what} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn without_timing(bytes: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(bytes).expect("sweep report parses");
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn a11_cli_determinism_and_grid_sweep() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();

    for (family, n, k) in [
        ("ad-unitary", "4", None),
        ("ad-antiunitary", "3", None),
        ("theta-u", "4", Some("2")),
    ] {
        let mut args = vec!["gen", family, "--n", n, "--seed", "11", "--out", "m.json"];
        if let Some(k) = k {
            args.extend(["--k", k]);
        }
        let o1 = run(d1.path(), &args);
        let o2 = run(d2.path(), &args);
        assert_ok(&o1, family);
        assert_ok(&o2, family);
        assert_eq!(o1.stdout, o2.stdout, "{family} report drifted between runs");
        assert_eq!(
            std::fs::read(d1.path().join("m.json")).unwrap(),
            std::fs::read(d2.path().join("m.json")).unwrap(),
            "{family} map file drifted between runs"
        );
        assert_eq!(
            std::fs::read(d1.path().join("m.sym.json")).unwrap(),
            std::fs::read(d2.path().join("m.sym.json")).unwrap(),
            "{family} sidecar drifted between runs"
        );

        let c1 = run(d1.path(), &["classify", "--map", "m.json", "--k", "2"]);
        let c2 = run(d1.path(), &["classify", "--map", "m.json", "--k", "2"]);
        assert_eq!(c1.status.code(), c2.status.code());
        assert_eq!(c1.stdout, c2.stdout, "{family} classification drifted between runs");
    }

    let sweep_args = [
        "sweep", "--n", "2..4", "--k", "half", "--trials", "3", "--seed", "5", "--out", "grid.csv",
    ];
    let s1 = run(d1.path(), &sweep_args);
    let s2 = run(d2.path(), &sweep_args);
    assert_ok(&s1, "sweep");
    assert_ok(&s2, "sweep");
    assert_eq!(
        without_timing(&s1.stdout),
        without_timing(&s2.stdout),
        "sweep report drifted between runs outside the timing key"
    );
    assert_eq!(
        std::fs::read(d1.path().join("grid.csv")).unwrap(),
        std::fs::read(d2.path().join("grid.csv")).unwrap(),
        "sweep CSV drifted between runs"
    );

    let clock = Instant::now();
    let grid = run(
        d1.path(),
        &["sweep", "--n", "2..6", "--k", "all", "--trials", "10", "--seed", "7"],
    );
    let grid_seconds = clock.elapsed().as_secs_f64();
    assert_ok(&grid, "full grid sweep");
    let report: Value = serde_json::from_slice(&grid.stdout).unwrap();
    assert_eq!(report["contradictions"], 0);
    assert!(
        grid_seconds < 120.0,
        "grid sweep took {grid_seconds:.1} s, budget is 120 s"
    );

    println!(
        "ACCEPTANCE 11 (cli determinism and golden files): PASS - gen/classify/sweep reruns \
         byte-identical outside the timing key; sweep n=2..6 k=all trials=10 exited 0 in {grid_seconds:.1} s"
    );
}
