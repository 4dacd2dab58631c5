use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use superq_core::quadratic::random_quadratic_space;

fn superq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superq")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a JSON report")
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn byte_identical_without_timing() {
    for args in [
        &["susy", "d10-n10", "--no-timing"][..],
        &["quadric", "d4-n11", "--degree", "4", "--no-timing"],
        &["spinor", "--d", "10", "--seed", "7", "--no-timing"],
        &["picard", "--no-timing", "--format", "tsv"],
    ] {
        let a = superq(args);
        let b = superq(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_reported_unless_disabled() {
    let r = report(&superq(&["theta", "--sweep", "2"]));
    assert!(r["checks"][0]["timing_ms"].is_number());
    let r = report(&superq(&["theta", "--sweep", "2", "--no-timing"]));
    assert!(r["checks"][0].get("timing_ms").is_none());
}

#[test]
fn catalog_examples() {
    let r = report(&superq(&["susy", "d10-n10", "--no-timing"]));
    assert_eq!(check(&r, "nilpotency")["witness"]["value"], 2);
    let r = report(&superq(&["susy", "d2-n11", "--no-timing"]));
    let rows = check(&r, "bracket-table")["witness"].as_array().unwrap().clone();
    assert!(rows.iter().any(|row| row["bracket"] == "[Q+,Q+]" && row["value"] == "H+P"));
    let r = report(&superq(&["quadric", "d10-n10", "--check", "hilbert", "--degree", "3", "--no-timing"]));
    assert_eq!(check(&r, "hilbert")["witness"]["series"], serde_json::json!([1, 16, 126, 672]));
    let r = report(&superq(&["quadric", "d4-n11", "--check", "ci", "--no-timing"]));
    let ci = &check(&r, "ci")["witness"];
    assert_eq!(ci["complete_intersection"], false);
    assert_eq!(ci["first_failure"]["degree"], 3);
    let r = report(&superq(&["quadric", "d2-n11", "--check", "lie-dims", "--no-timing"]));
    assert_eq!(check(&r, "lie-dims")["witness"]["dims"], serde_json::json!([2, 2, 0]));
    let r = report(&superq(&["spinor", "--d", "10", "--check", "null-slice", "--no-timing"]));
    assert_eq!(check(&r, "null-slice")["witness"]["dim"], 8);
    let r = report(&superq(&["theta", "--sweep", "20", "--no-timing"]));
    assert_eq!(check(&r, "sweep")["witness"]["count"], 41);
    let r = report(&superq(&["picard", "--check", "hsst", "--no-timing"]));
    assert_eq!(check(&r, "hsst")["witness"]["equivalent"], true);
    let out = superq(&["catalog", "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["d2-n11", "d4-n11", "d10-n10", "cliff-<n>", "matrix-<p>-<q>", "queer-<n>"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}\t"))), "{name}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Γ(e1, e1) = e1 only: e2 is not in the image
    let broken = write(dir.path(), "broken.json", r#"{"name":"broken","dimB":2,"dimV":2,"gamma":[{"i":1,"j":1,"v":["1","0"]}]}"#);
    assert_eq!(code(&superq(&["susy", broken.to_str().unwrap()])), 2);
    let garbage = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(code(&superq(&["susy", garbage.to_str().unwrap()])), 2);
    assert_eq!(code(&superq(&["susy", "no-such-entry"])), 2);
    assert_eq!(code(&superq(&["susy", "cliff-2"])), 2);
    assert_eq!(code(&superq(&["spinor", "--d", "6"])), 2);
    assert_eq!(code(&superq(&["quadric", "d4-n11", "--degree", "1"])), 2);
    assert_eq!(code(&superq(&["spinor", "--d", "4", "--check", "null-slice"])), 2);

    assert_eq!(code(&superq(&["quadric", "d10-n10", "--check", "lie-dims", "--degree", "5"])), 3);
    assert_eq!(code(&superq(&["quadric", "d10-n10", "--check", "hilbert", "--degree", "4", "--max-sym-dim", "100"])), 3);
    assert_eq!(code(&superq(&["picard", "--check", "cocycle", "--n", "7"])), 3);

    // three quadrics in three variables with a common zero: not Koszul through degree 4
    let space = random_quadratic_space(3, 3, 2).unwrap();
    let nk = write(dir.path(), "nonkoszul.json", &serde_json::to_string(&space.to_json()).unwrap());
    let o = superq(&["quadric", nk.to_str().unwrap(), "--check", "koszul", "--degree", "4", "--no-timing"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["verdict"], "fail");
    assert_eq!(code(&superq(&["catalog"])), 0);
}

#[test]
fn limits_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "limits.toml", "[limits]\nmax_tensor_dim = 2000000\n");
    let o = superq(&["quadric", "d2-n11", "--check", "lie-dims", "--degree", "6", "--config", cfg.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["config"]["limits"]["max_tensor_dim"], 2_000_000);
    let bad = write(dir.path(), "bad.toml", "[limits]\nmax_everything = 1\n");
    assert_eq!(code(&superq(&["catalog", "--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn unvalidated_lie_tables() {
    let dir = tempfile::tempdir().unwrap();
    // [X,Y] = X, [X,Z] = Y breaks Jacobi on (X, Y, Z)
    let lie = write(
        dir.path(),
        "lie.json",
        r#"{"name":"bad","basis":[["X",0],["Y",0],["Z",0]],"brackets":[[1,2,1,"1"],[1,3,2,"1"]]}"#,
    );
    let path = lie.to_str().unwrap();
    assert_eq!(code(&superq(&["susy", path])), 2);
    let o = superq(&["susy", path, "--force-unvalidated", "--no-timing"]);
    assert_eq!(code(&o), 0);
    assert_eq!(check(&report(&o), "jacobi")["status"], "forced");
}

#[test]
fn cached_and_cold_series_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let base = ["quadric", "d10-n10", "--degree", "4", "--no-timing", "--cache-dir", c];
    let first = report(&superq(&base));
    let second = report(&superq(&base));
    let cold = report(&superq(&[&base[..], &["--no-cache"]].concat()));
    let plain = report(&superq(&base[..5]));
    assert_eq!(check(&first, "hilbert")["witness"]["cache"], "miss");
    assert_eq!(check(&second, "hilbert")["witness"]["cache"], "hit");
    assert_eq!(check(&cold, "hilbert")["witness"]["cache"], "bypass");
    assert_eq!(check(&plain, "hilbert")["witness"]["cache"], "off");
    for name in ["hilbert", "ci", "koszul", "lie-dims"] {
        let strip = |r: &Value| {
            let mut w = check(r, name)["witness"].clone();
            w.as_object_mut().unwrap().remove("cache");
            w
        };
        assert_eq!(strip(&first), strip(&second), "{name}");
        assert_eq!(strip(&first), strip(&cold), "{name}");
        assert_eq!(strip(&first), strip(&plain), "{name}");
    }
    assert!(std::fs::read_dir(&cache).unwrap().count() >= 2);
}
