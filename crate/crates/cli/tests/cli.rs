use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pi(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pi"))
        .args(args)
        .env("PI_CACHE_DIR", cache)
        .env_remove("PI_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn analyze_reports_structure_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = pi(&["analyze", "gl2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim_l"], 4);
    assert_eq!(v["dim_g"], 3);
    assert_eq!(v["dim_s"], 1);
    assert_eq!(
        v["factor_kinds"],
        serde_json::json!(["irreducible", "irreducible"])
    );
}

#[test]
fn codim_csv_and_cache_files() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = pi(
        &["codim", "sl2_natural", "--max-n", "4", "--method", "exact"],
        &cache,
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "n,c_n,method,seed\n1,1,exact,0\n2,2,exact,0\n3,4,exact,0\n4,9,exact,0\n"
    );
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 4);
    let again = pi(
        &["codim", "sl2_natural", "--max-n", "4", "--method", "exact"],
        &cache,
    );
    assert_eq!(again.stdout, out.stdout);
    let modular = pi(
        &[
            "codim",
            "sl2_natural",
            "--max-n",
            "4",
            "--method",
            "modular",
            "--seed",
            "9",
        ],
        &cache,
    );
    assert!(stdout(&modular).ends_with("4,9,modular,9\n"));
}

#[test]
fn cochar_csv_has_consistency_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = pi(&["cochar", "sl2_natural", "--n", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,m,dim,product");
    assert!(lines.contains(&"\"(2,1)\",1,2,2"));
    assert_eq!(*lines.last().unwrap(), "# sum=4 c_n=4 consistent=true");
}

#[test]
fn exponent_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = pi(&["exponent", "borel"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["d"], 2);
    assert_eq!(v["final_ann_dim"], 1);
    assert_eq!(v["lower_bound"], false);
    let capped = pi(&["exponent", "borel", "--state-cap", "1"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&capped)).unwrap();
    assert_eq!(v["lower_bound"], true);
}

#[test]
fn verify_and_growth_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        pi(&["verify", "heisenberg"], dir.path()).status.code(),
        Some(0)
    );
    let pass = pi(&["growth", "sl2_natural", "--max-n", "6"], dir.path());
    assert_eq!(pass.status.code(), Some(0), "{}", stdout(&pass));
    let v: serde_json::Value = serde_json::from_str(&stdout(&pass)).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["d"], 3);
    // c_2^(1/2) is far below 0.6·d
    let short = pi(&["growth", "sl2_natural", "--max-n", "2"], dir.path());
    assert_eq!(short.status.code(), Some(1));
    let capped = pi(
        &["growth", "borel", "--max-n", "3", "--state-cap", "1"],
        dir.path(),
    );
    assert_eq!(capped.status.code(), Some(3));
    assert!(stdout(&capped).contains("\"inconclusive\""));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let float = write_spec(
        dir.path(),
        "f.toml",
        "name = \"f\"\ndim_v = 1\ngenerators = [[[0.5]]]\n",
    );
    let out = pi(&["analyze", &float], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("f.toml:3:17"), "{}", stderr(&out));
    let ragged = write_spec(
        dir.path(),
        "r.toml",
        "name = \"r\"\ndim_v = 2\ngenerators = [\n  [[1, 0], [1]],\n]\n",
    );
    assert_eq!(pi(&["analyze", &ragged], dir.path()).status.code(), Some(2));
    assert_eq!(
        pi(&["analyze", "/no/such/file.toml"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pi(&["codim", "gl2"], dir.path()).status.code(), Some(2));
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_pi"))
        .args(["analyze", "scalar"])
        .env("PI_CACHE_DIR", dir.path())
        .env("PI_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn resource_guard_and_non_split_codes() {
    let dir = tempfile::tempdir().unwrap();
    let guarded = pi(&["codim", "gl2", "--max-n", "9"], dir.path());
    assert_eq!(guarded.status.code(), Some(3));
    assert!(stderr(&guarded).contains("resource guard"));
    let rotation = write_spec(
        dir.path(),
        "rot.toml",
        "name = \"rot\"\ndim_v = 2\ngenerators = [[[0, -1], [1, 0]]]\n",
    );
    assert_eq!(
        pi(&["analyze", &rotation], dir.path()).status.code(),
        Some(4)
    );
}

#[test]
fn reports_are_byte_identical_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["growth", "sl2_adjoint", "--max-n", "5", "--no-cache"];
    let a = pi(&args, dir.path());
    let b = Command::new(env!("CARGO_BIN_EXE_pi"))
        .args(args)
        .env("PI_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}
