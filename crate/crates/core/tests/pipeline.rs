use std::path::Path;

use picodim::bundled;
use picodim::cache::Cache;
use picodim::exponent::{pi_exponent, ExponentOptions};
use picodim::growth::{run_growth, Verdict};
use picodim::multilin::{EvalOptions, Method};
use picodim::{FactorKind, RepSpec, Structure};
use sha2::{Digest, Sha256};

fn reps_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/reps"))
}

#[test]
fn reps_on_disk_match_bundled_copies() {
    for name in bundled::names() {
        let from_disk = RepSpec::from_file(&reps_dir().join(format!("{name}.toml"))).unwrap();
        assert_eq!(from_disk, bundled::get(name).unwrap());
    }
}

#[test]
fn growth_of_zero_and_scalar_reps() {
    let exp = ExponentOptions::default();
    let eval = EvalOptions::default();

    let zero = Structure::build(bundled::get("zero").unwrap().rep().unwrap(), 0).unwrap();
    let report = run_growth("zero", &zero, 4, &eval, &exp).unwrap();
    assert_eq!(report.d, 0);
    assert!(report.table.iter().all(|r| r.c_n == 0));
    assert_eq!(report.verdict, Verdict::Pass);

    let scalar = Structure::build(bundled::get("scalar").unwrap().rep().unwrap(), 0).unwrap();
    let report = run_growth("scalar", &scalar, 5, &eval, &exp).unwrap();
    assert_eq!(report.d, 1);
    assert!(report.table.iter().all(|r| r.c_n == 1));
    let fit = report.fit.unwrap();
    assert_eq!((fit.c1, fit.r1, fit.c2, fit.r2), (1.0, 0.0, 1.0, 0.0));
    assert_eq!(report.verdict, Verdict::Pass);
}

#[test]
fn sl2_natural_growth_passes_with_both_rank_methods() {
    let s = Structure::build(bundled::get("sl2_natural").unwrap().rep().unwrap(), 0).unwrap();
    let exp = ExponentOptions::default();
    let exact = EvalOptions {
        method: Method::Exact,
        ..EvalOptions::default()
    };
    let modular = EvalOptions {
        method: Method::Modular,
        ..EvalOptions::default()
    };
    let a = run_growth("sl2", &s, 6, &exact, &exp).unwrap();
    let b = run_growth("sl2", &s, 6, &modular, &exp).unwrap();
    let ca: Vec<usize> = a.table.iter().map(|r| r.c_n).collect();
    let cb: Vec<usize> = b.table.iter().map(|r| r.c_n).collect();
    assert_eq!(ca, cb);
    assert_eq!(a.verdict, Verdict::Pass);
    assert_eq!(a.fit, b.fit);
}

#[test]
fn structure_reports_of_bundled_examples() {
    let report = |name: &str| {
        let s = Structure::build(bundled::get(name).unwrap().rep().unwrap(), 0).unwrap();
        s.report(name).unwrap()
    };
    let gl2 = report("gl2");
    assert_eq!(
        (gl2.dim_l, gl2.dim_a, gl2.dim_g, gl2.dim_r, gl2.dim_s, gl2.dim_j),
        (4, 4, 3, 1, 1, 0)
    );
    assert_eq!(gl2.factor_kinds, vec![FactorKind::Irreducible; 2]);
    let heis = report("heisenberg");
    assert_eq!(
        (heis.dim_a, heis.dim_j, heis.p, heis.dim_g, heis.dim_s),
        (3, 3, 3, 0, 0)
    );
    assert!(heis.lemmas.all_passed());
    let adj = report("sl2_adjoint");
    assert_eq!((adj.dim_v, adj.dim_a, adj.theta), (3, 9, 3));
}

fn digest(s: &Structure) -> String {
    let exp = pi_exponent(&s.rep, &s.env, &s.levi, &ExponentOptions::default()).unwrap();
    let growth = run_growth(
        "x",
        s,
        5,
        &EvalOptions::default(),
        &ExponentOptions::default(),
    )
    .unwrap();
    let text = format!(
        "{}|{}|{}",
        serde_json::to_string(&s.env).unwrap(),
        serde_json::to_string(&exp).unwrap(),
        serde_json::to_string(&growth).unwrap()
    );
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[test]
fn cached_envelope_gives_identical_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    for name in ["sl2_adjoint", "borel", "heisenberg"] {
        let spec = bundled::get(name).unwrap();
        let rep = spec.rep().unwrap();
        let cold = Structure::build(rep.clone(), 4).unwrap();
        let (first, hit) = cache.envelope(&spec, &rep, 4).unwrap();
        assert!(!hit);
        let (env, hit) = cache.envelope(&spec, &rep, 4).unwrap();
        assert!(hit);
        assert_eq!(first, env);
        let warm = Structure::with_envelope(rep, env).unwrap();
        assert_eq!(digest(&cold), digest(&warm), "{name}");
    }
}
