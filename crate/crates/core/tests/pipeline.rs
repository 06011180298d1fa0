use std::fs;
use std::path::{Path, PathBuf};

use eqgap::error::Error;
use eqgap::gadget::frak_i2;
use eqgap::game::{is_eps_ne, is_eps_wsne};
use eqgap::io::{parse_bgm, parse_prof};
use eqgap::pipeline::{run_pipeline, PipelineConfig, PipelineReport};
use eqgap::scalar::{int, ratio};
use eqgap::search::Answer;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn small(input: &str, out: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig::new(fixture(input), out);
    cfg.search_budget = 1 << 14;
    cfg.pattern_budget = 1 << 10;
    cfg
}

fn answer(r: &PipelineReport, id: u8) -> Answer {
    r.deciders.iter().find(|d| d.problem.id() == id).unwrap().outcome.answer
}

#[test]
fn satisfiable_fixture_emits_verified_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_pipeline(&small("sat4_3.cnf", dir.path())).unwrap();
    assert_eq!(r.satisfiable, Some(true));
    assert_eq!(r.value, Some(int(1)));
    let c = r.certificate.as_ref().unwrap();
    assert!(c.all_ok());
    for f in ["F.fgm", "G.bgm", "Gs.bgm", "Gprime.bgm", "Gdouble.bgm", "cert.prof", "report.json"] {
        assert!(dir.path().join(f).exists(), "{f} missing");
    }
    // the written files reproduce the in-memory objects
    let g = parse_bgm(&fs::read_to_string(dir.path().join("G.bgm")).unwrap()).unwrap();
    assert_eq!(g, r.games.gadget.game);
    let cert = parse_prof(&fs::read_to_string(dir.path().join("cert.prof")).unwrap(), false).unwrap();
    assert!(is_eps_ne(&g, &cert, &r.games.params.eps_unscaled()).unwrap());
    assert_eq!(answer(&r, 1), Answer::Yes);
    assert_eq!(answer(&r, 10), Answer::Yes);
}

#[test]
fn emitted_witnesses_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_pipeline(&small("sat3_1.cnf", dir.path())).unwrap();
    let eps = ratio(31, 250);
    for d in &r.deciders {
        if d.outcome.answer != Answer::Yes {
            continue;
        }
        let game = if d.game == "Gprime" { "Gprime.bgm" } else { "Gdouble.bgm" };
        let g = parse_bgm(&fs::read_to_string(dir.path().join(game)).unwrap()).unwrap();
        let w = parse_prof(
            &fs::read_to_string(dir.path().join(format!("witness-p{}.prof", d.problem.id()))).unwrap(),
            false,
        )
        .unwrap();
        let ok = if d.problem.id() <= 6 { is_eps_ne(&g, &w, &eps) } else { is_eps_wsne(&g, &w, &eps) };
        assert!(ok.unwrap(), "witness for p{} does not verify", d.problem.id());
    }
}

#[test]
fn unsatisfiable_fixture_has_no_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let r = run_pipeline(&small("full8.cnf", dir.path())).unwrap();
    assert_eq!(r.satisfiable, Some(false));
    assert_eq!(r.max_sat, Some(ratio(7, 8)));
    assert_eq!(r.value, Some(ratio(3, 4)));
    assert!(r.certificate.is_none());
    assert!(!dir.path().join("cert.prof").exists());
    // (𝔦′, any base column) already passes the ε*-WSNE test on G″
    let d = r.deciders.iter().find(|d| d.problem.id() == 10).unwrap();
    assert_eq!(d.outcome.answer, Answer::Yes);
    let w = d.outcome.witness.as_ref().unwrap();
    assert_eq!(w.support_x(), vec![frak_i2(&r.games.gdouble).unwrap()]);
}

#[test]
fn output_is_byte_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_pipeline(&small("unsat4a.cnf", a.path())).unwrap();
    run_pipeline(&small("unsat4a.cnf", b.path())).unwrap();
    for f in &ra.files {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
    let strip = |p: &Path| {
        let mut v: serde_json::Value = serde_json::from_slice(&fs::read(p.join("report.json")).unwrap()).unwrap();
        v["input"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(a.path()), strip(b.path()));
}

#[test]
fn bad_eps_star_fails_in_derive_params() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small("sat3_1.cnf", dir.path());
    cfg.eps_star = ratio(1, 8);
    match run_pipeline(&cfg) {
        Err(Error::Stage { stage, source }) => {
            assert_eq!(stage, "derive_params");
            assert!(matches!(*source, Error::Parameter(_)));
        }
        other => panic!("expected a stage error, got {other:?}"),
    }
    cfg.eps_star = ratio(1, 10);
    assert!(run_pipeline(&cfg).is_err());
}

#[test]
fn missing_input_is_a_read_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig::new(dir.path().join("nope.cnf"), dir.path());
    assert!(matches!(run_pipeline(&cfg), Err(Error::Stage { stage: "read", .. })));
}
