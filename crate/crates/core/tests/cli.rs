use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use protower::cli::doc::{self, Document, Input, LevelMapDoc, RawSequenceDoc, TowerDoc};
use protower::cli::{run_args, Outcome};
use protower::random::{random_level_map, random_raw_sequence, random_tower};

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("protower").chain(args.iter().copied()))
}

fn machine(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "machine"]);
    let out = run(&a);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn fixture(args: &[&str]) -> String {
    let mut a = vec!["fixture"];
    a.extend_from_slice(args);
    let out = run(&a);
    assert_eq!(out.code, 0, "{}", out.stderr);
    out.stdout
}

fn all_flags_hold(v: &Value) -> bool {
    match v {
        Value::Object(m) => {
            let own = m.get("holds").map_or(true, |h| h == &Value::Bool(true));
            own && m.values().all(all_flags_hold)
        }
        Value::Array(a) => a.iter().all(all_flags_hold),
        _ => true,
    }
}

#[test]
fn scalar_three_tower() {
    let r = machine(&["analyze-tower", &fixture(&["scalar", "--k", "3"])]);
    assert_eq!(r["schema"], "protower/1");
    assert_eq!(r["verb"], "analyze-tower");
    let res = &r["result"];
    assert_eq!(res["mittag_leffler"]["verdict"], "NotML");
    assert_eq!(res["mittag_leffler"]["constant_index"], "3");
    assert_eq!(res["lim"]["group"]["rank"], 0);
    assert_eq!(res["limone_vanishes"], false);
}

#[test]
fn convergent_sequence_grid() {
    let r = machine(&[
        "analyze-grid",
        &fixture(&["convergent-sequence", "--n", "3"]),
    ]);
    assert_eq!(r["result"]["colim_trivial"], true);
    let ks = r["result"]["trivializing_indices"].as_array().unwrap();
    assert_eq!(ks.len(), 4);
    assert!(ks.iter().all(Value::is_null));
}

#[test]
fn solenoid_steenrod() {
    let sol = fixture(&["solenoid", "--p", "3", "--depth", "1"]);
    let r1 = machine(&["steenrod", &sol, "--degree", "1"]);
    assert_eq!(r1["result"]["lim_part"]["rank"], 0);
    assert_eq!(r1["result"]["limone_vanishes"], true);
    let r0 = machine(&["steenrod", &sol, "--degree", "0"]);
    assert_eq!(r0["result"]["lim_part"]["rank"], 1);
    assert_eq!(r0["result"]["limone_vanishes"], false);
    assert!(r0["result"]["homology"].is_null());
}

#[test]
fn factorize_random_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let p = rng.gen_range(0..=1);
        let a = random_tower(&mut rng, p, 1, 2, 8);
        let c = random_tower(&mut rng, p, 1, 2, 8);
        let f = random_level_map(&mut rng, &a, &c);
        let d = LevelMapDoc {
            source: TowerDoc::of(f.source()),
            target: TowerDoc::of(f.target()),
            maps: doc::level_map_docs(&f),
            through: None,
        };
        let text = serde_json::to_string(&Document::new("level-map", d)).unwrap();
        let r = machine(&["factorize", &text]);
        assert!(all_flags_hold(&r["result"]));
        let main = &r["result"]["main"];
        assert!(main["status"] == "factored" || main["status"] == "not_applicable");
    }
}

#[test]
fn straighten_random_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..3 {
        let raw = random_raw_sequence(&mut rng, 2, 3);
        let text = serde_json::to_string(&Document::new("raw-sequence", RawSequenceDoc::of(&raw)))
            .unwrap();
        let r = machine(&["straighten", &text]);
        assert_eq!(r["result"]["replay"], true);
        let grid =
            serde_json::to_string(&Document::new("grid", r["result"]["grid"].clone())).unwrap();
        assert_eq!(run(&["analyze-grid", &grid]).code, 0);
    }
}

#[test]
fn input_errors_exit_two() {
    let mut v: Value = serde_json::from_str(&fixture(&["scalar"])).unwrap();
    v["data"]["cycle_maps"][0][0][0] = Value::String("3x".into());
    let out = run(&["analyze-tower", &v.to_string()]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("data.cycle_maps[0][0][0]"),
        "{}",
        out.stderr
    );
    v["data"]["cycle_maps"][0][0] = Value::Array(vec![]);
    assert_eq!(run(&["analyze-tower", &v.to_string()]).code, 2);
    let wrong_schema = r#"{"schema": "protower/0", "kind": "tower", "data": {}}"#;
    assert!(run(&["analyze-tower", wrong_schema])
        .stderr
        .contains("schema"));
    let broken = "{\n  \"schema\": \"protower/1\",\n  \"kind\": \"tower\"\n  \"data\": {}\n}";
    let out = run(&["analyze-tower", broken]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
    assert_eq!(run(&["fixture", "unknown"]).code, 2);
    assert_eq!(
        run(&["analyze-tower", &fixture(&["scalar"]), "--horizon", "0"]).code,
        2
    );
    assert_eq!(run(&["analyze-tower", &fixture(&["finset-grid"])]).code, 2);
    assert_eq!(run(&["analyze-tower", "/nonexistent/file.json"]).code, 2);
    assert_eq!(
        run(&[
            "analyze-grid",
            &fixture(&["unbounded-colim"]),
            "--budget",
            "3"
        ])
        .code,
        2
    );
}

#[test]
fn fixtures_round_trip() {
    for args in [
        vec!["solenoid"],
        vec!["telescope", "--depth", "1"],
        vec!["finset-grid", "--n", "4"],
        vec!["unbounded-colim", "--m", "2", "--n", "2"],
        vec!["scalar", "--k", "-2"],
    ] {
        let text = fixture(&args);
        let reparsed = match doc::parse(&text).unwrap() {
            Input::Tower(d) => serde_json::to_string_pretty(&Document::new("tower", d)),
            Input::Grid(d) => serde_json::to_string_pretty(&Document::new("grid", d)),
            Input::FinSetGrid(d) => serde_json::to_string_pretty(&Document::new("finset-grid", d)),
            Input::PolyhedralTower(d) => {
                serde_json::to_string_pretty(&Document::new("polyhedral-tower", d))
            }
            Input::Complex(d) => serde_json::to_string_pretty(&Document::new("complex", d)),
            other => panic!("unexpected {other:?}"),
        }
        .unwrap();
        assert_eq!(reparsed + "\n", text, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("protower-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&[
        "analyze-tower",
        &fixture(&["scalar"]),
        "--format",
        "machine",
        "--out",
        p,
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(
        written,
        run(&[
            "analyze-tower",
            &fixture(&["scalar"]),
            "--format",
            "machine"
        ])
        .stdout
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_protower");
    let ok = std::process::Command::new(bin)
        .args(["fixture", "scalar"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let doc = String::from_utf8(ok.stdout).unwrap();
    let a = std::process::Command::new(bin)
        .args(["analyze-tower", &doc, "--format", "machine"])
        .output()
        .unwrap();
    let b = std::process::Command::new(bin)
        .args(["analyze-tower", &doc, "--format", "machine"])
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = std::process::Command::new(bin)
        .args(["fixture", "nope"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
