use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cramsey(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cramsey")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn affine_profile_reports_lines() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&cramsey(dir.path(), &["generate", "affine", "--q", "3", "-o", "a.kcolor"])), 0);
    let out = cramsey(dir.path(), &["oracle", "--task", "mono-profile", "a.kcolor"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["colors"], 4);
    for p in doc["profile"].as_array().unwrap() {
        assert_eq!(p["components"], 3);
        assert_eq!(p["max_component_order"], 3);
        assert_eq!(p["all_cliques"], true);
    }
}

#[test]
fn extract_then_verify_and_tamper() {
    let dir = TempDir::new().unwrap();
    cramsey(dir.path(), &["generate", "affine", "--q", "5", "-o", "a.kcolor"]);
    let out = cramsey(
        dir.path(),
        &["extract", "a.kcolor", "--tree", "path:3", "--t", "7", "--mode", "opportunistic", "--seed", "1", "-o", "c.json"],
    );
    assert_eq!(code(&out), 0);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(cert["variant"], "MonoEmbedding");

    let ok = cramsey(dir.path(), &["verify", "c.json", "a.kcolor", "--tree", "path:3"]);
    assert_eq!(code(&ok), 0);

    let mut bad = cert.clone();
    bad["map"][3] = bad["map"][0].clone();
    std::fs::write(dir.path().join("bad.json"), bad.to_string()).unwrap();
    let out = cramsey(dir.path(), &["verify", "bad.json", "a.kcolor", "--tree", "path:3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("invalid:"));
}

#[test]
fn small_affine_lines_cannot_host_the_path() {
    let dir = TempDir::new().unwrap();
    cramsey(dir.path(), &["generate", "affine", "--q", "3", "-o", "a.kcolor"]);
    let out = cramsey(
        dir.path(),
        &["extract", "a.kcolor", "--tree", "path:3", "--t", "7", "--mode", "opportunistic", "--seed", "1"],
    );
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["variant"], "Failure");
}

#[test]
fn seed_is_mandatory_for_randomized_commands() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&cramsey(dir.path(), &["generate", "random", "--n", "5", "--k", "2"])), 2);
    cramsey(dir.path(), &["generate", "lexical", "--n", "6", "-o", "l.kcolor"]);
    assert_eq!(code(&cramsey(dir.path(), &["extract", "l.kcolor", "--tree", "path:1", "--t", "2"])), 2);
    assert_eq!(code(&cramsey(dir.path(), &["bench"])), 2);
}

#[test]
fn usage_and_io_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&cramsey(dir.path(), &["nonsense"])), 2);
    assert_eq!(code(&cramsey(dir.path(), &["oracle", "missing.kcolor", "--task", "max-colors"])), 2);
    std::fs::write(dir.path().join("junk.kcolor"), "KCOLOR 1 3\n1 2\n").unwrap();
    assert_eq!(code(&cramsey(dir.path(), &["oracle", "junk.kcolor", "--task", "max-colors"])), 2);
    cramsey(dir.path(), &["generate", "lexical", "--n", "20", "-o", "l.kcolor"]);
    // below the strict size gate
    assert_eq!(code(&cramsey(dir.path(), &["extract", "l.kcolor", "--tree", "path:2", "--t", "2", "--seed", "0"])), 2);
}

#[test]
fn extraction_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    cramsey(dir.path(), &["generate", "random", "--n", "240", "--k", "4", "--seed", "9", "-o", "r.kcolor"]);
    let run = |tag: &str| {
        let (c, t) = (format!("c{tag}.json"), format!("t{tag}.json"));
        cramsey(
            dir.path(),
            &[
                "extract", "r.kcolor", "--tree", "path:2", "--t", "3", "--mode", "opportunistic", "--seed", "4",
                "--trace", &t, "-o", &c,
            ],
        );
        (std::fs::read(dir.path().join(c)).unwrap(), std::fs::read(dir.path().join(t)).unwrap())
    };
    let (a, b) = (run("a"), run("b"));
    assert_eq!(a, b);
    let trace: Value = serde_json::from_slice(&a.1).unwrap();
    assert_eq!(trace["seed"], 4);
    assert_eq!(trace["constants_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn generators_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = cramsey(dir.path(), &["generate", "random", "--n", "30", "--k", "3", "--seed", "5"]);
    let b = cramsey(dir.path(), &["generate", "random", "--n", "30", "--k", "3", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(dir.path().join("r.kcolor"), &a.stdout).unwrap();
    let s1 = cramsey(dir.path(), &["generate", "subsample", "--input", "r.kcolor", "--p", "0.5", "--seed", "2"]);
    let s2 = cramsey(dir.path(), &["generate", "subsample", "--input", "r.kcolor", "--p", "0.5", "--seed", "2"]);
    assert_eq!(code(&s1), 0);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn proper_at_the_size_bound() {
    let dir = TempDir::new().unwrap();
    // n = 2·2·3 + 9 = 21
    cramsey(dir.path(), &["generate", "random", "--n", "21", "--k", "4", "--seed", "3", "-o", "r.kcolor"]);
    let out = cramsey(dir.path(), &["proper", "r.kcolor", "--tree-s", "path:2", "--tree-t", "star:3", "-o", "c.json"]);
    assert_eq!(code(&out), 0);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    let tree = if cert["variant"] == "MonoEmbedding" { "path:2" } else { "star:3" };
    assert_eq!(code(&cramsey(dir.path(), &["verify", "c.json", "r.kcolor", "--tree", tree])), 0);
}

#[test]
fn layered_has_no_proper_star_or_mono_path() {
    let dir = TempDir::new().unwrap();
    cramsey(dir.path(), &["generate", "layered", "--s", "4", "--t", "3", "-o", "l.kcolor"]);
    assert_eq!(json(&cramsey(dir.path(), &["oracle", "l.kcolor", "--task", "max-colors"]))["max_distinct_colors"], 3);
    let out = cramsey(dir.path(), &["oracle", "l.kcolor", "--task", "tree-contain", "--tree", "path:5"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["status"], "none");
}

#[test]
fn median_order_commands() {
    let dir = TempDir::new().unwrap();
    // 3-cycle 0->1->2->0: pairs (0,1) (0,2) (1,2)
    std::fs::write(dir.path().join("c.korient"), "KORIENT 1 3\n2 3 2\n").unwrap();
    let local = json(&cramsey(dir.path(), &["median-order", "c.korient", "--seed", "1"]));
    assert_eq!(local["forward_count"], 2);
    assert_eq!(local["feedback_property"], true);
    let exact = json(&cramsey(dir.path(), &["oracle", "c.korient", "--task", "median-exact"]));
    assert_eq!(exact["forward_count"], 2);
    assert_eq!(code(&cramsey(dir.path(), &["median-order", "c.korient"])), 2);
}

#[test]
fn grid_metadata_and_rainbow_oracle() {
    let dir = TempDir::new().unwrap();
    let out = cramsey(
        dir.path(),
        &["generate", "grid", "--h", "2", "--t", "3", "--s", "6", "--connectors", "3", "--meta", "m.json", "-o", "g.kcolor"],
    );
    assert_eq!(code(&out), 0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    assert_eq!(meta["rogue_colors"].as_array().unwrap().len(), 2);
    assert_eq!(meta["connector_scope"].as_array().unwrap().len(), 3);
    let out = cramsey(dir.path(), &["oracle", "g.kcolor", "--task", "rainbow-path"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["status"], "exact");
}

#[test]
fn bench_rejects_unknown_fixture() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&cramsey(dir.path(), &["bench", "--seed", "1", "--fixtures", "nope"])), 2);
}
