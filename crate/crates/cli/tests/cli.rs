use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use skp_core::fabgup::FgInstance;
use skp_core::Instance;

fn skp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skp")).args(args).output().unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn identity_gives_empty_word() {
    let o = skp(&["navigate", "identity"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r["length"], "0");
    assert_eq!(r["word"], "");
    assert_eq!(r["certified"], true);
}

#[test]
fn random_sl2_elements_are_certified() {
    let o = skp(&["navigate", "--seed", "5", "--gens", "canonical+random:2", "random:5"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = records(&o);
    assert_eq!(rs.len(), 5);
    for r in &rs {
        assert_eq!(r["certified"], true);
        assert_eq!(r["evaluation_ok"], true);
        assert_eq!(r["seed"], 5);
        assert_eq!(r["generators"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn sl2_matrix_input() {
    // [[1, t], [0, 1]] and its serialized form
    let o = skp(&["navigate", "1;0,1;0;1", "4:1,0,0,0;4:0,1,0,0;4:0,0,0,0;4:1,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = records(&o);
    assert_eq!(rs[0]["word"], rs[1]["word"]);
    assert_eq!(skp(&["navigate", "1;1;1;1"]).status.code(), Some(4));
}

#[test]
fn fg_portrait_input() {
    let inst = FgInstance::extended(5).unwrap();
    let g = inst.sample_stab(4, &mut ChaCha8Rng::seed_from_u64(1));
    let s = inst.serialize(&g);
    let o = skp(&["navigate", "--group", "fabgup-ext", "--depth", "5", &s, "abAB"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rs = records(&o);
    assert!(rs.iter().all(|r| r["certified"] == true));
    assert_eq!(rs[0]["input"], s.as_str());
}

#[test]
fn bounds_report_period_constants() {
    let o = skp(&["bounds", "--group", "fabgup"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &records(&o)[0];
    assert_eq!(r["fg_period"]["prod_1_plus_3A"], 72272200);
    assert_eq!(r["fg_period"]["prod_1_plus_A"], 186200);
    assert_eq!(r["instance"]["index_n1"], 3u128.pow(28).to_string());
    let o = skp(&["bounds", "--schedule", "auto:3:2", "--n0", "1", "--padic", "3:9:3"]);
    let r = &records(&o)[0];
    let levels = r["instance"]["levels"].as_array().unwrap();
    assert_eq!(levels[1]["l_n"], "2688"); // 7 · 384
    assert_eq!(r["padic"]["bound"], "36");
    assert!((r["constants"]["sl2_diameter"].as_f64().unwrap() - 6.764).abs() < 1e-3);
}

#[test]
fn cyclic_diameter() {
    let o = skp(&["diameter", "--group", "cyclic", "--order", "3"]);
    let r = &records(&o)[0];
    assert_eq!(r["directed_diameter"], 2);
    assert_eq!(r["undirected_diameter"], 1);
}

#[test]
fn verify_sl2_passes() {
    let o = skp(&["verify", "--schedule", "auto:9:4", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["all_pass"], true);
    let o = skp(&["verify", "--group", "fabgup", "--depth", "6", "--levels", "1..7", "--samples", "10", "--residues"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = records(&o);
    assert_eq!(rs.len(), 7);
    let classes: Vec<u64> = rs[1..].iter().map(|r| r["classes"].as_u64().unwrap()).collect();
    assert_eq!(classes, [27, 27, 3, 27, 27, 27]);
}

#[test]
fn spectrum_of_small_quotients() {
    let o = skp(&["spectrum", "--group", "cyclic", "--order", "3"]);
    let r = &records(&o)[0];
    assert!((r["gap"].as_f64().unwrap() - 1.5).abs() < 1e-9);
    let o = skp(&["spectrum", "--depth", "3", "--gens", "canonical+random:1", "--seed", "2"]);
    let r = &records(&o)[0];
    assert_eq!(r["size"], 384);
    assert_eq!(r["dsc_ok"], true);
    assert!(r["mixing_time"].as_u64() >= r["diameter"].as_u64());
}

#[test]
fn exit_codes() {
    // threshold: the standard FG base has 3^28 elements
    assert_eq!(skp(&["navigate", "--group", "fabgup", "identity"]).status.code(), Some(3));
    assert_eq!(skp(&["diameter", "--depth", "4", "--threshold", "100"]).status.code(), Some(3));
    // certificate: a base that only knows the identity
    let o = skp(&["navigate", "--base", "trivial", "1;1;0;1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(records(&o)[0]["error"].as_str().unwrap().contains("base case"));
    // bad input
    for args in [
        &["navigate", "not-a-matrix"][..],
        &["navigate", "--gens", "sometimes", "identity"],
        &["navigate", "--schedule", "auto:x", "identity"],
        &["navigate", "--base", "magic", "identity"],
        &["navigate", "--group", "cyclic", "identity"],
        &["frobnicate"],
        &["diameter", "--q", "3"],
    ] {
        assert_eq!(skp(args).status.code(), Some(4), "{args:?}");
    }
    assert_eq!(skp(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["navigate", "--seed", "9", "--gens", "canonical+random:1", "random:3"];
    let (a, b) = (skp(&args), skp(&args));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let c = skp(&["navigate", "--seed", "10", "--gens", "canonical+random:1", "random:3"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_file_gens_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.txt");
    std::fs::write(&gens, "# a and b\na\nb\nab\n").unwrap();
    let out = dir.path().join("r.jsonl");
    let cache = dir.path().join("cache");
    let g = format!("file:{}", gens.display());
    let base_args = ["navigate", "--group", "fabgup-ext", "--depth", "5", "--gens", &g, "--cache"];
    let mut args: Vec<&str> = base_args.to_vec();
    let c = cache.display().to_string();
    let o = out.display().to_string();
    args.extend([c.as_str(), "--out", o.as_str(), "bab", "identity"]);
    let first = skp(&args);
    assert_eq!(first.status.code(), Some(0));
    assert!(first.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    // second run loads the table from the cache
    skp(&args);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
    let r: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(r["generators"].as_array().unwrap().len(), 3);
}
