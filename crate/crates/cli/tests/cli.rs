use std::fs;
use std::path::Path;

use essc::bench::{gen_lfr_background, LfrParams};
use essc::detect::SeedStrategy;
use essc::metrics::jaccard;
use essc::{MultiGraph, MultiGraphBuilder};
use essc_cli::{run, sweep_alpha};
use tempfile::TempDir;

fn essc_run(args: &[&str]) -> i32 {
    let mut argv = vec!["essc"];
    argv.extend_from_slice(args);
    run(argv)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn two_cliques() -> MultiGraph {
    let mut b = MultiGraphBuilder::new(20);
    for base in [0, 10] {
        for u in base..base + 10 {
            for v in u + 1..base + 10 {
                b.add_edge(u, v);
            }
        }
    }
    b.build()
}

fn alphas() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 100.0).collect()
}

#[test]
fn sweep_on_two_cliques_is_flat() {
    let g = two_cliques();
    let rows = sweep_alpha(&g, &alphas(), 0.05, SeedStrategy::MaxDegree, 100).unwrap();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        assert_eq!(row.summary.community_count, 2);
        assert_eq!(row.summary.background_proportion, 0.0);
        assert_eq!(row.background_jaccard, 1.0);
    }
}

#[test]
fn sweep_single_alpha() {
    let rows = sweep_alpha(&two_cliques(), &[0.05], 0.05, SeedStrategy::MaxDegree, 100).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].background_jaccard, 1.0);
}

#[test]
fn sweep_rejects_missing_reference() {
    assert!(sweep_alpha(&two_cliques(), &[0.01, 0.02], 0.05, SeedStrategy::MaxDegree, 100).is_err());
    assert!(sweep_alpha(&two_cliques(), &[], 0.05, SeedStrategy::MaxDegree, 100).is_err());
}

#[test]
fn sweep_background_is_stable_on_lfr_background() {
    let params = LfrParams {
        n: 1000,
        tau1: 2.0,
        tau2: 1.0,
        dbar: 40.0,
        mu: 0.2,
        size_min: 20,
        size_max: 100,
        rho: 0.0,
    };
    let (g, _) = gen_lfr_background(&params, 0.5, 12).unwrap();
    let rows = sweep_alpha(&g, &alphas(), 0.05, SeedStrategy::MaxDegree, 100).unwrap();
    assert_eq!(rows[4].background_jaccard, 1.0);
    let stable = rows
        .windows(2)
        .filter(|w| jaccard(&w[0].background, &w[1].background) >= 0.5)
        .count();
    assert!(stable * 2 > rows.len() - 1, "{rows:?}");
}

#[test]
fn generate_detect_eval_round_trip() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    let truth = dir.path().join("t.txt");
    let comms = dir.path().join("comms.txt");
    let report = dir.path().join("report.json");
    let eval_report = dir.path().join("eval.json");

    let status = essc_run(&[
        "generate", "lfr-bg", "--n", "600", "--pi", "0.5", "--dbar", "30", "--mu", "0.2", "--tau1", "2",
        "--tau2", "1", "--smin", "20", "--smax", "100", "--rng-seed", "5", "--out", path_str(&graph),
        "--truth", path_str(&truth),
    ]);
    assert_eq!(status, 0);
    let truth_text = fs::read_to_string(&truth).unwrap();
    assert!(truth_text.lines().last().unwrap().starts_with("background:"));

    let status = essc_run(&[
        "detect", "--input", path_str(&graph), "--alpha", "0.05", "--output", path_str(&comms),
        "--summary", path_str(&report),
    ]);
    assert_eq!(status, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["parameters"]["alpha"], 0.05);
    assert_eq!(json["parameters"]["max_iter"], 100);
    assert_eq!(json["parameters"]["seed_strategy"], "max_degree");
    assert!(json["summary"]["community_count"].as_u64().unwrap() > 0);
    assert!(json["seed_log"].as_array().is_some());

    for metric in ["gnmi", "nmi", "jaccard", "best-match"] {
        let status = essc_run(&[
            "eval", "--pred", path_str(&comms), "--truth", path_str(&truth), "--metric", metric,
            "--report", path_str(&eval_report),
        ]);
        assert_eq!(status, 0, "{metric}");
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&eval_report).unwrap()).unwrap();
        let score = json["metrics"][metric].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&score), "{metric}: {score}");

        let status = essc_run(&[
            "eval", "--pred", path_str(&truth), "--truth", path_str(&truth), "--metric", metric, "--report",
            path_str(&eval_report),
        ]);
        assert_eq!(status, 0, "{metric}");
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&eval_report).unwrap()).unwrap();
        assert_eq!(json["metrics"][metric].as_f64().unwrap(), 1.0, "{metric} of truth against itself");
    }
}

#[test]
fn detect_accepts_both_strategies() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    essc::graph::write_edge_list(&two_cliques(), fs::File::create(&graph).unwrap()).unwrap();
    for strategy in ["max-degree", "all-neighborhoods"] {
        let out = dir.path().join(format!("{strategy}.txt"));
        let status = essc_run(&[
            "detect", "--input", path_str(&graph), "--seed-strategy", strategy, "--threads", "2", "--output",
            path_str(&out),
        ]);
        assert_eq!(status, 0);
        let file = essc::io::read_communities(fs::read(&out).unwrap().as_slice()).unwrap();
        assert_eq!(file.communities.len(), 2);
        assert!(file.background.is_empty());
    }
}

#[test]
fn generation_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("g{i}.txt"));
        let status = essc_run(&[
            "generate", "sbm-single", "--n", "300", "--pi", "0.2", "--kappa", "5", "--dbar", "10", "--rng-seed",
            "9", "--out", path_str(&out),
        ]);
        assert_eq!(status, 0);
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn generate_reads_config_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("er.conf");
    fs::write(&config, "# null model\nn = 200\ndbar = 5\nrng_seed = 3\n").unwrap();
    let out = dir.path().join("g.txt");
    let report = dir.path().join("r.json");
    let status = essc_run(&[
        "generate", "er", "--config", path_str(&config), "--dbar", "6", "--out", path_str(&out), "--report",
        path_str(&report),
    ]);
    assert_eq!(status, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["parameters"]["spec"]["kind"], "erdos-renyi");
    assert_eq!(json["parameters"]["spec"]["dbar"], 6.0);
    assert_eq!(json["parameters"]["rng_seed"], 3);
}

#[test]
fn oracle_prints_distance() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let status = essc_run(&[
        "oracle", "--n", "200", "--tau1", "2", "--dbar", "10", "--set-fraction", "0.1", "--samples", "2000",
        "--rng-seed", "1", "--report", path_str(&report),
    ]);
    assert_eq!(status, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let tv = json["metrics"]["tv_distance"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&tv));
}

#[test]
fn exit_codes() {
    assert_eq!(essc_run(&["detect", "--bogus"]), 2);
    assert_eq!(essc_run(&["frobnicate"]), 2);
    assert_eq!(essc_run(&[]), 2);
    assert_eq!(essc_run(&["--help"]), 0);
    assert_eq!(essc_run(&["detect", "--input", "/nonexistent/graph.txt"]), 1);

    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "0 1\n1 2\n").unwrap();
    assert_eq!(essc_run(&["detect", "--input", path_str(&graph), "--alpha", "1.5"]), 1);
    fs::write(&graph, "0 1 0\n").unwrap();
    assert_eq!(essc_run(&["detect", "--input", path_str(&graph)]), 1);
    assert_eq!(
        essc_run(&["generate", "er", "--n", "10", "--dbar", "20", "--rng-seed", "1", "--out", path_str(&graph)]),
        1
    );
}
