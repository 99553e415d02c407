use std::fs;
use std::path::Path;

use claw_mwis::generators::{random_set_packing, WeightRange};
use claw_mwis::setpacking::SetSystem;
use claw_mwis::{ProblemInstance, Weight};
use claw_mwis_cli::format::{parse_graph, parse_set_system, write_graph, write_set_system};
use claw_mwis_cli::record::{CertificateStatus, RunRecord};
use claw_mwis_cli::run;
use proptest::prelude::*;
use tempfile::TempDir;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("claw-mwis").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).display().to_string()
}

fn record(text: &str) -> RunRecord {
    serde_json::from_str(text).unwrap()
}

fn same_instance(a: &ProblemInstance, b: &ProblemInstance) -> bool {
    a.n() == b.n() && a.d() == b.d() && a.weights() == b.weights() && a.edges().eq(b.edges())
}

fn labelled(s: &SetSystem) -> Vec<(Weight, Vec<String>)> {
    s.sets()
        .iter()
        .map(|set| {
            let mut names: Vec<String> = set
                .elements
                .iter()
                .map(|&e| s.labels()[e].clone())
                .collect();
            names.sort();
            (set.weight.clone(), names)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trips(sets in 0usize..=10, seed in any::<u64>(), den in 1u64..=5) {
        let g = random_set_packing(sets, 6, 3, WeightRange { min: 1, max: 20, denominator: den }, seed)
            .unwrap()
            .conflict_graph();
        let text = write_graph(&g, &["generated".to_string()]);
        let back = parse_graph(&text).unwrap();
        prop_assert!(same_instance(&g, &back));
        prop_assert_eq!(write_graph(&back, &["generated".to_string()]), text);
    }

    #[test]
    fn set_text_round_trips(sets in 0usize..=10, seed in any::<u64>()) {
        let s = random_set_packing(sets, 7, 3, WeightRange::integers(1, 9), seed).unwrap();
        let text = write_set_system(&s);
        let back = parse_set_system(&text).unwrap();
        prop_assert_eq!(labelled(&back), labelled(&s));
        prop_assert_eq!(write_set_system(&parse_set_system(&write_set_system(&back)).unwrap()), write_set_system(&back));
        prop_assert!(same_instance(&s.conflict_graph(), &back.conflict_graph()));
    }

    #[test]
    fn locally_optimal_solutions_pass_verification(sets in 1usize..=10, seed in any::<u64>(), claw in any::<bool>()) {
        let dir = TempDir::new().unwrap();
        let input = path(&dir, "g.txt");
        let g = random_set_packing(sets, 6, 3, WeightRange::integers(1, 9), seed).unwrap().conflict_graph();
        fs::write(&input, write_graph(&g, &[])).unwrap();
        let algorithm = if claw { "squareimp" } else { "bounded" };
        let rec = path(&dir, "r.json");
        let (code, _, _) = cli(&["solve", &input, "--algorithm", algorithm, "-o", &rec]);
        prop_assert_eq!(code, 0);
        let r = record(&fs::read_to_string(&rec).unwrap());
        prop_assert_eq!(r.certificate, CertificateStatus::LocallyOptimal);
        let (code, out, _) = cli(&["verify-local-opt", &input, "--record", &rec]);
        prop_assert_eq!(code, 0, "{}", out);
    }
}

#[test]
fn tight_instance_through_the_cli() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "tight.txt");
    assert_eq!(cli(&["gen", "tight", "--d", "6", "-o", &input]).0, 0);
    let (code, out, _) = cli(&[
        "solve",
        &input,
        "--algorithm",
        "squareimp",
        "--warm-start",
        "a-side",
    ]);
    assert_eq!(code, 0);
    let r = record(&out);
    assert_eq!((r.iterations, r.weight.exact.as_str()), (0, "5"));
    let (code, out, _) = cli(&["verify-local-opt", &input, "--set", "0,1,2,3,4"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("improvement found"));
    let (code, _, _) = cli(&["verify-local-opt", &input, "--set", "0 1 2 3 4", "--claw"]);
    assert_eq!(code, 0);
}

#[test]
fn bounded_solves_cliques_by_their_maxima() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "cliques.txt");
    fs::write(
        &input,
        "p mwis 5 4 2\nv 0 1\nv 1 3\nv 2 3\nv 3 2/3\nv 4 1/2\ne 0 1\ne 0 2\ne 1 2\ne 3 4\n",
    )
    .unwrap();
    let (code, out, _) = cli(&["solve", &input, "--algorithm", "bounded", "--oracle"]);
    assert_eq!(code, 0);
    let r = record(&out);
    assert_eq!(r.solution, vec![1, 3]);
    assert_eq!(r.weight.exact, "11/3");
    assert_eq!(r.oracle_ratio.unwrap().exact, "1");
}

#[test]
fn set_input_reports_the_packing() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "sets.txt");
    fs::write(&input, "p setpack 3 2\ns 2 a b\ns 3 b c\ns 3 c d\n").unwrap();
    let (code, out, _) = cli(&["solve", &input]);
    assert_eq!(code, 0);
    let r = record(&out);
    assert_eq!(r.packing, Some(vec![0, 2]));
    let (code, graph, _) = cli(&["reduce", &input]);
    assert_eq!(code, 0);
    let g = parse_graph(&graph).unwrap();
    assert_eq!((g.n(), g.edge_count(), g.d()), (3, 2, 3));
}

#[test]
fn scaled_runs_do_not_claim_local_optimality() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "g.txt");
    assert_eq!(
        cli(&[
            "gen", "clawfree", "--n", "10", "--p", "0.3", "--d", "4", "--seed", "3", "--wmax", "9",
            "-o", &input
        ])
        .0,
        0
    );
    let (code, out, _) = cli(&["solve", &input, "--scale-N", "2"]);
    assert_eq!(code, 0);
    let r = record(&out);
    assert_eq!(r.certificate, CertificateStatus::NotApplicable);
    assert_eq!(r.config.scale_n.as_deref(), Some("2"));
    let (code, _, err) = cli(&["solve", &input, "--scale-N", "1"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn iteration_cap_is_reported() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "g.txt");
    fs::write(&input, "p mwis 3 0 2\nv 0 1\nv 1 1\nv 2 1\n").unwrap();
    let (_, out, _) = cli(&["solve", &input, "--max-iterations", "1"]);
    let r = record(&out);
    assert_eq!(r.certificate, CertificateStatus::IterationCapped);
    assert_eq!(r.iterations, 1);
}

#[test]
fn analyze_reports_classification() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "tight.txt");
    cli(&["gen", "tight", "--d", "4", "-o", &input]);
    let rec = path(&dir, "r.json");
    assert_eq!(
        cli(&[
            "solve",
            &input,
            "--algorithm",
            "squareimp",
            "--warm-start",
            "a-side",
            "-o",
            &rec
        ])
        .0,
        0
    );
    let (code, out, _) = cli(&["analyze", &input, "--record", &rec]);
    assert_eq!(code, 0, "{out}");
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["near_tight"], serde_json::json!([0, 1, 2]));
    assert_eq!(report["charge_bound_violations"], serde_json::json!([]));
    assert_eq!(report["lemma"], "not-applicable");
    let (code, out, _) = cli(&["analyze", &input, "--set", "0"]);
    assert_eq!(code, 1);
    assert!(out.contains("not maximal"));
}

#[test]
fn constants_command() {
    let (code, out, _) = cli(&["check-constants"]);
    assert_eq!(code, 0);
    assert!(out.contains("d=3: 11/11 pass"));
    assert!(out.contains("1/63700992"));
    let (code, out, _) = cli(&["check-constants", "--epsilon", "1/4"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"));
    let (code, out, _) = cli(&["check-constants", "--d", "3", "--d-max", "10"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("11/11 pass").count(), 8);
}

#[test]
fn generators_are_seeded() {
    let a = cli(&[
        "gen",
        "setpack",
        "--sets",
        "8",
        "--universe",
        "9",
        "--k",
        "3",
        "--seed",
        "5",
        "--wmax",
        "7",
    ]);
    let b = cli(&[
        "gen",
        "setpack",
        "--sets",
        "8",
        "--universe",
        "9",
        "--k",
        "3",
        "--seed",
        "5",
        "--wmax",
        "7",
    ]);
    assert_eq!(a, b);
    assert_eq!(parse_set_system(&a.1).unwrap().len(), 8);
    let (code, out, _) = cli(&["gen", "cliques", "--sizes", "3,1,2"]);
    assert_eq!(code, 0);
    assert_eq!(parse_graph(&out).unwrap().edge_count(), 4);
}

#[test]
fn bench_writes_one_row_per_instance_and_algorithm() {
    let (code, out, err) = cli(&[
        "bench", "--family", "setpack", "--count", "3", "--size", "8", "--wmax", "5", "--oracle",
    ]);
    assert_eq!(code, 0, "{err}");
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(&headers[4], "algorithm");
    let records: Vec<_> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(records.len(), 9);
    for r in &records {
        let ratio: Weight = claw_mwis::parse_weight(&r[9]).unwrap();
        assert!(ratio >= Weight::from_integer(1.into()));
    }
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.txt");
    fs::write(&bad, "p mwis 1 0 2\nv 0 0\n").unwrap();
    let (code, _, err) = cli(&["solve", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["solve", &bad, "--warm-start", "a-side"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
    assert!(!Path::new(&path(&dir, "missing")).exists());
}
