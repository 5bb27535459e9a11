use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::Value;

use quadlat_cli::expr::AtomKind;
use quadlat_cli::{parse_lattice_expr, run_with, LatticeExpr, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn quadlat(args: &[&str], input: &str) -> Run {
    let mut argv = vec!["quadlat"];
    argv.extend_from_slice(args);
    let mut stdin = input.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut stdin, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json_ok(args: &[&str], input: &str) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let r = quadlat(&full, input);
    assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).expect("valid JSON")
}

const UU_PERIOD: &str = r#"{"lattice":{"gram":[[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]},
    "D":-1,"re":["1","1","0","0"],"im":["0","0","1","1"]}"#;

#[test]
fn info_lambda6() {
    let v = json_ok(&["info", "Lambda2d(3)"], "");
    assert_eq!(v["rank"], 21);
    assert_eq!(v["signature"], serde_json::json!([2, 19]));
    assert_eq!(v["discriminant_group"], serde_json::json!([6]));
    assert_eq!(v["min_generators"], 1);
    assert_eq!(v["even"], true);
}

#[test]
fn nikulin_and_minkowski() {
    let v = json_ok(&["nikulin", "Lambda2d(5)", "2,26"], "");
    assert_eq!(v["outcome"], "Guaranteed");
    let v = json_ok(&["nikulin", "Lambda2d(5)", "2,18"], "");
    assert_eq!(v["outcome"], "Unknown");
    assert_eq!(v["failed_conditions"], serde_json::json!(["ii", "iii"]));
    assert_eq!(json_ok(&["minkowski", "4"], "")["bound"], 5760);
}

#[test]
fn every_subcommand_emits_json() {
    let dir = std::env::temp_dir().join(format!("quadlat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let period = dir.join("period.json");
    std::fs::write(&period, UU_PERIOD).unwrap();
    let group = dir.join("group.json");
    std::fs::write(&group, r#"{"ell":5,"dim":2,"generators":[[[0,1],[1,0]]]}"#).unwrap();
    let (period, group) = (period.to_str().unwrap(), group.to_str().unwrap());

    json_ok(&["discform", "gen(-4) + U"], "");
    let v = json_ok(&["iota2d", "4"], "");
    assert_eq!(v["primitive"], true);
    assert_eq!(v["complement"]["rank"], 7);
    assert_eq!(v["complement_discriminant_order"], 8);
    assert_eq!(v["complement_form_is_negated_tail"], true);
    let v = json_ok(&["complement"], r#"{"ambient":{"gram":[[0,1],[1,0]]},"basis":[[1,1]]}"#);
    assert_eq!(v["complement"]["gram"], serde_json::json!([[-2]]));
    assert_eq!(json_ok(&["overlattices", "gen(2) + gen(-2)"], "")["count"], 2);
    assert_eq!(json_ok(&["binary-enum", "3", "positive"], "")["forms"], serde_json::json!([[[2, 1], [1, 2]]]));
    assert_eq!(json_ok(&["binary-enum", "3", "-"], "")["forms"], serde_json::json!([[[-2, -1], [-1, -2]]]));
    let v = json_ok(&["period-split", period], "");
    assert_eq!(v["self_pairing"], "4");
    assert_eq!(v["neron_severi"]["gram"], serde_json::json!([[-2, 0], [0, -2]]));
    assert_eq!(v["transcendental"]["gram"], serde_json::json!([[2, 0], [0, 2]]));
    assert_eq!(v["minimal_equals_transcendental"], true);
    assert_eq!(v["sign_relation"], true);
    assert_eq!(json_ok(&["period-split", "-"], UU_PERIOD)["hodge_numbers"], serde_json::json!([1, 2, 1]));
    assert_eq!(json_ok(&["fixed-mod-ell", group], "")["basis"], serde_json::json!([[1, 1]]));
    let v = json_ok(&["points", "sl", "2", "3"], "");
    assert_eq!((v["count"].as_u64(), v["nori_sandwich"].as_bool()), (Some(24), Some(true)));
    assert_eq!(json_ok(&["points", "orthogonal:U", "2", "3"], "")["count"], 4);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn text_mode() {
    let r = quadlat(&["info", "U"], "");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("rank: 2"));
    assert!(r.stdout.contains("unimodular: true"));
}

#[test]
fn domain_errors() {
    for (args, input, code) in [
        (vec!["info", "E8(-1)^"], "", "ParseError"),
        (vec!["info", "E9"], "", "UnknownAtom"),
        (vec!["info", "gen(0)"], "", "BadParameter"),
        (vec!["discform", "gen(3)"], "", "OddLattice"),
        (vec!["nikulin", "U", "2;26"], "", "ParseError"),
        (vec!["complement"], "{not json", "ParseError"),
        (vec!["complement"], r#"{"ambient":{"gram":[[0,1],[1,0]]},"basis":[[1,1,1]]}"#, "DimensionMismatch"),
        (vec!["period-split", "-"], r#"{"D":-1}"#, "ParseError"),
        (vec!["period-split", "/nonexistent/period.json"], "", "IoError"),
        (vec!["fixed-mod-ell", "-"], r#"{"ell":5,"dim":2,"generators":[[[1,2],[2,4]]]}"#, "NotInvertible"),
        (vec!["points", "sl", "5", "7"], "", "TooLarge"),
        (vec!["minkowski", "0"], "", "BadParameter"),
        (vec!["binary-enum", "0", "positive"], "", "BadParameter"),
    ] {
        let mut full = vec!["--json"];
        full.extend(args.iter().copied());
        let r = quadlat(&full, input);
        assert_eq!(r.code, EXIT_DOMAIN, "{args:?}");
        let v: Value = serde_json::from_str(&r.stdout).expect("error is one JSON object");
        assert_eq!(v["error"], code, "{args:?}");
        assert!(v["detail"].is_string());
        let plain = quadlat(&args, input);
        assert_eq!(plain.code, EXIT_DOMAIN);
        assert!(plain.stdout.is_empty(), "no partial output on failure");
    }
}

#[test]
fn parse_error_offset() {
    let v: Value = serde_json::from_str(&quadlat(&["--json", "info", "E8(-1)^"], "").stdout).unwrap();
    assert!(v["detail"].as_str().unwrap().contains("offset 7"));
}

#[test]
fn usage_errors() {
    for args in [
        vec![],
        vec!["frobnicate"],
        vec!["info"],
        vec!["minkowski", "four"],
        vec!["points", "gl", "2", "3"],
        vec!["binary-enum", "3", "sideways"],
        vec!["iota2d", "-1"],
    ] {
        let r = quadlat(&args, "");
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(r.stdout.is_empty());
    }
    let r = quadlat(&["--json", "frobnicate"], "");
    assert_eq!(r.code, EXIT_USAGE);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["error"], "UsageError");
    assert_eq!(quadlat(&["--help"], "").code, EXIT_OK);
}

fn atom() -> impl Strategy<Value = LatticeExpr> {
    let twist = prop_oneof![Just(None), (-5i64..=5).prop_filter("nonzero", |k| *k != 0).prop_map(Some)];
    prop_oneof![
        (prop_oneof![Just(AtomKind::U), Just(AtomKind::E8), (1usize..6).prop_map(AtomKind::A)], twist)
            .prop_map(|(kind, t)| LatticeExpr::Atom { kind, params: t.into_iter().map(BigInt::from).collect() }),
        (-9i64..=9)
            .prop_filter("nonzero", |k| *k != 0)
            .prop_map(|k| LatticeExpr::Atom { kind: AtomKind::Gen, params: vec![BigInt::from(k)] }),
        (1i64..20).prop_map(|d| LatticeExpr::Atom { kind: AtomKind::Lambda2d, params: vec![BigInt::from(d)] }),
    ]
}

fn expr() -> impl Strategy<Value = LatticeExpr> {
    atom().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), 1u32..4).prop_map(|(e, k)| LatticeExpr::Power(Box::new(e), k)),
            prop::collection::vec(inner, 2..4).prop_map(LatticeExpr::Sum),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        prop_assert_eq!(parse_lattice_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn rank_matches_evaluation(e in expr()) {
        prop_assume!(e.rank() <= 200);
        prop_assert_eq!(e.eval().unwrap().rank(), e.rank());
    }

    #[test]
    fn garbage_never_yields_usage_or_partial_output(s in "[A-Za-z0-9()+^, -]{0,16}") {
        let r = quadlat(&["--json", "info", &s], "");
        prop_assert!(r.code == EXIT_OK || r.code == EXIT_DOMAIN);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        prop_assert_eq!(r.code == EXIT_DOMAIN, v.get("error").is_some());
    }
}
