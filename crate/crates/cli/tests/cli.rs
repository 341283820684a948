//! Golden-file and exit-code tests for the `p4` binary. Set
//! `P4_UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::Command;

use p4_core::catalog;
use p4_core::TensorFile;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    root().join("data").join(format!("{name}.json")).display().to_string()
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn p4(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_p4"))
        .args(args)
        .env_remove("P4_SEED")
        .env_remove("P4_SAMPLES")
        .output()
        .expect("p4 runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn json(r: &Run) -> serde_json::Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

fn golden_cases() -> Vec<(&'static str, Vec<String>, i32)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        ("check_example2", s(&["check", &data("example2-linear")]), 0),
        ("check_quadratic_k", s(&["check", &data("quadratic-k")]), 1),
        ("modular_quadratic_k", s(&["modular", &data("quadratic-k")]), 0),
        ("rank_example2", s(&["rank", &data("example2-linear"), "-p", "0,0,0,5"]), 0),
        ("region_example2", s(&["region", "example2-linear", "-p", "-1,0,0,0"]), 0),
        ("bracket_canonical", s(&["bracket", "canonical-symplectic", "-f", "x1", "-g", "x2"]), 0),
        ("ham_example2", s(&["ham", "example2-linear", "-H", "x2"]), 0),
        ("casimir_sphere", s(&["casimir", "rank2-gradient", "-k", "x1^2 + x2^2 + x3^2"]), 0),
        ("casimir_not", s(&["casimir", "rank2-gradient", "-k", "x1"]), 1),
        (
            "decompose_fg",
            s(&["decompose", "canonical-symplectic", "--method", "fg", "--f", "x1", "--g", "x2"]),
            0,
        ),
        ("decompose_modular", s(&["decompose", "example2-linear", "--method", "modular"]), 0),
        ("map_rotation", s(&["map", "canonical-symplectic", "--S", "x2,-x1,x3", "--h", "y"]), 0),
        ("map_not_poisson", s(&["map", "canonical-symplectic", "--S", "2*x1,x2,x3", "--h", "y"]), 1),
        ("pvf_example2", s(&["pvf", "example2-linear", "--W", "0,0,0", "--b", "1"]), 0),
        (
            "tangent_pvf_rank2",
            s(&["tangent-pvf", "rank2-gradient", "--alpha", "0,0,1", "--g", "0"]),
            0,
        ),
        ("family_liouville", s(&["family", "liouville", "--f=-x2", "--sigma", "0,0,x1"]), 0),
        ("family_two_casimir", s(&["family", "two-casimir", "--k1", "x1", "--k2", "x2 + y"]), 0),
        (
            "flow_sphere",
            s(&[
                "flow",
                "rank2-gradient",
                "-H",
                "x1",
                "-p",
                "0,1,0,0",
                "-t",
                "1",
                "--dt",
                "0.01",
                "--check",
                "x1^2 + x2^2 + x3^2,y",
            ]),
            0,
        ),
        ("catalog_list", s(&["catalog", "list"]), 0),
        ("catalog_show_quadratic_k", s(&["catalog", "show", "quadratic-k"]), 0),
        ("catalog_run_example2", s(&["catalog", "run", "example2-linear"]), 0),
        ("catalog_run_quadratic_k", s(&["catalog", "run", "quadratic-k"]), 0),
        ("audit_a6_a9", s(&["audit", "--identities", "A6,A9", "--corpus-size", "2"]), 0),
    ]
}

/// Paths inside the output are made relative to the repository root.
fn normalize(s: &str) -> String {
    s.replace(&root().display().to_string(), "<root>")
}

#[test]
fn golden_outputs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var("P4_UPDATE_GOLDEN").is_ok();
    for (name, args, code) in golden_cases() {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let r = p4(&refs);
        assert_eq!(r.code, code, "{name}: {}", r.stderr);
        let got = normalize(&r.stdout);
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &got).unwrap();
        } else {
            let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(got, want, "{name}");
        }
    }
}

#[test]
fn identical_argv_gives_identical_stdout() {
    for args in [
        vec!["catalog", "run", "--all"],
        vec!["check", "quadratic-k"],
        vec!["audit", "--identities", "A3,A15", "--corpus-size", "3"],
    ] {
        let (a, b) = (p4(&args), p4(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn output_keys_are_sorted() {
    fn sorted(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Object(m) => {
                let keys: Vec<&String> = m.keys().collect();
                keys.windows(2).all(|w| w[0] < w[1]) && m.values().all(sorted)
            }
            serde_json::Value::Array(a) => a.iter().all(sorted),
            _ => true,
        }
    }
    let r = p4(&["catalog", "run", "--all"]);
    assert!(r.stdout.find("\"entries\"").unwrap() < r.stdout.find("\"passes\"").unwrap());
    assert!(sorted(&json(&r)));
}

#[test]
fn data_files_match_the_catalog() {
    for e in catalog::entries() {
        let path = data(e.name());
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, e.file.to_json(), "{path}");
        let loaded = TensorFile::load(&path).unwrap();
        assert_eq!(loaded, e.file);
    }
}

#[test]
fn file_and_catalog_name_agree() {
    for name in ["example2-linear", "quadratic-k"] {
        let a = p4(&["check", name]);
        let b = p4(&["check", &data(name)]);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["bogus"],
        &["check"],
        &["check", "no-such-entry"],
        &["check", "missing/file.json"],
        &["rank", "example2-linear", "-p", "1,2,3"],
        &["rank", "example2-linear", "-p", "a,b,c,d"],
        &["casimir", "example2-linear", "-k", "x1 +"],
        &["bracket", "example2-linear", "-f", "z", "-g", "x1"],
        &["decompose", "example2-linear", "--method", "fg"],
        &["audit", "--identities", "A99"],
        &["catalog", "show", "nope"],
        &["catalog", "run"],
        &["family", "linear", "--M", "1,1,0;0,0,0;0,0,0", "--N", "0,0,0;0,0,0;0,0,0"],
    ];
    for args in cases {
        let r = p4(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stdout);
        assert!(r.stdout.is_empty(), "{args:?}");
        assert!(!r.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn invalid_tensor_file_exits_2() {
    let dir = std::env::temp_dir().join(format!("p4-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name":"b","psi":["x1","0"],"phi":["0","0","0"]}"#).unwrap();
    let r = p4(&["check", bad.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn computation_failures_exit_1() {
    // {x1, x1} vanishes, so the fg decomposition has no divisor.
    let r = p4(&["decompose", "canonical-symplectic", "--method", "fg", "--f", "x1", "--g", "x1"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
}

#[test]
fn family_out_writes_a_loadable_file() {
    let dir = std::env::temp_dir().join(format!("p4-family-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let r = p4(&[
        "family",
        "two-casimir",
        "--k1",
        "x1 + y",
        "--k2",
        "x2",
        "--name",
        "s",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let f = TensorFile::load(&path).unwrap();
    assert_eq!(f.name, "s");
    let c = p4(&["check", path.to_str().unwrap()]);
    assert_eq!(json(&c)["is_poisson"], "symbolic_zero");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seed_override_moves_the_witness() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_p4"));
        cmd.args(["check", "quadratic-k"]).env_remove("P4_SAMPLES");
        match seed {
            Some(s) => cmd.env("P4_SEED", s),
            None => cmd.env_remove("P4_SEED"),
        };
        let out = cmd.output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["verdict"]["witness"].clone()
    };
    assert_eq!(run(None), run(Some("0x9E3779B97F4A7C15")));
    assert_ne!(run(None), run(Some("7")));
}

#[test]
fn pretty_output_is_text() {
    let r = p4(&["--pretty", "modular", "quadratic-k"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("paper_discrepancy: true"));
    assert!(r.stdout.contains("w: [-2*x1, -x2, x1 + 2*x3]"), "{}", r.stdout);
}
