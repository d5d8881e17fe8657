use nilcx::scalars::{rat, Assignment, Param};
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn nlf(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../nlf").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("stdout is one JSON document")
    }

    fn status(&self) -> String {
        self.json()["status"].as_str().unwrap().to_string()
    }
}

fn nilcx(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_nilcx")).args(args).current_dir(nlf("")).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

#[test]
fn jacobi_holds_on_the_family() {
    let r = nilcx(&["check-jacobi", "g_ab.nlf"]);
    assert_eq!((r.code, r.status().as_str()), (0, "holds"));
    assert!(r.stdout.starts_with(r#"{"command":"check-jacobi","#));
    assert!(r.stderr.is_empty());
}

#[test]
fn failing_jacobi_reports_first_residual() {
    let r = nilcx(&["check-jacobi", "bad_jacobi.nlf"]);
    assert_eq!((r.code, r.status().as_str()), (1, "fails"));
    let w = &r.json()["witnesses"][0];
    assert_eq!(w["label"], "d(d e6)");
    assert_eq!(w["form"]["text"], "e1^e2^e5");
}

#[test]
fn betti_numbers_at_a_point() {
    let r = nilcx(&["betti", "g_ab.nlf", "--set", "a=1", "b=1", "--max", "4"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains(r#""result":[3,4,7,10]"#));
    let repeated = nilcx(&["betti", "g_ab.nlf", "--set", "a=1", "--set", "b=1", "--max", "4"]);
    assert_eq!(repeated.json()["result"], r.json()["result"]);
}

#[test]
fn balanced_metric_on_the_whole_family() {
    let r = nilcx(&["metric", "x_a.nlf", "--form", "Fa.nlf", "--test", "balanced"]);
    assert_eq!((r.code, r.status().as_str()), (0, "holds"));
    let minors = &r.json()["result"]["positivity"]["minors"];
    assert_eq!(minors[3], "(1/16)*a");
}

#[test]
fn gauduchon_metric_is_not_balanced() {
    let r =
        nilcx(&["metric", "x_a.nlf", "--form", "F.nlf", "--set", "a=1", "--test", "gauduchon:1", "--test", "balanced"]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["result"]["conditions"]["gauduchon:1"], true);
    assert_eq!(v["result"]["conditions"]["balanced"], false);
    assert_eq!(v["witnesses"][0]["condition"], "balanced");
}

#[test]
fn sweep_holds_only_if_every_sample_holds() {
    let r = nilcx(&["classify", "g_ab.nlf", "--set", "b=1", "--sample", "a=0,1,2,5/3"]);
    assert_eq!(r.code, 0);
    let values = &r.json()["result"]["sample"]["values"];
    assert_eq!(values.as_array().unwrap().len(), 4);
    assert_eq!(values[3]["at"]["a"], "5/3");

    let torus = nilcx(&["symplectic", "torus8.nlf", "--sample", "a=0,1"]);
    assert_eq!((torus.code, torus.status().as_str()), (1, "fails"));
}

#[test]
fn symplectic_obstruction() {
    let r = nilcx(&["symplectic", "g_ab.nlf", "--set", "a=5/3", "b=1"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["result"]["monomials_checked"], 20);
    let torus = nilcx(&["symplectic", "torus8.nlf"]);
    assert_eq!(torus.code, 1);
    assert_eq!(torus.json()["witnesses"][0]["label"], "class");
}

#[test]
fn isomorphism_commands() {
    assert_eq!(nilcx(&["iso", "--src-set", "a=1", "b=1", "--dst-set", "a=-2", "b=2"]).code, 0);
    let no = nilcx(&["iso", "--src-set", "a=1", "b=1", "--dst-set", "a=2", "b=1"]);
    assert_eq!(no.code, 1);
    assert_eq!(no.json()["witnesses"][0].as_array().unwrap().len(), 2);
    let c = nilcx(&["canonicalize", "--set", "a=-3", "b=2"]);
    assert_eq!(c.json()["result"]["representative"], "g_{3/2,1}");
    let m = nilcx(&[
        "morphism",
        "flip.nlf",
        "--src",
        "g_ab.nlf",
        "--dst",
        "g_ab.nlf",
        "--src-set",
        "a=1",
        "b=1",
        "--dst-set",
        "a=-1",
        "b=1",
    ]);
    assert_eq!((m.code, m.json()["result"]["isomorphism"].clone()), (0, Value::Bool(true)));
    let bad = nilcx(&["morphism", "flip.nlf", "--src", "g_ab.nlf", "--dst", "g_ab.nlf", "--set", "a=1", "b=1"]);
    assert_eq!(bad.code, 1);
    assert!(bad.json()["witnesses"][0]["label"].as_str().unwrap().starts_with("residual"));
    assert_eq!(nilcx(&["lemma36", "--src-set", "a=1", "b=1", "--dst-set", "a=-2", "b=2"]).code, 0);
}

#[test]
fn catalog_exports_parseable_documents() {
    let list = nilcx(&["catalog"]);
    assert_eq!(list.json()["result"].as_array().unwrap().len(), 9);
    let r = nilcx(&["catalog", "g_ab_real", "--set", "a=1", "b=1"]);
    let text = r.json()["result"]["document"].as_str().unwrap().to_string();
    let doc = nilcx::dsl::parse(&text).unwrap();
    let shipped = nilcx::dsl::parse(&std::fs::read_to_string(nlf("g_ab.nlf")).unwrap()).unwrap();
    let point = Assignment::new().with(Param::A, rat(1, 1)).with(Param::B, rat(1, 1));
    assert_eq!(
        doc.presentation().unwrap().differential(),
        shipped.specialize(&point).presentation().unwrap().differential()
    );
}

#[test]
fn errors_exit_two_with_a_report() {
    let missing = nilcx(&["check-jacobi", "missing.nlf"]);
    assert_eq!((missing.code, missing.status().as_str()), (2, "error"));
    assert!(!missing.stderr.is_empty());

    let path = std::env::temp_dir().join(format!("nilcx-bad-{}.nlf", std::process::id()));
    std::fs::write(&path, "frame real 8\nd e4 = e1^e9\n").unwrap();
    let bad = nilcx(&["check-jacobi", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(bad.code, 2);
    let v = bad.json();
    assert_eq!(v["result"]["error"], "BadDimension");
    assert_eq!(v["result"]["detail"]["line"], 2);
    assert_eq!(v["result"]["detail"]["token"], "e9");

    let symbolic = nilcx(&["betti", "g_ab.nlf"]);
    assert_eq!(symbolic.json()["result"]["error"], "SymbolicParameters");
    assert_eq!(nilcx(&["no-such-command"]).code, 2);
    assert_eq!(nilcx(&["series", "g_ab.nlf", "--set", "a=x"]).code, 2);
}

#[test]
fn reports_are_byte_deterministic_and_sorted() {
    for args in [
        &["metric", "x_a.nlf", "--form", "F.nlf", "--set", "a=1"][..],
        &["cohomology", "g_ab.nlf", "--set", "a=2", "b=1", "--max", "3"][..],
        &["classify", "g_ab.nlf", "--set", "b=1", "--sample", "a=0,5/3"][..],
    ] {
        let first = nilcx(args);
        let second = nilcx(args);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(serde_json::to_string(&first.json()).unwrap() + "\n", first.stdout);
    }
    let a = nilcx(&["betti", "g_ab.nlf", "--set", "a=1", "b=1"]);
    let b = nilcx(&["betti", "g_ab.nlf", "--set", "a=2", "b=1"]);
    assert_ne!(a.json()["inputs_digest"], b.json()["inputs_digest"]);
}
