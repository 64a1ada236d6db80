use std::path::PathBuf;
use std::process::{Command, Output};

use invariants::InvError;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodge-witt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", stdout(o)))
}

/// A fresh directory of spec files for one test.
struct Specs(PathBuf);

impl Specs {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("hodge-witt-cli-{}-{tag}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Specs(dir)
    }

    fn write(&self, name: &str, body: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, body).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn block(&self, name: &str, p: u64, block: &str) -> String {
        self.write(name, &format!(r#"{{"p":{p},"object":[{{"block":{block}}}]}}"#))
    }

    fn projective(&self, p: u64, n: i64) -> String {
        let parts: Vec<String> =
            (0..=n).map(|i| format!(r#"{{"block":{{"kind":"UnitW"}},"shift":[{},{}]}}"#, -i, -i)).collect();
        self.write(&format!("p{n}.json"), &format!(r#"{{"p":{p},"object":[{}]}}"#, parts.join(",")))
    }
}

impl Drop for Specs {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn invariants_of_u0() {
    let d = Specs::new("u0");
    let u0 = d.block("u0.json", 3, r#"{"kind":"Domino","t":0}"#);
    let o = run(&["invariants", &u0]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["T"]["0,0"], 1);
    assert_eq!(v["hW"]["0,0"], 1);
    assert_eq!(v["hW"]["1,-1"], -2);
}

#[test]
fn spec_on_stdin() {
    use std::io::Write as _;
    use std::process::Stdio;
    let mut child = bin().args(["invariants", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(br#"{"p":2,"object":[{"block":{"kind":"UnitW"}}]}"#).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["hW"]["0,0"], 1);
}

#[test]
fn json_output_is_deterministic() {
    let d = Specs::new("det");
    let e = d.block("e.json", 3, r#"{"kind":"Dieudonne","i":1,"j":1}"#);
    for args in [vec!["invariants", e.as_str()], vec!["--p", "3", "report"]] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn projective_space_markdown_and_check() {
    let d = Specs::new("pn");
    let p4 = d.projective(2, 4);
    let o = run(&["--format", "md", "invariants", &p4]);
    assert_eq!(o.status.code(), Some(0));
    let md = stdout(&o);
    assert!(md.contains("| 4 | 0 | 0 | 0 | 0 | 1 |"), "{md}");
    assert!(md.contains("| 0 | 1 | 0 | 0 | 0 | 0 |"), "{md}");
    let o = run(&["check", &p4, "--dim", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["symmetry"]["dim"], 4);
    // the wrong dimension breaks Serre symmetry
    let o = run(&["check", &p4, "--dim", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn star_products() {
    let d = Specs::new("star");
    let w = d.block("w.json", 3, r#"{"kind":"UnitW"}"#);
    let u0 = d.block("u0.json", 3, r#"{"kind":"Domino","t":0}"#);
    let k = d.block("k.json", 3, r#"{"kind":"ResidueK"}"#);
    let e = d.block("e.json", 3, r#"{"kind":"Dieudonne","i":1,"j":1}"#);
    let da = d.block("da.json", 3, r#"{"kind":"DAlphaP"}"#);

    let o = run(&["--precision", "3", "--vdepth", "8", "star", &w, &u0]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["identified"], "U_0");

    let o = run(&["--precision", "3", "--vdepth", "8", "star", &k, &e, "--closed"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["exponents"]["0"], serde_json::json!([1, 1]));
    assert_eq!(v["closed_form_lengths"]["0"], 2);

    let o = run(&["--precision", "2", "--vdepth", "6", "--format", "md", "star", &e, &da, "--derived"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("H^-1: U_-1, H^0: U_1"));

    // neither factor has bijective F
    let o = run(&["--precision", "2", "--vdepth", "4", "star", &e, &da, "--closed"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("closed form inapplicable"));

    // derived star needs a Dieudonne block on the left
    let o = run(&["--precision", "2", "--vdepth", "4", "star", &da, &da, "--derived"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn report_modes() {
    let o = run(&["report"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["hW"]["1,2"], -2);
    assert_eq!(v["hW"]["0,3"], 1);
    assert_eq!(v["hW"]["3,0"], 0);
    assert_eq!(v["watermark"], Value::Null);
    assert!(v["provenance"].as_str().unwrap().contains("nonsplit"));

    let o = run(&["--p", "5", "report", "--mode", "split"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["watermark"], "counterfactual");
    assert_eq!(v["hW"]["1,2"], -2);

    let o = run(&["--p", "3", "--format", "md", "report", "--mode", "split"]);
    assert!(stdout(&o).contains("COUNTERFACTUAL"));
}

#[test]
fn exit_codes() {
    let d = Specs::new("exit");
    let bad = d.write("bad.json", "{bad");
    let w = d.block("w.json", 3, r#"{"kind":"UnitW"}"#);

    let o = run(&["report", "--degree-bound", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not certified"));

    for args in [
        vec!["invariants", bad.as_str()],
        vec!["report", "--mode", "bogus"],
        vec!["--p", "4", "report"],
        vec!["--p", "2", "invariants", w.as_str()],
        vec!["--precision", "0", "invariants", w.as_str()],
        vec!["--vdepth", "1000", "invariants", w.as_str()],
        vec!["frobnicate"],
        vec!["star", w.as_str()],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }

    let missing = d.0.join("missing.json");
    let o = run(&["invariants", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let e = cli::CliError::from(InvError::Unstable { what: "T".into(), lo: (2, 4), hi: (3, 5) });
    assert_eq!(e.code(), cli::EXIT_UNSTABLE);
    assert_eq!(e.code(), 3);
}
