use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bvlab::Report;

fn bvlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvlab")).args(args).env_remove("BVLAB_DEPTH_DEFAULT").output().expect("runs")
}

fn report(out: &Output) -> Report {
    Report::from_json(&String::from_utf8_lossy(&out.stdout)).expect("valid report")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

#[test]
fn aca_example() {
    let out = bvlab(&["gadget", "aca", "--h", "2:0,3:1", "--stage", "12", "--check-variation"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    let per_interval: Vec<&str> =
        rep.results.iter().filter(|r| r.claim.starts_with("V(f, I_")).map(|r| r.value.as_str()).collect();
    assert_eq!(per_interval, ["2/1", "1/1"]);
    assert!(rep.results.iter().all(|r| r.verdict == "pass"));
}

#[test]
fn compose_example() {
    let out = bvlab(&["measure", "compose", "--tree", "avoid-prefix:11", "--q", "1/4", "--n", "2", "--depth", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &report(&out).results[0];
    assert_eq!((row.value.as_str(), row.bound.as_deref()), ("15/16", Some("15/16")));
}

#[test]
fn witness_example() {
    let out = bvlab(&["deriv", "witness", "--K", "3", "--delta", "1/16", "--x", "3/8"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &report(&out).results[0];
    let slope: bvlab_core::Rational = row.value.parse().unwrap();
    assert!(slope >= bvlab_core::Rational::from(4));
    assert_eq!(row.verdict, "pass");
}

#[test]
fn exit_codes() {
    assert_eq!(bvlab(&["gadget", "frobnicate"]).status.code(), Some(64));
    assert_eq!(bvlab(&["gadget", "aca", "--h", "1:1,2:1"]).status.code(), Some(64));
    assert_eq!(bvlab(&["measure", "level"]).status.code(), Some(64));
    assert_eq!(bvlab(&["--help"]).status.code(), Some(0));
    assert_eq!(bvlab(&["--version"]).status.code(), Some(0));
    // the comb carries no jump, so the case-2 decoder reports a mismatch
    let out = bvlab(&["jordan", "decode-wkl", "--tree", "comb:3", "--depth", "8", "--case", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("bvlab: "));
    let out = bvlab(&["deriv", "alternation", "--f", "identity", "--n", "1", "--x", "1/2", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out).results[0].verdict, "undecided");
}

#[test]
fn depth_default_from_env() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_bvlab"));
        c.args(["measure", "level", "--tree", "full"]);
        match env {
            Some(v) => c.env("BVLAB_DEPTH_DEFAULT", v),
            None => c.env_remove("BVLAB_DEPTH_DEFAULT"),
        };
        report(&c.output().unwrap()).budget["depth"].clone()
    };
    assert_eq!(run(None), "12");
    assert_eq!(run(Some("5")), "5");
}

#[test]
fn csv_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mu.csv");
    let out = bvlab(&["measure", "level", "--tree", "avoid-prefix:11", "--depth", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(csv).unwrap(), "d,mu\n0,1/1\n1,1/1\n2,3/4\n3,3/4\n");
}

#[test]
fn exported_function_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.polyfun");
    let f = f.to_str().unwrap();
    let out = bvlab(&["gadget", "aca", "--h", "3:1", "--stage", "4", "--export", f]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(f).unwrap();
    assert!(text.starts_with("polyfun v1\n"));
    let tv = report(&out).results.iter().find(|r| r.claim.starts_with("total variation")).unwrap().value.clone();
    assert_eq!(tv, "1/1");
    // the exported graph feeds back in as a function
    let out = bvlab(&["jordan", "branch", "--f", f, "--m", "2", "--k", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let pres = dir.path().join("z.ratpres");
    let pres = pres.to_str().unwrap();
    let out = bvlab(&["jordan", "extract", "--f", f, "--m", "2", "--k", "60", "--export", pres]);
    assert_eq!(out.status.code(), Some(0));
    let out = bvlab(&["present", "validate", "--z", pres]);
    assert!(matches!(out.status.code(), Some(0) | Some(2)));
}

#[test]
fn samples_are_fresh() {
    let root = root();
    let list = std::fs::read_to_string(root.join("samples/commands.txt")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut kinds = 0;
    for line in list.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let (name, args) = line.split_once('|').unwrap();
        let csv = dir.path().join("out.csv");
        let mut argv: Vec<&str> = args.split_whitespace().collect();
        argv.extend(["--csv", csv.to_str().unwrap()]);
        let out = bvlab(&argv);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let json = std::fs::read(root.join(format!("samples/{name}.json"))).unwrap();
        assert!(out.stdout == json, "samples/{name}.json is stale; run scripts/samples.sh");
        let table = std::fs::read(root.join(format!("samples/{name}.csv"))).unwrap();
        assert!(std::fs::read(&csv).unwrap() == table, "samples/{name}.csv is stale");
        assert_eq!(report(&out).experiment, name);
        kinds += 1;
    }
    assert_eq!(kinds, 5);
}
