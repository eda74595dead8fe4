use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use lhtw::decomposition::{validate_std, validate_td};
use lhtw::derivations::two_section;
use lhtw::io;

const TRIANGLE_PENDANT: &str = "p htw 4 2\ne 1 2 3\ne 3 4\n";

fn lhtw(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lhtw"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn generated_cycle_power_dual_meets_its_bound() {
    let gen = lhtw(&["gen", "cycle-power-dual", "--n", "8", "--k", "2"], None);
    assert!(gen.status.success());
    let out = lhtw(&["bounds", "--exact"], Some(&stdout(&gen)));
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["bounds"]["thm13"]["value"], "7");
    assert_eq!(report["exact_tw"], 7);
    assert_eq!(report["equal"], true);
    assert_eq!(report["sandwich_ok"], true);
}

#[test]
fn stats_reads_a_file_or_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "h.txt", TRIANGLE_PENDANT);
    for (args, input) in [(vec!["stats", path.as_str()], None), (vec!["stats", "-"], Some(TRIANGLE_PENDANT))] {
        let out = lhtw(&args, input);
        assert!(out.status.success());
        let s: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!((s["n"].as_u64(), s["rank"].as_u64(), s["avg_rank"].as_str()), (Some(4), Some(3), Some("5/2")));
    }
}

#[test]
fn tw_and_stw_print_valid_certificates() {
    let h = io::parse_hypergraph(TRIANGLE_PENDANT).unwrap();

    let out = lhtw(&["tw"], Some(TRIANGLE_PENDANT));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("c width 2\n"));
    let td = io::parse_decomposition(&text).unwrap().tree_decomposition();
    assert!(validate_td(&two_section(&h), &td).is_valid());
    assert_eq!(td.width(), 2);

    let out = lhtw(&["stw"], Some(TRIANGLE_PENDANT));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("c width 2\n"));
    let std = io::parse_decomposition(&text).unwrap().supertree_decomposition().unwrap();
    assert!(validate_std(&h, &std).is_valid());
}

#[test]
fn convert_in_both_directions() {
    let dir = tempfile::tempdir().unwrap();
    let gen = lhtw(&["gen", "path-power-dual", "--n", "8", "--k", "2"], None);
    let htext = stdout(&gen);
    let h = io::parse_hypergraph(&htext).unwrap();
    let hpath = write(dir.path(), "h.txt", &htext);

    let td = stdout(&lhtw(&["tw", &hpath], None));
    let out = lhtw(&["convert", "td2std", "--hypergraph", &hpath], Some(&td));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let std = io::parse_decomposition(&stdout(&out)).unwrap().supertree_decomposition().unwrap();
    assert!(validate_std(&h, &std).is_valid());

    let std_path = write(dir.path(), "s.txt", &stdout(&lhtw(&["stw", &hpath], None)));
    let out = lhtw(&["convert", "std2td", "--hypergraph", &hpath, &std_path], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let back = io::parse_decomposition(&stdout(&out)).unwrap().tree_decomposition();
    assert!(validate_td(&two_section(&h), &back).is_valid());
}

#[test]
fn graph_dual_reads_its_source() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c6.txt", "p tw 6 6\n1 2\n2 3\n3 4\n4 5\n5 6\n1 6\n");
    let out = lhtw(&["gen", "graph-dual", "--graph", &g], None);
    assert!(out.status.success());
    let h = io::parse_hypergraph(&stdout(&out)).unwrap();
    assert_eq!((h.n(), h.m(), h.rank()), (6, 6, 2));
    assert_eq!(lhtw(&["gen", "graph-dual"], None).status.code(), Some(2));
}

#[test]
fn exit_codes_separate_bad_input_from_failed_checks() {
    let dir = tempfile::tempdir().unwrap();
    let hpath = write(dir.path(), "h.txt", TRIANGLE_PENDANT);

    assert_eq!(lhtw(&["tw", "/no/such/file"], None).status.code(), Some(2));
    assert_eq!(lhtw(&["stats"], Some("p htw 2 1\ne 1 5\n")).status.code(), Some(2));
    assert_eq!(lhtw(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(lhtw(&["gen", "nope", "--n", "4"], None).status.code(), Some(2));

    // Vertex 4 is never covered, so this is not a decomposition of [H]_2.
    let broken = "s td 1 3 4\nb 1 1 2 3\n";
    let out = lhtw(&["convert", "td2std", "--hypergraph", &hpath], Some(broken));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let out = lhtw(
        &["verify", "--suite", "bounds", "--max-n", "10", "--json", json.to_str().unwrap(), "--csv", csv.to_str().unwrap()],
        None,
    );
    assert!(out.status.success(), "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(report["rows"].as_array().unwrap().len() >= 100);
    let table = std::fs::read_to_string(&csv).unwrap();
    let header = table.lines().next().unwrap();
    assert!(header.starts_with("id,") && header.ends_with("elapsed_ms"));
    assert!(header.contains("exact_tw") && header.contains("pass"));
}

#[test]
fn verify_exit_code_matches_its_report() {
    for suite in ["appendix", "sharpness", "core"] {
        let out = lhtw(&["verify", "--suite", suite], None);
        let text = stdout(&out);
        let failed = text.lines().any(|l| l.starts_with("FAIL"));
        assert!(text.lines().filter(|l| l.starts_with("PASS")).count() > 0);
        assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }), "{suite}:\n{text}");
    }
}
