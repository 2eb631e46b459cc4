use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use mwstems_cli::json::{parse_page, parse_stems};

fn mwstems(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwstems")).args(args).output().expect("binary runs")
}

fn text(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `(t, c, title)` of every dot in an SVG chart.
fn dots(svg: &str) -> Vec<(i32, i32, String)> {
    let mut out = Vec::new();
    for line in svg.lines().filter(|l| l.starts_with(r#"<circle class="dot""#)) {
        let attr = |k: &str| {
            let start = line.find(&format!(r#"{k}=""#)).unwrap() + k.len() + 2;
            line[start..].split('"').next().unwrap().to_string()
        };
        let title = line.split("<title>").nth(1).unwrap().split("</title>").next().unwrap();
        out.push((attr("data-t").parse().unwrap(), attr("data-c").parse().unwrap(), title.to_string()));
    }
    out.sort();
    out
}

#[test]
fn compute_then_chart() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("page.json");
    let o = mwstems(&["compute", "--field", "Q:5", "--t-max", "8", "--ss", "bockstein", "--page", "3", "--out", json.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let page = parse_page(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(page.ss, "bockstein");
    assert!(page.edges.iter().any(|e| e.kind == "d"));

    let svg1 = dir.path().join("a.svg");
    let svg2 = dir.path().join("b.svg");
    for svg in [&svg1, &svg2] {
        let o = mwstems(&["chart", json.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let a = std::fs::read(&svg1).unwrap();
    assert_eq!(a, std::fs::read(&svg2).unwrap(), "charts are deterministic");

    let mut want: Vec<_> = page
        .classes
        .iter()
        .map(|c| (c.t, c.c, c.repr.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")))
        .collect();
    want.sort();
    assert_eq!(dots(&String::from_utf8(a).unwrap()), want);
}

#[test]
fn svg_directly_from_compute() {
    let o = mwstems(&["compute", "--field", "C", "--t-max", "7", "--format", "svg"]);
    assert!(o.status.success());
    assert!(text(&o).starts_with("<svg"));
}

#[test]
fn stems_over_a_finite_field() {
    let o = mwstems(&["stems", "--field", "Fq:7", "--t-max", "8"]);
    assert!(o.status.success());
    let modules: BTreeMap<i32, String> = text(&o)
        .lines()
        .skip(2)
        .map(|l| {
            let mut w = l.split_whitespace();
            (w.next().unwrap().parse().unwrap(), w.next().unwrap().to_string())
        })
        .collect();
    let want = [(0, "W"), (1, "0"), (2, "0"), (3, "W"), (4, "W"), (5, "0"), (6, "0"), (7, "W"), (8, "W")];
    assert_eq!(modules, want.iter().map(|(t, m)| (*t, m.to_string())).collect());

    let o = mwstems(&["stems", "--field", "R", "--t-max", "8", "--format", "json"]);
    let stems = parse_stems(&text(&o)).unwrap();
    assert_eq!(stems.stems[3].module, "W/2^3");
    assert_eq!(stems.stems[7].module, "W/2^4");
    assert_eq!(stems.stems[4].module, "0", "M has no finite summands over R");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(mwstems(&["compute", "--field", "Fq:6"]).status.code(), Some(3));
    assert_eq!(mwstems(&["compute", "--field", "C", "--page", "1"]).status.code(), Some(2));
    assert_eq!(mwstems(&["compute", "--bogus"]).status.code(), Some(2));
    assert_eq!(mwstems(&["chart", "/nonexistent/page.json"]).status.code(), Some(4));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"v":7}"#).unwrap();
    assert_eq!(mwstems(&["chart", bad.to_str().unwrap()]).status.code(), Some(5));
    let big = dir.path().join("big.json");
    std::fs::write(
        &big,
        r#"{"v":1,"field":"C","ss":"adams","page":"inf","window":{"t_max":1000,"c_max":3},"classes":[],"edges":[]}"#,
    )
    .unwrap();
    assert_eq!(mwstems(&["chart", big.to_str().unwrap()]).status.code(), Some(6));
    assert_eq!(mwstems(&["verify", "--suite", "other"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mw.conf");
    std::fs::write(&cfg, "field = Fq:5\nt_max = 4\nss = bockstein\npage = inf\n").unwrap();
    let c = cfg.to_str().unwrap();
    let page = parse_page(&text(&mwstems(&["--config", c, "compute"]))).unwrap();
    assert_eq!((page.field.as_str(), page.ss.as_str(), page.window.t_max), ("Fq:5", "bockstein", 4));
    let page = parse_page(&text(&mwstems(&["compute", "--config", c, "--field", "R", "--ss", "adams"]))).unwrap();
    assert_eq!((page.field.as_str(), page.ss.as_str(), page.window.t_max), ("R", "adams", 4));

    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(mwstems(&["--config", c, "compute"]).status.code(), Some(2));
    assert_eq!(mwstems(&["--config", Path::new("/nonexistent").to_str().unwrap(), "compute"]).status.code(), Some(4));
}

#[test]
fn verify_suite_passes() {
    let o = mwstems(&["verify"]);
    let out = text(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 8, "{out}");
    assert!(o.status.success());
}
