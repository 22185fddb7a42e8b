use std::io::Write;
use std::process::{Command, Output};

use eisenbasis::arith::{integer, rational};
use eisenbasis::cli::{BasisDocument, SeriesDocument};
use eisenbasis::eisenstein::eisenstein;
use eisenbasis::qseries::QSeries;
use tempfile::NamedTempFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eisenbasis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn delta(prec: usize) -> QSeries {
    let e4 = eisenstein(4, prec).unwrap().scale(&integer(240));
    let e6 = eisenstein(6, prec).unwrap().scale(&integer(-504));
    e4.multiply(&e4)
        .multiply(&e4)
        .add(&e6.multiply(&e6).scale(&integer(-1)))
        .unwrap()
        .scale(&rational(1, 1728))
}

fn document_file(doc: &SeriesDocument) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    serde_json::to_writer(&mut f, doc).unwrap();
    f.flush().unwrap();
    f
}

fn express(kind: &str, weight: u32, doc: &SeriesDocument) -> Output {
    let f = document_file(doc);
    run(&[
        "express",
        "--weight",
        &weight.to_string(),
        "--kind",
        kind,
        "--input",
        f.path().to_str().unwrap(),
    ])
}

#[test]
fn basis_weight_36_text() {
    let o = run(&["basis", "--weight", "36", "--kind", "new-m"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("G_"))
        .map(String::from)
        .collect();
    assert_eq!(names, ["G_36", "G_4*G_32", "G_8*G_28", "G_12*G_24"]);

    let o = run(&[
        "basis", "--weight", "36", "--kind", "new-s", "--format", "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("G_4*G_32 - 1479565184909325423/286310154497221833818240*G_36"));
    assert!(text.contains("G_8*G_28 - 651138973032093/122102860006168135010720*G_36"));
    assert!(text.contains("G_12*G_24 - 114819293577343/1149451061437375891652640*G_36"));
}

#[test]
fn basis_json_round_trips() {
    for kind in ["new-m", "new-s", "classical"] {
        let o = run(&[
            "basis", "--weight", "48", "--kind", kind, "--prec", "12", "--format", "json",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let doc: BasisDocument = serde_json::from_slice(&o.stdout).unwrap();
        let again = serde_json::to_string_pretty(&doc).unwrap();
        assert_eq!(again.trim_end(), stdout(&o).trim_end());
        let basis = doc.to_basis().unwrap();
        assert_eq!(BasisDocument::from(&basis), doc);
        for e in &doc.elements {
            assert_eq!(e.coefficients.len(), 12);
            for c in &e.coefficients {
                assert!(!c.starts_with('+') && !c.ends_with("/1"), "{c}");
            }
        }
    }
}

#[test]
fn empty_cusp_basis() {
    let o = run(&[
        "basis", "--weight", "4", "--kind", "new-s", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc: BasisDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc.elements.is_empty());
}

#[test]
fn verify_sweeps() {
    let o = run(&["verify", "--max-weight", "120"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let weights: Vec<u32> = out
        .lines()
        .filter_map(|l| l.strip_prefix("weight "))
        .map(|l| l.split(':').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(weights, (4..=120).step_by(2).collect::<Vec<_>>());
    assert!(out.lines().all(|l| !l.contains("FAIL")));

    let o = run(&["verify", "--max-weight", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().next().unwrap().contains("new-s 0/0 vacuous"));
}

#[test]
fn verify_reports_corrupted_basis() {
    let o = run(&["verify", "--max-weight", "40", "--inject-fault", "24"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let bad: Vec<&str> = out.lines().filter(|l| l.contains("FAIL")).collect();
    assert!(bad[0].starts_with("weight 24:"));
    assert!(out.lines().last().unwrap().contains("FAIL: 24"));

    // A one-element space gets a duplicate appended instead.
    let o = run(&["verify", "--max-weight", "8", "--inject-fault", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn express_discriminant() {
    let doc = SeriesDocument::from_series(&delta(20));
    let o = express("new-m", 12, &doc);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let coords: Vec<String> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(coords, ["-91/600", "2764/15"]);

    let o = express("new-s", 12, &doc);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let coords: Vec<String> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(coords, ["2764/15"]);
}

#[test]
fn express_basis_member() {
    let doc = SeriesDocument::from_series(&eisenstein(12, 20).unwrap());
    let o = express("new-m", 12, &doc);
    assert_eq!(o.status.code(), Some(0));
    let coords: Vec<String> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(coords, ["1", "0"]);
}

#[test]
fn express_tampered_constant_term() {
    let mut doc = SeriesDocument::from_series(&delta(20));
    doc.coefficients[0] = "1/7".into();
    let o = express("new-m", 12, &doc);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("a_0"), "{}", stderr(&o));
}

#[test]
fn express_tampered_tail_names_index() {
    let mut doc = SeriesDocument::from_series(&delta(20));
    doc.coefficients[13] = "5".into();
    let o = express("new-m", 12, &doc);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("a_13"), "{}", stderr(&o));
}

#[test]
fn express_input_errors() {
    let good = SeriesDocument::from_series(&delta(20));

    // weight mismatch with the flag
    assert_eq!(express("new-m", 16, &good).status.code(), Some(2));

    // too short for the verification window
    let short = SeriesDocument::from_series(&delta(11));
    assert_eq!(express("new-m", 12, &short).status.code(), Some(2));

    // precision field disagrees with the coefficient list
    let mut wrong_len = good.clone();
    wrong_len.precision = 21;
    assert_eq!(express("new-m", 12, &wrong_len).status.code(), Some(2));

    // non-canonical rational
    let mut sloppy = good.clone();
    sloppy.coefficients[1] = "2/2".into();
    assert_eq!(express("new-m", 12, &sloppy).status.code(), Some(2));

    // not JSON at all
    let mut f = NamedTempFile::new().unwrap();
    writeln!(f, "weight=12").unwrap();
    let o = run(&[
        "express",
        "--weight",
        "12",
        "--kind",
        "new-m",
        "--input",
        f.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&[
        "express",
        "--weight",
        "12",
        "--kind",
        "new-m",
        "--input",
        "/nonexistent/x.json",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dims_table() {
    let o = run(&["dims", "--max-weight", "400", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 199);
    let zero: Vec<u64> = rows
        .iter()
        .filter(|r| r["d_k"] == 0)
        .map(|r| r["weight"].as_u64().unwrap())
        .collect();
    assert_eq!(zero, [4, 6, 8, 10, 14]);
    assert_eq!(run(&["dims", "--weight", "2"]).status.code(), Some(2));
}
