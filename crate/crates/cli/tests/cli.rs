use std::process::{Command, Output};

use serde_json::Value;

fn lommel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lommel"))
        .args(args)
        .output()
        .expect("spawn lommel")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&lommel(&all))).unwrap()
}

#[test]
fn check_bessel_one_is_not_member() {
    let v = json(&["check", "--family", "bessel", "--nu", "1", "--class", "t-star"]);
    let sum = v["report"]["sum_value"].as_f64().unwrap();
    assert!((sum - 2.559_170_604_672_134_5).abs() < 1e-9, "{sum}");
    assert_eq!(v["report"]["verdict"], "not-member");
    let text = stdout(&lommel(&["check", "--family", "bessel", "--nu", "2", "--class", "t-star"]));
    assert!(text.contains("verdict      member"), "{text}");
}

#[test]
fn eval_at_origin() {
    let v = json(&["eval", "--family", "struve", "--nu", "2", "--z", "0", "--order", "0"]);
    assert_eq!(v["result"]["value"][0].as_f64(), Some(0.0));
    assert_eq!(v["result"]["value"][1].as_f64(), Some(0.0));
    let v = json(&["eval", "--family", "struve", "--nu", "2", "--z", "0", "--order", "1"]);
    assert_eq!(v["result"]["value"][0].as_f64(), Some(1.0));
}

#[test]
fn eval_modified_bessel_on_the_circle() {
    // s-type Bessel nu=0 at z = 1 sums 1/(k!)^2 = I0(2)
    let v = json(&[
        "eval", "--family", "bessel", "--nu", "0", "--z", "1", "--kernel", "s-type",
    ]);
    let value = v["result"]["value"][0].as_f64().unwrap();
    assert!((value - 2.279_585_302_336_067_3).abs() < 1e-12, "{value}");
}

#[test]
fn scan_csv_rows() {
    let text = stdout(&lommel(&[
        "scan", "--family", "bessel", "--nu", "0:5:1", "--class", "t-star", "--format", "csv",
    ]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,mu,nu,alpha,beta,class,sum_value,threshold,verdict");
    assert_eq!(lines.len(), 7);
    let verdicts: Vec<&str> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(
        verdicts,
        ["not-member", "not-member", "member", "member", "member", "member"]
    );
}

#[test]
fn scan_lommel_rectangle() {
    let text = stdout(&lommel(&[
        "scan", "--family", "lommel", "--mu", "0:1:0.5", "--nu", "0:1:0.5", "--class", "c",
        "--format", "csv",
    ]));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let args = ["scan", "--family", "struve", "--nu", "0:2:0.5", "--class", "c", "--format", "csv"];
    let direct = stdout(&lommel(&args));
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(stdout(&lommel(&with_file)).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--family", "bessel", "--nu", "1", "--class", "t-star", "--bogus"],
        vec!["check", "--family", "bessel", "--nu", "-1", "--class", "t-star"],
        vec!["check", "--family", "bessel", "--nu", "1", "--class", "nope"],
        vec!["check", "--family", "bessel", "--nu", "1", "--class", "t-star", "--alpha", "1"],
        vec!["check", "--family", "bessel", "--nu", "1", "--class", "t-star", "--kernel", "s-type"],
        vec!["check", "--family", "lommel", "--nu", "1", "--class", "t-star"],
        vec!["eval", "--family", "bessel", "--nu", "1", "--z", "1.5"],
        vec!["eval", "--family", "bessel", "--nu", "1", "--z", "0.5", "--order", "3"],
        vec!["bisect", "--family", "bessel", "--class", "t-star", "--bracket", "3:5"],
        vec!["check", "--family", "bessel", "--nu", "1", "--class", "t-star", "--format", "csv"],
        vec![
            "check", "--family", "bessel", "--nu", "1", "--class", "t-star", "--output",
            missing.to_str().unwrap(),
        ],
    ];
    for args in cases {
        let out = lommel(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn json_floats_round_trip() {
    let v = json(&["check", "--family", "lommel", "--mu", "0.3", "--nu", "0.7", "--class", "k"]);
    let text = stdout(&lommel(&[
        "check", "--family", "lommel", "--mu", "0.3", "--nu", "0.7", "--class", "k",
    ]));
    let sum = v["report"]["sum_value"].as_f64().unwrap();
    assert!(text.contains(&format!("sum          {sum}\n")), "{text}");
    let reparsed: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(reparsed, v);
}

#[test]
fn verify_never_contradicts_check() {
    for (family, nu, class) in [
        ("bessel", "1", "t-star"),
        ("bessel", "2", "t-star"),
        ("struve", "0", "c"),
        ("struve", "3", "c"),
        ("bessel", "0.5", "s-star"),
    ] {
        let base = ["--family", family, "--nu", nu, "--class", class];
        let checked = json(&[&["check"][..], &base].concat());
        let verified = json(&[
            &["verify"][..],
            &base,
            &["--radii", "12", "--angles", "64"],
        ]
        .concat());
        assert_eq!(checked["report"], verified["report"]["criterion"], "{base:?}");
        let flag = &verified["report"]["flag"]["status"];
        assert!(flag == "consistent" || flag == "report-only", "{base:?}: {flag}");
    }
}

#[test]
fn bisect_reports_threshold() {
    let v = json(&["bisect", "--family", "bessel", "--class", "t-star", "--bracket", "1:3"]);
    let nu = v["nu_star"].as_f64().unwrap();
    assert!((nu - 1.476_799_456_425_780_7).abs() < 1e-8, "{nu}");
    assert_eq!(v["monotone_check"], true);
}
