use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use gramlab::{separation_profile, SequenceFile};

fn gramlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn radii(json: &str) -> Vec<f64> {
    let file: SequenceFile = serde_json::from_str(json).unwrap();
    file.to_sequence()
        .unwrap()
        .points()
        .iter()
        .map(|p| p.modulus())
        .collect()
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

/// The analyze CSV as (quantity, index, p) -> value.
fn lookup(csv: &str, quantity: &str, p: &str) -> f64 {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|f| f[0] == quantity && f[2] == p)
        .unwrap_or_else(|| panic!("no row {quantity} p={p}"))[3]
        .parse()
        .unwrap()
}

#[test]
fn generate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = gramlab(
        &[
            "generate",
            "--family",
            "geometric",
            "--sigma",
            "0.5",
            "--count",
            "3",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(radii(&stdout(&out)), vec![0.5, 0.75, 0.875]);

    let out = gramlab(
        &["generate", "--family", "explicit", "--points", "0.3"],
        dir.path(),
    );
    assert_eq!(radii(&stdout(&out)), vec![0.3]);

    let out = gramlab(
        &[
            "generate",
            "--family",
            "supergeometric",
            "--sigma",
            "0.5",
            "--q",
            "2",
            "--count",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(radii(&stdout(&out)), vec![0.75, 0.9375, 0.99609375]);
}

#[test]
fn generate_rejects_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &[
            "generate",
            "--family",
            "geometric",
            "--sigma",
            "1.5",
            "--count",
            "3",
        ][..],
        &["generate", "--family", "geometric", "--count", "3"],
        &[
            "generate",
            "--family",
            "supergeometric",
            "--sigma",
            "0.5",
            "--q",
            "0.5",
            "--count",
            "3",
        ],
        &["generate", "--family", "nope"],
        &["generate", "--family", "explicit", "--points", "0.3,0.3"],
        &["generate", "--family", "explicit", "--points", "1.2"],
    ] {
        let out = gramlab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn generate_round_trips_delta_profile() {
    let dir = tempfile::tempdir().unwrap();
    for (k, flags) in [
        &["--family", "geometric", "--sigma", "0.7", "--count", "20"][..],
        &[
            "--family",
            "supergeometric",
            "--sigma",
            "0.5",
            "--q",
            "2",
            "--count",
            "12",
        ],
        &[
            "--family",
            "ratio-profile",
            "--sigma",
            "0.4",
            "--gamma",
            "1.5",
            "--count",
            "12",
            "--phases",
            "0,1,2,3,4,5,6,7,8,9,10,11",
        ],
    ]
    .iter()
    .enumerate()
    {
        let name = format!("s{k}.json");
        let mut args = vec!["generate"];
        args.extend_from_slice(flags);
        args.extend_from_slice(&["--out", &name]);
        assert!(gramlab(&args, dir.path()).status.success());
        let text = std::fs::read_to_string(dir.path().join(&name)).unwrap();
        let file: SequenceFile = serde_json::from_str(&text).unwrap();
        let seq = file.to_sequence().unwrap();
        // regenerate through the in-process API and compare profiles
        let mut spec_args = vec!["generate"];
        spec_args.extend_from_slice(flags);
        let again: SequenceFile =
            serde_json::from_str(&stdout(&gramlab(&spec_args, dir.path()))).unwrap();
        let (a, b) = (
            separation_profile(&seq).unwrap(),
            separation_profile(&again.to_sequence().unwrap()).unwrap(),
        );
        for (x, y) in a.log_delta.iter().zip(&b.log_delta) {
            assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
        }
        let out = gramlab(&["analyze", &name, "--p", "2"], dir.path());
        assert!(out.status.success());
        let csv = stdout(&out);
        for (j, d) in a.delta.iter().enumerate() {
            let row = csv
                .lines()
                .find(|l| l.starts_with(&format!("delta,{j},")))
                .unwrap();
            let v: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
            assert!((v - d).abs() <= 1e-15, "delta[{j}]: {v} vs {d}");
        }
    }
}

#[test]
fn analyze_examples() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "pair.json",
        r#"{"points":[{"re":0.0,"im":0.0},{"re":0.5,"im":0.0}]}"#,
    );
    let out = gramlab(&["analyze", "pair.json", "--p", "2,inf"], dir.path());
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("quantity,index,p,value\n"));
    assert!(!csv.contains('\r'));
    assert!((lookup(&csv, "schatten_norm", "2") - 1.224745).abs() < 1e-6);
    assert!((lookup(&csv, "m_lower_search", "") - (2.0 + 3f64.sqrt())).abs() < 1e-6);

    write(
        dir.path(),
        "one.json",
        r#"{"points":[{"re":0.3,"im":0.0}]}"#,
    );
    let csv = stdout(&gramlab(&["analyze", "one.json"], dir.path()));
    assert_eq!(lookup(&csv, "delta_min", ""), 1.0);
    for p in ["2", "3", "4", "inf"] {
        assert_eq!(lookup(&csv, "schatten_norm", p), 0.0);
    }

    let out = gramlab(&["analyze", "pair.json", "--format", "json"], dir.path());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(rows
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["quantity"] == "cond_g"));
}

#[test]
fn analyze_fifty_geometric_points() {
    let dir = tempfile::tempdir().unwrap();
    let gen = gramlab(
        &[
            "generate",
            "--family",
            "geometric",
            "--sigma",
            "0.5",
            "--count",
            "50",
            "--out",
            "g.json",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let start = Instant::now();
    let out = gramlab(&["analyze", "g.json"], dir.path());
    assert!(start.elapsed().as_secs_f64() < 5.0, "{:?}", start.elapsed());
    assert!(out.status.success());
    let csv = stdout(&out);
    assert_eq!(csv.lines().filter(|l| l.starts_with("delta,")).count(), 50);
    assert_eq!(
        csv.lines()
            .filter(|l| l.starts_with("schatten_norm,"))
            .count(),
        4
    );
}

#[test]
fn analyze_parse_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", "{ not json");
    assert_eq!(
        gramlab(&["analyze", "bad.json"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        gramlab(&["analyze", "missing.json"], dir.path())
            .status
            .code(),
        Some(2)
    );
    write(
        dir.path(),
        "pair.json",
        r#"{"points":[{"re":0.0,"im":0.0},{"re":0.5,"im":0.0}]}"#,
    );
    assert_eq!(
        gramlab(&["analyze", "pair.json", "--p", "0.5"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "pair.json",
        r#"{"points":[{"re":0.0,"im":0.0},{"re":0.5,"im":0.0}]}"#,
    );
    let out = gramlab(&["verify", "pair.json", "--out", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["fingerprint"]["n"], 2);

    write(dir.path(), "empty.json", r#"{"points":[]}"#);
    assert_eq!(
        gramlab(&["verify", "empty.json"], dir.path()).status.code(),
        Some(0)
    );

    write(
        dir.path(),
        "out.json",
        r#"{"points":[{"re":0.1,"im":0.0},{"re":0.9,"im":0.6}]}"#,
    );
    let out = gramlab(&["verify", "out.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("point 1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_csv_report() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "pair.json",
        r#"{"points":[{"re":0.0,"im":0.0},{"re":0.5,"im":0.0}]}"#,
    );
    let out = gramlab(
        &["verify", "pair.json", "--out", "r.csv", "--format", "csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("n,delta_min,p,schatten_norm,lp_norm,ratio,check,status,residual\n"));
    let band = csv
        .lines()
        .find(|l| l.contains(",const_band.p=2,"))
        .unwrap();
    assert!(band.contains("1.2247448713915"), "{band}");
}

#[test]
fn verify_suite_filter_and_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "pair.json",
        r#"{"points":[{"re":0.0,"im":0.0},{"re":0.5,"im":0.0}]}"#,
    );
    let out = gramlab(
        &["verify", "pair.json", "--suite", "identities"],
        dir.path(),
    );
    let text = stdout(&out);
    assert!(text.contains("koosis_identity") && !text.contains("tail_pairing"));
    assert_eq!(
        gramlab(&["verify", "pair.json", "--suite", "bogus"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gramlab(&["verify", "pair.json", "--tol", "-1"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn sweep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = gramlab(
        &[
            "sweep",
            "--family",
            "supergeometric",
            "--sigma",
            "0.5",
            "--q",
            "2",
            "--count",
            "4..12",
            "--p",
            "2",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = stdout(&out);
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    let col = |name: &str| {
        csv.lines()
            .next()
            .unwrap()
            .split(',')
            .position(|h| h == name)
            .unwrap()
    };
    let (ratio, sum) = (col("ratio"), col("sum_one_minus_delta_sq"));
    let ratios: Vec<f64> = rows.iter().map(|r| r[ratio].parse().unwrap()).collect();
    assert!(ratios.iter().all(|&r| r > 1.0 && r < 2.0), "{ratios:?}");
    let sums: Vec<f64> = rows.iter().map(|r| r[sum].parse().unwrap()).collect();
    assert!((sums[8] - sums[7]).abs() < 1e-12);

    let out = gramlab(
        &[
            "sweep",
            "--family",
            "geometric",
            "--sigma",
            "0.5",
            "--count",
            "4..40",
        ],
        dir.path(),
    );
    let csv = stdout(&out);
    let sums: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(sum).unwrap().parse().unwrap())
        .collect();
    // each added interior point contributes a fixed amount
    let steps: Vec<f64> = sums.windows(2).map(|w| w[1] - w[0]).collect();
    let last = *steps.last().unwrap();
    assert!(steps.iter().all(|s| *s > 0.5), "{steps:?}");
    assert!(
        steps[10..].iter().all(|s| (s - last).abs() < 1e-3),
        "{steps:?}"
    );

    let out = gramlab(
        &[
            "sweep",
            "--family",
            "geometric",
            "--sigma",
            "0.5",
            "--count",
            "7",
        ],
        dir.path(),
    );
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn sweep_rows_in_parameter_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = gramlab(
        &[
            "sweep",
            "--family",
            "supergeometric",
            "--sigma",
            "0.5,0.2",
            "--q",
            "3,2",
            "--count",
            "3..4",
            "--p",
            "inf,2",
        ],
        dir.path(),
    );
    let csv = stdout(&out);
    let keys: Vec<(String, String, String)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].into(), f[2].into(), f[3].into())
        })
        .collect();
    assert_eq!(keys.len(), 16);
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn sweep_invalid_ranges_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for count in ["5..3", "0..3", "a..b"] {
        let out = gramlab(
            &[
                "sweep",
                "--family",
                "geometric",
                "--sigma",
                "0.5",
                "--count",
                count,
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(2), "{count}");
    }
    let out = gramlab(
        &[
            "sweep",
            "--family",
            "supergeometric",
            "--sigma",
            "0.5",
            "--count",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}
