use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superswitch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn switch_curve_reads_five_eighths_at_one() {
    let (h, rows) = csv(&stdout(&[
        "curve",
        "--family",
        "depolarizing2",
        "--orders",
        "0",
        "--grid",
        "p:0:1:101",
    ]));
    assert_eq!(h, ["p", "channel", "switch"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1.0);
    assert_eq!(last[column(&h, "switch")], 0.625);
    assert_eq!(last[column(&h, "channel")], 0.5);
}

#[test]
fn documented_curve_grid_is_near_five_eighths_around_one() {
    let (h, rows) = csv(&stdout(&[
        "curve",
        "--family",
        "depolarizing2",
        "--orders",
        "0",
        "--grid",
        "p:0:1.3333:200",
    ]));
    assert_eq!(rows.len(), 200);
    let s = column(&h, "switch");
    let nearest = rows
        .iter()
        .min_by(|a, b| (a[0] - 1.0).abs().total_cmp(&(b[0] - 1.0).abs()))
        .unwrap();
    // slope of the switch curve at p = 1 is 1/4 and the grid step is < 0.007
    assert!((nearest[s] - 0.625).abs() < 0.25 * 0.007);
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        stdout(&[
            "curve",
            "--family",
            "delta",
            "--orders",
            "0..1",
            "--grid",
            "p:0:1:6",
            "--grid",
            "q:0:1:6",
            "--ensemble",
            "omega2",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    for path in [&r1, &r2] {
        stdout(&[
            "region",
            "--predicate",
            "ss1_improvement",
            "--samples",
            "30000",
            "--seed",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
}

#[test]
fn sequence_of_four_thirds() {
    let (h, rows) = csv(&stdout(&[
        "sequence",
        "--family",
        "depolarizing2",
        "--p",
        "1.33333",
        "--orders",
        "0..2",
    ]));
    assert_eq!(h, ["order", "value"]);
    let expected = [0.778, 0.753, 0.75004];
    for (row, e) in rows.iter().zip(expected) {
        assert!((row[1] - e).abs() <= 5e-4, "{row:?}");
    }
}

#[test]
fn sequence_json_keys_are_stable() {
    let text = stdout(&[
        "sequence", "--family", "q", "--p", "0.2", "--q", "0.3", "--orders", "0..1", "--format", "json",
    ]);
    let keys = [
        "\"family\"",
        "\"parameters\"",
        "\"ensemble\"",
        "\"orders\"",
        "\"values\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["values"].as_array().unwrap().len(), 2);
}

#[test]
fn region_json_reports_estimate() {
    let text = stdout(&[
        "region",
        "--predicate",
        "switch_gt_channel",
        "--samples",
        "50000",
        "--seed",
        "7",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let ratio = v["ratio_to_tetrahedron"].as_f64().unwrap();
    assert!((ratio - 0.555).abs() < 0.02);
    assert_eq!(v["samples"], 50000);
    assert_eq!(v["seed"], 7);
}

#[test]
fn region_points_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    stdout(&[
        "region",
        "--predicate",
        "switch_gt_channel",
        "--samples",
        "10000",
        "--points-out",
        pts.to_str().unwrap(),
    ]);
    let (h, rows) = csv(&std::fs::read_to_string(pts).unwrap());
    assert_eq!(h, ["p1", "p2", "p3"]);
    assert!(!rows.is_empty() && rows.len() < 10000);
    assert!(rows
        .iter()
        .all(|r| r.iter().sum::<f64>() <= 1.0 && r.iter().all(|x| *x >= 0.0)));
}

#[test]
fn multicopy_columns() {
    let (h, rows) = csv(&stdout(&["multicopy", "--grid", "p:0:1:11", "--copies", "3"]));
    assert_eq!(h, ["p", "switch", "multicopy1", "multicopy2", "multicopy3"]);
    let at_one = rows.last().unwrap();
    assert_eq!(at_one[1], 0.625);
    assert_eq!(at_one[2], 0.5);
}

#[test]
fn verify_passes() {
    let text = stdout(&["verify"]);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.contains(",PASS,")));
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["curve", "--family", "bogus", "--grid", "p:0:1:3"],
        &["curve", "--family", "depolarizing2", "--grid", "p:0:1:1"],
        &[
            "curve", "--family", "w", "--grid", "p:0:1:3", "--grid", "q:0:1:3", "--orders", "3",
        ],
        &["sequence", "--family", "q", "--p", "0.2"],
        &["region", "--predicate", "nonsense"],
        &["curve"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn branch_limit_exits_three() {
    let out = run(&[
        "sequence",
        "--vector",
        "0.4,0.1,0.2,0.3",
        "--orders",
        "5",
        "--max-branches",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
}
