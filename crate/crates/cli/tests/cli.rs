use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ksrd::instances::parse_edge_list;
use ksrd::{brute_force_optimum, OracleBudget};

const FIG1: &str = "5 5\n0 1\n1 2\n2 0\n2 3\n1 4\n";

fn ksrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksrd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn records(out: &Output) -> Vec<serde_json::Value> {
    stdout(out)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v.get("objective").is_some())
        .collect()
}

#[test]
fn solve_figure_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig1.txt", FIG1);
    let inst = inst.to_str().unwrap();
    let out = ksrd(&[
        "solve",
        "--instance",
        inst,
        "--k",
        "3",
        "--runs",
        "10",
        "--max-iters",
        "300",
        "--summary",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let recs = records(&out);
    assert_eq!(recs.len(), 10);
    for (i, r) in recs.iter().enumerate() {
        assert_eq!(r["objective"], 5);
        assert_eq!(r["seed"], i as u64);
        assert_eq!(r["non_defended"], 0);
        let sum: u64 = r["labels"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| l.as_u64().unwrap())
            .sum();
        assert_eq!(sum, 5);
    }
    let summary: serde_json::Value =
        serde_json::from_str(stdout(&out).lines().last().unwrap()).unwrap();
    assert_eq!(summary["mean_obj"], 5.0);
    assert_eq!(summary["sigma_pct"], 0.0);
    assert_eq!(summary["runs"], 10);

    let out = ksrd(&["solve", "--instance", inst, "--k", "3", "--algo", "greedy"]);
    assert!(out.status.success());
    assert_eq!(records(&out)[0]["objective"], 5);
    assert_eq!(
        records(&out)[0]["labels"],
        serde_json::json!([0, 4, 0, 1, 0])
    );
}

#[test]
fn solve_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig1.txt", FIG1);
    let inst = inst.to_str().unwrap();
    let out = ksrd(&["solve", "--instance", inst, "--k", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k exceeds n"));
    let out = ksrd(&["solve", "--instance", "/nonexistent/x.txt", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ksrd(&[
        "solve",
        "--instance",
        inst,
        "--k",
        "2",
        "--move-prob",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = ksrd(&["solve", "--instance", inst, "--k", "two"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig1.txt", FIG1);
    let inst = inst.to_str().unwrap();

    let out = ksrd(&[
        "verify",
        "--instance",
        inst,
        "--k",
        "3",
        "--labels",
        "1,0,2,1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["feasible"], true);
    assert_eq!(report["non_defended"], 0);

    let out = ksrd(&[
        "verify",
        "--instance",
        inst,
        "--k",
        "3",
        "--labels",
        "0,0,3,0,1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["first_failing"], serde_json::json!([0, 1, 3]));

    let labels = write(dir.path(), "labels.txt", "[1, 0, 2, 1, 1]\n");
    let out = ksrd(&[
        "verify",
        "--instance",
        inst,
        "--k",
        "3",
        "--labels",
        labels.to_str().unwrap(),
        "--mode",
        "quasi",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = ksrd(&[
        "verify",
        "--instance",
        inst,
        "--k",
        "3",
        "--labels",
        "0,0,9,0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds cap 4"));
    let out = ksrd(&[
        "verify",
        "--instance",
        inst,
        "--k",
        "3",
        "--labels",
        "1,0,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unit_disc_generation_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = ksrd(&[
            "gen",
            "unit-disc",
            "--n",
            "100",
            "--radius",
            "0.6",
            "--seed",
            "1",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let g = parse_edge_list(std::str::from_utf8(&ta).unwrap()).unwrap();
    assert_eq!(g.n(), 100);

    let out = ksrd(&["gen", "unit-disc", "--n", "10", "--radius", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

const TWO_SQUARES: &str = r#"{"type":"FeatureCollection","features":[
 {"type":"Feature","properties":{"name":"west"},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},
 {"type":"Feature","properties":{"name":"east"},"geometry":{"type":"Polygon","coordinates":[[[1,1],[2,1],[2,2],[1,2],[1,1]]]}}
]}"#;

#[test]
fn geojson_corner_contact() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "squares.geojson", TWO_SQUARES);
    let out_path = dir.path().join("squares.txt");
    let out = ksrd(&[
        "gen",
        "from-geojson",
        src.to_str().unwrap(),
        "--id-property",
        "name",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), "2 1\n0 1\n");
    let sidecar = std::fs::read_to_string(dir.path().join("squares.txt.regions.csv")).unwrap();
    assert_eq!(
        sidecar,
        "node,region,centroid_x,centroid_y\n0,west,0.5,0.5\n1,east,1.5,1.5\n"
    );

    let out = ksrd(&["gen", "from-geojson", src.to_str().unwrap()]);
    assert_eq!(stdout(&out), "2 1\n0 1\n");
    let bad = write(
        dir.path(),
        "bad.geojson",
        "{\"type\":\"FeatureCollection\"}",
    );
    assert_eq!(
        ksrd(&["gen", "from-geojson", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

fn parse_csv(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn bench_exact_on_figure_instance() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "fig1.txt", FIG1);
    let manifest = write(
        dir.path(),
        "manifest.csv",
        "instance,k,runs,time_limit,algo\nfig1.txt,2,1,10,exact\nfig1.txt,3,1,10,exact\n",
    );
    let out = ksrd(&["bench", "--manifest", manifest.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = parse_csv(&stdout(&out));
    assert_eq!(
        rows[0].join(","),
        "instance,n,k,algo,mean_obj,sigma_pct,mean_t_best,runs,seed_base"
    );
    let g = parse_edge_list(FIG1).unwrap();
    let gamma2 = brute_force_optimum(&g, 2, 5, &OracleBudget::default())
        .unwrap()
        .0;
    assert_eq!(
        rows[1][..5],
        ["fig1", "5", "2", "exact", &format!("{gamma2}.0")]
    );
    assert_eq!(rows[2][..5], ["fig1", "5", "3", "exact", "5.0"]);
    assert_eq!(rows.len(), 3);
}

#[test]
fn bench_empty_manifest() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["", "instance,k,runs,time_limit\n"] {
        let manifest = write(dir.path(), "m.csv", text);
        let out = ksrd(&["bench", "--manifest", manifest.to_str().unwrap()]);
        assert!(out.status.success());
        assert_eq!(
            stdout(&out),
            "instance,n,k,algo,mean_obj,sigma_pct,mean_t_best,runs,seed_base\n"
        );
    }
    let manifest = write(
        dir.path(),
        "m.csv",
        "instance,k,runs,time_limit\nmissing.txt,2,1,1\n",
    );
    assert_eq!(
        ksrd(&["bench", "--manifest", manifest.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

fn without_column(csv: &str, col: usize) -> Vec<Vec<String>> {
    let mut rows = parse_csv(csv);
    for row in &mut rows {
        row.remove(col);
    }
    rows
}

#[test]
fn bench_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "fig1.txt", FIG1);
    let ud = dir.path().join("ud.txt");
    ksrd(&[
        "gen",
        "unit-disc",
        "--n",
        "20",
        "--radius",
        "0.35",
        "--seed",
        "3",
        "--output",
        ud.to_str().unwrap(),
    ]);
    let manifest = write(
        dir.path(),
        "manifest.csv",
        "instance,k,runs,time_limit,algo,max_iters\nfig1.txt,2,4,60,vns,100\nud.txt,3,4,60,vns,100\nud.txt,2,2,60,greedy,\n",
    );
    let m = manifest.to_str().unwrap();
    let one = stdout(&ksrd(&[
        "bench",
        "--manifest",
        m,
        "--jobs",
        "1",
        "--seed-base",
        "7",
    ]));
    let four = stdout(&ksrd(&[
        "bench",
        "--manifest",
        m,
        "--jobs",
        "4",
        "--seed-base",
        "7",
    ]));
    assert_eq!(one.lines().count(), 4);
    // column 6 is mean_t_best, a wall-clock measurement
    assert_eq!(without_column(&one, 6), without_column(&four, 6));
}

#[test]
fn records_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("ud.txt");
    let inst = inst.to_str().unwrap();
    ksrd(&[
        "gen",
        "unit-disc",
        "--n",
        "40",
        "--radius",
        "0.3",
        "--seed",
        "9",
        "--output",
        inst,
    ]);
    // a small attack bound forces quasi mode on this instance
    for (k, bound) in [("2", "50000"), ("3", "1000")] {
        let out = ksrd(&[
            "solve",
            "--instance",
            inst,
            "--k",
            k,
            "--runs",
            "2",
            "--max-iters",
            "20",
            "--attack-bound",
            bound,
            "--seed",
            "4",
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        for r in records(&out) {
            let labels: Vec<String> = r["labels"]
                .as_array()
                .unwrap()
                .iter()
                .map(|l| l.to_string())
                .collect();
            let mode = r["mode"].as_str().unwrap();
            let seed = r["seed"].to_string();
            let v = ksrd(&[
                "verify",
                "--instance",
                inst,
                "--k",
                k,
                "--labels",
                &labels.join(","),
                "--mode",
                mode,
                "--seed",
                &seed,
                "--attack-bound",
                bound,
            ]);
            let report: serde_json::Value = serde_json::from_str(stdout(&v).trim()).unwrap();
            assert_eq!(report["non_defended"], r["non_defended"]);
            assert_eq!(
                v.status.code(),
                Some(if r["non_defended"] == 0 { 0 } else { 1 })
            );
        }
    }
}

#[test]
fn record_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "fig1.txt", FIG1);
    let out = ksrd(&[
        "solve",
        "--instance",
        inst.to_str().unwrap(),
        "--k",
        "2",
        "--max-iters",
        "10",
    ]);
    let line = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    let keys: Vec<&str> = value
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    let mut expected = vec![
        "instance",
        "n",
        "k",
        "algorithm",
        "objective",
        "labels",
        "mode",
        "non_defended",
        "time_to_best",
        "total_time",
        "iterations",
        "seed",
        "config",
    ];
    let mut sorted_keys = keys.clone();
    sorted_keys.sort_unstable();
    expected.sort_unstable();
    assert_eq!(sorted_keys, expected);
    // serde_json without preserve_order sorts keys, so check the raw line for field order
    let order: Vec<usize> = [
        "\"instance\"",
        "\"n\"",
        "\"k\"",
        "\"algorithm\"",
        "\"objective\"",
        "\"labels\"",
        "\"mode\"",
    ]
    .iter()
    .map(|k| line.find(k).unwrap())
    .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
    let config: Vec<&str> = value["config"]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    let mut expected_config = vec![
        "k",
        "r_min",
        "r_max",
        "move_prob",
        "cutoff",
        "tries",
        "comb_take_all_bound",
        "ball_radius",
        "t_max",
        "iter_max",
        "seed",
    ];
    expected_config.sort_unstable();
    assert_eq!(config, expected_config);
    assert!(value["objective"].is_u64());
    assert!(value["time_to_best"].is_f64());
    assert!(value["labels"].is_array());
    assert_eq!(value["mode"], "exact");
}
