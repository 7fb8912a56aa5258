use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
seed = 5
iterations = 2

[pointset]
kind = "grid"
nx = 24
ny = 24
width = 3.0
height = 3.0
"#;

fn horograph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horograph")).args(args).output().unwrap()
}

fn setup() -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let cfg = cfg.to_str().unwrap().to_string();
    (dir, cfg)
}

fn first_line(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn generate_then_stats_from_files() {
    let (dir, cfg) = setup();
    let out = dir.path().join("gen");
    let o = horograph(&["--config", &cfg, "--out", out.to_str().unwrap(), "--phi", "S", "generate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(first_line(&out.join("points.csv")), "id,x,y");
    assert_eq!(first_line(&out.join("edges.csv")), "u,v,band");
    assert!(std::fs::read_to_string(out.join("config.toml")).unwrap().contains("name = \"S\""));

    let from_files = dir.path().join("files");
    let o = horograph(&[
        "--config",
        &cfg,
        "--out",
        from_files.to_str().unwrap(),
        "--phi",
        "S",
        "stats",
        "--points",
        out.join("points.csv").to_str().unwrap(),
        "--edges",
        out.join("edges.csv").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fresh = dir.path().join("fresh");
    let o = horograph(&["--config", &cfg, "--out", fresh.to_str().unwrap(), "--phi", "S", "stats"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(from_files.join("stats.json")).unwrap(), std::fs::read(fresh.join("stats.json")).unwrap());
}

#[test]
fn phi_accepts_band_files() {
    let (dir, cfg) = setup();
    let bands = dir.path().join("bands.toml");
    std::fs::write(&bands, "bands = [[0.5, 1.0], [2.0, 0.05]]\n").unwrap();
    let out = dir.path().join("o");
    let o = horograph(&["--config", &cfg, "--out", out.to_str().unwrap(), "--phi", bands.to_str().unwrap(), "generate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("edges.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1") || l.ends_with(",2")));
}

#[test]
fn walk_writes_trace() {
    let (dir, cfg) = setup();
    let out = dir.path().join("w");
    let o = horograph(&["--config", &cfg, "--out", out.to_str().unwrap(), "walk", "--start", "3", "--steps", "25"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("walk.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,vertex,x,y");
    assert_eq!(lines.len(), 27);
    assert!(lines[1].starts_with("0,3,"));
}

#[test]
fn experiment_headers() {
    let (dir, cfg) = setup();
    let out = dir.path().join("e");
    let o_str = out.to_str().unwrap();
    for cmd in ["table1", "table2", "repwalk"] {
        let o = horograph(&["--config", &cfg, "--out", o_str, cmd]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(first_line(&out.join("table1.csv")), "graph,iteration,lambda1,sparsity,max_valency,avg_valency,avg_clustering");
    assert_eq!(first_line(&out.join("table1_summary.csv")), "group,statistic,index,mean,sd,count");
    assert_eq!(first_line(&out.join("table2.csv")), "graph,mean_of_means,sd_of_means,mean_of_maxes,sd_of_maxes,num_walks,steps");
    for p in ["U", "S", "C", "I"] {
        let path = out.join(format!("replication_{p}.csv"));
        if path.exists() {
            assert_eq!(first_line(&path), "step,vertex,parent_id,x,y");
        }
    }
}

#[test]
fn exit_codes() {
    let (dir, cfg) = setup();
    let out = dir.path().join("x");
    let o_str = out.to_str().unwrap();

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "iterations = 0\n").unwrap();
    assert_eq!(horograph(&["--config", bad.to_str().unwrap(), "--out", o_str, "generate"]).status.code(), Some(1));
    // not a preset name, so it is read as a band file that does not exist
    assert_eq!(horograph(&["--config", &cfg, "--out", o_str, "--phi", "Q", "generate"]).status.code(), Some(3));

    let missing = dir.path().join("missing.csv");
    let m = missing.to_str().unwrap();
    assert_eq!(horograph(&["--config", &cfg, "--out", o_str, "stats", "--points", m, "--edges", m]).status.code(), Some(3));

    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "id,x,y\n0,1,zzz\n").unwrap();
    let j = junk.to_str().unwrap();
    assert_eq!(horograph(&["--config", &cfg, "--out", o_str, "stats", "--points", j, "--edges", j]).status.code(), Some(3));

    // a tolerance below machine precision cannot be met
    assert_eq!(horograph(&["--config", &cfg, "--out", o_str, "--tol", "1e-300", "stats"]).status.code(), Some(2));

    assert!(horograph(&["--config", &cfg, "--out", o_str, "walk", "--start", "100000"]).status.code() == Some(1));
}
