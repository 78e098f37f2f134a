use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const ROOM: &str = "\
R 0 0 20 1
R 0 19 20 20
R 0 0 1 20
R 19 0 20 8
R 19 12 20 20
";

fn rectpass(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rectpass")).args(args).current_dir(dir).output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = rectpass(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn answers(world: &str, queries: &str) -> Vec<String> {
    let dir = TempDir::new().unwrap();
    put(&dir, "w", world);
    put(&dir, "q", queries);
    ok(&["build", "w", "-o", "idx"], dir.path());
    ok(&["query", "idx", "q"], dir.path()).lines().map(str::to_owned).collect()
}

#[test]
fn empty_world() {
    assert_eq!(answers("", "Q 0 0 0 0 1\nQ 0 0 50 -3 7\n"), ["FEASIBLE", "FEASIBLE"]);
}

#[test]
fn room_door_admits_its_width() {
    let got = answers(ROOM, "Q 10 10 30 10 4\nQ 10 10 30 10 5\nQ 0 5 30 10 1\nQ 10 10 19 4 1\n");
    assert_eq!(got, ["FEASIBLE", "INFEASIBLE", "INVALID_START", "INVALID_GOAL"]);
}

#[test]
fn build_reports_counts() {
    let dir = TempDir::new().unwrap();
    put(&dir, "w", ROOM);
    let out = ok(&["build", "w", "-o", "idx"], dir.path());
    assert!(out.starts_with("obstacles 5\ncandidates "), "{out}");
    for key in ["relevant edges ", "regions ", "dual edges "] {
        assert!(out.contains(key));
    }
}

#[test]
fn parallel_query_keeps_order() {
    let dir = TempDir::new().unwrap();
    ok(&["gen", "--kind", "cluster", "--n", "300", "--seed", "5", "-o", "w"], dir.path());
    let mut q = String::new();
    for k in 0..200 {
        q.push_str(&format!("Q {} {} {} {} {}\n", k % 37, k % 23, 150 - k % 41, k % 53, 1 + k % 4));
    }
    put(&dir, "q", &q);
    ok(&["build", "w", "-o", "idx"], dir.path());
    let one = ok(&["query", "idx", "q"], dir.path());
    assert_eq!(one.lines().count(), 200);
    assert_eq!(ok(&["query", "idx", "q", "--jobs", "7"], dir.path()), one);
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = ok(&["gen", "--kind", "uniform", "--n", "100", "--seed", "9"], dir.path());
    let b = ok(&["gen", "--kind", "uniform", "--n", "100", "--seed", "9"], dir.path());
    assert_eq!(a, b);
    assert_eq!(a.lines().filter(|l| l.starts_with("R ")).count(), 100);
    assert_ne!(a, ok(&["gen", "--kind", "uniform", "--n", "100", "--seed", "10"], dir.path()));
}

#[test]
fn maze_walls_touch() {
    let dir = TempDir::new().unwrap();
    let text = ok(&["gen", "--kind", "maze", "--n", "200", "--seed", "1"], dir.path());
    let rects: Vec<[i64; 4]> = text
        .lines()
        .filter_map(|l| l.strip_prefix("R "))
        .map(|l| {
            let v: Vec<i64> = l.split_whitespace().map(|f| f.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    assert_eq!(rects.len(), 200);
    let touching = rects.iter().enumerate().any(|(i, a)| {
        rects[i + 1..].iter().any(|b| a[0] <= b[2] && b[0] <= a[2] && a[1] <= b[3] && b[1] <= a[3])
    });
    assert!(touching);
}

#[test]
fn verify_agrees() {
    let dir = TempDir::new().unwrap();
    ok(&["gen", "--kind", "maze", "--n", "150", "--seed", "2", "-o", "w"], dir.path());
    let out = ok(&["verify", "w", "--random", "100", "--seed", "4"], dir.path());
    assert_eq!(out.trim(), "100/100 agree");
}

#[test]
fn injected_fault_yields_minimized_repro() {
    let dir = TempDir::new().unwrap();
    put(&dir, "w", ROOM);
    let out = rectpass(&["verify", "w", "--random", "10", "--inject-fault", "--repro-dir", "rp"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("0/10 agree"));
    let world = fs::read_to_string(dir.path().join("rp/repro.world")).unwrap();
    let queries = fs::read_to_string(dir.path().join("rp/repro.queries")).unwrap();
    assert!(world.starts_with("#!rectpass-world 1"));
    assert_eq!(queries.lines().filter(|l| l.starts_with("Q ")).count(), 1);
    // The corrupted engine is wrong on every world, so nothing survives.
    assert_eq!(world.lines().count(), 1);
}

#[test]
fn input_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    put(&dir, "w", "R 0 0 4 4\n# ok\nR 3 3 2 9\n");
    let out = rectpass(&["build", "w", "-o", "idx"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    put(&dir, "q", "Q 1 2 3 4 0\n");
    put(&dir, "e", "");
    ok(&["build", "e", "-o", "idx"], dir.path());
    let out = rectpass(&["query", "idx", "q"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(rectpass(&["query", "missing", "q"], dir.path()).status.code(), Some(1));
}

#[test]
fn robot_aspect_is_accepted() {
    // `d` is the robot width; the door is a vertical gap, so height decides.
    let dir = TempDir::new().unwrap();
    put(&dir, "w", ROOM);
    put(&dir, "q", "Q 10 10 30 10 4\nQ 10 10 30 10 8\nQ 10 10 30 10 9\n");
    ok(&["build", "w", "-o", "idx", "--robot", "2x1"], dir.path());
    assert_eq!(ok(&["query", "idx", "q"], dir.path()), "FEASIBLE\nFEASIBLE\nINFEASIBLE\n");
    ok(&["build", "w", "-o", "idx", "--robot", "1x2"], dir.path());
    assert_eq!(ok(&["query", "idx", "q"], dir.path()), "INFEASIBLE\nINFEASIBLE\nINFEASIBLE\n");
    let out = rectpass(&["build", "w", "-o", "idx", "--robot", "0x2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

fn maze_svg(dir: &Path) -> String {
    ok(&["gen", "--kind", "maze", "--n", "200", "--seed", "1", "-o", "m"], dir);
    ok(&["build", "m", "-o", "idx"], dir);
    ok(&["render", "idx", "-o", "m.svg"], dir);
    fs::read_to_string(dir.join("m.svg")).unwrap()
}

#[test]
fn render_matches_snapshot() {
    let dir = TempDir::new().unwrap();
    let svg = maze_svg(dir.path());
    assert_eq!(svg, maze_svg(dir.path()));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/maze200.svg");
    if std::env::var_os("UPDATE_SNAPSHOTS").is_some() {
        fs::write(&golden, &svg).unwrap();
    }
    assert_eq!(svg, fs::read_to_string(golden).unwrap());
}

#[test]
fn render_toggles() {
    let dir = TempDir::new().unwrap();
    put(&dir, "w", ROOM);
    ok(&["build", "w", "-o", "idx"], dir.path());
    ok(&["render", "idx", "-o", "a.svg", "--show-pathways"], dir.path());
    ok(&["render", "idx", "-o", "b.svg", "--no-regions", "--no-edges"], dir.path());
    let a = fs::read_to_string(dir.path().join("a.svg")).unwrap();
    let b = fs::read_to_string(dir.path().join("b.svg")).unwrap();
    assert!(a.contains(r#"<g id="pathways">"#) && a.contains("hsl("));
    assert!(!b.contains("hsl(") && !b.contains("url(#hatch)\" stroke"));
}

#[test]
fn circles_svg() {
    let dir = TempDir::new().unwrap();
    let out = ok(&["circles", "--n", "40", "--seed", "3", "--radius", "1", "-o", "c.svg"], dir.path());
    assert!(out.starts_with("centers 40\ngabriel edges "));
    let svg = fs::read_to_string(dir.path().join("c.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 40);
}

#[test]
fn bench_rows() {
    let dir = TempDir::new().unwrap();
    let out = ok(&["bench", "--sizes", "100,200,300", "--queries", "20", "--csv", "b.csv"], dir.path());
    assert_eq!(out.lines().count(), 4);
    let csv = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
