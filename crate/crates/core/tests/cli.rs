use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn catbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catbound"))
        .args(args)
        .env_remove("CATBOUND_ORACLE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn value_column(text: &str) -> Vec<String> {
    text.lines()
        .skip(1)
        .map(|l| l.split('\t').nth(3).unwrap().to_owned())
        .collect()
}

#[test]
fn stats_on_path() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "# path\na b\nb c\n");
    let out = catbound(&[
        "stats",
        &g,
        "--star",
        "2",
        "--catw",
        "0,0,0,0,0",
        "--edge-count",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(value_column(&stdout(&out)), ["4", "6", "12"]);
}

#[test]
fn stats_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "a b\n");
    assert!(!catbound(&["stats", &g, "--bistar", "0.5,2"])
        .status
        .success());
    assert!(!catbound(&["stats", &g]).status.success());
    assert!(!catbound(&["stats", &g, "--no-such-flag"]).status.success());
    let bad = write(dir.path(), "bad.txt", "a b c\n");
    let out = catbound(&["stats", &bad, "--edge-count"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn count_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.txt", "a b\nb c\n");
    let out = catbound(&["count", &path, "path3"]);
    assert_eq!(stdout(&out), "6\n");
    let tree = write(dir.path(), "t.txt", "1 2\n1 3\n3 4\n");
    assert_eq!(stdout(&catbound(&["count", &tree, "K3"])), "0\n");

    let out = catbound(&["count", &path, "path5", "--budget", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    let out = Command::new(env!("CARGO_BIN_EXE_catbound"))
        .args(["count", &path, "path5"])
        .env("CATBOUND_ORACLE_BUDGET", "2")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

fn bound_of(text: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix("bound\t"))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn bound_methods_are_nested() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "g.txt",
        "1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4\n1 5\n",
    );
    let agm = bound_of(&stdout(&catbound(&[
        "bound",
        &g,
        "K3",
        "--method",
        "edges-only",
    ])));
    assert!((agm - 16f64.powf(1.5)).abs() < 1e-3 * agm);
    let star = bound_of(&stdout(&catbound(&["bound", &g, "K3", "--method", "star"])));
    let www = bound_of(&stdout(&catbound(&["bound", &g, "K3", "--method", "www"])));
    assert!(www <= star * (1.0 + 1e-6));
    assert!(www >= 6.0 * 2.0);
}

#[test]
fn bound_certificate_and_query_file() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(dir.path(), "r.txt", "a b\nb c\nc d\n");
    let s = write(dir.path(), "s.txt", "x y\n");
    let q = write(dir.path(), "q.txt", "A B R\nB C S\n");
    let relation_r = format!("R={r}");
    let relation_s = format!("S={s}");
    let out = catbound(&[
        "bound",
        &r,
        &q,
        "--method",
        "edges-only",
        "--certificate",
        "--relation",
        &relation_r,
        "--relation",
        &relation_s,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!((bound_of(&text) - 12.0).abs() < 1e-4, "{text}");
    assert!(text.contains("certificate\tweight\trhs"));
    assert!(text.contains("recombined_log_bound\t2.48491"));

    let missing = catbound(&["bound", &r, &q, "--relation", &relation_r]);
    assert!(!missing.status.success());
    assert!(!catbound(&["bound", &r, "K3", "--method", "fastest"])
        .status
        .success());
}

#[test]
fn bench_writes_csvs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.txt", "1 2\n2 3\n3 1\n3 4\n4 5\n5 1\n2 5\n");
    let manifest = write(dir.path(), "manifest.txt", "one.txt\n");
    let out_dir = dir.path().join("out");
    let out_dir = out_dir.to_str().unwrap();
    let first = catbound(&["bench", &manifest, "--out", out_dir]);
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let own = fs::read_to_string(Path::new(out_dir).join("one.csv")).unwrap();
    let avg = fs::read_to_string(Path::new(out_dir).join("_average.csv")).unwrap();
    assert_eq!(own, avg);
    assert_eq!(own.lines().count(), 30);
    assert!(stdout(&first).contains("violations\t0"));
    let second = catbound(&["bench", &manifest, "--out", out_dir]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(
        own,
        fs::read_to_string(Path::new(out_dir).join("one.csv")).unwrap()
    );

    let empty = write(dir.path(), "empty.txt", "\n");
    assert!(!catbound(&["bench", &empty, "--out", out_dir])
        .status
        .success());
}

#[test]
fn catalog_lists_all_shapes() {
    let out = catbound(&["catalog"]);
    assert_eq!(stdout(&out).lines().count(), 29);
}
