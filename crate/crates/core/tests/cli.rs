//! End-to-end runs of the `linkbench` binary.

use std::path::Path;
use std::process::{Command, Output};

fn linkbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn kv(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in:\n{text}"))
        .trim()
        .parse()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_for_every_subcommand() {
    assert!(linkbench(&["--help"]).status.success());
    assert!(linkbench(&["--version"]).status.success());
    for sub in [
        "generate", "census", "analytic", "split", "predict", "eval", "sweep",
    ] {
        let o = linkbench(&[sub, "--help"]);
        assert!(o.status.success(), "{sub}");
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
}

#[test]
fn analytic_prints_closed_forms() {
    let o = linkbench(&[
        "analytic",
        "--m",
        "10",
        "--k",
        "8",
        "--structure",
        "lattice",
        "--nb",
        "2560",
        "--db",
        "12",
        "--format",
        "kv",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!((kv(&out, "ideal_auc") - 0.8475).abs() < 5e-4, "{out}");
    assert!(kv(&out, "planted_auc") <= kv(&out, "ideal_auc"));
}

#[test]
fn invalid_parameters_exit_with_config_code() {
    let o = linkbench(&[
        "analytic",
        "--db",
        "100",
        "--m",
        "1",
        "--k",
        "3",
        "--structure",
        "clique",
        "--nb",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("D_B/N_S"));

    assert_eq!(linkbench(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        linkbench(&["sweep", "--preset", "nope", "--out", "/dev/null"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = linkbench(&[
        "split",
        "--graph",
        p(&dir.path().join("missing.edges")),
        "--out-dir",
        p(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_census_split_predict_eval() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let graph = d.join("g.edges");
    let roles = d.join("g.roles");
    let o = linkbench(&[
        "generate",
        "--m",
        "6",
        "--k",
        "4",
        "--structure",
        "lattice",
        "--nb",
        "80",
        "--db",
        "5",
        "--seed",
        "3",
        "--out",
        p(&graph),
        "--roles",
        p(&roles),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let edges = std::fs::read_to_string(&graph).unwrap();
    assert!(edges.lines().next().unwrap().starts_with("# n_bridge=80"));
    let role_lines: Vec<_> = std::fs::read_to_string(&roles)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_owned)
        .collect();
    assert_eq!(role_lines.len(), 96 + 80);
    assert_eq!(role_lines[0], "0\tS1");
    assert_eq!(role_lines[95], "95\tS6");
    assert_eq!(role_lines[96], "96\tB");

    let c = linkbench(&["census", "--graph", p(&graph), "--format", "kv"]);
    assert!(c.status.success());
    let census = stdout(&c);
    assert_eq!(kv(&census, "e_ss_existing"), 6.0 * 24.0);
    assert_eq!(kv(&census, "e_bb_missing"), 80.0 * 79.0 / 2.0);

    let split = d.join("split");
    let o = linkbench(&[
        "split",
        "--graph",
        p(&graph),
        "--seed",
        "1",
        "--out-dir",
        p(&split),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["observed.edges", "heldout.edges", "negatives.edges"] {
        assert!(split.join(f).exists(), "{f}");
    }

    let mut scores = Vec::new();
    for pred in ["adamic-adar", "oracle-ideal", "random"] {
        let out = d.join(format!("{pred}.tsv"));
        let o = linkbench(&[
            "predict",
            "--split-dir",
            p(&split),
            "--predictor",
            pred,
            "--out",
            p(&out),
        ]);
        assert!(
            o.status.success(),
            "{pred}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(std::fs::read_to_string(&out)
            .unwrap()
            .starts_with(&format!("# predictor={pred}")));
        scores.push(out);
    }
    let list = scores.iter().map(|s| p(s)).collect::<Vec<_>>().join(",");
    let csv_path = d.join("eval.csv");
    let o = linkbench(&[
        "eval",
        "--split-dir",
        p(&split),
        "--scores",
        &list,
        "--replicate",
        "4",
        "--out",
        p(&csv_path),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<_> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "replicate,predictor,auc");
    assert_eq!(rows.len(), 4);
    for row in &rows[1..] {
        let f: Vec<_> = row.split(',').collect();
        assert_eq!(f[0], "4");
        let a: f64 = f[2].parse().unwrap();
        assert!((0.0..=1.0).contains(&a));
        if f[1] == "oracle-ideal" {
            assert!(a > 0.7, "{row}");
        }
    }

    // a score file missing a candidate pair is rejected
    let partial = d.join("partial.tsv");
    std::fs::write(&partial, "0\t1\t0.5\n").unwrap();
    let o = linkbench(&["eval", "--split-dir", p(&split), "--scores", p(&partial)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_splits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let splits = dir.path().join("splits");
    let o = linkbench(&[
        "sweep",
        "--preset",
        "fig5-lattice",
        "--grid",
        "3,6",
        "--replicates",
        "2",
        "--predictors",
        "jaccard,random",
        "--seed",
        "5",
        "--out",
        p(&out),
        "--emit-splits",
        p(&splits),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<_> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].starts_with("sweep_param,sweep_value"));
    assert_eq!(rows.len(), 1 + 2 * 2);
    assert!(splits
        .join("point001")
        .join("rep01")
        .join("heldout.edges")
        .exists());
}
