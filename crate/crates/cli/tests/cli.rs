use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mipe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mipe"))
        .args(args)
        .output()
        .expect("spawn mipe")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const CORPUS: &str = "koi dusra human being yeh kahe\nyeh bazaar hai\nkoi nahi aaya\n\nbazaar khula hai\n";

const DATASET: &str = r#"{"id":"1","system":"WAC","candidate":"koee doosra human ye kahe","references":["koi dusra human being yeh kahe"],"ratings":[9,8]}
{"id":"2","system":"WAC","candidate":"bazar khula","references":["bazaar khula hai"],"ratings":[6,5]}
{"id":"3","system":"WAC","candidate":"nahi","references":["koi nahi aaya"],"ratings":[2,3]}
{"id":"4","system":"PAC","candidate":"yeh bazaar hai","references":["yeh bazaar hai"],"ratings":[10,7]}
{"id":"5","system":"PAC","candidate":"human","references":["koi dusra human being yeh kahe"],"ratings":[4,2]}
"#;

struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("corpus.txt"), CORPUS).unwrap();
        fs::write(dir.path().join("data.jsonl"), DATASET).unwrap();
        let f = Fixture { dir };
        let out = mipe(&[
            "idf",
            "build",
            "--corpus",
            p(&f.path("corpus.txt")),
            "--out",
            p(&f.path("idf.tsv")),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        f
    }

    fn path(&self, name: &str) -> std::path::PathBuf {
        self.dir.path().join(name)
    }

    fn score(&self, out: &str, extra: &[&str]) -> Output {
        let (data, idf, out) = (self.path("data.jsonl"), self.path("idf.tsv"), self.path(out));
        let mut args = vec!["score", "--dataset", p(&data), "--idf", p(&idf), "--out", p(&out)];
        args.extend_from_slice(extra);
        mipe(&args)
    }
}

#[test]
fn idf_build_writes_header() {
    let f = Fixture::new();
    let text = fs::read_to_string(f.path("idf.tsv")).unwrap();
    assert!(text.starts_with("n_docs 4 mu_miss 20"), "{text}");
    assert!(text.contains("bazaar\t"));
}

#[test]
fn idf_build_custom_mu_miss() {
    let f = Fixture::new();
    let out = mipe(&[
        "idf",
        "build",
        "--corpus",
        p(&f.path("corpus.txt")),
        "--out",
        p(&f.path("b.tsv")),
        "--mu-miss",
        "7.5",
    ]);
    assert!(out.status.success());
    assert!(fs::read_to_string(f.path("b.tsv"))
        .unwrap()
        .starts_with("n_docs 4 mu_miss 7.5"));
}

#[test]
fn score_writes_all_tables() {
    let f = Fixture::new();
    let out = f.score("out", &["--metrics", "bleu,wer"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "instances.csv",
        "rating_means.csv",
        "rating_means.txt",
        "correlations.csv",
        "correlations.txt",
        "mipe_vs_raw.csv",
    ] {
        assert!(f.path("out").join(name).exists(), "{name}");
    }
    let inst = fs::read_to_string(f.path("out/instances.csv")).unwrap();
    assert_eq!(inst.lines().count(), 1 + 5 * 2);
    assert!(inst.lines().nth(1).unwrap().starts_with("1,WAC,bleu,"));
}

#[test]
fn report_rebuilds_identical_tables() {
    let f = Fixture::new();
    assert!(f.score("out", &[]).status.success());
    let out = mipe(&["report", "--scores", p(&f.path("out")), "--out", p(&f.path("again"))]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "instances.csv",
        "rating_means.txt",
        "correlations.csv",
        "mipe_vs_raw.csv",
    ] {
        assert_eq!(
            fs::read(f.path("out").join(name)).unwrap(),
            fs::read(f.path("again").join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn mean_fusion_is_reported() {
    let f = Fixture::new();
    assert!(f.score("out", &["--fusion", "mean"]).status.success());
    let txt = fs::read_to_string(f.path("out/rating_means.txt")).unwrap();
    assert!(txt.starts_with("# rating fusion: mean"));
}

#[test]
fn external_scores_are_selectable() {
    let f = Fixture::new();
    fs::write(
        f.path("bs.txt"),
        "name BS orientation higher range 0 1\n1\t0.851\n2\t0.5\n3\t0.2\n4\t0.99\n5\t0.3\n",
    )
    .unwrap();
    let out = f.score(
        "out",
        &["--metrics", "bs,ter", "--external-scores", p(&f.path("bs.txt"))],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let inst = fs::read_to_string(f.path("out/instances.csv")).unwrap();
    assert!(inst.contains("1,WAC,BS,0.851,"));
}

#[test]
fn config_file_is_applied() {
    let f = Fixture::new();
    fs::write(
        f.path("c.toml"),
        "[scoring]\nphrase_scale = 0.0\nnormalize_mwp = false\n",
    )
    .unwrap();
    let out = f.score("out", &["--config", p(&f.path("c.toml")), "--metrics", "bleu"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let inst = fs::read_to_string(f.path("out/instances.csv")).unwrap();
    for line in inst.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[6], "0", "{line}");
        assert_eq!(cols[5], cols[10], "{line}");
    }
}

#[test]
fn config_prints_defaults() {
    let out = mipe(&["config"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("rho_del = 0.25"));
    assert!(text.contains("sigma_thres = 2.0"));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(mipe(&[]).status.code(), Some(1));
    assert_eq!(mipe(&["score"]).status.code(), Some(1));
    assert_eq!(mipe(&["frobnicate"]).status.code(), Some(1));
    let f = Fixture::new();
    let out = f.score("out", &["--metrics", "rouge"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bleu, nist, wer, ter"));
    fs::write(f.path("bad.toml"), "[sws]\nsigma_cos = 3.0\n").unwrap();
    assert_eq!(
        f.score("out", &["--config", p(&f.path("bad.toml"))]).status.code(),
        Some(1)
    );
}

#[test]
fn help_exits_0() {
    assert_eq!(mipe(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_errors_exit_2() {
    let f = Fixture::new();
    fs::write(
        f.path("data.jsonl"),
        "{\"id\":\"1\",\"system\":\"WAC\",\"candidate\":\"a\",\"references\":[\"b\"],\"ratings\":[11]}\n",
    )
    .unwrap();
    let out = f.score("out", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":1:"));
    assert!(!f.path("out").exists());

    let missing = mipe(&[
        "idf",
        "build",
        "--corpus",
        p(&f.path("nope.txt")),
        "--out",
        p(&f.path("x.tsv")),
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let out = mipe(&["report", "--scores", p(&f.path("nowhere"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_external_score_is_data_error() {
    let f = Fixture::new();
    fs::write(f.path("bs.txt"), "name BS orientation higher\n1\t0.851\n").unwrap();
    let out = f.score("out", &["--metrics", "bs", "--external-scores", p(&f.path("bs.txt"))]);
    assert_eq!(out.status.code(), Some(2));
}
