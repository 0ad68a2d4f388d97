use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const EN_GOLDEN: &str = "To repair the device\n1. Consult the repair manual.\n2. Unplug the device.\n3. Remove the service cover.\n- Take care not to damage the service cover.";
const FR_GOLDEN: &str = "Réparation du dispositif\n1. Se reporter au manuel de réparation.\n2. Débrancher le dispositif.\n3. Enlever le couvercle de service.\n- Éviter d'endommager le couvercle de service.";

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preventgen"))
        .args(args)
        .env_remove("PREVENTGEN_DATA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn probe_reports_planted_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["probe", p(&data("corpus")), "-o", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["total_expressions"], 60);
    for (_, count) in report["counts"].as_object().unwrap() {
        assert_eq!(count, 1);
    }
    assert_eq!(report["hit_fraction"].as_f64().unwrap(), 7.0 / 60.0);
}

#[test]
fn probe_sampling_is_deterministic() {
    let args = [
        "probe",
        data("corpus").to_str().unwrap(),
        "--sample",
        "100",
        "--seed",
        "7",
    ]
    .map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"samples\""));
}

#[test]
fn probe_custom_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let patterns = dir.path().join("patterns.txt");
    std::fs::write(&patterns, "# extra probe\ncheck\n").unwrap();
    let o = run(&["probe", p(&data("corpus")), "--patterns", p(&patterns)]);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["counts"]["check"], 2);
}

#[test]
fn probe_missing_dir_exits_2() {
    let o = run(&["probe", "/no/such/corpus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/no/such/corpus"));
}

#[test]
fn kappa_identical_files() {
    let a = data("coders/coder_a.csv");
    for feature in ["form", "intentionality", "awareness", "safety"] {
        let o = run(&["kappa", p(&a), p(&a), "--feature", feature, "--json"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(rows[0]["kappa"].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn kappa_reference_awareness() {
    let o = run(&[
        "kappa",
        p(&data("reliability/coder_a.csv")),
        p(&data("reliability/coder_b.csv")),
        "--feature",
        "awareness",
        "--json",
    ]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((rows[0]["p_a"].as_f64().unwrap() - 0.935).abs() < 0.01);
    assert!((rows[0]["kappa"].as_f64().unwrap() - 0.76).abs() < 0.01);
    assert_eq!(rows[0]["band"], "substantial");

    let text = run(&[
        "kappa",
        p(&data("reliability/coder_a.csv")),
        p(&data("reliability/coder_b.csv")),
        "--feature",
        "all",
    ]);
    assert_eq!(stdout(&text).lines().count(), 4);
}

#[test]
fn kappa_unknown_feature_exits_2() {
    let a = data("coders/coder_a.csv");
    assert_eq!(
        run(&["kappa", p(&a), p(&a), "--feature", "colour"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn learn_emits_reference_tree() {
    let dir = tempfile::tempdir().unwrap();
    let tree_path = dir.path().join("tree.json");
    let o = run(&["learn", p(&data("agreed.csv")), "-o", p(&tree_path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let expected = "awareness = AW: NEG-TC\nawareness = UNAW:\n|  intention = CON: DONT\n|  intention = UNC:\n|  |  safety = BADP: NEVER\n|  |  safety = NOT: DONT\ntraining accuracy: 1.0000\n";
    assert_eq!(stdout(&o), expected);
    let written: preventgen::c45::TreeNode =
        serde_json::from_str(&std::fs::read_to_string(&tree_path).unwrap()).unwrap();
    let reference: preventgen::c45::TreeNode =
        serde_json::from_str(&std::fs::read_to_string(data("reference_tree.json")).unwrap())
            .unwrap();
    assert_eq!(written.pretty(), reference.pretty());
    assert_eq!(written.leaf_labels(), reference.leaf_labels());
}

#[test]
fn learn_balance_logs_counts() {
    let o = run(&["learn", p(&data("agreed.csv")), "--balance", "--seed", "4"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("balanced class counts: DONT=100 NEVER=100 NEG_TC=100"));
    assert!(stdout(&o).starts_with("awareness = AW: NEG-TC\n"));
}

#[test]
fn learn_rejects_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(
        &bad,
        "id,text,form,intentionality,awareness,safety,coder\n1,x,MAYBE,CON,AW,NOT,a\n",
    )
    .unwrap();
    let o = run(&["learn", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 1"));
}

#[test]
fn crossval_deterministic_and_bounded() {
    let args = [
        "crossval",
        data("noisy25.csv").to_str().unwrap(),
        "--folds",
        "10",
        "--seed",
        "5",
    ]
    .map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 11);

    let clean = run(&[
        "crossval",
        p(&data("agreed.csv")),
        "--folds",
        "10",
        "--seed",
        "5",
    ]);
    assert!(stdout(&clean).ends_with("mean: 1.0000\n"));
    let too_many = run(&[
        "crossval",
        p(&data("agreed.csv")),
        "--folds",
        "200",
        "--seed",
        "5",
    ]);
    assert_eq!(too_many.status.code(), Some(2));
}

#[test]
fn compile_then_generate_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let o = run(&[
        "compile",
        p(&data("reference_tree.json")),
        "--forms",
        p(&data("forms.json")),
        "--langs",
        "en,fr",
        "-o",
        p(&net),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read_to_string(&net).unwrap(),
        std::fs::read_to_string(data("network.json")).unwrap()
    );

    let proc = data("procedures/repair-device.json");
    let en = run(&["generate", p(&proc), "--lang", "en", "--net", p(&net)]);
    assert_eq!(en.stdout, format!("{EN_GOLDEN}\n").into_bytes());
    let fr = run(&["generate", p(&proc), "--lang", "fr", "--net", p(&net)]);
    assert_eq!(fr.stdout, format!("{FR_GOLDEN}\n").into_bytes());
}

#[test]
fn generate_standalone_warnings() {
    let net = data("network.json");
    for (id, en, fr) in [
        (
            "install-part",
            "- Do not dismantle the frame.",
            "- Ne pas démonter l'armature.",
        ),
        (
            "disconnect-ground",
            "- Never disconnect the ground.",
            "- Ne jamais déconnecter la borne de terre.",
        ),
    ] {
        let proc = data(&format!("procedures/{id}.json"));
        let o = run(&["generate", p(&proc), "--lang", "en", "--net", p(&net)]);
        assert!(stdout(&o).trim_end().ends_with(en), "{}", stdout(&o));
        let o = run(&["generate", p(&proc), "--lang", "fr", "--net", p(&net)]);
        assert!(stdout(&o).trim_end().ends_with(fr), "{}", stdout(&o));
    }
}

#[test]
fn generate_ensure_mode_exits_3() {
    let o = run(&[
        "generate",
        p(&data("procedures/ensure-cover.json")),
        "--lang",
        "en",
        "--net",
        p(&data("network.json")),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("ensurative warnings unsupported"));
    assert!(o.stdout.is_empty());
}

#[test]
fn generate_missing_network_exits_2() {
    let o = run(&[
        "generate",
        p(&data("procedures/repair-device.json")),
        "--lang",
        "en",
        "--net",
        "/nope.json",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compile_english_only_network_rejects_french() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("en.json");
    assert!(run(&[
        "compile",
        p(&data("reference_tree.json")),
        "--langs",
        "en",
        "-o",
        p(&net)
    ])
    .status
    .success());
    let o = run(&[
        "generate",
        p(&data("procedures/repair-device.json")),
        "--lang",
        "fr",
        "--net",
        p(&net),
    ]);
    assert_eq!(o.status.code(), Some(3));
}
