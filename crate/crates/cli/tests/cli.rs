use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use twolevel_cli::format::{self, CodeFile};
use twolevel_core::{gen_random_code, TwoLevelCode};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn twolevel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twolevel"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn status(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn generate_poly_writes_25_words() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poly.code");
    let o = twolevel(&[
        "generate",
        "poly",
        "--q",
        "5",
        "--len",
        "4",
        "--t",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0);
    let CodeFile::Plain(code) = format::read(&path).unwrap() else {
        panic!("plain file expected")
    };
    assert_eq!((code.len(), code.word_len()), (25, 4));
}

#[test]
fn generate_random_fills_the_binary_square() {
    let o = twolevel(&[
        "generate", "random", "--q", "2", "--len", "2", "--n", "4", "--seed", "1",
    ]);
    assert_eq!(status(&o), 0);
    let CodeFile::Plain(code) = format::parse(&stdout(&o)).unwrap() else {
        panic!()
    };
    let mut words: Vec<String> = code.iter().map(|w| w.to_string()).collect();
    words.sort();
    assert_eq!(words, ["00", "01", "10", "11"]);
}

#[test]
fn generator_preconditions_exit_2() {
    let o = twolevel(&["generate", "poly", "--q", "3", "--len", "4", "--t", "2"]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("distinct points"));
    assert_eq!(
        status(&twolevel(&["generate", "poly", "--q", "4", "--len", "3", "--t", "1"])),
        2
    );
}

#[test]
fn verify_exit_codes() {
    let c = fixture("traceable.code");
    let o = twolevel(&["verify", "--in", c.to_str().unwrap(), "--prop", "ta", "--t", "2"]);
    assert_eq!(status(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("holds"));

    let g = fixture("traceable_grouped.code");
    let o = twolevel(&[
        "verify",
        "--in",
        g.to_str().unwrap(),
        "--prop",
        "ta",
        "--t",
        "2",
        "--T",
        "3",
        "--witnesses",
        "0",
    ]);
    assert_eq!(status(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("fails (group level)"));
    assert!(
        out.contains("U={011, 105, 550}, x=000, z=206, G(z)=4 not in G(U)={1, 3}"),
        "{out}"
    );
    assert_eq!(out.lines().count(), 65);

    // --T on a plain file, and an over-budget request
    assert_eq!(
        status(&twolevel(&[
            "verify",
            "--in",
            c.to_str().unwrap(),
            "--prop",
            "fp",
            "--t",
            "2",
            "--T",
            "3"
        ])),
        2
    );
    let o = twolevel(&[
        "verify",
        "--in",
        c.to_str().unwrap(),
        "--prop",
        "ipp",
        "--t",
        "3",
        "--budget",
        "10",
    ]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("over the limit of 10"));
}

#[test]
fn verify_json_and_jobs() {
    let g = fixture("traceable_grouped.code");
    let o = twolevel(&[
        "verify",
        "--in",
        g.to_str().unwrap(),
        "--prop",
        "ta",
        "--t",
        "2",
        "--T",
        "3",
        "--format",
        "json",
        "--jobs",
        "2",
    ]);
    assert_eq!(status(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["T"], 3);
    assert_eq!(v["witnesses"][0]["kind"], "group_untraceable");
    assert_eq!(v["witnesses"][0]["nearest_group"], 4);
}

#[test]
fn singleton_holds_everything() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.code");
    std::fs::write(&path, "3 3\n0 1 2\n").unwrap();
    for prop in ["fp", "sfp", "ipp", "ta"] {
        let o = twolevel(&["verify", "--in", path.to_str().unwrap(), "--prop", prop, "--t", "1"]);
        assert_eq!(status(&o), 0, "{prop}");
    }
}

#[test]
fn construct_writes_grouped_file_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex2.grp");
    let o = twolevel(&[
        "construct",
        "--in",
        fixture("uneven_classes.code").to_str().unwrap(),
        "--groups",
        "9",
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let CodeFile::Grouped(two) = format::read(&out).unwrap() else {
        panic!("grouped file expected")
    };
    assert_eq!((two.group_count(), two.group_size()), (9, 6));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ex2.grp.report.json")).unwrap()).unwrap();
    assert_eq!(report["eliminated_count"], 37);
    assert_eq!(report["v"], 8);

    let out3 = dir.path().join("ex3.grp");
    let o = twolevel(&[
        "construct",
        "--in",
        fixture("traceable.code").to_str().unwrap(),
        "--groups",
        "4",
        "--out",
        out3.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0);
    let CodeFile::Grouped(two) = format::read(&out3).unwrap() else {
        panic!()
    };
    assert_eq!((two.group_count(), two.group_size()), (4, 2));
    assert!(std::fs::read_to_string(dir.path().join("ex3.grp.report.txt"))
        .unwrap()
        .contains("p = 2"));
}

#[test]
fn construct_seeded_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let input = fixture("uneven_classes.code");
        let args = [
            "construct",
            "--in",
            input.to_str().unwrap(),
            "--groups",
            "9",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ];
        assert_eq!(status(&twolevel(&args)), 0);
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn construct_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let c = fixture("traceable.code");
    assert_eq!(
        status(&twolevel(&[
            "construct",
            "--in",
            c.to_str().unwrap(),
            "--groups",
            "10",
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );
    assert_eq!(
        status(&twolevel(&[
            "construct",
            "--in",
            c.to_str().unwrap(),
            "--groups",
            "4",
            "--mode",
            "det",
            "--seed",
            "1",
            "--out",
            out.to_str().unwrap()
        ])),
        2
    );

    // three classes of three over q = 4: nothing left to merge for a fourth group
    let input = dir.path().join("tight.code");
    std::fs::write(&input, "4 2\n0 0\n0 1\n0 2\n1 0\n1 1\n1 2\n2 0\n2 1\n2 2\n").unwrap();
    let o = twolevel(&[
        "construct",
        "--in",
        input.to_str().unwrap(),
        "--groups",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
    let partial = std::fs::read_to_string(dir.path().join("x.report.txt")).unwrap();
    assert!(partial.contains("(incomplete)"));
}

#[test]
fn repro_examples_match() {
    for (name, needle) in [
        ("desc-example", "{1100, 1102, 1120, 1122, 2100, 2102, 2120, 2122}"),
        ("example2", "group table (9 x 6)"),
        ("example3", "U={011, 105, 550}, x=000, z=206"),
    ] {
        let o = twolevel(&["repro", name]);
        assert_eq!(status(&o), 0, "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains(needle), "{name}");
    }
    let o = twolevel(&["repro", "example3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matches"], true);
}

#[test]
fn bad_input_file_exits_2() {
    assert_eq!(
        status(&twolevel(&[
            "verify",
            "--in",
            "/nonexistent/file",
            "--prop",
            "fp",
            "--t",
            "1"
        ])),
        2
    );
    assert_eq!(status(&twolevel(&["verify", "--prop", "fp"])), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn files_round_trip(q in 2u32..=300, len in 1usize..=5, n in 1usize..=40, seed in any::<u64>(), g_pick in any::<prop::sample::Index>()) {
        let n = n.min((q as usize).saturating_pow(len as u32));
        let code = gen_random_code(q, len, n, seed).unwrap();
        prop_assert_eq!(format::parse(&format::render_code(&code)).unwrap(), CodeFile::Plain(code.clone()));

        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let g = divisors[g_pick.index(divisors.len())];
        let p = n / g;
        let mut labels: Vec<usize> = (0..n).map(|i| i / p + 1).collect();
        labels.rotate_left(seed as usize % n);
        let two = TwoLevelCode::new(code, &labels).unwrap();
        prop_assert_eq!(format::parse(&format::render_grouped(&two)).unwrap(), CodeFile::Grouped(two));
    }
}
