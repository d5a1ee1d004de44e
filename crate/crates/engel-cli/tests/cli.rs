//! End-to-end tests of the `engel` binary: exit codes, diagnostics, file
//! handling, and definition round-trips for the built-in catalog.

use std::process::Command;

fn engel_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_engel"))
}

#[test]
fn malformed_definitions_exit_2_with_position() {
    let dir = std::env::temp_dir().join("engel-cli-test-bad-defs");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.defs");
    std::fs::write(&path, "group A = cyclic 4\ngroup X = perm 3 gens (1 4)\n").unwrap();
    let out = engel_bin()
        .args(["--defs", path.to_str().unwrap(), "engel", "X"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
    assert!(stderr.contains("column"), "{stderr}");
    assert!(stderr.contains("point 4 exceeds degree 3"), "{stderr}");
}

#[test]
fn unknown_group_exits_2() {
    let out = engel_bin()
        .args(["series", "NoSuchGroup"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_is_deterministic_for_one_group() {
    let run = || {
        engel_bin()
            .args(["verify", "baer", "M3_2", "--json"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "byte-identical JSON across runs");
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join("engel-cli-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let _ = std::fs::remove_file(&path);
    let out = engel_bin()
        .args(["engel", "C6", "--json", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&contents).unwrap();
    assert_eq!(v["group"]["order"], 6);
}

#[test]
fn defs_file_groups_are_usable() {
    let dir = std::env::temp_dir().join("engel-cli-test-defs");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("groups.defs");
    std::fs::write(
        &path,
        "group Q = perm 4 gens (1 2)(3 4), (1 3)(2 4)\ngroup R = cyclic 5\ngroup P = direct Q R\n",
    )
    .unwrap();
    let out = engel_bin()
        .args(["--defs", path.to_str().unwrap(), "series", "P", "--json"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(v["group"]["order"], 20);
    assert_eq!(v["series"]["nilpotency_class"], 1);
}

#[test]
fn bad_example_params_exit_2() {
    let out = engel_bin()
        .args(["verify-example", "--primes", "5,3", "--exps", "2,3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_definitions_rebuild_identical_groups() {
    // Every catalog entry carries definition text; parsing and building it
    // must reproduce a group with the same engine descriptor (hence the
    // same arithmetic) and order.
    for entry in engel_core::verify::catalog() {
        let defs = engel_cli::parse_definitions(&entry.definition)
            .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
        let reg = engel_cli::build(&defs, None).unwrap();
        let Some(engel_cli::Built::Finite(rebuilt)) = reg.lookup(&entry.name) else {
            panic!("{} did not rebuild", entry.name);
        };
        assert_eq!(rebuilt.order(), entry.group.order(), "{}", entry.name);
        assert_eq!(
            rebuilt.descriptor(),
            entry.group.descriptor(),
            "{}",
            entry.name
        );
    }
}

#[test]
fn rebuilt_small_groups_produce_identical_reports() {
    use engel_core::DEFAULT_SET_ANALYSIS_CAP as CAP;
    for entry in engel_core::verify::catalog() {
        if entry.group.order() > 100 {
            continue;
        }
        let defs = engel_cli::parse_definitions(&entry.definition).unwrap();
        let reg = engel_cli::build(&defs, None).unwrap();
        let Some(engel_cli::Built::Finite(rebuilt)) = reg.lookup(&entry.name) else {
            panic!("{} did not rebuild", entry.name);
        };
        let cls_a = engel_core::classify(&entry.group, CAP).unwrap();
        let cls_b = engel_core::classify(rebuilt, CAP).unwrap();
        let ja = engel_cli::report::engel_json(&entry.group, &cls_a);
        let jb = engel_cli::report::engel_json(rebuilt, &cls_b);
        assert_eq!(
            serde_json::to_string(&ja).unwrap(),
            serde_json::to_string(&jb).unwrap(),
            "{}",
            entry.name
        );
        let sa = engel_core::series::series_report(&entry.group, CAP).unwrap();
        let sb = engel_core::series::series_report(rebuilt, CAP).unwrap();
        assert_eq!(
            serde_json::to_string(&engel_cli::report::series_json(&sa)).unwrap(),
            serde_json::to_string(&engel_cli::report::series_json(&sb)).unwrap(),
            "{}",
            entry.name
        );
    }
}

#[test]
fn dihedral_as_semidirect_of_cyclics() {
    // C2 inverting C6 is dihedral of order 12; compare the reports.
    let dir = std::env::temp_dir().join("engel-cli-test-sd");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sd.defs");
    std::fs::write(
        &path,
        "group C2 = cyclic 2\ngroup C6 = cyclic 6\ngroup D = semidirect C2 C6 action g->g^-1\n",
    )
    .unwrap();
    let out = engel_bin()
        .args(["--defs", path.to_str().unwrap(), "series", "D", "--json"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["group"]["order"], 12);
    assert_eq!(v["series"]["fitting_order"], 6);
    assert_eq!(
        v["series"]["upper_central_orders"],
        serde_json::json!([1, 2])
    );
    assert_eq!(v["series"]["nilpotency_class"], serde_json::Value::Null);
}
