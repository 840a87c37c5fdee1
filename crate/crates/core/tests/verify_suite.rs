//! End-to-end run of the built-in verification suite over every supported
//! type, plus failure-reporting behavior on tampered golden data.

use adeh_core::{all_passed, run_checks, AdeType, GoldenSource};

#[test]
fn every_type_passes_every_check() {
    let types = AdeType::verification_set();
    let outcomes = run_checks(&types, &GoldenSource::Embedded);
    for c in &outcomes {
        assert!(c.passed, "{} failed: {}", c.name, c.detail);
    }
    assert!(all_passed(&outcomes));
    // 7 checks per type, tau checks for 4 types, one scope line
    assert_eq!(outcomes.len(), 16 * 7 + 4 + 1);
    // deterministic order: grouped per type in canonical order
    assert_eq!(outcomes[0].name, "structure-A1");
    assert_eq!(outcomes.last().unwrap().name, "scope-statement");
}

#[test]
fn type_filtering_runs_only_requested_checks() {
    let outcomes = run_checks(&[AdeType::E(6)], &GoldenSource::Embedded);
    assert!(outcomes
        .iter()
        .all(|c| c.name.ends_with("-E6") || c.name == "scope-statement"));
    assert_eq!(outcomes.len(), 9);
    assert!(all_passed(&outcomes));
}

#[test]
fn tampered_golden_data_names_exactly_one_failure() {
    use std::fs;
    let dir = tempfile::tempdir().unwrap();
    for t in AdeType::verification_set() {
        let table = adeh_core::golden::embedded(t).unwrap();
        let mut text = table.render();
        if t == AdeType::E(8) {
            // corrupt one digit of the first coefficient of g_1
            text = text.replacen("\"73/2\"", "\"71/2\"", 1);
            assert!(text.contains("71/2"), "tamper target not found");
        }
        fs::write(dir.path().join(format!("{t}.json")), text).unwrap();
    }
    let outcomes = run_checks(
        &AdeType::verification_set(),
        &GoldenSource::Dir(dir.path().to_path_buf()),
    );
    let failures: Vec<_> = outcomes.iter().filter(|c| !c.passed).collect();
    assert_eq!(failures.len(), 1, "{failures:?}");
    assert_eq!(failures[0].name, "tables-E8");
    assert!(failures[0].detail.contains("g_1"), "{}", failures[0].detail);
}
