//! Acceptance criteria 1–9, one PASS/FAIL line each.

use std::io::Write;

use quadmap::selfcheck::{run_criterion, SelfCheckConfig, CRITERIA};

#[test]
fn acceptance() {
    let cfg = SelfCheckConfig::default();
    // written to the raw handle so the lines show up even when output is captured
    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for &(id, _, _) in &CRITERIA {
        let r = run_criterion(id, &cfg).unwrap();
        let _ = writeln!(err, "{r}");
        for d in &r.details {
            let _ = writeln!(err, "    {d}");
        }
        if !r.passed() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
