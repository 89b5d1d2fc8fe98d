//! Acceptance suite: one line per criterion, then a single assertion so every
//! criterion is reported even when an earlier one fails.

use std::time::Duration;

use slitwalk::verify::{self, CheckReport};

/// Wall-clock budgets per criterion, in seconds.
const BUDGETS: [(&str, u64); 11] = [
    ("oracle_equivalence", 30),
    ("factorization", 5),
    ("catalan_identities", 30),
    ("bridges", 30),
    ("extraction", 30),
    ("shifted_starts", 30),
    ("refined_model", 30),
    ("hitting_values", 1),
    ("hitting_tail", 10),
    ("conjecture_slice", 30),
    ("limit_law", 180),
];

fn report(r: &CheckReport, budget: Duration) -> bool {
    let in_time = r.elapsed <= budget;
    let ok = r.passed && in_time;
    println!(
        "{} {:<20} {:>7.2}s / {}s{}",
        if ok { "PASS" } else { "FAIL" },
        r.name,
        r.elapsed.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { "  over budget" }
    );
    for d in &r.details {
        println!("       {d}");
    }
    for n in &r.notes {
        println!("       note: {n}");
    }
    ok
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for (name, secs) in BUDGETS {
        let r = verify::run_named(name).expect("known criterion");
        if !report(&r, Duration::from_secs(secs)) {
            failed.push(name);
        }
    }
    println!("{} of {} criteria passed", BUDGETS.len() - failed.len(), BUDGETS.len());
    assert!(failed.is_empty(), "failed: {failed:?}");
}
