//! Acceptance criteria over the bundled corpus. Prints one line per
//! criterion; tolerances (time limits, budgets) are pinned in
//! `nrelcat::suite`.

use nrelcat::prescat::Budget;
use nrelcat::suite::{self, CriterionReport};

fn report(r: CriterionReport) -> bool {
    println!("{}", r.line());
    for c in r.checks.iter().filter(|c| c.outcome != suite::Outcome::Pass) {
        println!("    {}: {:?}", c.label, c.outcome);
    }
    r.passed()
}

#[test]
fn acceptance() {
    let budget = Budget::default();
    let runs: Vec<fn(Budget) -> CriterionReport> = vec![
        suite::counit_isomorphisms,
        suite::unit_isomorphisms,
        |_| suite::two_skeleton(),
        |_| suite::colimits_of_simplices(),
        |_| suite::divisions(),
        |_| suite::strict_homotopies(),
        |_| suite::appendix(),
        |_| suite::word_problem(),
    ];
    let mut failed = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        if !report(run(budget)) {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
