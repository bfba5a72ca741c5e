// Cyclic pairwise majorities: whatever order a mechanism outputs, some
// strict majority is reversed.

use repsoc::axioms::{condorcet_scenario, cycle_violation_demo, cyclic_scenario};
use repsoc::population::IssueSpace;
use repsoc::space::CandidateSpace;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let space = CandidateSpace::full(IssueSpace::numbered(1, 3)?);

    let scn = cyclic_scenario(&space)?;
    let report = cycle_violation_demo(&scn, &[31, 301], 200, 4)?;
    assert!(report.every_trial_violates);
    for (&(a, b), k) in &report.frequency {
        println!("majority {a}≻{b} reversed in {k} of {} trials", report.trials.len());
    }

    let coalitions = condorcet_scenario(&space)?;
    println!(
        "three-coalition mixture: 0≻1 {:.4}, 0≻2 {:.4}, 2≻1 {:.4}",
        coalitions.pair_marginal(0, 0, 1)?,
        coalitions.pair_marginal(0, 0, 2)?,
        coalitions.pair_marginal(0, 2, 1)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
