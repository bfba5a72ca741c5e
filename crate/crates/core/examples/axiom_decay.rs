// Probabilistic Condorcet on a binary issue: failure rates against the
// exact binomial tail, and the fitted exponential rate.

use std::collections::BTreeMap;

use repsoc::axioms::{estimate_axiom, AxiomTarget, DecayFit, Scenario};
use repsoc::mechanisms::Mechanism;
use repsoc::population::{IssueSpace, MarginalPopulation, SaliencyDistribution};
use repsoc::space::CandidateSpace;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let issues = IssueSpace::numbered(1, 2)?;
    let marginals = MarginalPopulation::new(
        2,
        vec![BTreeMap::from([("0>1".parse()?, 0.75), ("1>0".parse()?, 0.25)])],
    )?;
    let scn = Scenario::new(
        issues.clone(),
        SaliencyDistribution::uniform(1),
        marginals,
        CandidateSpace::full(issues),
        Mechanism::Majority,
    )?
    .with_target(AxiomTarget::WeakPc { issue: 0, c: 0, c2: 1 });

    let curve = estimate_axiom(&scn, &[5, 9, 15, 21, 31], 20_000, 10)?;
    print!("{}", curve.to_csv());
    if let DecayFit::Fitted { rate, r2, .. } = curve.fit {
        let kl = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        println!("fitted rate {rate:.4} (r² {r2:.3}); KL(0.5‖0.75) = {kl:.4}");
    }
    println!("verdict: {}", if curve.passes { "decays" } else { "does not decay" });
    assert!(curve.passes);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
