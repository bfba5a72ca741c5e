// Which coalitions can force a pairwise outcome under majority vote.

use repsoc::axioms::{decisiveness_probe, estimate_axiom, pnd_scenario, Complement};
use repsoc::mechanisms::Mechanism;
use repsoc::population::IssueSpace;
use repsoc::space::CandidateSpace;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let binary = CandidateSpace::full(IssueSpace::numbered(1, 2)?);
    let ternary = CandidateSpace::full(IssueSpace::numbered(1, 3)?);
    let sizes = [11, 41, 161];

    for mass in [1.0, 2.0 / 3.0, 4.0 / 9.0] {
        let curve = decisiveness_probe(mass, 0, 1, Complement::Opposite, &binary, Mechanism::Majority, &sizes, 2000, 1)?;
        let rates: Vec<f64> = curve.points.iter().map(|p| p.rate).collect();
        println!("coalition {mass:.3} vs opposed rest: failure {rates:.4?}");
    }

    let fe = decisiveness_probe(
        2.0 / 3.0,
        0,
        2,
        Complement::FieldExpansion { middle: 1 },
        &ternary,
        Mechanism::Majority,
        &sizes,
        2000,
        2,
    )?;
    println!(
        "coalition on 0≻1≻2 vs rest on 1≻2≻0: failure to get 0≻2 {:.4?}",
        fe.points.iter().map(|p| p.rate).collect::<Vec<_>>()
    );

    // A minority coalition does not dictate.
    let pnd = estimate_axiom(&pnd_scenario(0.3, 2, 0, &ternary, Mechanism::Majority)?, &sizes, 2000, 3)?;
    assert!(pnd.passes);
    println!("minority 0.3 on 2≻0 wins with rate {:.4?}", pnd.points.iter().map(|p| p.rate).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
