// Majority vote over a restricted candidate space, and the exact-match
// scoring mechanism that reproduces it.

use std::collections::BTreeMap;

use repsoc::mechanisms::{majority_vote, population_utility, sample_utility, scoring_mechanism};
use repsoc::order::LinearOrder;
use repsoc::population::{sample_pairs, IssueSpace, MarginalPopulation, SaliencyDistribution};
use repsoc::profile::Profile;
use repsoc::scoring::ScoringRule;
use repsoc::space::{CandidateSpace, DEFAULT_CAP};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let issues = IssueSpace::new(["budget", "zoning"], 3)?;
    let saliency = SaliencyDistribution::new(vec![0.7, 0.3])?;
    let marginals = MarginalPopulation::new(
        3,
        vec![
            BTreeMap::from([("0>1>2".parse()?, 0.5), ("1>0>2".parse()?, 0.3), ("2>1>0".parse()?, 0.2)]),
            BTreeMap::from([("2>0>1".parse()?, 0.6), ("0>2>1".parse()?, 0.4)]),
        ],
    )?;

    // Only three platforms are on the ballot.
    let p = |a: &str, b: &str| -> Result<Profile, repsoc::error::Error> {
        Profile::new(vec![a.parse::<LinearOrder>()?, b.parse()?])
    };
    let space = CandidateSpace::explicit(
        issues.clone(),
        vec![p("0>1>2", "0>2>1")?, p("1>0>2", "2>0>1")?, p("2>1>0", "2>0>1")?],
    )?;

    let sample = sample_pairs(&saliency, &marginals, 500, 42)?;
    let maj = majority_vote(&sample, &space, DEFAULT_CAP)?;
    let exact = scoring_mechanism(&sample, &space, &ScoringRule::exact_match(), DEFAULT_CAP)?;
    assert_eq!(maj.chosen, exact.chosen);

    for c in space.enumerate(DEFAULT_CAP)? {
        println!(
            "{:?}: sample utility {:.3}, population utility {:.3}",
            c.orders().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            sample_utility(&c, &sample)?,
            population_utility(&c, &saliency, &marginals)?
        );
    }
    println!(
        "majority vote picks {:?} (ties: {})",
        maj.chosen.orders().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        maj.tie_set_size
    );
    let kendall = scoring_mechanism(&sample, &space, &ScoringRule::kendall(), DEFAULT_CAP)?;
    println!(
        "Kendall scoring picks {:?}",
        kendall.chosen.orders().iter().map(|o| o.to_string()).collect::<Vec<_>>()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
