// Empirical Rademacher complexity of a Kendall-score loss class against
// Massart's finite-class bound.

use repsoc::population::{sample_pairs, IssueSpace, MarginalPopulation, SaliencyDistribution};
use repsoc::scoring::ScoringRule;
use repsoc::space::{empirical_rademacher, CandidateSpace, InducedLossClass, DEFAULT_CAP};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let issues = IssueSpace::numbered(2, 3)?;
    let space = CandidateSpace::full(issues.clone());
    let class_size = space.size() as f64;
    let class = InducedLossClass {
        space,
        rule: ScoringRule::kendall(),
    };
    let marginals = MarginalPopulation::uniform(2, 3);
    let saliency = SaliencyDistribution::uniform(2);
    for n in [50usize, 200, 800] {
        let sample = sample_pairs(&saliency, &marginals, n, n as u64)?;
        let est = empirical_rademacher(&class, &sample, 300, 17, DEFAULT_CAP)?;
        let bound = (2.0 * class_size.ln() / n as f64).sqrt();
        let se = est.stderr.unwrap_or(0.0);
        println!("n = {n:4}: estimate {:.4} ± {:.4}, Massart bound {bound:.4}", est.estimate, se);
        assert!(est.estimate <= bound + 3.0 * se);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
