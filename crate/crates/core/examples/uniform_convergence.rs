// Sup-gap between sample and population utility shrinks like 1/√n, and the
// majority-vote regret stays within twice that gap.

use rand::Rng;
use repsoc::mechanisms::{majority_vote_tally, population_utility, tally_utility};
use repsoc::order::LinearOrder;
use repsoc::population::{IssueSpace, MarginalPopulation, PopulationSampler, SaliencyDistribution};
use repsoc::profile::Profile;
use repsoc::rng::{derive_seed, rng_from_seed};
use repsoc::space::{CandidateSpace, DEFAULT_CAP};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = 6;
    let mut rng = rng_from_seed(1);
    let issues = IssueSpace::numbered(m, 2)?;
    let (a, b): (LinearOrder, LinearOrder) = ("0>1".parse()?, "1>0".parse()?);
    let marginals = MarginalPopulation::new(
        2,
        (0..m)
            .map(|_| {
                let p = rng.gen_range(0.2..0.8);
                [(a.clone(), p), (b.clone(), 1.0 - p)].into_iter().collect()
            })
            .collect(),
    )?;
    let saliency = SaliencyDistribution::uniform(m);
    let members: Vec<Profile> = (0..12)
        .map(|_| Profile::new((0..m).map(|_| if rng.gen() { a.clone() } else { b.clone() }).collect()))
        .collect::<Result<_, _>>()?;
    let space = CandidateSpace::explicit(issues, members)?;
    let members = space.enumerate(DEFAULT_CAP)?;
    let utility: Vec<f64> = members
        .iter()
        .map(|c| population_utility(c, &saliency, &marginals))
        .collect::<Result<_, _>>()?;
    let best = utility.iter().copied().fold(0.0, f64::max);
    let sampler = PopulationSampler::new(&saliency, &marginals)?;

    let mut medians = Vec::new();
    for n in [100usize, 400, 1600, 6400] {
        let mut gaps = Vec::new();
        for t in 0..100u64 {
            let tally = sampler.sample_tally(n, derive_seed(5, &[n as u64, t]));
            let gap = members
                .iter()
                .zip(&utility)
                .map(|(c, u)| (tally_utility(c, &tally) - u).abs())
                .fold(0.0, f64::max);
            let chosen = majority_vote_tally(&tally, &space, DEFAULT_CAP)?.chosen;
            let u = population_utility(&chosen, &saliency, &marginals)?;
            assert!(u >= best - 2.0 * gap);
            gaps.push(gap);
        }
        gaps.sort_by(f64::total_cmp);
        let med = 0.5 * (gaps[49] + gaps[50]);
        println!("n = {n:5}: median sup-gap {med:.4}, scaled by sqrt(n) {:.3}", med * (n as f64).sqrt());
        medians.push(med);
    }
    assert!(medians.windows(2).all(|w| w[1] < w[0]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
