// The binary-issue duplication reduction samples the same (issue, order)
// law as the direct sampler.

use std::collections::BTreeMap;

use repsoc::order::LinearOrder;
use repsoc::population::{duplicate_issues, IssueSpace, MarginalPopulation, PopulationModel, SaliencyDistribution};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn reduced_sampler_matches_direct_sampler() {
    let (a, b): (LinearOrder, LinearOrder) = ("0>1".parse().unwrap(), "1>0".parse().unwrap());
    let ps = [0.7, 0.35, 0.5, 0.9];
    let model = PopulationModel::new(
        IssueSpace::numbered(ps.len(), 2).unwrap(),
        SaliencyDistribution::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap(),
        MarginalPopulation::new(
            2,
            ps.iter().map(|&p| BTreeMap::from([(a.clone(), p), (b.clone(), 1.0 - p)])).collect(),
        )
        .unwrap(),
    )
    .unwrap();
    let (reduced, origin) = duplicate_issues(&model).unwrap();
    assert_eq!(reduced.issues.len(), 2 * ps.len());

    let draws = 100_000;
    let direct = model.sampler().unwrap().sample(draws, 1);
    let via = reduced.sampler().unwrap().sample(draws, 2);
    let count = |pairs: &mut dyn Iterator<Item = (usize, LinearOrder)>| {
        let mut m: BTreeMap<(usize, LinearOrder), f64> = BTreeMap::new();
        for key in pairs {
            *m.entry(key).or_default() += 1.0;
        }
        m
    };
    let x = count(&mut direct.pairs().iter().map(|(o, i)| (*i, o.clone())));
    let y = count(&mut via.pairs().iter().map(|(o, i)| (origin[*i], o.clone())));

    // Two-sample chi-square on the 8 cells.
    let cells: Vec<_> = x.keys().chain(y.keys()).cloned().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let stat: f64 = cells
        .iter()
        .map(|k| {
            let (u, v) = (x.get(k).copied().unwrap_or(0.0), y.get(k).copied().unwrap_or(0.0));
            (u - v).powi(2) / (u + v)
        })
        .sum();
    let p = 1.0 - ChiSquared::new((cells.len() - 1) as f64).unwrap().cdf(stat);
    assert!(p > 0.001, "chi-square {stat} on {} cells, p = {p}", cells.len());
}
