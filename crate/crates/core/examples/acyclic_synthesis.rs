// From acyclic privilege graphs to a candidate space and a mechanism that
// decides each two-outcome component by sample majority.

use repsoc::mechanisms::acyclic_mechanism;
use repsoc::order::LinearOrder;
use repsoc::population::{PopulationSampler, SaliencyDistribution, MarginalPopulation};
use repsoc::privilege::{build_privilege_graph, synthesize_acyclic, PrivilegeGraph};
use repsoc::population::IssueSpace;
use repsoc::space::DEFAULT_CAP;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let issues = IssueSpace::new(["x", "y"], 4)?;
    let graphs = vec![
        // {0,1} tied at the top, then 2, then 3
        PrivilegeGraph::new("x", 4, [(0, 1), (1, 0), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])?,
        PrivilegeGraph::new("y", 4, [(0, 1), (2, 3), (3, 2)])?,
    ];
    let plan = synthesize_acyclic(&issues, &graphs, None)?;
    println!("synthesized space has {} profiles", plan.space().size());
    for (i, g) in graphs.iter().enumerate() {
        let built = build_privilege_graph(plan.space(), i, DEFAULT_CAP)?;
        assert!(g.is_subgraph_of(&built));
        println!("issue {}: blocks {:?}", issues.id(i), plan.per_issue()[i].blocks());
    }

    let lo = |s: &str| s.parse::<LinearOrder>();
    let marginals = MarginalPopulation::new(
        4,
        vec![
            [(lo("1>0>2>3")?, 0.7), (lo("0>1>2>3")?, 0.3)].into_iter().collect(),
            [(lo("0>1>3>2")?, 0.55), (lo("0>1>2>3")?, 0.45)].into_iter().collect(),
        ],
    )?;
    let sampler = PopulationSampler::new(&SaliencyDistribution::uniform(2), &marginals)?;
    let tally = sampler.sample_tally(400, 8);
    let out = acyclic_mechanism(&plan, &tally)?;
    println!("output: x = {}, y = {}", out.get(0), out.get(1));
    assert!(plan.space().contains(&out)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
