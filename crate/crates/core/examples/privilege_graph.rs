// Privilege graphs: which orderings on an issue every candidate must honour.

use repsoc::order::{LinearOrder, PartialOrder};
use repsoc::population::IssueSpace;
use repsoc::privilege::{
    analyze_issue, build_privilege_graph, check_path_privilege, is_cyclically_privileged,
    is_privileged, PrivilegeGraph,
};
use repsoc::profile::Profile;
use repsoc::space::{CandidateSpace, DEFAULT_CAP};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Issues A and B move together; C is unconstrained.
    let lo = |s: &str| s.parse::<LinearOrder>();
    let space = CandidateSpace::product(
        IssueSpace::new(["A", "B", "C"], 3)?,
        vec![
            (vec![0, 1], vec![vec![lo("0>1>2")?, lo("0>1>2")?], vec![lo("2>1>0")?, lo("2>1>0")?]]),
            (vec![2], LinearOrder::all(3).into_iter().map(|o| vec![o]).collect()),
        ],
    )?;
    for i in 0..3 {
        let a = analyze_issue(&space, i, DEFAULT_CAP)?;
        print!("{}", a.graph.to_edge_list());
        println!("cyclically privileged: {}\n", a.cyclic);
    }
    let c = build_privilege_graph(&space, 2, DEFAULT_CAP)?;
    assert_eq!(c, PrivilegeGraph::complete("C", 3));

    // Only 2-cycles: not cyclic.
    let pairs = PrivilegeGraph::new("x", 4, [(0, 1), (1, 0), (2, 3), (3, 2)])?;
    assert!(!is_cyclically_privileged(&pairs));

    // Edges need not compose. Here 0≻1 and 1≻2 are privileged but 0≻2 is not,
    // so a path in the graph is no certificate on its own.
    let narrow = CandidateSpace::explicit(
        IssueSpace::numbered(1, 3)?,
        ["2>0>1", "1>0>2", "0>1>2"]
            .iter()
            .map(|s| Ok(Profile::new(vec![s.parse()?])?))
            .collect::<Result<Vec<_>, repsoc::error::Error>>()?,
    )?;
    let g = build_privilege_graph(&narrow, 0, DEFAULT_CAP)?;
    let chain = PartialOrder::new(vec![0, 1, 2], 3)?;
    let direct = PartialOrder::pair(0, 2, 3)?;
    println!("narrow space edges: {:?}", g.edges());
    println!(
        "path 0,1,2 reachable: {}, 0≻2 privileged: {}",
        check_path_privilege(&g, &chain),
        is_privileged(&narrow, 0, &direct, DEFAULT_CAP)?
    );
    assert!(!g.is_transitive());
    print!("{}", g.to_dot());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
