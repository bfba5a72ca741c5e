// VC dimension of binary candidate spaces, with a shattering witness.

use repsoc::order::LinearOrder;
use repsoc::population::IssueSpace;
use repsoc::profile::Profile;
use repsoc::space::{is_shattered, vc_dimension, CandidateSpace, DEFAULT_CAP};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for m in 1..=5 {
        let full = CandidateSpace::full(IssueSpace::numbered(m, 2)?);
        let report = vc_dimension(&full, DEFAULT_CAP)?;
        assert_eq!(report.dimension, m);
        println!("full space on {m} issues: dimension {}", report.dimension);
    }

    // "At most one issue flips away from 0>1": every single issue is
    // shattered, no pair is.
    let m = 4;
    let (a, b): (LinearOrder, LinearOrder) = ("0>1".parse()?, "1>0".parse()?);
    let mut members = vec![Profile::new(vec![a.clone(); m])?];
    for k in 0..m {
        let mut orders = vec![a.clone(); m];
        orders[k] = b.clone();
        members.push(Profile::new(orders)?);
    }
    let space = CandidateSpace::explicit(IssueSpace::numbered(m, 2)?, members)?;
    let report = vc_dimension(&space, DEFAULT_CAP)?;
    assert_eq!(report.dimension, 1);
    assert!(is_shattered(&space, &report.witness, DEFAULT_CAP)?);
    println!("one-flip space: dimension {} witnessed by {:?}", report.dimension, report.witness);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
