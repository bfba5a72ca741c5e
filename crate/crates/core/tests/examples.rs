//! Every example under examples/ runs as a test.

mod majority_vote {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/majority_vote.rs"));
}

mod uniform_convergence {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/uniform_convergence.rs"));
}

mod vc_dimension {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/vc_dimension.rs"));
}

mod rademacher {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/rademacher.rs"));
}

mod privilege_graph {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/privilege_graph.rs"));
}

mod acyclic_synthesis {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/acyclic_synthesis.rs"));
}

mod condorcet_cycle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/condorcet_cycle.rs"));
}

mod axiom_decay {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/axiom_decay.rs"));
}

mod decisiveness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/decisiveness.rs"));
}

mod experiment_config {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/experiment_config.rs"));
}

#[test]
fn majority_vote_example_runs() {
    majority_vote::run_example().expect("majority_vote example");
}

#[test]
fn uniform_convergence_example_runs() {
    uniform_convergence::run_example().expect("uniform_convergence example");
}

#[test]
fn vc_dimension_example_runs() {
    vc_dimension::run_example().expect("vc_dimension example");
}

#[test]
fn rademacher_example_runs() {
    rademacher::run_example().expect("rademacher example");
}

#[test]
fn privilege_graph_example_runs() {
    privilege_graph::run_example().expect("privilege_graph example");
}

#[test]
fn acyclic_synthesis_example_runs() {
    acyclic_synthesis::run_example().expect("acyclic_synthesis example");
}

#[test]
fn condorcet_cycle_example_runs() {
    condorcet_cycle::run_example().expect("condorcet_cycle example");
}

#[test]
fn axiom_decay_example_runs() {
    axiom_decay::run_example().expect("axiom_decay example");
}

#[test]
fn decisiveness_example_runs() {
    decisiveness::run_example().expect("decisiveness example");
}

#[test]
fn experiment_config_example_runs() {
    experiment_config::run_example().expect("experiment_config example");
}
