// Acceptance suite: one PASS/FAIL line per criterion.
//
// Runs without the libtest harness so the lines always reach stdout. The
// process fails only when a criterion outside KNOWN_UNATTAINABLE fails.
// Criteria 6 and 9 assert statements that do not hold for the objects they
// describe; they are evaluated as written and reported.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use repsoc::axioms::{
    condorcet_scenario, cycle_violation_demo, cyclic_scenario, estimate_axiom, fit_decay,
    AxiomTarget, DecayCurve, DecayFit, PiiaCoupling, Scenario,
};
use repsoc::mechanisms::{
    majority_vote, majority_vote_tally, population_utility, scoring_mechanism, tally_utility,
    Mechanism,
};
use repsoc::order::{LinearOrder, PartialOrder};
use repsoc::population::{
    sample_pairs, IssueSpace, MarginalPopulation, PopulationSampler, SaliencyDistribution,
};
use repsoc::privilege::{
    build_privilege_graph, check_path_privilege, is_cyclically_privileged, is_privileged,
    scc_condensation, synthesize_acyclic, PrivilegeGraph,
};
use repsoc::profile::Profile;
use repsoc::rng::{derive_seed, rng_from_seed};
use repsoc::runner::{run, RunOptions};
use repsoc::scoring::ScoringRule;
use repsoc::space::{
    empirical_rademacher, is_shattered, vc_dimension, CandidateSpace, InducedLossClass,
    DEFAULT_CAP,
};
use statrs::distribution::{Binomial, DiscreteCDF};

const KNOWN_UNATTAINABLE: [u32; 2] = [6, 9];

type Outcome = (bool, String);

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "uniform convergence", crit1),
        (2, "regret inequality", crit2),
        (3, "scoring/majority equivalence", crit3),
        (4, "VC oracle", crit4),
        (5, "Rademacher vs Massart", crit5),
        (6, "privilege graph laws", crit6),
        (7, "coupled-issue product space", crit7),
        (8, "acyclic construction", crit8),
        (9, "cyclic demonstration", crit9),
        (10, "Hoeffding decay", crit10),
        (11, "determinism", crit11),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (k, name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str()) || *s == k.to_string()) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = f();
        let secs = t.elapsed().as_secs_f64();
        let tag = if ok { "PASS" } else { "FAIL" };
        let note = if !ok && KNOWN_UNATTAINABLE.contains(&k) { " (known unattainable)" } else { "" };
        println!("{tag} criterion {k:2} {name}{note}: {detail} [{secs:.1}s]");
        if !ok && !KNOWN_UNATTAINABLE.contains(&k) {
            unexpected.push(k);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- 1 and 2

struct GapTrial {
    size: usize,
    gap: f64,
    chosen_utility: f64,
}

/// Shared run for criteria 1 and 2: eight binary issues, 32 random
/// profiles, a random population bounded away from 0 and 1.
fn convergence_trials() -> &'static (f64, Vec<GapTrial>) {
    static CELL: std::sync::OnceLock<(f64, Vec<GapTrial>)> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let m = 8;
        let mut rng = rng_from_seed(101);
        let issues = IssueSpace::numbered(m, 2).unwrap();
        let (a, b): (LinearOrder, LinearOrder) = ("0>1".parse().unwrap(), "1>0".parse().unwrap());
        let marginals = MarginalPopulation::new(
            2,
            (0..m)
                .map(|_| {
                    let p = rng.gen_range(0.15..0.85);
                    BTreeMap::from([(a.clone(), p), (b.clone(), 1.0 - p)])
                })
                .collect(),
        )
        .unwrap();
        let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..1.5)).collect();
        let total: f64 = raw.iter().sum();
        let saliency = SaliencyDistribution::new(raw.iter().map(|w| w / total).collect()).unwrap();
        let mut members = BTreeSet::new();
        while members.len() < 32 {
            members.insert((0..m).map(|_| if rng.gen() { a.clone() } else { b.clone() }).collect::<Vec<_>>());
        }
        let space = CandidateSpace::explicit(
            issues,
            members.into_iter().map(|o| Profile::new(o).unwrap()).collect(),
        )
        .unwrap();
        let members = space.enumerate(DEFAULT_CAP).unwrap();
        let utility: Vec<f64> = members
            .iter()
            .map(|c| population_utility(c, &saliency, &marginals).unwrap())
            .collect();
        let best = utility.iter().copied().fold(0.0, f64::max);
        let sampler = PopulationSampler::new(&saliency, &marginals).unwrap();
        let mut out = Vec::new();
        for size in [4096usize, 10_000, 16_384] {
            use rayon::prelude::*;
            let batch: Vec<GapTrial> = (0..200u64)
                .into_par_iter()
                .map(|t| {
                    let tally = sampler.sample_tally(size, derive_seed(9, &[size as u64, t]));
                    let gap = members
                        .iter()
                        .zip(&utility)
                        .map(|(c, u)| (tally_utility(c, &tally) - u).abs())
                        .fold(0.0, f64::max);
                    let chosen = majority_vote_tally(&tally, &space, DEFAULT_CAP).unwrap().chosen;
                    GapTrial {
                        size,
                        gap,
                        chosen_utility: population_utility(&chosen, &saliency, &marginals).unwrap(),
                    }
                })
                .collect();
            out.extend(batch);
        }
        (best, out)
    })
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn crit1() -> Outcome {
    let (_, trials) = convergence_trials();
    let gaps = |n: usize| trials.iter().filter(|t| t.size == n).map(|t| t.gap).collect::<Vec<_>>();
    let at10k = gaps(10_000);
    let within = at10k.iter().filter(|&&g| g <= 0.05).count() as f64 / at10k.len() as f64;
    let (m4, m16) = (median(gaps(4096)), median(gaps(16_384)));
    let ok = within >= 0.95 && m16 <= 0.55 * m4;
    (
        ok,
        format!(
            "P[gap ≤ 0.05] at n=10⁴ is {within:.3}; median gap {m4:.5} (4096) → {m16:.5} (16384), ratio {:.3}",
            m16 / m4
        ),
    )
}

fn crit2() -> Outcome {
    let (best, trials) = convergence_trials();
    let bad = trials
        .iter()
        .filter(|t| !(t.chosen_utility >= best - 2.0 * t.gap))
        .count();
    (bad == 0, format!("{bad} violations in {} trials", trials.len()))
}

// ---------------------------------------------------------------------- 3

fn random_population(rng: &mut ChaCha8Rng, m: usize, n: usize) -> (SaliencyDistribution, MarginalPopulation) {
    let all = LinearOrder::all(n);
    let per_issue = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=all.len());
            let chosen: Vec<&LinearOrder> = all.choose_multiple(rng, k).collect();
            let w: Vec<f64> = chosen.iter().map(|_| rng.gen_range(0.1..1.0)).collect();
            let s: f64 = w.iter().sum();
            chosen.into_iter().cloned().zip(w.into_iter().map(|x| x / s)).collect()
        })
        .collect();
    let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = w.iter().sum();
    (
        SaliencyDistribution::new(w.into_iter().map(|x| x / s).collect()).unwrap(),
        MarginalPopulation::new(n, per_issue).unwrap(),
    )
}

fn random_explicit(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize) -> CandidateSpace {
    let all = LinearOrder::all(n);
    let profiles = (0..k)
        .map(|_| (0..m).map(|_| all.choose(rng).unwrap().clone()).collect::<Vec<_>>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|orders| Profile::new(orders).unwrap())
        .collect();
    CandidateSpace::explicit(IssueSpace::numbered(m, n).unwrap(), profiles).unwrap()
}

fn crit3() -> Outcome {
    let mut rng = rng_from_seed(303);
    let exact = ScoringRule::exact_match();
    let mut bad = 0;
    for t in 0..1000u64 {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=3);
        let space = if rng.gen_bool(0.2) {
            CandidateSpace::full(IssueSpace::numbered(m, n).unwrap())
        } else {
            let k = rng.gen_range(1..=10);
            random_explicit(&mut rng, m, n, k)
        };
        let (d, mm) = random_population(&mut rng, m, n);
        let size = rng.gen_range(0..=60);
        let sample = sample_pairs(&d, &mm, size, t).unwrap();
        let a = majority_vote(&sample, &space, DEFAULT_CAP).unwrap().chosen;
        let b = scoring_mechanism(&sample, &space, &exact, DEFAULT_CAP).unwrap().chosen;
        if a != b {
            bad += 1;
        }
    }
    (bad == 0, format!("{bad} mismatches in 1000 instances"))
}

// ---------------------------------------------------------------------- 4

fn brute_vc(space: &CandidateSpace) -> usize {
    let m = space.issues().len();
    let members = space.enumerate(DEFAULT_CAP).unwrap();
    (0..=m)
        .rev()
        .find(|&d| {
            (0..m).combinations(d).any(|s| {
                let seen: BTreeSet<Vec<usize>> = members
                    .iter()
                    .map(|c| s.iter().map(|&i| c.get(i).ranking()[0]).collect())
                    .collect();
                seen.len() == 1 << d
            })
        })
        .unwrap_or(0)
}

fn crit4() -> Outcome {
    let mut failures = Vec::new();
    for m in 1..=6 {
        let full = CandidateSpace::full(IssueSpace::numbered(m, 2).unwrap());
        let r = vc_dimension(&full, DEFAULT_CAP).unwrap();
        if r.dimension != m || !is_shattered(&full, &r.witness, DEFAULT_CAP).unwrap() {
            failures.push(format!("full m={m} gave {}", r.dimension));
        }
    }
    let mut rng = rng_from_seed(404);
    for m in 1..=6 {
        let single = random_explicit(&mut rng, m, 2, 1);
        if vc_dimension(&single, DEFAULT_CAP).unwrap().dimension != 0 {
            failures.push(format!("singleton m={m}"));
        }
    }
    for _ in 0..100 {
        let m = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=24);
        let space = random_explicit(&mut rng, m, 2, k);
        let r = vc_dimension(&space, DEFAULT_CAP).unwrap();
        if r.dimension != brute_vc(&space) || !is_shattered(&space, &r.witness, DEFAULT_CAP).unwrap() {
            failures.push(format!("random m={m} k={k}"));
        }
    }
    (failures.is_empty(), if failures.is_empty() {
        "full m=1..6, singletons and 100 random spaces match, witnesses verified".into()
    } else {
        failures.join("; ")
    })
}

// ---------------------------------------------------------------------- 5

fn crit5() -> Outcome {
    let mut rng = rng_from_seed(505);
    let mut worst = f64::NEG_INFINITY;
    let mut bad = 0;
    for case in 0..50u64 {
        let k = rng.gen_range(2..=20);
        let space = random_explicit(&mut rng, 2, 3, k);
        let size = space.size() as f64;
        if size < 2.0 {
            continue;
        }
        let (d, m) = random_population(&mut rng, 2, 3);
        let n = rng.gen_range(50..=300);
        let sample = sample_pairs(&d, &m, n, case).unwrap();
        let class = InducedLossClass {
            space,
            rule: ScoringRule::kendall(),
        };
        let est = empirical_rademacher(&class, &sample, 200, case + 1000, DEFAULT_CAP).unwrap();
        let bound = (2.0 * size.ln() / n as f64).sqrt() + 3.0 * est.stderr.unwrap_or(0.0);
        worst = worst.max(est.estimate - bound);
        if est.estimate > bound {
            bad += 1;
        }
    }
    (bad == 0, format!("{bad} of 50 classes above the bound; max(estimate − bound) = {worst:.4}"))
}

// ---------------------------------------------------------------------- 6

struct LawCounts {
    spaces: usize,
    transitivity_violations: usize,
    concat_checked: usize,
    concat_violations: usize,
    path_checked: usize,
    path_violations: usize,
    non_necessity: usize,
    first_transitivity: Option<String>,
    first_path: Option<String>,
}

fn law_pass(space: &CandidateSpace, c: &mut LawCounts) {
    let n = space.n();
    let g = build_privilege_graph(space, 0, DEFAULT_CAP).unwrap();
    let members: Vec<String> = space
        .enumerate(DEFAULT_CAP)
        .unwrap()
        .iter()
        .map(|p| p.get(0).to_string())
        .collect();
    c.spaces += 1;
    if !g.is_transitive() {
        c.transitivity_violations += 1;
        c.first_transitivity.get_or_insert_with(|| {
            format!("𝒞 = {{{}}}, edges {:?}", members.join(", "), g.edges())
        });
    }
    let chains = PartialOrder::all(n, 2);
    let privileged: Vec<&PartialOrder> = chains
        .iter()
        .filter(|o| is_privileged(space, 0, o, DEFAULT_CAP).unwrap())
        .collect();
    for a in &privileged {
        for b in &privileged {
            if let Some(ab) = a.concat(b) {
                c.concat_checked += 1;
                if !is_privileged(space, 0, &ab, DEFAULT_CAP).unwrap() {
                    c.concat_violations += 1;
                }
            }
        }
    }
    for o in &chains {
        let by_path = check_path_privilege(&g, o);
        let truth = is_privileged(space, 0, o, DEFAULT_CAP).unwrap();
        if by_path {
            c.path_checked += 1;
            if !truth {
                c.path_violations += 1;
                c.first_path.get_or_insert_with(|| {
                    format!("𝒞 = {{{}}}, chain {:?}", members.join(", "), o.subset())
                });
            }
        } else if truth {
            c.non_necessity += 1;
        }
    }
}

fn crit6() -> Outcome {
    let mut rng = rng_from_seed(606);
    let mut c = LawCounts {
        spaces: 0,
        transitivity_violations: 0,
        concat_checked: 0,
        concat_violations: 0,
        path_checked: 0,
        path_violations: 0,
        non_necessity: 0,
        first_transitivity: None,
        first_path: None,
    };
    for (n, count) in [(3usize, 120usize), (4, 15)] {
        let all = LinearOrder::all(n);
        for _ in 0..count {
            let k = rng.gen_range(1..=all.len());
            let chosen: Vec<Profile> = all
                .choose_multiple(&mut rng, k)
                .map(|o| Profile::new(vec![o.clone()]).unwrap())
                .collect();
            let space = CandidateSpace::explicit(IssueSpace::numbered(1, n).unwrap(), chosen).unwrap();
            law_pass(&space, &mut c);
        }
    }
    let ok = c.transitivity_violations == 0 && c.concat_violations == 0 && c.path_violations == 0;
    let mut detail = format!(
        "{} spaces; transitivity violations {}; concatenation {}/{} violations; path soundness {}/{} violations; {} privileged chains without a path (logged)",
        c.spaces,
        c.transitivity_violations,
        c.concat_violations,
        c.concat_checked,
        c.path_violations,
        c.path_checked,
        c.non_necessity
    );
    if let Some(s) = c.first_transitivity {
        detail += &format!("; first non-transitive graph: {s}");
    }
    if let Some(s) = c.first_path {
        detail += &format!("; first unsound path: {s}");
    }
    (ok, detail)
}

// ---------------------------------------------------------------------- 7

fn crit7() -> Outcome {
    let lo = |s: &str| s.parse::<LinearOrder>().unwrap();
    let space = CandidateSpace::product(
        IssueSpace::new(["A", "B", "C"], 3).unwrap(),
        vec![
            (vec![0, 1], vec![vec![lo("0>1>2"), lo("0>1>2")], vec![lo("2>1>0"), lo("2>1>0")]]),
            (vec![2], LinearOrder::all(3).into_iter().map(|o| vec![o]).collect()),
        ],
    )
    .unwrap();
    let g = build_privilege_graph(&space, 2, DEFAULT_CAP).unwrap();
    let complete = g == PrivilegeGraph::complete("C", 3);
    let cyclic = is_cyclically_privileged(&g);
    let two_cycles = PrivilegeGraph::new("x", 4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
    let not_cyclic = !is_cyclically_privileged(&two_cycles);
    (
        complete && cyclic && not_cyclic,
        format!("complete: {complete}, cyclic: {cyclic}, 2-cycle-only graph cyclic: {}", !not_cyclic),
    )
}

// ---------------------------------------------------------------------- 8

/// Transitive digraphs on four vertices whose components have at most two
/// outcomes, one per isomorphism class.
fn acyclic_graph_classes() -> Vec<Vec<(usize, usize)>> {
    let n = 4;
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let edges: BTreeSet<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let transitive = edges.iter().all(|&(u, v)| {
            edges.iter().filter(|&&(x, _)| x == v).all(|&(_, w)| w == u || edges.contains(&(u, w)))
        });
        if !transitive {
            continue;
        }
        let g = PrivilegeGraph::new("g", n, edges.iter().copied()).unwrap();
        if scc_condensation(&g).scc_members.iter().any(|c| c.len() > 2) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| edges.iter().map(|&(u, v)| (p[u], p[v])).sorted().collect::<Vec<_>>())
            .min()
            .unwrap();
        if seen.insert(canon.clone()) {
            out.push(canon);
        }
    }
    out
}

fn reversed(o: &LinearOrder) -> LinearOrder {
    LinearOrder::new(o.ranking().iter().rev().copied().collect()).unwrap()
}

fn mixture(parts: &[(f64, &LinearOrder)]) -> MarginalPopulation {
    let mut dist = BTreeMap::new();
    for (p, o) in parts {
        *dist.entry((*o).clone()).or_insert(0.0) += p;
    }
    MarginalPopulation::new(o_n(parts), vec![dist]).unwrap()
}

fn o_n(parts: &[(f64, &LinearOrder)]) -> usize {
    parts[0].1.n()
}

fn decay_ok(curve: &DecayCurve) -> bool {
    curve.passes
}

fn crit8() -> Outcome {
    let classes = acyclic_graph_classes();
    let sizes = [25, 50, 100, 200, 400];
    let issues = IssueSpace::numbered(1, 4).unwrap();
    let mut failures = Vec::new();
    let mut tested = 0;
    for (k, edges) in classes.iter().enumerate() {
        let g = PrivilegeGraph::new("0", 4, edges.iter().copied()).unwrap();
        let plan = match synthesize_acyclic(&issues, std::slice::from_ref(&g), None) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("class {k}: {e}"));
                continue;
            }
        };
        let built = build_privilege_graph(plan.space(), 0, DEFAULT_CAP).unwrap();
        if !g.is_subgraph_of(&built) {
            failures.push(format!("class {k}: not a supergraph"));
        }
        let Some(pair) = scc_condensation(&g).scc_members.into_iter().find(|c| c.len() == 2) else {
            continue;
        };
        tested += 1;
        let (a, b) = (pair[0], pair[1]);
        let members = plan.space().enumerate(DEFAULT_CAP).unwrap();
        let c_ab = members.iter().find(|p| p.get(0).prefers(a, b)).unwrap().get(0).clone();
        let c_ba = LinearOrder::new(
            c_ab.ranking().iter().map(|&x| if x == a { b } else if x == b { a } else { x }).collect(),
        )
        .unwrap();
        let mech = Mechanism::parse("acyclic", Some(plan.clone())).unwrap();
        let scenario = |m: MarginalPopulation| {
            Scenario::new(issues.clone(), SaliencyDistribution::uniform(1), m, plan.space().clone(), mech.clone())
                .unwrap()
        };
        let seed = 800 + k as u64;
        let ppe = scenario(mixture(&[(1.0, &c_ab)])).with_target(AxiomTarget::Ppe {
            issue: 0,
            profile: Profile::new(vec![c_ab.clone()]).unwrap(),
            c: a,
            c2: b,
        });
        let spc = scenario(mixture(&[(0.6, &c_ab), (0.4, &c_ba)]))
            .with_target(AxiomTarget::StrongPc { issue: 0, c: a, c2: b });
        let (r_ab, r_ba) = (reversed(&c_ba), reversed(&c_ab));
        let spiia = scenario(mixture(&[(0.6, &c_ab), (0.4, &c_ba)]))
            .with_target(AxiomTarget::StrongPiia { issue: 0, c: a, c2: b })
            .with_second(mixture(&[(0.6, &r_ab), (0.4, &r_ba)]), PiiaCoupling::Independent);
        for (name, scn) in [("PPE", ppe), ("S-PC", spc), ("S-PIIA", spiia)] {
            match estimate_axiom(&scn, &sizes, 2000, seed) {
                Ok(curve) if decay_ok(&curve) => {}
                Ok(curve) => failures.push(format!(
                    "class {k} {name}: rates {:?}, fit {:?}",
                    curve.points.iter().map(|p| p.rate).collect::<Vec<_>>(),
                    curve.fit
                )),
                Err(e) => failures.push(format!("class {k} {name}: {e}")),
            }
        }
    }
    let ok = classes.len() >= 20 && failures.is_empty();
    (
        ok,
        format!(
            "{} isomorphism classes, {tested} with a two-outcome component tested; {}",
            classes.len(),
            if failures.is_empty() { "all checks pass".to_string() } else { failures.join("; ") }
        ),
    )
}

// ---------------------------------------------------------------------- 9

fn crit9() -> Outcome {
    let space = CandidateSpace::full(IssueSpace::numbered(1, 3).unwrap());
    let scn = cyclic_scenario(&space).unwrap();
    let report = cycle_violation_demo(&scn, &[101], 1000, 909).unwrap();
    let share = report.trials.iter().filter(|t| !t.violated.is_empty()).count();
    let coalitions = condorcet_scenario(&space).unwrap();
    let (uv, uw, wv) = (
        coalitions.pair_marginal(0, 0, 1).unwrap(),
        coalitions.pair_marginal(0, 0, 2).unwrap(),
        coalitions.pair_marginal(0, 2, 1).unwrap(),
    );
    let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
    let checks = [
        ("violations in every trial", report.every_trial_violates),
        ("u≻v = 2/3", close(uv, 2.0 / 3.0)),
        ("u≻w = 2/9", close(uw, 2.0 / 9.0)),
        ("w≻v = 7/9", close(wv, 7.0 / 9.0)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    (
        failed.is_empty(),
        format!(
            "{share}/1000 trials violate a majority; u≻v {uv:.6}, u≻w {uw:.6}, w≻v {wv:.6} (4/9 = {:.6}); failed: {failed:?}",
            4.0 / 9.0
        ),
    )
}

// --------------------------------------------------------------------- 10

fn crit10() -> Outcome {
    let issues = IssueSpace::numbered(1, 2).unwrap();
    let (a, b): (LinearOrder, LinearOrder) = ("0>1".parse().unwrap(), "1>0".parse().unwrap());
    let scn = Scenario::new(
        issues.clone(),
        SaliencyDistribution::uniform(1),
        mixture(&[(0.75, &a), (0.25, &b)]),
        CandidateSpace::full(issues),
        Mechanism::Majority,
    )
    .unwrap()
    .with_target(AxiomTarget::WeakPc { issue: 0, c: 0, c2: 1 });
    let trials = 1_000_000;
    let curve = estimate_axiom(&scn, &[11, 21, 41, 81], trials, 1010).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for p in &curve.points {
        let exact = Binomial::new(0.75, p.size as u64).unwrap().cdf(p.size as u64 / 2);
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        let z = (p.rate - exact) / se;
        ok &= z.abs() <= 3.0;
        parts.push(format!("n={} rate {:.3e} vs {:.3e} (z {z:+.2})", p.size, p.rate, exact));
    }
    let kl = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
    let rate = match fit_decay(&curve.points.iter().map(|p| (p.size as f64, p.rate)).collect::<Vec<_>>()) {
        DecayFit::Fitted { rate, .. } => rate,
        DecayFit::Saturated { .. } => f64::NAN,
    };
    ok &= (rate / kl - 1.0).abs() <= 0.2;
    parts.push(format!("α̂ {rate:.4} vs KL {kl:.6} (ratio {:.3})", rate / kl));
    (ok, parts.join("; "))
}

// --------------------------------------------------------------------- 11

fn csv_bodies(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

fn crit11() -> Outcome {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/data");
    let data = data.canonicalize().unwrap();
    let d = |f: &str| data.join(f).display().to_string();
    let tmp = tempfile::tempdir().unwrap();
    let configs = [
        ("generalization", format!(r#"{{"experiment":"generalization","population":"{}","space":"{}","sizes":[0,256,1024],"trials":25,"seed":4}}"#, d("binary8_population.json"), d("binary8_space32.json"))),
        ("regret", format!(r#"{{"experiment":"mechanism-regret","population":"{}","space":"{}","mechanism":"scoring:kendall","sizes":[64,256],"trials":25,"seed":4}}"#, d("binary8_population.json"), d("binary8_space32.json"))),
        ("axiom", format!(r#"{{"experiment":"axiom","population":"{}","space":"{}","axiom":{{"kind":"w-pc","c":0,"c2":1}},"sizes":[11,21,41],"trials":3000,"seed":4}}"#, d("binary1_population.json"), d("binary1_full.json"))),
        ("condorcet", r#"{"experiment":"condorcet-demo","sizes":[30,90],"trials":300,"seed":4}"#.to_string()),
        ("rademacher", format!(r#"{{"experiment":"rademacher","population":"{}","space":"{}","sizes":[100],"trials":3,"sign_draws":50,"seed":4}}"#, d("binary8_population.json"), d("binary8_space32.json"))),
        ("privilege", format!(r#"{{"experiment":"privilege-analysis","space":"{}"}}"#, d("coupled_product.json"))),
    ];
    let mut mismatched = Vec::new();
    for (name, text) in &configs {
        let cfg = tmp.path().join(format!("{name}.json"));
        fs::write(&cfg, text).unwrap();
        let mut runs = Vec::new();
        for (k, threads) in [1usize, 4, 4].into_iter().enumerate() {
            let out = tmp.path().join(format!("{name}-{k}"));
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                run(
                    &cfg,
                    &RunOptions {
                        out: Some(out.clone()),
                        ..RunOptions::default()
                    },
                )
            })
            .unwrap();
            runs.push(csv_bodies(&out));
        }
        if runs.iter().any(|r| r != &runs[0] || r.is_empty()) {
            mismatched.push(*name);
        }
    }
    (
        mismatched.is_empty(),
        format!("{} configs × 3 runs (1 and 4 threads); mismatches: {mismatched:?}", configs.len()),
    )
}
