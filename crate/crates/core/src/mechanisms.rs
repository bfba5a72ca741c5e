//! Utilities, scores, and the mechanisms that maximize them over a candidate space.
//!
//! Every mechanism reads a [`SampleTally`], never the ordered sample, so
//! outputs cannot depend on the order in which pairs were drawn.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::order::LinearOrder;
use crate::population::{MarginalPopulation, SaliencyDistribution, SampleSet, SampleTally};
use crate::privilege::AcyclicPlan;
use crate::profile::Profile;
use crate::scoring::ScoringRule;
use crate::space::{CandidateSpace, SpaceVariant};

fn check_cover(c: &Profile, issues: usize) -> Result<()> {
    if c.issue_count() != issues {
        return Err(Error::invalid(format!(
            "profile covers {} issues, the data covers {issues}",
            c.issue_count()
        )));
    }
    Ok(())
}

fn check_population(
    c: &Profile,
    saliency: &SaliencyDistribution,
    marginals: &MarginalPopulation,
) -> Result<()> {
    check_cover(c, marginals.issue_count())?;
    if saliency.len() != marginals.issue_count() {
        return Err(Error::invalid("saliency and marginals disagree on the issues"));
    }
    if c.n() != marginals.n() {
        return Err(Error::invalid("profile and population disagree on N"));
    }
    Ok(())
}

/// Number of sampled pairs whose order equals `C` on their issue.
pub fn matches(c: &Profile, tally: &SampleTally) -> u64 {
    (0..tally.issue_count())
        .map(|i| tally.count(i, c.get(i)))
        .sum()
}

/// Mean exact-match indicator. An empty sample scores 0.
pub fn sample_utility(c: &Profile, sample: &SampleSet) -> Result<f64> {
    check_cover(c, sample.issue_count())?;
    Ok(tally_utility(c, &sample.tally()))
}

pub fn tally_utility(c: &Profile, tally: &SampleTally) -> f64 {
    if tally.total() == 0 {
        return 0.0;
    }
    matches(c, tally) as f64 / tally.total() as f64
}

/// `U(C) = Σ_i 𝒟_ℐ(i)·ℳ(i)_{C(i)}`, exact.
pub fn population_utility(
    c: &Profile,
    saliency: &SaliencyDistribution,
    marginals: &MarginalPopulation,
) -> Result<f64> {
    check_population(c, saliency, marginals)?;
    Ok((0..marginals.issue_count())
        .map(|i| saliency.weight(i) * marginals.prob(i, c.get(i)))
        .sum())
}

fn tally_score_sum(c: &Profile, tally: &SampleTally, rule: &ScoringRule) -> f64 {
    tally
        .cells()
        .map(|(i, o, k)| k as f64 * rule.evaluate(o, c.get(i)))
        .sum()
}

/// `(1/|𝒮|) Σ s(o_k, C(i_k))`. An empty sample scores 0.
pub fn sample_score(c: &Profile, sample: &SampleSet, rule: &ScoringRule) -> Result<f64> {
    check_cover(c, sample.issue_count())?;
    Ok(tally_score(c, &sample.tally(), rule))
}

pub fn tally_score(c: &Profile, tally: &SampleTally, rule: &ScoringRule) -> f64 {
    if tally.total() == 0 {
        return 0.0;
    }
    tally_score_sum(c, tally, rule) / tally.total() as f64
}

/// `Σ_i 𝒟_ℐ(i)·Σ_o ℳ(i)_o·s(o, C(i))`, exact over the sparse support.
pub fn population_score(
    c: &Profile,
    saliency: &SaliencyDistribution,
    marginals: &MarginalPopulation,
    rule: &ScoringRule,
) -> Result<f64> {
    check_population(c, saliency, marginals)?;
    Ok((0..marginals.issue_count())
        .map(|i| {
            saliency.weight(i)
                * marginals
                    .distribution(i)
                    .iter()
                    .map(|(o, &p)| p * rule.evaluate(o, c.get(i)))
                    .sum::<f64>()
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MechanismResult {
    pub chosen: Profile,
    pub sample_objective: f64,
    /// Number of co-optimal candidates, saturating.
    pub tie_set_size: usize,
    pub tie_broken: bool,
}

/// Canonical-first argmax of `values` (aligned with `members`), with ties
/// within `tol`.
fn argmax(members: Vec<Profile>, values: &[f64], tol: f64) -> (Profile, f64, usize) {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut first = None;
    let mut ties = 0usize;
    for (k, &v) in values.iter().enumerate() {
        if v >= best - tol {
            ties += 1;
            first.get_or_insert(k);
        }
    }
    let k = first.expect("nonempty space");
    let value = values[k];
    (members.into_iter().nth(k).expect("index in range"), value, ties)
}

fn check_tally(tally: &SampleTally, space: &CandidateSpace) -> Result<()> {
    if tally.issue_count() != space.issues().len() {
        return Err(Error::invalid(format!(
            "sample is over {} issues, the space over {}",
            tally.issue_count(),
            space.issues().len()
        )));
    }
    if let Some((_, o, _)) = tally.cells().find(|(_, o, _)| o.n() != space.n()) {
        return Err(Error::invalid(format!("sampled order {o} does not have N={}", space.n())));
    }
    Ok(())
}

/// Argmax of sample utility over the enumerated space, canonical tie-break.
pub fn majority_vote_by_enumeration(
    tally: &SampleTally,
    space: &CandidateSpace,
    cap: u128,
) -> Result<MechanismResult> {
    check_tally(tally, space)?;
    let members = space.enumerate(cap)?;
    let counts: Vec<f64> = members
        .par_iter()
        .map(|c| matches(c, tally) as f64)
        .collect();
    let (chosen, best, ties) = argmax(members, &counts, 0.0);
    Ok(MechanismResult {
        chosen,
        sample_objective: objective(best, tally),
        tie_set_size: ties,
        tie_broken: ties > 1,
    })
}

fn objective(sum: f64, tally: &SampleTally) -> f64 {
    if tally.total() == 0 {
        0.0
    } else {
        sum / tally.total() as f64
    }
}

/// Per-block plurality for Full and Product spaces. Picking the smallest
/// co-optimal member in each block yields the canonically smallest
/// co-optimal profile, because blocks list their issues in ascending order.
fn majority_vote_decomposed(
    tally: &SampleTally,
    space: &CandidateSpace,
) -> Option<MechanismResult> {
    let m = space.issues().len();
    let mut orders = vec![LinearOrder::identity(space.n()); m];
    let mut total = 0u64;
    let mut ties = 1usize;
    match space.variant() {
        SpaceVariant::Explicit(_) => return None,
        SpaceVariant::Full => {
            for (i, slot) in orders.iter_mut().enumerate() {
                let dist = tally.issue(i);
                let best = dist.values().copied().max().unwrap_or(0);
                if best == 0 {
                    // nothing sampled here: every order ties at zero
                    let all: usize = (1..=space.n()).product();
                    ties = ties.saturating_mul(all);
                    continue;
                }
                let winners: Vec<&LinearOrder> =
                    dist.iter().filter(|(_, &k)| k == best).map(|(o, _)| o).collect();
                ties = ties.saturating_mul(winners.len());
                *slot = winners[0].clone();
                total += best;
            }
        }
        SpaceVariant::Product(blocks) => {
            for b in blocks {
                let score = |member: &Vec<LinearOrder>| -> u64 {
                    b.issues()
                        .iter()
                        .zip(member)
                        .map(|(&i, o)| tally.count(i, o))
                        .sum()
                };
                let scores: Vec<u64> = b.members().iter().map(score).collect();
                let best = *scores.iter().max().expect("nonempty block");
                let first = scores.iter().position(|&s| s == best).expect("max exists");
                ties = ties.saturating_mul(scores.iter().filter(|&&s| s == best).count());
                for (&i, o) in b.issues().iter().zip(&b.members()[first]) {
                    orders[i] = o.clone();
                }
                total += best;
            }
        }
    }
    Some(MechanismResult {
        chosen: Profile::new(orders).expect("nonempty, uniform N"),
        sample_objective: objective(total as f64, tally),
        tie_set_size: ties,
        tie_broken: ties > 1,
    })
}

/// Majority vote over a tally: the sample-utility argmax.
pub fn majority_vote_tally(
    tally: &SampleTally,
    space: &CandidateSpace,
    cap: u128,
) -> Result<MechanismResult> {
    check_tally(tally, space)?;
    match majority_vote_decomposed(tally, space) {
        Some(r) => Ok(r),
        None => majority_vote_by_enumeration(tally, space, cap),
    }
}

pub fn majority_vote(
    sample: &SampleSet,
    space: &CandidateSpace,
    cap: u128,
) -> Result<MechanismResult> {
    majority_vote_tally(&sample.tally(), space, cap)
}

/// Argmax of the sample score over the enumerated space. Scores within
/// `1e-12·range` of the best count as ties.
pub fn scoring_mechanism_tally(
    tally: &SampleTally,
    space: &CandidateSpace,
    rule: &ScoringRule,
    cap: u128,
) -> Result<MechanismResult> {
    check_tally(tally, space)?;
    let members = space.enumerate(cap)?;
    let sums: Vec<f64> = members
        .par_iter()
        .map(|c| tally_score_sum(c, tally, rule))
        .collect();
    let tol = 1e-12 * rule.range() * tally.total().max(1) as f64;
    let (chosen, best, ties) = argmax(members, &sums, tol);
    Ok(MechanismResult {
        chosen,
        sample_objective: objective(best, tally),
        tie_set_size: ties,
        tie_broken: ties > 1,
    })
}

pub fn scoring_mechanism(
    sample: &SampleSet,
    space: &CandidateSpace,
    rule: &ScoringRule,
    cap: u128,
) -> Result<MechanismResult> {
    scoring_mechanism_tally(&sample.tally(), space, rule, cap)
}

/// The per-SCC pairwise majority mechanism of an [`AcyclicPlan`].
///
/// Each two-outcome block keeps its canonical orientation unless strictly
/// more sampled pairs on that issue rank the other way.
pub fn acyclic_mechanism(plan: &AcyclicPlan, tally: &SampleTally) -> Result<Profile> {
    if tally.issue_count() != plan.issues().len() {
        return Err(Error::invalid(format!(
            "sample is over {} issues but the plan covers {}",
            tally.issue_count(),
            plan.issues().len()
        )));
    }
    let orders = plan
        .per_issue()
        .iter()
        .enumerate()
        .map(|(i, ip)| {
            let ranking = ip
                .blocks()
                .iter()
                .flat_map(|b| match b[..] {
                    [a, c] if tally.pair_count(i, c, a) > tally.pair_count(i, a, c) => vec![c, a],
                    _ => b.clone(),
                })
                .collect();
            LinearOrder::new(ranking)
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(orders)
}

/// A mechanism selectable by name: `majority`, `scoring:kendall`,
/// `scoring:exact` or `acyclic`.
#[derive(Clone, Debug)]
pub enum Mechanism {
    Majority,
    Scoring(ScoringRule),
    Acyclic(Box<AcyclicPlan>),
}

impl Mechanism {
    /// `acyclic` needs a plan, which the caller synthesizes from privilege graphs.
    pub fn parse(name: &str, plan: Option<AcyclicPlan>) -> Result<Self> {
        match name {
            "majority" => Ok(Mechanism::Majority),
            "acyclic" => plan
                .map(|p| Mechanism::Acyclic(Box::new(p)))
                .ok_or_else(|| Error::invalid("the acyclic mechanism needs privilege graphs")),
            _ => match name.strip_prefix("scoring:") {
                Some(rule) => Ok(Mechanism::Scoring(ScoringRule::by_name(rule)?)),
                None => Err(Error::invalid(format!(
                    "unknown mechanism `{name}`; expected majority, scoring:<rule> or acyclic"
                ))),
            },
        }
    }

    /// The mechanism's output on a tallied sample.
    pub fn run(&self, tally: &SampleTally, space: &CandidateSpace, cap: u128) -> Result<Profile> {
        Ok(match self {
            Mechanism::Majority => majority_vote_tally(tally, space, cap)?.chosen,
            Mechanism::Scoring(rule) => scoring_mechanism_tally(tally, space, rule, cap)?.chosen,
            Mechanism::Acyclic(plan) => acyclic_mechanism(plan, tally)?,
        })
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mechanism::Majority => f.write_str("majority"),
            Mechanism::Scoring(rule) => write!(f, "scoring:{}", rule.name()),
            Mechanism::Acyclic(_) => f.write_str("acyclic"),
        }
    }
}
