//! Monte Carlo estimation of the probabilistic axioms and decay fitting.
//!
//! An axiom "holds with probability 1 − e^{−Ω(|𝒮|)}" is operationalized on a
//! grid of sample sizes: failure rates must not rise significantly from one
//! size to the next, the last rate must be below the first, and where three
//! or more rates lie strictly inside (0, 1) a log-linear fit must have
//! `r² ≥ 0.9` and a positive rate.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::order::{LinearOrder, Permutation};
use crate::population::{
    IssueSpace, MarginalPopulation, PopulationSampler, SaliencyDistribution, SampleTally,
    SubpopulationMixture, PROB_TOL,
};
use crate::privilege::is_privileged;
use crate::order::PartialOrder;
use crate::profile::Profile;
use crate::report::num;
use crate::rng::{derive_seed, rng_from_seed};
use crate::space::{CandidateSpace, SpaceVariant, DEFAULT_CAP};

/// Which axiom event a scenario checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomTarget {
    /// Fails when the output is `C ⊙_i σ_(c,c')`; `C` ranks `c` above `c'`.
    Ppe {
        issue: usize,
        profile: Profile,
        c: usize,
        c2: usize,
    },
    WeakPiia { issue: usize, c: usize, c2: usize },
    StrongPiia { issue: usize, c: usize, c2: usize },
    WeakPc { issue: usize, c: usize, c2: usize },
    StrongPc { issue: usize, c: usize, c2: usize },
    /// Fails when a sub-half coalition on `c ≻ c'` gets its way.
    Pnd { issue: usize, c: usize, c2: usize },
    /// Fails when the output does not rank `c` above `c'`.
    Decisive { issue: usize, c: usize, c2: usize },
}

impl AxiomTarget {
    fn parts(&self) -> (usize, usize, usize) {
        match *self {
            AxiomTarget::Ppe { issue, c, c2, .. }
            | AxiomTarget::WeakPiia { issue, c, c2 }
            | AxiomTarget::StrongPiia { issue, c, c2 }
            | AxiomTarget::WeakPc { issue, c, c2 }
            | AxiomTarget::StrongPc { issue, c, c2 }
            | AxiomTarget::Pnd { issue, c, c2 }
            | AxiomTarget::Decisive { issue, c, c2 } => (issue, c, c2),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AxiomTarget::Ppe { .. } => "ppe",
            AxiomTarget::WeakPiia { .. } => "w-piia",
            AxiomTarget::StrongPiia { .. } => "s-piia",
            AxiomTarget::WeakPc { .. } => "w-pc",
            AxiomTarget::StrongPc { .. } => "s-pc",
            AxiomTarget::Pnd { .. } => "pnd",
            AxiomTarget::Decisive { .. } => "decisive",
        }
    }
}

/// How the two samples of a PIIA trial relate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PiiaCoupling {
    /// Separate streams for the two populations.
    #[default]
    Independent,
    /// The second sample copies the first one's issue draws and, on the
    /// target issue, its `{c, c'}` direction; only the rest of the order is
    /// redrawn from the second population.
    SharedPairDraw,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub issues: IssueSpace,
    pub saliency: SaliencyDistribution,
    pub marginals: MarginalPopulation,
    pub space: CandidateSpace,
    pub mechanism: Mechanism,
    pub target: Option<AxiomTarget>,
    /// The other population of a PIIA comparison.
    pub second_marginals: Option<MarginalPopulation>,
    pub coupling: PiiaCoupling,
    pub cap: u128,
}

impl Scenario {
    pub fn new(
        issues: IssueSpace,
        saliency: SaliencyDistribution,
        marginals: MarginalPopulation,
        space: CandidateSpace,
        mechanism: Mechanism,
    ) -> Result<Self> {
        if saliency.len() != issues.len()
            || marginals.issue_count() != issues.len()
            || space.issues() != &issues
            || marginals.n() != issues.n()
        {
            return Err(Error::invalid("scenario parts disagree on the issue space"));
        }
        Ok(Scenario {
            issues,
            saliency,
            marginals,
            space,
            mechanism,
            target: None,
            second_marginals: None,
            coupling: PiiaCoupling::Independent,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_target(mut self, target: AxiomTarget) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_second(mut self, marginals: MarginalPopulation, coupling: PiiaCoupling) -> Self {
        self.second_marginals = Some(marginals);
        self.coupling = coupling;
        self
    }

    /// Probability that a random individual ranks `c` above `c2` on `issue`.
    pub fn pair_marginal(&self, issue: usize, c: usize, c2: usize) -> Result<f64> {
        self.marginals.pair_marginal(issue, c, c2)
    }

    /// Checks the target's premise and resolves what a failure looks like.
    fn prepare(&self) -> Result<Prepared> {
        let target = self
            .target
            .clone()
            .ok_or_else(|| Error::invalid("scenario has no axiom target"))?;
        let (issue, c, c2) = target.parts();
        let n = self.issues.n();
        if issue >= self.issues.len() || c >= n || c2 >= n || c == c2 {
            return Err(Error::invalid(format!(
                "target issue {issue} / pair ({c},{c2}) outside the scenario"
            )));
        }
        let p = self.pair_marginal(issue, c, c2)?;
        let tied = (p - 0.5).abs() <= PROB_TOL;
        let full = matches!(self.space.variant(), SpaceVariant::Full);
        let weak_gate = || -> Result<()> {
            if full {
                Ok(())
            } else {
                Err(Error::Precondition(format!(
                    "{} is stated for the full space LO(N)^I",
                    target.name()
                )))
            }
        };
        let strong_gate = || -> Result<()> {
            let fwd = is_privileged(&self.space, issue, &PartialOrder::pair(c, c2, n)?, self.cap)?;
            let back = is_privileged(&self.space, issue, &PartialOrder::pair(c2, c, n)?, self.cap)?;
            if fwd && back {
                Ok(())
            } else {
                Err(Error::Precondition(format!(
                    "{c}≻{c2} and {c2}≻{c} are not both privileged on `{}`",
                    self.issues.id(issue)
                )))
            }
        };
        let tie_gate = || -> Result<()> {
            if tied {
                Err(Error::Vacuous(format!(
                    "the population is split exactly in half on ({c},{c2})"
                )))
            } else {
                Ok(())
            }
        };
        let event = match &target {
            AxiomTarget::Ppe { profile, .. } => {
                if !profile.get(issue).prefers(c, c2) {
                    return Err(Error::invalid(format!(
                        "the PPE profile must rank {c} above {c2} on the target issue"
                    )));
                }
                let neighbour =
                    profile.apply_local_permutation(issue, &Permutation::transposition(n, c, c2)?)?;
                if !self.space.contains(profile)? || !self.space.contains(&neighbour)? {
                    return Err(Error::Vacuous(
                        "the PPE neighbour pair is not inside the candidate space".into(),
                    ));
                }
                if (p - 1.0).abs() > PROB_TOL {
                    return Err(Error::Vacuous(format!(
                        "the population is not unanimous on {c}≻{c2} (mass {p})"
                    )));
                }
                Event::Equals(neighbour)
            }
            AxiomTarget::WeakPc { .. } | AxiomTarget::StrongPc { .. } => {
                if matches!(target, AxiomTarget::WeakPc { .. }) {
                    weak_gate()?;
                } else {
                    strong_gate()?;
                }
                tie_gate()?;
                Event::Disagrees { c_first: p > 0.5 }
            }
            AxiomTarget::WeakPiia { .. } | AxiomTarget::StrongPiia { .. } => {
                if matches!(target, AxiomTarget::WeakPiia { .. }) {
                    weak_gate()?;
                } else {
                    strong_gate()?;
                }
                let second = self
                    .second_marginals
                    .as_ref()
                    .ok_or_else(|| Error::invalid("a PIIA scenario needs a second population"))?;
                if second.issue_count() != self.issues.len() || second.n() != n {
                    return Err(Error::invalid("the second population has a different shape"));
                }
                for j in (0..self.issues.len()).filter(|&j| j != issue) {
                    if second.distribution(j) != self.marginals.distribution(j) {
                        return Err(Error::invalid(format!(
                            "the populations also differ on issue `{}`",
                            self.issues.id(j)
                        )));
                    }
                }
                if (second.pair_marginal(issue, c, c2)? - p).abs() > PROB_TOL {
                    return Err(Error::invalid(
                        "the populations differ on the target pair itself",
                    ));
                }
                tie_gate()?;
                Event::PairsDiffer
            }
            AxiomTarget::Pnd { .. } => {
                if p >= 0.5 {
                    return Err(Error::invalid(format!(
                        "the coalition on {c}≻{c2} must hold less than half the mass (has {p})"
                    )));
                }
                Event::Agrees { c_first: true }
            }
            AxiomTarget::Decisive { .. } => Event::Disagrees { c_first: true },
        };
        let first = PopulationSampler::new(&self.saliency, &self.marginals)?;
        let second = match (&event, &self.second_marginals) {
            (Event::PairsDiffer, Some(m2)) => Some(match self.coupling {
                PiiaCoupling::Independent => SecondSampler::Independent(PopulationSampler::new(
                    &self.saliency,
                    m2,
                )?),
                PiiaCoupling::SharedPairDraw => {
                    SecondSampler::Shared(ConditionalOrders::new(m2.distribution(issue), c, c2))
                }
            }),
            _ => None,
        };
        Ok(Prepared {
            issue,
            c,
            c2,
            event,
            first,
            second,
        })
    }
}

enum Event {
    /// Fails when the output equals this profile.
    Equals(Profile),
    /// Fails when the output's `{c, c'}` orientation differs from `c_first`.
    Disagrees { c_first: bool },
    /// Fails when the output's `{c, c'}` orientation equals `c_first`.
    Agrees { c_first: bool },
    /// Fails when the two samples' outputs orient `{c, c'}` differently.
    PairsDiffer,
}

/// One population's orders on an issue, split by `{c, c'}` direction.
struct ConditionalOrders {
    c_first: Option<(Vec<LinearOrder>, WeightedIndex<f64>)>,
    c2_first: Option<(Vec<LinearOrder>, WeightedIndex<f64>)>,
}

impl ConditionalOrders {
    fn new(dist: &BTreeMap<LinearOrder, f64>, c: usize, c2: usize) -> Self {
        let side = |want: bool| {
            let (orders, weights): (Vec<LinearOrder>, Vec<f64>) = dist
                .iter()
                .filter(|(o, &p)| p > 0.0 && o.prefers(c, c2) == want)
                .map(|(o, &p)| (o.clone(), p))
                .unzip();
            WeightedIndex::new(weights).ok().map(|w| (orders, w))
        };
        ConditionalOrders {
            c_first: side(true),
            c2_first: side(false),
        }
    }
}

enum SecondSampler {
    Independent(PopulationSampler),
    Shared(ConditionalOrders),
}

struct Prepared {
    issue: usize,
    c: usize,
    c2: usize,
    event: Event,
    first: PopulationSampler,
    second: Option<SecondSampler>,
}

impl Prepared {
    /// Runs one trial; returns whether the axiom event failed and how many
    /// sampled pairs fell on the target issue.
    fn trial(&self, scn: &Scenario, size: usize, seed: u64) -> Result<(bool, u64)> {
        let (tally, shared_pairs) = match &self.second {
            Some(SecondSampler::Shared(_)) => {
                let s = self.first.sample(size, seed);
                let t = s.tally();
                (t, Some(s))
            }
            _ => (self.first.sample_tally(size, seed), None),
        };
        let on_issue = tally.issue_total(self.issue);
        let out = scn.mechanism.run(&tally, &scn.space, scn.cap)?;
        let c_first = out.get(self.issue).prefers(self.c, self.c2);
        let failed = match &self.event {
            Event::Equals(bad) => &out == bad,
            Event::Disagrees { c_first: want } => c_first != *want,
            Event::Agrees { c_first: want } => c_first == *want,
            Event::PairsDiffer => {
                let second_seed = derive_seed(seed, &[1]);
                let tally2 = match self.second.as_ref().expect("PIIA has a second sampler") {
                    SecondSampler::Independent(sampler) => sampler.sample_tally(size, second_seed),
                    SecondSampler::Shared(cond) => {
                        let mut rng = rng_from_seed(second_seed);
                        let mut t = SampleTally::new(scn.issues.len());
                        for (o, i) in shared_pairs.expect("shared sample kept").pairs() {
                            if *i != self.issue {
                                t.add(*i, o);
                                continue;
                            }
                            let side = if o.prefers(self.c, self.c2) {
                                &cond.c_first
                            } else {
                                &cond.c2_first
                            };
                            let (orders, w) =
                                side.as_ref().expect("equal pair marginals share support");
                            t.add(*i, &orders[w.sample(&mut rng)]);
                        }
                        t
                    }
                };
                let out2 = scn.mechanism.run(&tally2, &scn.space, scn.cap)?;
                c_first != out2.get(self.issue).prefers(self.c, self.c2)
            }
        };
        Ok((failed, on_issue))
    }
}

/// Failure counts at one sample size, with a 95% Wilson interval.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayPoint {
    pub size: usize,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Mean number of sampled pairs on the target issue.
    pub mean_issue_samples: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DecayFit {
    /// `log(rate) ≈ intercept − rate·size` over the points with rate in (0,1).
    Fitted {
        rate: f64,
        intercept: f64,
        r2: f64,
        used: usize,
        excluded: usize,
    },
    /// Fewer than three usable points.
    Saturated { usable: usize, excluded: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayCurve {
    pub points: Vec<DecayPoint>,
    pub fit: DecayFit,
    pub passes: bool,
}

impl DecayCurve {
    pub fn from_points(points: Vec<DecayPoint>) -> Self {
        let fit = fit_decay(
            &points
                .iter()
                .map(|p| (p.size as f64, p.rate))
                .collect::<Vec<_>>(),
        );
        let passes = decay_holds(&points, &fit);
        DecayCurve {
            points,
            fit,
            passes,
        }
    }

    /// Columns `size,trials,failures,rate,ci_low,ci_high`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,trials,failures,rate,ci_low,ci_high\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                p.size,
                p.trials,
                p.failures,
                num(p.rate),
                num(p.ci_low),
                num(p.ci_high)
            );
        }
        out
    }

    pub fn summary(&self) -> serde_json::Value {
        let verdict = if self.passes { "pass" } else { "fail" };
        match self.fit {
            DecayFit::Fitted {
                rate,
                r2,
                used,
                excluded,
                ..
            } => json!({
                "alpha": num(rate).parse::<f64>().unwrap_or(rate),
                "r2": num(r2).parse::<f64>().unwrap_or(r2),
                "fit": "fitted",
                "points_used": used,
                "points_excluded": excluded,
                "verdict": verdict,
            }),
            DecayFit::Saturated { usable, excluded } => json!({
                "alpha": null,
                "r2": null,
                "fit": "saturated",
                "points_used": usable,
                "points_excluded": excluded,
                "verdict": verdict,
            }),
        }
    }
}

const Z95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = Z95 * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let low = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

/// Least-squares fit of `log(rate)` against size.
pub fn fit_decay(points: &[(f64, f64)]) -> DecayFit {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r > 0.0 && *r < 1.0)
        .map(|&(x, r)| (x, r.ln()))
        .collect();
    let excluded = points.len() - usable.len();
    if usable.len() < 3 {
        return DecayFit::Saturated {
            usable: usable.len(),
            excluded,
        };
    }
    let k = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / k;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = usable
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    DecayFit::Fitted {
        rate: -slope,
        intercept,
        r2,
        used: usable.len(),
        excluded,
    }
}

/// The pass rule described in the module docs.
pub fn decay_holds(points: &[DecayPoint], fit: &DecayFit) -> bool {
    let no_rise = points.windows(2).all(|w| w[1].ci_low <= w[0].ci_high);
    let all_zero = points.iter().all(|p| p.failures == 0);
    let falls = match (points.first(), points.last()) {
        (Some(a), Some(b)) => all_zero || b.rate < a.rate,
        _ => false,
    };
    let shape = match fit {
        DecayFit::Saturated { .. } => true,
        DecayFit::Fitted { rate, r2, .. } => *r2 >= 0.9 && *rate > 0.0,
    };
    no_rise && falls && shape
}

fn check_grid(sizes: &[usize], trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sizes must be nonempty and strictly increasing"));
    }
    Ok(())
}

/// Runs `trials` seeded trials per size. Trial `t` at size `n` uses the
/// stream `derive_seed(seed, [n, t])`.
pub fn estimate_axiom(
    scn: &Scenario,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<DecayCurve> {
    check_grid(sizes, trials)?;
    let prepared = scn.prepare()?;
    let mut points = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let results = (0..trials)
            .into_par_iter()
            .map(|t| prepared.trial(scn, size, derive_seed(seed, &[size as u64, t as u64])))
            .collect::<Result<Vec<_>>>()?;
        let failures = results.iter().filter(|r| r.0).count();
        let on_issue: u64 = results.iter().map(|r| r.1).sum();
        let (ci_low, ci_high) = wilson_interval(failures, trials);
        points.push(DecayPoint {
            size,
            trials,
            failures,
            rate: failures as f64 / trials as f64,
            ci_low,
            ci_high,
            mean_issue_samples: on_issue as f64 / trials as f64,
        });
    }
    Ok(DecayCurve::from_points(points))
}

/// The order ranking `prefix` first, then the remaining outcomes ascending.
pub fn order_with_prefix(prefix: &[usize], n: usize) -> Result<LinearOrder> {
    let mut ranking = prefix.to_vec();
    ranking.extend((0..n).filter(|x| !prefix.contains(x)));
    LinearOrder::new(ranking)
}

fn single_issue_mixture(parts: &[(f64, LinearOrder)]) -> Result<MarginalPopulation> {
    let comps = parts
        .iter()
        .map(|(m, o)| Ok((*m, MarginalPopulation::unanimous(std::slice::from_ref(o))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubpopulationMixture::new(comps)?.mix())
}

fn single_issue_scenario(space: &CandidateSpace, marginals: MarginalPopulation) -> Result<Scenario> {
    if space.issues().len() != 1 {
        return Err(Error::invalid("this scenario is defined over a single issue"));
    }
    Scenario::new(
        space.issues().clone(),
        SaliencyDistribution::uniform(1),
        marginals,
        space.clone(),
        Mechanism::Majority,
    )
}

/// Coalitions 2/9 on `u≻v≻w`, 4/9 on `w≻u≻v`, 1/3 on `v≻w≻u` with
/// `(u, v, w) = (0, 1, 2)`.
pub fn condorcet_mixture() -> Result<SubpopulationMixture> {
    let parts = [
        (2.0 / 9.0, "0>1>2"),
        (4.0 / 9.0, "2>0>1"),
        (1.0 / 3.0, "1>2>0"),
    ];
    SubpopulationMixture::new(
        parts
            .iter()
            .map(|(m, o)| Ok((*m, MarginalPopulation::unanimous(&[o.parse()?])?)))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// The three-coalition population over a single ternary issue, with
/// majority vote.
pub fn condorcet_scenario(space: &CandidateSpace) -> Result<Scenario> {
    if space.n() != 3 {
        return Err(Error::invalid("the Condorcet scenario needs N = 3"));
    }
    single_issue_scenario(space, condorcet_mixture()?.mix())
}

/// Thirds on `0≻1≻2`, `1≻2≻0`, `2≻0≻1`: every pairwise majority is 2/3
/// and they form a cycle.
pub fn cyclic_scenario(space: &CandidateSpace) -> Result<Scenario> {
    if space.n() != 3 {
        return Err(Error::invalid("the cyclic scenario needs N = 3"));
    }
    let third = 1.0 / 3.0;
    single_issue_scenario(
        space,
        single_issue_mixture(&[
            (third, "0>1>2".parse()?),
            (third, "1>2>0".parse()?),
            (third, "2>0>1".parse()?),
        ])?,
    )
}

/// Strict pairwise majorities `(a, b, mass of a≻b)` on one issue.
pub fn pairwise_majorities(m: &MarginalPopulation, issue: usize) -> Result<Vec<(usize, usize, f64)>> {
    let n = m.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            let p = m.pair_marginal(issue, a, b)?;
            if p > 0.5 + PROB_TOL {
                out.push((a, b, p));
            }
        }
    }
    Ok(out)
}

/// The majorities `a ≻ b` that `order` reverses.
pub fn violated_majorities(order: &LinearOrder, majorities: &[(usize, usize, f64)]) -> Vec<(usize, usize)> {
    majorities
        .iter()
        .filter(|(a, b, _)| order.prefers(*b, *a))
        .map(|&(a, b, _)| (a, b))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleTrial {
    pub size: usize,
    pub trial: usize,
    pub chosen: LinearOrder,
    pub violated: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleReport {
    pub majorities: Vec<(usize, usize, f64)>,
    pub trials: Vec<CycleTrial>,
    /// Per violated majority, the number of trials reversing it.
    pub frequency: BTreeMap<(usize, usize), usize>,
    pub every_trial_violates: bool,
}

impl CycleReport {
    /// Columns `size,trial,chosen,violations,violated`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,trial,chosen,violations,violated\n");
        for t in &self.trials {
            let pairs: Vec<String> = t.violated.iter().map(|(a, b)| format!("{a}>{b}")).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                t.size,
                t.trial,
                t.chosen,
                t.violated.len(),
                pairs.join(";")
            );
        }
        out
    }
}

/// Runs the scenario's mechanism and records which strict pairwise
/// majorities on issue 0 each output reverses.
pub fn cycle_violation_demo(
    scn: &Scenario,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<CycleReport> {
    check_grid(sizes, trials)?;
    let majorities = pairwise_majorities(&scn.marginals, 0)?;
    let beats = |a: usize, b: usize| majorities.iter().any(|&(x, y, _)| x == a && y == b);
    let n = scn.issues.n();
    let cyclic = (0..n).any(|a| {
        (0..n).any(|b| (0..n).any(|c| a != b && b != c && a != c && beats(a, b) && beats(b, c) && beats(c, a)))
    });
    if !cyclic {
        return Err(Error::Precondition(
            "the pairwise majorities contain no 3-cycle".into(),
        ));
    }
    let sampler = PopulationSampler::new(&scn.saliency, &scn.marginals)?;
    let mut records = Vec::new();
    for &size in sizes {
        let batch = (0..trials)
            .into_par_iter()
            .map(|t| {
                let tally = sampler.sample_tally(size, derive_seed(seed, &[size as u64, t as u64]));
                let out = scn.mechanism.run(&tally, &scn.space, scn.cap)?;
                let chosen = out.get(0).clone();
                Ok(CycleTrial {
                    size,
                    trial: t,
                    violated: violated_majorities(&chosen, &majorities),
                    chosen,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        records.extend(batch);
    }
    let mut frequency = BTreeMap::new();
    for r in &records {
        for &pair in &r.violated {
            *frequency.entry(pair).or_insert(0) += 1;
        }
    }
    Ok(CycleReport {
        every_trial_violates: records.iter().all(|r| !r.violated.is_empty()),
        majorities,
        trials: records,
        frequency,
    })
}

/// What the rest of the population prefers in a decisiveness probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complement {
    /// Unanimous on `c' ≻ c`.
    Opposite,
    /// The coalition holds `c ≻ middle ≻ c'`; the complement holds
    /// `middle ≻ c' ≻ c`, i.e. `middle` above both and `c'` above `c`.
    FieldExpansion { middle: usize },
}

/// Probability that the mechanism fails to output `c ≻ c'` when a coalition
/// of the given mass is unanimous on it, over a single-issue space.
#[allow(clippy::too_many_arguments)]
pub fn decisiveness_probe(
    coalition_mass: f64,
    c: usize,
    c2: usize,
    complement: Complement,
    space: &CandidateSpace,
    mechanism: Mechanism,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<DecayCurve> {
    if !(coalition_mass > 0.0 && coalition_mass <= 1.0) {
        return Err(Error::invalid(format!(
            "coalition mass {coalition_mass} must lie in (0, 1]"
        )));
    }
    let n = space.n();
    if c >= n || c2 >= n || c == c2 {
        return Err(Error::invalid(format!("pair ({c},{c2}) is not a pair of outcomes")));
    }
    let (ours, theirs) = match complement {
        Complement::Opposite => (order_with_prefix(&[c, c2], n)?, order_with_prefix(&[c2, c], n)?),
        Complement::FieldExpansion { middle } => {
            if middle >= n || middle == c || middle == c2 {
                return Err(Error::invalid("the middle outcome must differ from the pair"));
            }
            (
                order_with_prefix(&[c, middle, c2], n)?,
                order_with_prefix(&[middle, c2, c], n)?,
            )
        }
    };
    let mut parts = vec![(coalition_mass, ours)];
    if coalition_mass < 1.0 {
        parts.push((1.0 - coalition_mass, theirs));
    }
    let mut scn = single_issue_scenario(space, single_issue_mixture(&parts)?)?;
    scn.mechanism = mechanism;
    estimate_axiom(
        &scn.with_target(AxiomTarget::Decisive { issue: 0, c, c2 }),
        sizes,
        trials,
        seed,
    )
}

/// A coalition of mass below one half unanimous on `c ≻ c'` against a
/// complement unanimous on `c' ≻ c`; PND expects the coalition to lose.
pub fn pnd_scenario(
    coalition_mass: f64,
    c: usize,
    c2: usize,
    space: &CandidateSpace,
    mechanism: Mechanism,
) -> Result<Scenario> {
    if !(coalition_mass > 0.0 && coalition_mass < 0.5) {
        return Err(Error::invalid(format!(
            "a PND coalition needs mass in (0, 0.5), got {coalition_mass}"
        )));
    }
    let n = space.n();
    let m = single_issue_mixture(&[
        (coalition_mass, order_with_prefix(&[c, c2], n)?),
        (1.0 - coalition_mass, order_with_prefix(&[c2, c], n)?),
    ])?;
    let mut scn = single_issue_scenario(space, m)?;
    scn.mechanism = mechanism;
    Ok(scn.with_target(AxiomTarget::Pnd { issue: 0, c, c2 }))
}
