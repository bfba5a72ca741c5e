//! Issue spaces, saliency and marginal preference distributions, and i.i.d.
//! sampling of individual-issue pairs.
//!
//! Only per-issue marginals are modeled. Every quantity computed by the crate
//! depends on the population through those marginals alone, so two joint
//! populations with the same marginals are indistinguishable here.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::LinearOrder;
use crate::rng::rng_from_seed;

pub(crate) const PROB_TOL: f64 = 1e-9;

/// Finite set of issues sharing one outcome count `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssueSpace {
    ids: Vec<String>,
    n: usize,
    index: HashMap<String, usize>,
}

impl IssueSpace {
    pub fn new<S: Into<String>>(ids: impl IntoIterator<Item = S>, n: usize) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::invalid("an issue space needs at least one issue"));
        }
        if n < 2 {
            return Err(Error::invalid(format!("issues need at least 2 outcomes, got {n}")));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (k, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), k).is_some() {
                return Err(Error::invalid(format!("duplicate issue id `{id}`")));
            }
        }
        Ok(IssueSpace { ids, n, index })
    }

    /// Issues named `"0"`, `"1"`, ...
    pub fn numbered(count: usize, n: usize) -> Result<Self> {
        IssueSpace::new((0..count).map(|k| k.to_string()), n)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, issue: usize) -> &str {
        &self.ids[issue]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown issue `{id}`")))
    }
}

/// Probability of each issue being drawn, indexed like the issue space.
#[derive(Clone, Debug, PartialEq)]
pub struct SaliencyDistribution {
    weights: Vec<f64>,
}

impl SaliencyDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        check_distribution(&weights, "saliency")?;
        Ok(SaliencyDistribution { weights })
    }

    pub fn uniform(issues: usize) -> Self {
        SaliencyDistribution {
            weights: vec![1.0 / issues as f64; issues],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, issue: usize) -> f64 {
        self.weights[issue]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Issues carrying zero weight. Allowed, but they break full support.
    pub fn zero_weight_issues(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i] == 0.0).collect()
    }
}

fn check_distribution(ps: &[f64], what: &str) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::invalid(format!("{what}: empty distribution")));
    }
    if let Some(p) = ps.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::invalid(format!("{what}: bad probability {p}")));
    }
    let total: f64 = ps.iter().sum();
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::invalid(format!("{what}: probabilities sum to {total}, not 1")));
    }
    Ok(())
}

/// Per-issue distribution over linear orders. Orders absent from an issue's
/// map have probability zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalPopulation {
    n: usize,
    per_issue: Vec<BTreeMap<LinearOrder, f64>>,
}

impl MarginalPopulation {
    pub fn new(n: usize, per_issue: Vec<BTreeMap<LinearOrder, f64>>) -> Result<Self> {
        if per_issue.is_empty() {
            return Err(Error::invalid("marginals need at least one issue"));
        }
        for (i, dist) in per_issue.iter().enumerate() {
            if dist.keys().any(|o| o.n() != n) {
                return Err(Error::invalid(format!(
                    "issue {i}: every order must rank {n} outcomes"
                )));
            }
            let ps: Vec<f64> = dist.values().copied().collect();
            check_distribution(&ps, &format!("marginal of issue {i}"))?;
        }
        Ok(MarginalPopulation { n, per_issue })
    }

    /// Every issue unanimous on the corresponding order of `profile_orders`.
    pub fn unanimous(profile_orders: &[LinearOrder]) -> Result<Self> {
        let n = profile_orders
            .first()
            .ok_or_else(|| Error::invalid("no issues"))?
            .n();
        let per_issue = profile_orders
            .iter()
            .map(|o| BTreeMap::from([(o.clone(), 1.0)]))
            .collect();
        MarginalPopulation::new(n, per_issue)
    }

    /// Uniform over all of `LO(n)` on every issue.
    pub fn uniform(issues: usize, n: usize) -> Self {
        let all = LinearOrder::all(n);
        let p = 1.0 / all.len() as f64;
        let dist: BTreeMap<LinearOrder, f64> = all.into_iter().map(|o| (o, p)).collect();
        MarginalPopulation {
            n,
            per_issue: vec![dist; issues],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn issue_count(&self) -> usize {
        self.per_issue.len()
    }

    pub fn distribution(&self, issue: usize) -> &BTreeMap<LinearOrder, f64> {
        &self.per_issue[issue]
    }

    /// `ℳ(i)_o`.
    pub fn prob(&self, issue: usize, order: &LinearOrder) -> f64 {
        self.per_issue[issue].get(order).copied().unwrap_or(0.0)
    }

    /// Probability that a random individual ranks `c` above `c2` on `issue`.
    pub fn pair_marginal(&self, issue: usize, c: usize, c2: usize) -> Result<f64> {
        if issue >= self.per_issue.len() {
            return Err(Error::invalid(format!("issue index {issue} out of range")));
        }
        if c == c2 || c >= self.n || c2 >= self.n {
            return Err(Error::invalid(format!(
                "invalid pair {{{c}, {c2}}} for {} outcomes",
                self.n
            )));
        }
        Ok(self.per_issue[issue]
            .iter()
            .filter(|(o, _)| o.prefers(c, c2))
            .map(|(_, p)| p)
            .sum())
    }

    /// Replaces the distribution on one issue.
    pub fn with_issue(&self, issue: usize, dist: BTreeMap<LinearOrder, f64>) -> Result<Self> {
        let mut per_issue = self.per_issue.clone();
        *per_issue
            .get_mut(issue)
            .ok_or_else(|| Error::invalid(format!("issue index {issue} out of range")))? = dist;
        MarginalPopulation::new(self.n, per_issue)
    }
}

/// A population assembled from coalitions, each with its own marginals.
#[derive(Clone, Debug)]
pub struct SubpopulationMixture {
    components: Vec<(f64, MarginalPopulation)>,
}

impl SubpopulationMixture {
    pub fn new(components: Vec<(f64, MarginalPopulation)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::invalid("a mixture needs at least one component"))?;
        let (n, issues) = (first.1.n, first.1.issue_count());
        for (mass, m) in &components {
            if !mass.is_finite() || *mass <= 0.0 {
                return Err(Error::invalid(format!("component mass {mass} must be positive")));
            }
            if m.n != n || m.issue_count() != issues {
                return Err(Error::invalid("mixture components disagree in shape"));
            }
        }
        let total: f64 = components.iter().map(|(m, _)| m).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::invalid(format!("component masses sum to {total}, not 1")));
        }
        Ok(SubpopulationMixture { components })
    }

    pub fn components(&self) -> &[(f64, MarginalPopulation)] {
        &self.components
    }

    /// Mass-weighted sum of the component marginals.
    pub fn mix(&self) -> MarginalPopulation {
        let first = &self.components[0].1;
        let mut per_issue = vec![BTreeMap::new(); first.issue_count()];
        for (mass, m) in &self.components {
            for (i, dist) in m.per_issue.iter().enumerate() {
                for (o, p) in dist {
                    *per_issue[i].entry(o.clone()).or_insert(0.0) += mass * p;
                }
            }
        }
        MarginalPopulation {
            n: first.n,
            per_issue,
        }
    }
}

/// A multiset of (issue index, order) counts.
///
/// Mechanisms only look at samples through this view, so they cannot depend
/// on the order in which pairs were drawn.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleTally {
    per_issue: Vec<BTreeMap<LinearOrder, u64>>,
    total: u64,
}

impl SampleTally {
    pub fn new(issues: usize) -> Self {
        SampleTally {
            per_issue: vec![BTreeMap::new(); issues],
            total: 0,
        }
    }

    pub fn add(&mut self, issue: usize, order: &LinearOrder) {
        if let Some(c) = self.per_issue[issue].get_mut(order) {
            *c += 1;
        } else {
            self.per_issue[issue].insert(order.clone(), 1);
        }
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn issue_count(&self) -> usize {
        self.per_issue.len()
    }

    pub fn issue(&self, issue: usize) -> &BTreeMap<LinearOrder, u64> {
        &self.per_issue[issue]
    }

    pub fn count(&self, issue: usize, order: &LinearOrder) -> u64 {
        self.per_issue[issue].get(order).copied().unwrap_or(0)
    }

    pub fn issue_total(&self, issue: usize) -> u64 {
        self.per_issue[issue].values().sum()
    }

    /// Number of sampled pairs on `issue` ranking `c` above `c2`.
    pub fn pair_count(&self, issue: usize, c: usize, c2: usize) -> u64 {
        self.per_issue[issue]
            .iter()
            .filter(|(o, _)| o.prefers(c, c2))
            .map(|(_, k)| k)
            .sum()
    }

    /// Nonzero cells as `(issue, order, count)` in canonical order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, &LinearOrder, u64)> {
        self.per_issue
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.iter().map(move |(o, &k)| (i, o, k)))
    }
}

/// Individual-issue pairs `(o_k, i_k)` together with the seed that drew them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    pairs: Vec<(LinearOrder, usize)>,
    issues: usize,
    seed: u64,
}

impl SampleSet {
    /// Builds a sample by hand; `issues` is the size of the issue space.
    pub fn new(pairs: Vec<(LinearOrder, usize)>, issues: usize, seed: u64) -> Result<Self> {
        if let Some((_, i)) = pairs.iter().find(|(_, i)| *i >= issues) {
            return Err(Error::invalid(format!("sample references issue index {i}")));
        }
        if let Some(first) = pairs.first() {
            let n = first.0.n();
            if pairs.iter().any(|(o, _)| o.n() != n) {
                return Err(Error::invalid("sampled orders disagree in outcome count"));
            }
        }
        Ok(SampleSet {
            pairs,
            issues,
            seed,
        })
    }

    pub fn pairs(&self) -> &[(LinearOrder, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn issue_count(&self) -> usize {
        self.issues
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tally(&self) -> SampleTally {
        let mut t = SampleTally::new(self.issues);
        for (o, i) in &self.pairs {
            t.add(*i, o);
        }
        t
    }

    /// Same pairs in a different order.
    pub fn reordered(&self, order: &[usize]) -> SampleSet {
        SampleSet {
            pairs: order.iter().map(|&k| self.pairs[k].clone()).collect(),
            issues: self.issues,
            seed: self.seed,
        }
    }

    /// Every pair repeated twice.
    pub fn duplicated(&self) -> SampleSet {
        let mut pairs = self.pairs.clone();
        pairs.extend(self.pairs.iter().cloned());
        SampleSet {
            pairs,
            issues: self.issues,
            seed: self.seed,
        }
    }

    /// CSV with header `k,issue_id,ordering`.
    pub fn to_csv(&self, space: &IssueSpace) -> String {
        let mut out = String::from("k,issue_id,ordering\n");
        for (k, (o, i)) in self.pairs.iter().enumerate() {
            let _ = writeln!(out, "{k},{},{o}", space.id(*i));
        }
        out
    }
}

/// Pre-built categorical samplers for a fixed `(𝒟_ℐ, ℳ)`.
///
/// Each draw picks the issue first and then the order on that issue, both
/// from the same stream.
#[derive(Clone, Debug)]
pub struct PopulationSampler {
    issue_dist: WeightedIndex<f64>,
    order_dists: Vec<Option<(Vec<LinearOrder>, WeightedIndex<f64>)>>,
    issues: usize,
}

impl PopulationSampler {
    pub fn new(saliency: &SaliencyDistribution, marginals: &MarginalPopulation) -> Result<Self> {
        if saliency.len() != marginals.issue_count() {
            return Err(Error::invalid(format!(
                "saliency covers {} issues but marginals cover {}",
                saliency.len(),
                marginals.issue_count()
            )));
        }
        let issue_dist = WeightedIndex::new(saliency.weights.iter().copied())
            .map_err(|e| Error::invalid(format!("saliency: {e}")))?;
        let order_dists = marginals
            .per_issue
            .iter()
            .map(|dist| {
                let support: Vec<(LinearOrder, f64)> = dist
                    .iter()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(o, &p)| (o.clone(), p))
                    .collect();
                if support.is_empty() {
                    return None;
                }
                let w = WeightedIndex::new(support.iter().map(|(_, p)| *p)).ok()?;
                Some((support.into_iter().map(|(o, _)| o).collect(), w))
            })
            .collect();
        Ok(PopulationSampler {
            issue_dist,
            order_dists,
            issues: saliency.len(),
        })
    }

    fn draw<R: rand::Rng>(&self, rng: &mut R) -> (usize, &LinearOrder) {
        let i = self.issue_dist.sample(rng);
        let (orders, w) = self.order_dists[i]
            .as_ref()
            .expect("issue with positive saliency has a marginal");
        (i, &orders[w.sample(rng)])
    }

    pub fn sample(&self, count: usize, seed: u64) -> SampleSet {
        let mut rng = rng_from_seed(seed);
        let pairs = (0..count)
            .map(|_| {
                let (i, o) = self.draw(&mut rng);
                (o.clone(), i)
            })
            .collect();
        SampleSet {
            pairs,
            issues: self.issues,
            seed,
        }
    }

    /// Same draws as [`sample`](Self::sample) but tallied directly.
    pub fn sample_tally(&self, count: usize, seed: u64) -> SampleTally {
        let mut rng = rng_from_seed(seed);
        let mut t = SampleTally::new(self.issues);
        for _ in 0..count {
            let (i, o) = self.draw(&mut rng);
            t.add(i, o);
        }
        t
    }
}

/// Draws `count` i.i.d. pairs: `i_k ~ 𝒟_ℐ`, then `o_k ~ ℳ(i_k)`.
pub fn sample_pairs(
    saliency: &SaliencyDistribution,
    marginals: &MarginalPopulation,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    Ok(PopulationSampler::new(saliency, marginals)?.sample(count, seed))
}

/// Issue space, saliency and marginals together; the unit stored in population files.
#[derive(Clone, Debug)]
pub struct PopulationModel {
    pub issues: IssueSpace,
    pub saliency: SaliencyDistribution,
    pub marginals: MarginalPopulation,
}

impl PopulationModel {
    pub fn new(
        issues: IssueSpace,
        saliency: SaliencyDistribution,
        marginals: MarginalPopulation,
    ) -> Result<Self> {
        if saliency.len() != issues.len() || marginals.issue_count() != issues.len() {
            return Err(Error::invalid("population parts disagree on the number of issues"));
        }
        if marginals.n() != issues.n() {
            return Err(Error::invalid("marginals disagree with the issue space's N"));
        }
        Ok(PopulationModel {
            issues,
            saliency,
            marginals,
        })
    }

    pub fn sampler(&self) -> Result<PopulationSampler> {
        PopulationSampler::new(&self.saliency, &self.marginals)
    }

    /// Human-readable notes about zero-weight issues.
    pub fn warnings(&self) -> Vec<String> {
        self.saliency
            .zero_weight_issues()
            .into_iter()
            .map(|i| format!("issue `{}` has zero saliency", self.issues.id(i)))
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PopulationFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        PopulationModel::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let file = PopulationFile {
            issues: self.issues.ids().iter().map(|s| IssueId::from_str(s)).collect(),
            n: self.issues.n(),
            saliency: self
                .issues
                .ids()
                .iter()
                .zip(self.saliency.weights())
                .map(|(id, &w)| (id.clone(), w))
                .collect(),
            marginals: self
                .issues
                .ids()
                .iter()
                .enumerate()
                .map(|(i, id)| {
                    let dist = self
                        .marginals
                        .distribution(i)
                        .iter()
                        .map(|(o, &p)| (o.to_string(), p))
                        .collect();
                    (id.clone(), dist)
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("population serializes")
    }
}

/// Issue identifiers may be written as JSON strings or integers.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum IssueId {
    Int(i64),
    Str(String),
}

impl IssueId {
    pub(crate) fn from_str(s: &str) -> Self {
        match s.parse::<i64>() {
            Ok(v) if v.to_string() == s => IssueId::Int(v),
            _ => IssueId::Str(s.to_string()),
        }
    }

    pub(crate) fn into_string(self) -> String {
        match self {
            IssueId::Int(v) => v.to_string(),
            IssueId::Str(s) => s,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PopulationFile {
    issues: Vec<IssueId>,
    #[serde(rename = "N")]
    n: usize,
    saliency: BTreeMap<String, f64>,
    marginals: BTreeMap<String, BTreeMap<String, f64>>,
}

impl PopulationFile {
    fn into_model(self) -> Result<PopulationModel> {
        let issues = IssueSpace::new(self.issues.into_iter().map(IssueId::into_string), self.n)?;
        for key in self.saliency.keys().chain(self.marginals.keys()) {
            issues.index_of(key)?;
        }
        let mut weights = Vec::with_capacity(issues.len());
        let mut per_issue = Vec::with_capacity(issues.len());
        for id in issues.ids() {
            weights.push(
                *self
                    .saliency
                    .get(id)
                    .ok_or_else(|| Error::invalid(format!("saliency missing issue `{id}`")))?,
            );
            let raw = self
                .marginals
                .get(id)
                .ok_or_else(|| Error::invalid(format!("marginals missing issue `{id}`")))?;
            let mut dist = BTreeMap::new();
            for (k, &p) in raw {
                let o: LinearOrder = k.parse()?;
                if dist.insert(o, p).is_some() {
                    return Err(Error::invalid(format!("issue `{id}`: order `{k}` repeated")));
                }
            }
            per_issue.push(dist);
        }
        let marginals = MarginalPopulation::new(issues.n(), per_issue)?;
        PopulationModel::new(issues, SaliencyDistribution::new(weights)?, marginals)
    }
}

/// Binary-issue reduction to a deterministic population.
///
/// Each issue `i` becomes two issues `(i, b)` for `b ∈ LO(2)`, drawn with
/// probability `𝒟_ℐ(i)·ℳ(i)_b`, on which everyone holds `b`. Sampling the
/// reduced instance and mapping `(i, b)` back to `i` has the same law as the
/// direct sampler. This exists for testing; no experiment runs through it.
///
/// Returns the reduced model and, per reduced issue, the original issue index.
pub fn duplicate_issues(model: &PopulationModel) -> Result<(PopulationModel, Vec<usize>)> {
    if model.issues.n() != 2 {
        return Err(Error::Unsupported(
            "issue duplication is defined for binary issues only".into(),
        ));
    }
    let mut ids = Vec::new();
    let mut weights = Vec::new();
    let mut per_issue = Vec::new();
    let mut origin = Vec::new();
    for (i, id) in model.issues.ids().iter().enumerate() {
        for b in LinearOrder::all(2) {
            ids.push(format!("{id}#{b}"));
            weights.push(model.saliency.weight(i) * model.marginals.prob(i, &b));
            per_issue.push(BTreeMap::from([(b, 1.0)]));
            origin.push(i);
        }
    }
    let reduced = PopulationModel::new(
        IssueSpace::new(ids, 2)?,
        SaliencyDistribution::new(weights)?,
        MarginalPopulation::new(2, per_issue)?,
    )?;
    Ok((reduced, origin))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lo(s: &str) -> LinearOrder {
        s.parse().unwrap()
    }

    fn point(o: &str) -> MarginalPopulation {
        MarginalPopulation::unanimous(&[lo(o)]).unwrap()
    }

    fn three_coalition_mixture() -> MarginalPopulation {
        // u, v, w = 0, 1, 2
        SubpopulationMixture::new(vec![
            (2.0 / 9.0, point("0>1>2")),
            (4.0 / 9.0, point("2>0>1")),
            (1.0 / 3.0, point("1>2>0")),
        ])
        .unwrap()
        .mix()
    }

    #[test]
    fn mix_single_component_is_identity() {
        let m = MarginalPopulation::uniform(2, 3);
        let mixed = SubpopulationMixture::new(vec![(1.0, m.clone())]).unwrap().mix();
        assert_eq!(mixed, m);
    }

    #[test]
    fn mix_opposite_binary_halves() {
        let mixed = SubpopulationMixture::new(vec![(0.5, point("0>1")), (0.5, point("1>0"))])
            .unwrap()
            .mix();
        assert_eq!(mixed.prob(0, &lo("0>1")), 0.5);
        assert_eq!(mixed.prob(0, &lo("1>0")), 0.5);
    }

    #[test]
    fn mix_rejects_bad_masses() {
        assert!(SubpopulationMixture::new(vec![(0.5, point("0>1")), (0.6, point("1>0"))]).is_err());
        assert!(SubpopulationMixture::new(vec![(1.0, point("0>1")), (0.0, point("1>0"))]).is_err());
    }

    #[test]
    fn three_coalition_pair_marginals() {
        let m = three_coalition_mixture();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(m.pair_marginal(0, 0, 1).unwrap(), 2.0 / 3.0));
        // only the 4/9 coalition (w>u>v) puts w above v
        assert!(close(m.pair_marginal(0, 2, 1).unwrap(), 4.0 / 9.0));
        assert!(close(m.pair_marginal(0, 1, 2).unwrap(), 5.0 / 9.0));
        assert!(close(m.pair_marginal(0, 0, 2).unwrap(), 2.0 / 9.0));
    }

    #[test]
    fn pair_marginal_examples() {
        assert_eq!(point("2>0>1").pair_marginal(0, 2, 1).unwrap(), 1.0);
        let u = MarginalPopulation::uniform(1, 3);
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            assert!((u.pair_marginal(0, a, b).unwrap() - 0.5).abs() < 1e-12);
        }
        assert!(u.pair_marginal(0, 1, 1).is_err());
        assert!(u.pair_marginal(0, 0, 3).is_err());
    }

    #[test]
    fn mix_then_pair_marginal_is_linear() {
        let comps = vec![
            (0.2, MarginalPopulation::uniform(1, 3)),
            (0.5, point("2>1>0")),
            (0.3, point("1>0>2")),
        ];
        let mixed = SubpopulationMixture::new(comps.clone()).unwrap().mix();
        for (a, b) in [(0, 1), (1, 0), (0, 2), (2, 1)] {
            let direct: f64 = comps
                .iter()
                .map(|(w, m)| w * m.pair_marginal(0, a, b).unwrap())
                .sum();
            assert!((mixed.pair_marginal(0, a, b).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_population_repeats_one_pair() {
        let s = sample_pairs(&SaliencyDistribution::uniform(1), &point("1>0>2"), 50, 3).unwrap();
        assert_eq!(s.len(), 50);
        assert!(s.pairs().iter().all(|(o, i)| *o == lo("1>0>2") && *i == 0));
    }

    #[test]
    fn same_seed_same_sample() {
        let m = MarginalPopulation::uniform(3, 3);
        let d = SaliencyDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let a = sample_pairs(&d, &m, 200, 99).unwrap();
        let b = sample_pairs(&d, &m, 200, 99).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_pairs(&d, &m, 200, 100).unwrap());
        assert_eq!(a.tally(), PopulationSampler::new(&d, &m).unwrap().sample_tally(200, 99));
    }

    #[test]
    fn issue_frequencies_match_saliency() {
        let d = SaliencyDistribution::new(vec![0.25, 0.75]).unwrap();
        let m = MarginalPopulation::uniform(2, 2);
        let n = 100_000usize;
        let s = sample_pairs(&d, &m, n, 11).unwrap();
        let t = s.tally();
        for (i, p) in [0.25f64, 0.75].into_iter().enumerate() {
            let freq = t.issue_total(i) as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!((freq - p).abs() <= 3.0 * se, "issue {i}: {freq} vs {p}");
        }
    }

    #[test]
    fn cell_frequencies_within_four_se_across_seeds() {
        let d = SaliencyDistribution::new(vec![0.3, 0.7]).unwrap();
        let m = MarginalPopulation::new(
            3,
            vec![
                BTreeMap::from([(lo("0>1>2"), 0.5), (lo("2>1>0"), 0.3), (lo("1>2>0"), 0.2)]),
                BTreeMap::from([(lo("1>0>2"), 0.9), (lo("0>2>1"), 0.1)]),
            ],
        )
        .unwrap();
        let sampler = PopulationSampler::new(&d, &m).unwrap();
        let n = 100_000u64;
        let mut good_runs = 0;
        for seed in 0..100u64 {
            let t = sampler.sample_tally(n as usize, crate::rng::derive_seed(5, &[seed]));
            let ok = (0..2).all(|i| {
                m.distribution(i).iter().all(|(o, &q)| {
                    let p = d.weight(i) * q;
                    let freq = t.count(i, o) as f64 / n as f64;
                    (freq - p).abs() <= 4.0 * (p * (1.0 - p) / n as f64).sqrt()
                })
            });
            good_runs += ok as u32;
        }
        assert!(good_runs >= 99, "only {good_runs} of 100 runs within 4 SE");
    }

    #[test]
    fn population_file_round_trip() {
        let text = r#"{
            "issues": ["a", 7],
            "N": 3,
            "saliency": {"a": 0.4, "7": 0.6},
            "marginals": {"a": {"2>0>1": 0.5, "0>1>2": 0.5}, "7": {"1>0>2": 1.0}}
        }"#;
        let m = PopulationModel::from_json(text).unwrap();
        assert_eq!(m.issues.ids(), &["a".to_string(), "7".to_string()]);
        assert_eq!(m.marginals.prob(0, &lo("2>0>1")), 0.5);
        let again = PopulationModel::from_json(&m.to_json()).unwrap();
        assert_eq!(again.marginals, m.marginals);
        assert_eq!(again.saliency, m.saliency);
        assert!(again.to_json().contains("\n    7"));
    }

    #[test]
    fn population_file_errors() {
        let bad_sum = r#"{"issues":["a"],"N":2,"saliency":{"a":0.9},"marginals":{"a":{"0>1":1.0}}}"#;
        assert!(PopulationModel::from_json(bad_sum).is_err());
        let bad_order = r#"{"issues":["a"],"N":2,"saliency":{"a":1.0},"marginals":{"a":{"0>2":1.0}}}"#;
        assert!(PopulationModel::from_json(bad_order).is_err());
        let unknown = r#"{"issues":["a"],"N":2,"saliency":{"a":1.0,"b":0.0},"marginals":{"a":{"0>1":1.0}}}"#;
        assert!(PopulationModel::from_json(unknown).is_err());
    }

    #[test]
    fn zero_weight_issue_is_flagged() {
        let text = r#"{"issues":["a","b"],"N":2,"saliency":{"a":1.0,"b":0.0},
            "marginals":{"a":{"0>1":1.0},"b":{"1>0":1.0}}}"#;
        let m = PopulationModel::from_json(text).unwrap();
        assert_eq!(m.warnings().len(), 1);
        assert!(m.warnings()[0].contains('b'));
    }

    #[test]
    fn sample_csv_layout() {
        let space = IssueSpace::new(["x", "y"], 2).unwrap();
        let s = SampleSet::new(vec![(lo("1>0"), 1), (lo("0>1"), 0)], 2, 0).unwrap();
        assert_eq!(s.to_csv(&space), "k,issue_id,ordering\n0,y,1>0\n1,x,0>1\n");
    }
}
