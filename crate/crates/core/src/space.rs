//! Candidate spaces, their enumeration, and their statistical complexity.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::LinearOrder;
use crate::population::{IssueId, IssueSpace, SampleSet};
use crate::profile::Profile;
use crate::rng::{derive_seed, rng_from_seed};
use crate::scoring::ScoringRule;

/// Default enumeration cap, in profiles.
pub const DEFAULT_CAP: u128 = 1_000_000;

/// One explicit factor of a product space.
///
/// `issues` is ascending and each member lists one order per entry of
/// `issues`. Members are sorted and distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    issues: Vec<usize>,
    members: Vec<Vec<LinearOrder>>,
}

impl Block {
    pub fn issues(&self) -> &[usize] {
        &self.issues
    }

    pub fn members(&self) -> &[Vec<LinearOrder>] {
        &self.members
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceVariant {
    /// Sorted, distinct, nonempty.
    Explicit(Vec<Profile>),
    /// Every profile: `LO(N)^ℐ`.
    Full,
    /// Cartesian product of blocks partitioning the issues.
    Product(Vec<Block>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSpace {
    issues: IssueSpace,
    variant: SpaceVariant,
}

fn check_profile_shape(issues: &IssueSpace, c: &Profile) -> Result<()> {
    if c.issue_count() != issues.len() || c.n() != issues.n() {
        return Err(Error::invalid(format!(
            "profile over {} issues with N={} does not match a space of {} issues with N={}",
            c.issue_count(),
            c.n(),
            issues.len(),
            issues.n()
        )));
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

impl CandidateSpace {
    pub fn full(issues: IssueSpace) -> Self {
        CandidateSpace {
            issues,
            variant: SpaceVariant::Full,
        }
    }

    pub fn explicit(issues: IssueSpace, mut profiles: Vec<Profile>) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::invalid("an explicit candidate space needs a profile"));
        }
        for c in &profiles {
            check_profile_shape(&issues, c)?;
        }
        profiles.sort();
        if let Some(w) = profiles.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("profile {} listed twice", w[0])));
        }
        Ok(CandidateSpace {
            issues,
            variant: SpaceVariant::Explicit(profiles),
        })
    }

    /// `blocks` pairs a list of issue indices with that block's members.
    pub fn product(
        issues: IssueSpace,
        blocks: Vec<(Vec<usize>, Vec<Vec<LinearOrder>>)>,
    ) -> Result<Self> {
        let mut seen = vec![false; issues.len()];
        let mut out = Vec::with_capacity(blocks.len());
        for (block_issues, members) in blocks {
            if block_issues.is_empty() || members.is_empty() {
                return Err(Error::invalid("product blocks need issues and members"));
            }
            for &i in &block_issues {
                if i >= issues.len() || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::invalid(format!(
                        "product blocks must partition the issues; index {i} is repeated or unknown"
                    )));
                }
            }
            let perm: Vec<usize> = (0..block_issues.len())
                .sorted_by_key(|&k| block_issues[k])
                .collect();
            let mut sorted_members = Vec::with_capacity(members.len());
            for m in members {
                if m.len() != block_issues.len() || m.iter().any(|o| o.n() != issues.n()) {
                    return Err(Error::invalid(
                        "a block member needs one order per block issue, each over N outcomes",
                    ));
                }
                sorted_members.push(perm.iter().map(|&k| m[k].clone()).collect::<Vec<_>>());
            }
            sorted_members.sort();
            if sorted_members.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid("a block lists the same member twice"));
            }
            out.push(Block {
                issues: perm.iter().map(|&k| block_issues[k]).collect(),
                members: sorted_members,
            });
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!(
                "product blocks must partition the issues; `{}` is uncovered",
                issues.id(i)
            )));
        }
        out.sort_by_key(|b| b.issues[0]);
        Ok(CandidateSpace {
            issues,
            variant: SpaceVariant::Product(out),
        })
    }

    pub fn issues(&self) -> &IssueSpace {
        &self.issues
    }

    pub fn n(&self) -> usize {
        self.issues.n()
    }

    pub fn variant(&self) -> &SpaceVariant {
        &self.variant
    }

    pub fn contains(&self, c: &Profile) -> Result<bool> {
        check_profile_shape(&self.issues, c)?;
        Ok(match &self.variant {
            SpaceVariant::Full => true,
            SpaceVariant::Explicit(ps) => ps.binary_search(c).is_ok(),
            SpaceVariant::Product(blocks) => blocks.iter().all(|b| {
                let key: Vec<LinearOrder> = b.issues.iter().map(|&i| c.get(i).clone()).collect();
                b.members.binary_search(&key).is_ok()
            }),
        })
    }

    /// Number of members, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        match &self.variant {
            SpaceVariant::Explicit(ps) => ps.len() as u128,
            SpaceVariant::Full => {
                let per = factorial(self.n());
                (0..self.issues.len()).fold(1u128, |acc, _| acc.saturating_mul(per))
            }
            SpaceVariant::Product(blocks) => blocks
                .iter()
                .fold(1u128, |acc, b| acc.saturating_mul(b.members.len() as u128)),
        }
    }

    /// All members in canonical order. Fails when the size exceeds `cap`.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<Profile>> {
        let size = self.size();
        if size > cap {
            return Err(Error::capacity("candidate-space enumeration", size, cap));
        }
        Ok(match &self.variant {
            SpaceVariant::Explicit(ps) => ps.clone(),
            SpaceVariant::Full => {
                let all = LinearOrder::all(self.n());
                (0..self.issues.len())
                    .map(|_| all.iter().cloned())
                    .multi_cartesian_product()
                    .map(|orders| Profile::new(orders).expect("nonempty, uniform N"))
                    .collect()
            }
            SpaceVariant::Product(blocks) => {
                let mut out: Vec<Profile> = blocks
                    .iter()
                    .map(|b| b.members.iter())
                    .multi_cartesian_product()
                    .map(|choice| {
                        let mut orders = vec![LinearOrder::identity(self.n()); self.issues.len()];
                        for (b, m) in blocks.iter().zip(choice) {
                            for (&i, o) in b.issues.iter().zip(m) {
                                orders[i] = o.clone();
                            }
                        }
                        Profile::new(orders).expect("nonempty, uniform N")
                    })
                    .collect();
                out.sort();
                out
            }
        })
    }

    /// The same space with issue `k` renamed to `new_index[k]`.
    pub fn relabeled(&self, new_index: &[usize]) -> Result<CandidateSpace> {
        let m = self.issues.len();
        if new_index.len() != m || !new_index.iter().copied().sorted().eq(0..m) {
            return Err(Error::invalid("relabeling must be a permutation of the issues"));
        }
        let mut ids = vec![String::new(); m];
        for (k, &t) in new_index.iter().enumerate() {
            ids[t] = self.issues.id(k).to_string();
        }
        let issues = IssueSpace::new(ids, self.n())?;
        let move_profile = |c: &Profile| {
            let mut orders = c.orders().to_vec();
            for (k, &t) in new_index.iter().enumerate() {
                orders[t] = c.get(k).clone();
            }
            Profile::new(orders).expect("same shape")
        };
        match &self.variant {
            SpaceVariant::Full => Ok(CandidateSpace::full(issues)),
            SpaceVariant::Explicit(ps) => {
                CandidateSpace::explicit(issues, ps.iter().map(move_profile).collect())
            }
            SpaceVariant::Product(blocks) => CandidateSpace::product(
                issues,
                blocks
                    .iter()
                    .map(|b| {
                        (
                            b.issues.iter().map(|&i| new_index[i]).collect(),
                            b.members.clone(),
                        )
                    })
                    .collect(),
            ),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)?;
        file.into_space()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        CandidateSpace::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("space serializes")
    }

    pub(crate) fn to_file(&self) -> SpaceFile {
        let ids = self.issues.ids();
        let to_map = |issues: &[usize], orders: &[LinearOrder]| -> BTreeMap<String, String> {
            issues
                .iter()
                .zip(orders)
                .map(|(&i, o)| (ids[i].clone(), o.to_string()))
                .collect()
        };
        let all: Vec<usize> = (0..ids.len()).collect();
        let mut file = SpaceFile {
            variant: String::new(),
            issues: Some(ids.iter().map(|s| IssueId::from_str(s)).collect()),
            n: Some(self.n()),
            profiles: None,
            blocks: None,
        };
        match &self.variant {
            SpaceVariant::Full => file.variant = "full".into(),
            SpaceVariant::Explicit(ps) => {
                file.variant = "explicit".into();
                file.profiles = Some(ps.iter().map(|c| to_map(&all, c.orders())).collect());
            }
            SpaceVariant::Product(blocks) => {
                file.variant = "product".into();
                file.blocks = Some(
                    blocks
                        .iter()
                        .map(|b| BlockFile {
                            issues: b.issues.iter().map(|&i| IssueId::from_str(&ids[i])).collect(),
                            profiles: b.members.iter().map(|m| to_map(&b.issues, m)).collect(),
                        })
                        .collect(),
                );
            }
        }
        file
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct BlockFile {
    issues: Vec<IssueId>,
    profiles: Vec<BTreeMap<String, String>>,
}

/// On-disk candidate space. `issues` and `N` may be omitted for explicit and
/// product spaces, in which case they are read off the listed profiles.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct SpaceFile {
    variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    issues: Option<Vec<IssueId>>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    profiles: Option<Vec<BTreeMap<String, String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<BlockFile>>,
}

/// Sorts ids numerically when they all look like integers.
fn natural_ids(keys: BTreeSet<String>) -> Vec<String> {
    let mut ids: Vec<String> = keys.into_iter().collect();
    if ids.iter().all(|s| s.parse::<i64>().is_ok()) {
        ids.sort_by_key(|s| s.parse::<i64>().unwrap());
    }
    ids
}

fn parse_assignment(
    map: &BTreeMap<String, String>,
    issues: &IssueSpace,
    expect: &[usize],
) -> Result<Vec<LinearOrder>> {
    if map.len() != expect.len() {
        return Err(Error::invalid(format!(
            "a listed profile assigns {} issues, expected {}",
            map.len(),
            expect.len()
        )));
    }
    expect
        .iter()
        .map(|&i| {
            let id = issues.id(i);
            let o: LinearOrder = map
                .get(id)
                .ok_or_else(|| Error::invalid(format!("a listed profile misses issue `{id}`")))?
                .parse()?;
            if o.n() != issues.n() {
                return Err(Error::invalid(format!("order {o} on `{id}` is not over N outcomes")));
            }
            Ok(o)
        })
        .collect()
}

impl SpaceFile {
    fn first_order_n(&self) -> Option<usize> {
        let from_profiles = self.profiles.iter().flatten().flat_map(|m| m.values());
        let from_blocks = self
            .blocks
            .iter()
            .flatten()
            .flat_map(|b| b.profiles.iter().flat_map(|m| m.values()));
        from_profiles
            .chain(from_blocks)
            .next()
            .and_then(|s| s.parse::<LinearOrder>().ok())
            .map(|o| o.n())
    }

    fn issue_space(&self) -> Result<IssueSpace> {
        let ids = match &self.issues {
            Some(ids) => ids.iter().cloned().map(IssueId::into_string).collect(),
            None => {
                let keys: BTreeSet<String> = match (&self.profiles, &self.blocks) {
                    (Some(ps), _) => ps.iter().flat_map(|m| m.keys().cloned()).collect(),
                    (None, Some(bs)) => bs
                        .iter()
                        .flat_map(|b| b.issues.iter().cloned().map(IssueId::into_string))
                        .collect(),
                    _ => return Err(Error::invalid("a space file needs `issues`")),
                };
                natural_ids(keys)
            }
        };
        let n = self
            .n
            .or_else(|| self.first_order_n())
            .ok_or_else(|| Error::invalid("a space file needs `N`"))?;
        IssueSpace::new(ids, n)
    }

    pub(crate) fn into_space(self) -> Result<CandidateSpace> {
        let issues = self.issue_space()?;
        match self.variant.as_str() {
            "full" => Ok(CandidateSpace::full(issues)),
            "explicit" => {
                let all: Vec<usize> = (0..issues.len()).collect();
                let profiles = self
                    .profiles
                    .as_ref()
                    .ok_or_else(|| Error::invalid("an explicit space file needs `profiles`"))?
                    .iter()
                    .map(|m| parse_assignment(m, &issues, &all).and_then(Profile::new))
                    .collect::<Result<Vec<_>>>()?;
                CandidateSpace::explicit(issues, profiles)
            }
            "product" => {
                let mut blocks = Vec::new();
                for b in self
                    .blocks
                    .as_ref()
                    .ok_or_else(|| Error::invalid("a product space file needs `blocks`"))?
                {
                    let idx = b
                        .issues
                        .iter()
                        .map(|id| issues.index_of(&id.clone().into_string()))
                        .collect::<Result<Vec<_>>>()?;
                    let members = b
                        .profiles
                        .iter()
                        .map(|m| parse_assignment(m, &issues, &idx))
                        .collect::<Result<Vec<_>>>()?;
                    blocks.push((idx, members));
                }
                CandidateSpace::product(issues, blocks)
            }
            other => Err(Error::invalid(format!(
                "unknown space variant `{other}`; expected explicit, full or product"
            ))),
        }
    }
}

/// Largest shattered issue set of a binary space, with one shattered set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcReport {
    pub dimension: usize,
    pub witness: Vec<usize>,
}

const VC_MAX_ISSUES: usize = 20;

/// Distinct realized patterns, bit `i` set when issue `i` holds `1>0`.
fn binary_patterns(space: &CandidateSpace, cap: u128) -> Result<Vec<u32>> {
    if space.n() != 2 {
        return Err(Error::Unsupported(format!(
            "VC dimension is defined for binary issues; this space has N={}",
            space.n()
        )));
    }
    if space.issues.len() > VC_MAX_ISSUES {
        return Err(Error::capacity(
            "VC-dimension issue count",
            space.issues.len() as u128,
            VC_MAX_ISSUES as u128,
        ));
    }
    let members = space.enumerate(cap)?;
    let set: BTreeSet<u32> = members
        .iter()
        .map(|c| {
            c.orders()
                .iter()
                .enumerate()
                .filter(|(_, o)| o.ranking()[0] == 1)
                .fold(0u32, |m, (i, _)| m | (1 << i))
        })
        .collect();
    Ok(set.into_iter().collect())
}

fn shatters(patterns: &[u32], subset: &[usize]) -> bool {
    let seen: BTreeSet<u32> = patterns
        .iter()
        .map(|&p| {
            subset
                .iter()
                .enumerate()
                .fold(0u32, |m, (k, &i)| m | (((p >> i) & 1) << k))
        })
        .collect();
    seen.len() == 1usize << subset.len()
}

/// Whether every binary assignment over `subset` is realized by a member.
pub fn is_shattered(space: &CandidateSpace, subset: &[usize], cap: u128) -> Result<bool> {
    let patterns = binary_patterns(space, cap)?;
    if subset.iter().any(|&i| i >= space.issues.len()) {
        return Err(Error::invalid("subset references an unknown issue"));
    }
    Ok(shatters(&patterns, subset))
}

/// Exact VC dimension by subset search in ascending size.
///
/// Shattering is hereditary, so the search stops at the first size with no
/// shattered subset.
pub fn vc_dimension(space: &CandidateSpace, cap: u128) -> Result<VcReport> {
    let patterns = binary_patterns(space, cap)?;
    let m = space.issues.len();
    let mut best = VcReport {
        dimension: 0,
        witness: Vec::new(),
    };
    for d in 1..=m {
        if (1usize << d) > patterns.len() {
            break;
        }
        match (0..m).combinations(d).find(|s| shatters(&patterns, s)) {
            Some(s) => {
                best = VcReport {
                    dimension: d,
                    witness: s,
                }
            }
            None => break,
        }
    }
    Ok(best)
}

/// The class `{(o, i) ↦ s(o, C(i)) : C ∈ 𝒞}`.
#[derive(Clone, Debug)]
pub struct InducedLossClass {
    pub space: CandidateSpace,
    pub rule: ScoringRule,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RademacherEstimate {
    pub estimate: f64,
    /// Standard error across sign draws; `None` for a single draw.
    pub stderr: Option<f64>,
    pub draws: usize,
}

/// Monte Carlo over sign vectors, exact maximization over the class.
///
/// Draw `d` uses the stream `derive_seed(seed, [d])`, so the result does not
/// depend on how draws are scheduled across threads.
pub fn empirical_rademacher(
    class: &InducedLossClass,
    sample: &SampleSet,
    draws: usize,
    seed: u64,
    cap: u128,
) -> Result<RademacherEstimate> {
    if sample.is_empty() {
        return Err(Error::invalid("Rademacher complexity needs a nonempty sample"));
    }
    if draws == 0 {
        return Err(Error::invalid("Rademacher estimation needs at least one sign draw"));
    }
    if sample.issue_count() != class.space.issues.len()
        || sample.pairs()[0].0.n() != class.space.n()
    {
        return Err(Error::invalid("sample and candidate space disagree in shape"));
    }
    let members = class.space.enumerate(cap)?;

    // Distinct sampled cells and, per member, its score on each cell.
    let mut cell_index: HashMap<(usize, &LinearOrder), usize> = HashMap::new();
    let cell_of: Vec<usize> = sample
        .pairs()
        .iter()
        .map(|(o, i)| {
            let next = cell_index.len();
            *cell_index.entry((*i, o)).or_insert(next)
        })
        .collect();
    let mut cells: Vec<(usize, &LinearOrder)> = vec![(0, &sample.pairs()[0].0); cell_index.len()];
    for (&key, &k) in &cell_index {
        cells[k] = key;
    }
    let scores: Vec<Vec<f64>> = members
        .iter()
        .map(|c| {
            cells
                .iter()
                .map(|(i, o)| class.rule.evaluate(o, c.get(*i)))
                .collect()
        })
        .collect();

    let n = sample.len() as f64;
    let values: Vec<f64> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let mut rng = rng_from_seed(derive_seed(seed, &[d as u64]));
            let mut w = vec![0.0f64; cells.len()];
            for &k in &cell_of {
                w[k] += if rng.gen::<bool>() { 1.0 } else { -1.0 };
            }
            scores
                .iter()
                .map(|row| row.iter().zip(&w).map(|(s, x)| s * x).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max)
                / n
        })
        .collect();

    let mean = values.iter().sum::<f64>() / draws as f64;
    let stderr = (draws > 1).then(|| {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        (var / draws as f64).sqrt()
    });
    Ok(RademacherEstimate {
        estimate: mean,
        stderr,
        draws,
    })
}
