//! Privileged orderings, privilege graphs, their condensation, and the
//! acyclic construction.
//!
//! A partial order `o` over `T` is privileged on issue `i` when for every
//! extension `C` of `o` and every `σ ∈ 𝔖_T`, `C ⊙_i σ ∈ 𝒞` implies `C ∈ 𝒞`.
//! Equivalently, re-sorting the outcomes of `T` on issue `i` into `o`'s order
//! never leaves `𝒞`.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet, VecDeque};
use std::cmp::Reverse;
use std::fmt::Write as _;
use std::path::Path;

use itertools::Itertools;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{LinearOrder, PartialOrder, Permutation};
use crate::population::{IssueId, IssueSpace};
use crate::profile::Profile;
use crate::space::{CandidateSpace, SpaceFile, SpaceVariant};

/// Largest outcome count the privilege oracles accept.
pub const MAX_PRIVILEGE_N: usize = 5;

/// Directed graph over one issue's outcomes; `u -> v` when `u ≻ v` is privileged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivilegeGraph {
    issue: String,
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl PrivilegeGraph {
    pub fn new(
        issue: impl Into<String>,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u == v || u >= n || v >= n) {
            return Err(Error::invalid(format!("edge ({u},{v}) is a self-loop or out of range")));
        }
        Ok(PrivilegeGraph {
            issue: issue.into(),
            n,
            edges,
        })
    }

    pub fn complete(issue: impl Into<String>, n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        PrivilegeGraph {
            issue: issue.into(),
            n,
            edges,
        }
    }

    pub fn issue(&self) -> &str {
        &self.issue
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v)
    }

    /// `(u,v),(v,w) ∈ E ⟹ (u,w) ∈ E` for `u ≠ w`.
    pub fn is_transitive(&self) -> bool {
        self.edges.iter().all(|&(u, v)| {
            self.successors(v)
                .all(|w| w == u || self.has_edge(u, w))
        })
    }

    /// Whether a directed path of length at least one leads from `u` to `v`.
    pub fn reachable(&self, u: usize, v: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue: VecDeque<usize> = self.successors(u).collect();
        while let Some(x) = queue.pop_front() {
            if x == v {
                return true;
            }
            if !std::mem::replace(&mut seen[x], true) {
                queue.extend(self.successors(x));
            }
        }
        false
    }

    /// Transitive closure, without self-loops.
    pub fn closure(&self) -> PrivilegeGraph {
        let edges = (0..self.n)
            .flat_map(|u| (0..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && self.reachable(u, v))
            .collect();
        PrivilegeGraph {
            issue: self.issue.clone(),
            n: self.n,
            edges,
        }
    }

    /// Edges implied by chains of privileged pairs but not witnessed directly.
    pub fn inferred_edges(&self) -> BTreeSet<(usize, usize)> {
        self.closure()
            .edges
            .difference(&self.edges)
            .copied()
            .collect()
    }

    pub fn is_subgraph_of(&self, other: &PrivilegeGraph) -> bool {
        self.n == other.n && self.edges.is_subset(&other.edges)
    }

    /// One `u -> v` line per edge after a header line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# issue {} N={}\n", self.issue, self.n);
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} -> {v}");
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"{}\" {{\n", self.issue.replace('"', "\\\""));
        for u in 0..self.n {
            let _ = writeln!(out, "  {u};");
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -> {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// The part of a space that issue `i` can interact with: a membership set of
/// `(context on the other issues, order on i)`.
struct LocalView {
    issue_pos: usize,
    members: HashSet<Vec<LinearOrder>>,
    contexts: BTreeSet<Vec<LinearOrder>>,
}

impl LocalView {
    /// `None` for a Full space, where every ordering is privileged.
    fn new(space: &CandidateSpace, issue: usize, cap: u128) -> Result<Option<Self>> {
        let (issue_pos, rows): (usize, Vec<Vec<LinearOrder>>) = match space.variant() {
            SpaceVariant::Full => return Ok(None),
            SpaceVariant::Explicit(ps) => {
                (issue, ps.iter().map(|c| c.orders().to_vec()).collect())
            }
            SpaceVariant::Product(blocks) => {
                let b = blocks
                    .iter()
                    .find(|b| b.issues().contains(&issue))
                    .expect("blocks partition the issues");
                let pos = b.issues().iter().position(|&j| j == issue).expect("present");
                (pos, b.members().to_vec())
            }
        };
        let contexts: BTreeSet<Vec<LinearOrder>> = rows
            .iter()
            .map(|r| {
                let mut ctx = r.clone();
                ctx.remove(issue_pos);
                ctx
            })
            .collect();
        let fact: u128 = (1..=space.n() as u128).product();
        let cost = contexts.len() as u128 * fact;
        if cost > cap {
            return Err(Error::capacity("privilege check (contexts × N!)", cost, cap));
        }
        Ok(Some(LocalView {
            issue_pos,
            members: rows.into_iter().collect(),
            contexts,
        }))
    }

    fn contains(&self, ctx: &[LinearOrder], order: &LinearOrder) -> bool {
        let mut row = ctx.to_vec();
        row.insert(self.issue_pos, order.clone());
        self.members.contains(&row)
    }
}

fn check_scope(space: &CandidateSpace, issue: usize, o: &PartialOrder) -> Result<()> {
    if issue >= space.issues().len() {
        return Err(Error::invalid(format!("issue index {issue} out of range")));
    }
    if o.n() != space.n() || o.len() < 2 {
        return Err(Error::invalid(format!(
            "ordering {o} must cover at least two of the space's {} outcomes",
            space.n()
        )));
    }
    if space.n() > MAX_PRIVILEGE_N {
        return Err(Error::capacity(
            "privilege check outcome count",
            space.n() as u128,
            MAX_PRIVILEGE_N as u128,
        ));
    }
    Ok(())
}

/// Exact privilege test.
///
/// Extensions are taken over the contexts that occur in `𝒞` (for a product
/// space, in the factor holding `issue`): under any other context neither
/// side of the implication can be a member, so it holds vacuously.
pub fn is_privileged(
    space: &CandidateSpace,
    issue: usize,
    o: &PartialOrder,
    cap: u128,
) -> Result<bool> {
    check_scope(space, issue, o)?;
    let Some(view) = LocalView::new(space, issue, cap)? else {
        return Ok(true);
    };
    let extensions = LinearOrder::extensions_of(o);
    let perms = Permutation::all_on(space.n(), o.subset());
    for ctx in &view.contexts {
        for e in &extensions {
            if view.contains(ctx, e) {
                continue;
            }
            for sigma in &perms {
                if view.contains(ctx, &e.apply(sigma)?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The definition taken literally: every extension in `LO(N)^ℐ`, every
/// permutation of `T`. Only for `|ℐ| ≤ 3`, `N ≤ 4`.
pub fn is_privileged_exhaustive(
    space: &CandidateSpace,
    issue: usize,
    o: &PartialOrder,
) -> Result<bool> {
    check_scope(space, issue, o)?;
    let m = space.issues().len();
    if m > 3 || space.n() > 4 {
        return Err(Error::capacity(
            "exhaustive privilege check (|ℐ| ≤ 3, N ≤ 4)",
            (m.max(space.n())) as u128,
            4,
        ));
    }
    let all = LinearOrder::all(space.n());
    let extensions = LinearOrder::extensions_of(o);
    let perms = Permutation::all_on(space.n(), o.subset());
    let slots = (0..m).map(|j| {
        if j == issue {
            extensions.clone()
        } else {
            all.clone()
        }
    });
    for orders in slots.multi_cartesian_product() {
        let c = Profile::new(orders)?;
        if space.contains(&c)? {
            continue;
        }
        for sigma in &perms {
            if space.contains(&c.apply_local_permutation(issue, sigma)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `G_i`: an edge `u -> v` for every privileged binary ordering `u ≻ v`.
pub fn build_privilege_graph(
    space: &CandidateSpace,
    issue: usize,
    cap: u128,
) -> Result<PrivilegeGraph> {
    let n = space.n();
    let id = space
        .issues()
        .ids()
        .get(issue)
        .ok_or_else(|| Error::invalid(format!("issue index {issue} out of range")))?
        .clone();
    if matches!(space.variant(), SpaceVariant::Full) {
        return Ok(PrivilegeGraph::complete(id, n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(u, v)| is_privileged(space, issue, &PartialOrder::pair(u, v, n)?, cap))
        .collect::<Result<Vec<bool>>>()?;
    PrivilegeGraph::new(
        id,
        n,
        pairs.into_iter().zip(verdicts).filter(|(_, p)| *p).map(|(e, _)| e),
    )
}

/// SCCs numbered by smallest member, the DAG between them, and a
/// deterministic topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    /// Each SCC's outcomes, ascending; SCCs sorted by smallest member.
    pub scc_members: Vec<Vec<usize>>,
    pub dag_edges: BTreeSet<(usize, usize)>,
    /// SCC indices; among the valid orders, the one that always takes the
    /// available SCC with the smallest member next.
    pub topo_order: Vec<usize>,
    pub component_of: Vec<usize>,
}

pub fn scc_condensation(g: &PrivilegeGraph) -> Condensation {
    let mut dg = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..g.n).map(|_| dg.add_node(())).collect();
    for &(u, v) in &g.edges {
        dg.add_edge(nodes[u], nodes[v], ());
    }
    let mut sccs: Vec<Vec<usize>> = tarjan_scc(&dg)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x.index()).sorted().collect())
        .collect();
    sccs.sort_by_key(|c: &Vec<usize>| c[0]);
    let mut component_of = vec![0; g.n];
    for (k, c) in sccs.iter().enumerate() {
        for &x in c {
            component_of[x] = k;
        }
    }
    let dag_edges: BTreeSet<(usize, usize)> = g
        .edges
        .iter()
        .map(|&(u, v)| (component_of[u], component_of[v]))
        .filter(|(a, b)| a != b)
        .collect();

    // Kahn's algorithm; SCC index order is smallest-member order.
    let mut indegree = vec![0usize; sccs.len()];
    for &(_, b) in &dag_edges {
        indegree[b] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = indegree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(k, _)| Reverse(k))
        .collect();
    let mut topo_order = Vec::with_capacity(sccs.len());
    while let Some(Reverse(k)) = ready.pop() {
        topo_order.push(k);
        for &(_, b) in dag_edges.range((k, 0)..(k + 1, 0)) {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    Condensation {
        scc_members: sccs,
        dag_edges,
        topo_order,
        component_of,
    }
}

/// True iff some strongly connected component has three or more outcomes.
pub fn is_cyclically_privileged(g: &PrivilegeGraph) -> bool {
    scc_condensation(g).scc_members.iter().any(|c| c.len() >= 3)
}

/// Whether some simple directed cycle visits three or more outcomes, by
/// depth-first search. Agrees with [`is_cyclically_privileged`] on
/// transitive graphs; on others an SCC can be built from 2-cycles alone.
pub fn has_long_simple_cycle(g: &PrivilegeGraph) -> bool {
    fn extend(g: &PrivilegeGraph, start: usize, path: &mut Vec<usize>, on: &mut [bool]) -> bool {
        let last = *path.last().expect("nonempty path");
        for v in g.successors(last).collect::<Vec<_>>() {
            if v == start && path.len() >= 3 {
                return true;
            }
            if v > start && !on[v] {
                on[v] = true;
                path.push(v);
                if extend(g, start, path, on) {
                    return true;
                }
                path.pop();
                on[v] = false;
            }
        }
        false
    }
    (0..g.n).any(|s| {
        let mut on = vec![false; g.n];
        on[s] = true;
        extend(g, s, &mut vec![s], &mut on)
    })
}

/// Sufficient condition for `o` being privileged: a path through `o`'s
/// outcomes in order.
pub fn check_path_privilege(g: &PrivilegeGraph, o: &PartialOrder) -> bool {
    o.subset().windows(2).all(|w| g.reachable(w[0], w[1]))
}

/// One issue's part of an [`AcyclicPlan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssuePlan {
    /// SCCs in topological order; a two-outcome block lists its canonical
    /// orientation, top first.
    blocks: Vec<Vec<usize>>,
    /// The `2^l` orderings, sorted.
    factor: Vec<LinearOrder>,
}

impl IssuePlan {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn factor(&self) -> &[LinearOrder] {
        &self.factor
    }

    /// The two-outcome blocks, in canonical orientation.
    pub fn swappable_pairs(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .filter(|b| b.len() == 2)
            .map(|b| (b[0], b[1]))
            .collect()
    }
}

/// Candidate space and per-issue plan built from acyclic privilege graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicPlan {
    issues: IssueSpace,
    per_issue: Vec<IssuePlan>,
    space: CandidateSpace,
}

impl AcyclicPlan {
    pub fn issues(&self) -> &IssueSpace {
        &self.issues
    }

    pub fn per_issue(&self) -> &[IssuePlan] {
        &self.per_issue
    }

    pub fn space(&self) -> &CandidateSpace {
        &self.space
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct IssueEntry {
            blocks: Vec<Vec<usize>>,
            factor: Vec<String>,
        }
        #[derive(Serialize)]
        struct PlanFile<'a> {
            issues: Vec<IssueId>,
            #[serde(rename = "N")]
            n: usize,
            per_issue: BTreeMap<&'a str, IssueEntry>,
            space: SpaceFile,
        }
        let file = PlanFile {
            issues: self.issues.ids().iter().map(|s| IssueId::from_str(s)).collect(),
            n: self.issues.n(),
            per_issue: self
                .issues
                .ids()
                .iter()
                .zip(&self.per_issue)
                .map(|(id, p)| {
                    (
                        id.as_str(),
                        IssueEntry {
                            blocks: p.blocks.clone(),
                            factor: p.factor.iter().map(|o| o.to_string()).collect(),
                        },
                    )
                })
                .collect(),
            space: self.space.to_file(),
        };
        serde_json::to_string_pretty(&file).expect("plan serializes")
    }
}

/// Builds the candidate space and mechanism plan for graphs `φ(i)` whose
/// strongly connected components have at most two outcomes.
///
/// `orientations[i]` lists `(top, bottom)` for two-outcome components whose
/// canonical orientation should differ from smaller-index-first.
pub fn synthesize_acyclic(
    issues: &IssueSpace,
    graphs: &[PrivilegeGraph],
    orientations: Option<&[Vec<(usize, usize)>]>,
) -> Result<AcyclicPlan> {
    if graphs.len() != issues.len() {
        return Err(Error::invalid(format!(
            "{} graphs for {} issues",
            graphs.len(),
            issues.len()
        )));
    }
    let mut per_issue = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        if g.n != issues.n() {
            return Err(Error::invalid(format!(
                "graph for `{}` has {} outcomes, the issues have {}",
                issues.id(i),
                g.n,
                issues.n()
            )));
        }
        if !g.is_transitive() {
            return Err(Error::Precondition(format!(
                "graph for `{}` is not transitive",
                issues.id(i)
            )));
        }
        let cond = scc_condensation(g);
        if let Some(big) = cond.scc_members.iter().find(|c| c.len() >= 3) {
            return Err(Error::Cyclic {
                issue: issues.id(i).to_string(),
                component: big.clone(),
            });
        }
        let mut blocks: Vec<Vec<usize>> = cond
            .topo_order
            .iter()
            .map(|&k| cond.scc_members[k].clone())
            .collect();
        for &(top, bottom) in orientations.and_then(|o| o.get(i)).into_iter().flatten() {
            let b = blocks
                .iter_mut()
                .find(|b| b.len() == 2 && b.contains(&top) && b.contains(&bottom) && top != bottom)
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "orientation ({top},{bottom}) on `{}` is not a two-outcome component",
                        issues.id(i)
                    ))
                })?;
            *b = vec![top, bottom];
        }
        let factor: Vec<LinearOrder> = blocks
            .iter()
            .map(|b| {
                if b.len() == 2 {
                    vec![b.clone(), vec![b[1], b[0]]]
                } else {
                    vec![b.clone()]
                }
            })
            .multi_cartesian_product()
            .map(|parts| LinearOrder::new(parts.concat()))
            .collect::<Result<BTreeSet<_>>>()?
            .into_iter()
            .collect();
        per_issue.push(IssuePlan { blocks, factor });
    }
    let space = CandidateSpace::product(
        issues.clone(),
        per_issue
            .iter()
            .enumerate()
            .map(|(i, p)| (vec![i], p.factor.iter().map(|o| vec![o.clone()]).collect()))
            .collect(),
    )?;
    Ok(AcyclicPlan {
        issues: issues.clone(),
        per_issue,
        space,
    })
}

#[derive(Deserialize)]
struct GraphEntry {
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    orientations: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct GraphsFile {
    issues: Vec<IssueId>,
    #[serde(rename = "N")]
    n: usize,
    graphs: BTreeMap<String, GraphEntry>,
}

/// Privilege graphs as read from a graph file, one per issue.
#[derive(Clone, Debug)]
pub struct GraphSet {
    pub issues: IssueSpace,
    pub graphs: Vec<PrivilegeGraph>,
    pub orientations: Vec<Vec<(usize, usize)>>,
}

impl GraphSet {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphsFile = serde_json::from_str(text)?;
        let issues = IssueSpace::new(file.issues.into_iter().map(IssueId::into_string), file.n)?;
        for key in file.graphs.keys() {
            issues.index_of(key)?;
        }
        let mut graphs = Vec::new();
        let mut orientations = Vec::new();
        for id in issues.ids() {
            let entry = file
                .graphs
                .get(id)
                .ok_or_else(|| Error::invalid(format!("no graph for issue `{id}`")))?;
            graphs.push(PrivilegeGraph::new(id.clone(), issues.n(), entry.edges.iter().copied())?);
            orientations.push(entry.orientations.clone());
        }
        Ok(GraphSet {
            issues,
            graphs,
            orientations,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        GraphSet::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn synthesize(&self) -> Result<AcyclicPlan> {
        synthesize_acyclic(&self.issues, &self.graphs, Some(&self.orientations))
    }
}

/// Everything the CLI reports about one issue.
#[derive(Clone, Debug)]
pub struct IssueAnalysis {
    pub graph: PrivilegeGraph,
    pub condensation: Condensation,
    pub cyclic: bool,
    pub long_simple_cycle: bool,
    pub transitive: bool,
    pub inferred_edges: BTreeSet<(usize, usize)>,
}

pub fn analyze_issue(space: &CandidateSpace, issue: usize, cap: u128) -> Result<IssueAnalysis> {
    let graph = build_privilege_graph(space, issue, cap)?;
    let condensation = scc_condensation(&graph);
    Ok(IssueAnalysis {
        cyclic: condensation.scc_members.iter().any(|c| c.len() >= 3),
        long_simple_cycle: has_long_simple_cycle(&graph),
        transitive: graph.is_transitive(),
        inferred_edges: graph.inferred_edges(),
        condensation,
        graph,
    })
}
