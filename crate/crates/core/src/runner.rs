//! Declarative experiment runner behind the `repsoc` binary.
//!
//! A JSON config names one experiment and its inputs. Every random draw is
//! derived from the master seed with [`derive_seed`], trial `t` at sample
//! size `n` using the path `[n, t]`, so result CSVs are byte-identical across
//! runs and thread counts. Wall-clock time is written to `metadata.json`
//! only.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{
    condorcet_scenario, cycle_violation_demo, cyclic_scenario, decisiveness_probe,
    estimate_axiom, pnd_scenario, AxiomTarget, Complement, DecayCurve, PiiaCoupling, Scenario,
};
use crate::error::{Error, Result};
use crate::mechanisms::{majority_vote_tally, population_score, population_utility, tally_utility, Mechanism};
use crate::population::{IssueSpace, PopulationModel};
use crate::privilege::{analyze_issue, build_privilege_graph, AcyclicPlan, GraphSet};
use crate::profile::Profile;
use crate::report::num;
use crate::rng::derive_seed;
use crate::scoring::ScoringRule;
use crate::space::{
    empirical_rademacher, is_shattered, vc_dimension, CandidateSpace, InducedLossClass, DEFAULT_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Generalization,
    MechanismRegret,
    Axiom,
    PrivilegeAnalysis,
    SynthesizeAcyclic,
    CondorcetDemo,
    Vc,
    Rademacher,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Generalization => "generalization",
            Experiment::MechanismRegret => "mechanism-regret",
            Experiment::Axiom => "axiom",
            Experiment::PrivilegeAnalysis => "privilege-analysis",
            Experiment::SynthesizeAcyclic => "synthesize-acyclic",
            Experiment::CondorcetDemo => "condorcet-demo",
            Experiment::Vc => "vc",
            Experiment::Rademacher => "rademacher",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxiomKind {
    #[serde(rename = "ppe")]
    Ppe,
    #[serde(rename = "w-pc")]
    WeakPc,
    #[serde(rename = "s-pc")]
    StrongPc,
    #[serde(rename = "w-piia")]
    WeakPiia,
    #[serde(rename = "s-piia")]
    StrongPiia,
    #[serde(rename = "pnd")]
    Pnd,
    #[serde(rename = "decisive")]
    Decisive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingKind {
    #[default]
    Independent,
    Shared,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplementKind {
    #[default]
    Opposite,
    FieldExpansion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomConfig {
    pub kind: AxiomKind,
    pub c: usize,
    pub c2: usize,
    /// PPE reference profile, issue id → order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<BTreeMap<String, String>>,
    /// PIIA comparison population file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_population: Option<PathBuf>,
    #[serde(default)]
    pub coupling: CouplingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coalition_mass: Option<f64>,
    #[serde(default)]
    pub complement: ComplementKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub middle: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graphs: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scoring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mechanism: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_draws: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub issue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<AxiomConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            let key = if key == "." { "<root>".to_string() } else { key };
            Error::config(key, e.into_inner().to_string())
        })?;
        cfg.check_shape()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("<file>", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check_shape(&self) -> Result<()> {
        if let Some(sizes) = &self.sizes {
            if sizes.is_empty() {
                return Err(Error::config("sizes", "must list at least one sample size"));
            }
            if sizes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config("sizes", "must be strictly ascending"));
            }
        }
        if self.trials == Some(0) {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if self.sign_draws == Some(0) {
            return Err(Error::config("sign_draws", "must be at least 1"));
        }
        for (key, v) in [("epsilon", self.epsilon), ("delta", self.delta)] {
            if let Some(x) = v {
                if !(x > 0.0 && x < 1.0) {
                    return Err(Error::config(key, "must lie in (0, 1)"));
                }
            }
        }
        if self.cap == Some(0) {
            return Err(Error::config("cap", "must be positive"));
        }
        Ok(())
    }

    fn sizes(&self) -> Result<&[usize]> {
        self.sizes.as_deref().ok_or_else(|| self.missing("sizes"))
    }

    fn trials(&self) -> Result<usize> {
        self.trials.ok_or_else(|| self.missing("trials"))
    }

    fn cap(&self) -> u128 {
        self.cap.unwrap_or(DEFAULT_CAP)
    }

    fn missing(&self, key: &str) -> Error {
        Error::config(key, format!("required by the `{}` experiment", self.experiment.name()))
    }
}

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub check: bool,
    pub out: Option<PathBuf>,
    /// Replaces the config's seed (the binary fills this from `REPSOC_SEED`).
    pub seed: Option<u64>,
}

/// A named acceptance threshold evaluated by the run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub experiment: Experiment,
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub summary: Value,
    pub warnings: Vec<String>,
    pub checks: Vec<Check>,
    /// Human-readable lines for the terminal.
    pub lines: Vec<String>,
}

impl RunReport {
    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// What an experiment produced, before it is written out.
#[derive(Default)]
struct Outcome {
    tables: Vec<(String, String)>,
    summary: BTreeMap<String, Value>,
    warnings: Vec<String>,
    checks: Vec<Check>,
    lines: Vec<String>,
}

impl Outcome {
    fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            name: name.into(),
            passed,
        });
    }
}

fn jnum(x: f64) -> Value {
    match num(x).parse::<f64>() {
        Ok(v) if v.is_finite() => json!(v),
        _ => Value::Null,
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn file_stem_safe(id: &str) -> String {
    id.chars()
        .map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '_' { ch } else { '_' })
        .collect()
}

/// Config plus resolved file locations.
struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    base: PathBuf,
    seed: u64,
}

impl Ctx<'_> {
    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn population(&self) -> Result<PopulationModel> {
        let p = self.cfg.population.as_ref().ok_or_else(|| self.cfg.missing("population"))?;
        self.population_at("population", p)
    }

    fn population_at(&self, key: &str, p: &Path) -> Result<PopulationModel> {
        let full = self.path(p);
        let text = fs::read_to_string(&full)
            .map_err(|e| Error::config(key, format!("{}: {e}", full.display())))?;
        PopulationModel::from_json(&text).map_err(|e| Error::config(key, e.to_string()))
    }

    fn space(&self) -> Result<CandidateSpace> {
        let p = self.cfg.space.as_ref().ok_or_else(|| self.cfg.missing("space"))?;
        let full = self.path(p);
        let text = fs::read_to_string(&full)
            .map_err(|e| Error::config("space", format!("{}: {e}", full.display())))?;
        CandidateSpace::from_json(&text).map_err(|e| Error::config("space", e.to_string()))
    }

    fn graphs(&self) -> Result<GraphSet> {
        let p = self.cfg.graphs.as_ref().ok_or_else(|| self.cfg.missing("graphs"))?;
        let full = self.path(p);
        let text = fs::read_to_string(&full)
            .map_err(|e| Error::config("graphs", format!("{}: {e}", full.display())))?;
        GraphSet::from_json(&text).map_err(|e| Error::config("graphs", e.to_string()))
    }

    /// The space and mechanism; `acyclic` takes its space from the
    /// synthesized plan.
    fn space_and_mechanism(&self) -> Result<(CandidateSpace, Mechanism)> {
        let name = self.cfg.mechanism.as_deref().unwrap_or("majority");
        if name == "acyclic" {
            if self.cfg.space.is_some() {
                return Err(Error::config(
                    "space",
                    "the acyclic mechanism brings its own space; give `graphs` only",
                ));
            }
            let plan: AcyclicPlan = self.graphs()?.synthesize()?;
            let space = plan.space().clone();
            let mech = Mechanism::parse(name, Some(plan))
                .map_err(|e| Error::config("mechanism", e.to_string()))?;
            return Ok((space, mech));
        }
        let mech =
            Mechanism::parse(name, None).map_err(|e| Error::config("mechanism", e.to_string()))?;
        Ok((self.space()?, mech))
    }

    fn scoring(&self) -> Result<ScoringRule> {
        ScoringRule::by_name(self.cfg.scoring.as_deref().unwrap_or("kendall"))
            .map_err(|e| Error::config("scoring", e.to_string()))
    }

    fn issue_index(&self, issues: &IssueSpace) -> Result<usize> {
        match &self.cfg.issue {
            None => Ok(0),
            Some(id) => issues.index_of(id).map_err(|e| Error::config("issue", e.to_string())),
        }
    }
}

/// Puts `space` in `model`'s issue order, or names the mismatch.
fn align(space: CandidateSpace, model: &PopulationModel) -> Result<CandidateSpace> {
    let si = space.issues();
    let pi = &model.issues;
    if si.n() != pi.n() || si.len() != pi.len() {
        return Err(Error::config(
            "space",
            format!(
                "space has {} issues with N={}, population has {} with N={}",
                si.len(),
                si.n(),
                pi.len(),
                pi.n()
            ),
        ));
    }
    let index: Vec<usize> = si
        .ids()
        .iter()
        .map(|id| {
            pi.index_of(id)
                .map_err(|_| Error::config("space", format!("issue `{id}` is not in the population")))
        })
        .collect::<Result<_>>()?;
    if index.iter().copied().eq(0..index.len()) {
        Ok(space)
    } else {
        space.relabeled(&index)
    }
}

/// Loads and checks a config and every file it references, without running.
pub fn validate(config_path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = config_path.as_ref();
    let cfg = ExperimentConfig::load(path)?;
    let ctx = Ctx {
        cfg: &cfg,
        base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        seed: cfg.seed,
    };
    match cfg.experiment {
        Experiment::Generalization | Experiment::Rademacher => {
            let model = ctx.population()?;
            align(ctx.space()?, &model)?;
            cfg.sizes()?;
            cfg.trials()?;
            if cfg.experiment == Experiment::Rademacher {
                ctx.scoring()?;
            }
        }
        Experiment::MechanismRegret => {
            let model = ctx.population()?;
            align(ctx.space_and_mechanism()?.0, &model)?;
            ctx.scoring()?;
            cfg.sizes()?;
            cfg.trials()?;
        }
        Experiment::Axiom => {
            cfg.sizes()?;
            cfg.trials()?;
            cfg.axiom.as_ref().ok_or_else(|| cfg.missing("axiom"))?;
            ctx.space_and_mechanism()?;
        }
        Experiment::PrivilegeAnalysis => {
            let space = ctx.space()?;
            ctx.issue_index(space.issues())?;
        }
        Experiment::SynthesizeAcyclic => {
            ctx.graphs()?;
        }
        Experiment::CondorcetDemo => {
            cfg.sizes()?;
            cfg.trials()?;
            if cfg.space.is_some() {
                ctx.space()?;
            }
        }
        Experiment::Vc => {
            ctx.space()?;
        }
    }
    Ok(cfg)
}

/// Runs the experiment named by the config and writes its outputs.
pub fn run(config_path: impl AsRef<Path>, opts: &RunOptions) -> Result<RunReport> {
    let started = Instant::now();
    let path = config_path.as_ref();
    let cfg = validate(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let seed = opts.seed.unwrap_or(cfg.seed);
    let ctx = Ctx {
        cfg: &cfg,
        base: base.clone(),
        seed,
    };
    let mut outcome = match cfg.experiment {
        Experiment::Generalization => generalization(&ctx)?,
        Experiment::MechanismRegret => mechanism_regret(&ctx)?,
        Experiment::Axiom => axiom(&ctx)?,
        Experiment::PrivilegeAnalysis => privilege_analysis(&ctx)?,
        Experiment::SynthesizeAcyclic => synthesize(&ctx)?,
        Experiment::CondorcetDemo => condorcet_demo(&ctx)?,
        Experiment::Vc => vc(&ctx)?,
        Experiment::Rademacher => rademacher(&ctx)?,
    };

    let out_dir = match (&opts.out, &cfg.out) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => ctx.path(o),
        (None, None) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
            base.join(format!("{stem}-out"))
        }
    };
    fs::create_dir_all(&out_dir)?;
    let mut files = Vec::new();
    for (name, body) in &outcome.tables {
        fs::write(out_dir.join(name), body)?;
        files.push(name.clone());
    }
    let seed_source = if opts.seed.is_some() { "override" } else { "config" };
    let checks: BTreeMap<String, bool> = outcome
        .checks
        .iter()
        .map(|c| (c.name.clone(), c.passed))
        .collect();
    outcome.summary.insert("experiment".into(), json!(cfg.experiment.name()));
    outcome.summary.insert("config".into(), serde_json::to_value(&cfg)?);
    outcome.summary.insert(
        "seed".into(),
        json!({ "master": seed, "source": seed_source, "trial_stream": "derive_seed(master, [size, trial])" }),
    );
    outcome.summary.insert("warnings".into(), json!(outcome.warnings));
    outcome.summary.insert("checks".into(), json!(checks));
    let summary = Value::Object(outcome.summary.into_iter().collect());
    fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    files.push("summary.json".into());
    let metadata = json!({
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "threads": rayon::current_num_threads(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(out_dir.join("metadata.json"), serde_json::to_string_pretty(&metadata)? + "\n")?;
    files.push("metadata.json".into());

    Ok(RunReport {
        experiment: cfg.experiment,
        out_dir,
        files,
        summary,
        warnings: outcome.warnings,
        checks: outcome.checks,
        lines: outcome.lines,
    })
}

fn generalization(ctx: &Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let model = ctx.population()?;
    let space = align(ctx.space()?, &model)?;
    let sizes = cfg.sizes()?;
    let trials = cfg.trials()?;
    let epsilon = cfg.epsilon.unwrap_or(0.05);
    let delta = cfg.delta.unwrap_or(0.05);
    let members = space.enumerate(cfg.cap())?;
    let utility: Vec<f64> = members
        .iter()
        .map(|c| population_utility(c, &model.saliency, &model.marginals))
        .collect::<Result<_>>()?;
    let best = max(&utility);
    let sampler = model.sampler()?;

    let mut out = Outcome::default();
    out.warnings.extend(model.warnings());
    let mut rows = String::from("size,trial,sup_gap,chosen_utility,best_utility,regret,regret_bound_holds\n");
    let mut table = String::from("size,trials,mean_gap,median_gap,max_gap,frac_above_epsilon\n");
    let mut medians = Vec::new();
    let mut all_bounds = true;
    let mut last_frac = 0.0;
    for &size in sizes {
        let results = (0..trials)
            .into_par_iter()
            .map(|t| {
                let tally = sampler.sample_tally(size, derive_seed(ctx.seed, &[size as u64, t as u64]));
                let gap = members
                    .iter()
                    .zip(&utility)
                    .map(|(c, u)| (tally_utility(c, &tally) - u).abs())
                    .fold(0.0, f64::max);
                let chosen = majority_vote_tally(&tally, &space, cfg.cap())?.chosen;
                let chosen_u = population_utility(&chosen, &model.saliency, &model.marginals)?;
                Ok((gap, chosen_u))
            })
            .collect::<Result<Vec<_>>>()?;
        let gaps: Vec<f64> = results.iter().map(|r| r.0).collect();
        for (t, &(gap, chosen_u)) in results.iter().enumerate() {
            let holds = chosen_u >= best - 2.0 * gap;
            all_bounds &= holds;
            let _ = writeln!(
                rows,
                "{size},{t},{},{},{},{},{holds}",
                num(gap),
                num(chosen_u),
                num(best),
                num(best - chosen_u)
            );
        }
        let frac = gaps.iter().filter(|&&g| g > epsilon).count() as f64 / trials as f64;
        last_frac = frac;
        medians.push((size, median(&gaps)));
        let _ = writeln!(
            table,
            "{size},{trials},{},{},{},{}",
            num(mean(&gaps)),
            num(median(&gaps)),
            num(max(&gaps)),
            num(frac)
        );
        out.lines.push(format!(
            "n={size}: median sup-gap {}, P[gap > {epsilon}] = {}",
            num(median(&gaps)),
            num(frac)
        ));
    }
    // Hoeffding plus a union bound over the class: n ≥ ln(2|𝒞|/δ) / (2ε²).
    let union_bound = ((2.0 * members.len() as f64 / delta).ln() / (2.0 * epsilon * epsilon)).ceil();
    out.summary.insert("class_size".into(), json!(members.len()));
    out.summary.insert("best_utility".into(), jnum(best));
    out.summary.insert("epsilon".into(), jnum(epsilon));
    out.summary.insert("delta".into(), jnum(delta));
    out.summary.insert("hoeffding_union_size".into(), json!(union_bound as u64));
    out.summary.insert(
        "median_gap".into(),
        json!(medians.iter().map(|(n, m)| json!({"size": n, "median": jnum(*m)})).collect::<Vec<_>>()),
    );
    out.check("regret inequality holds in every trial", all_bounds);
    out.check("largest size: P[sup-gap > epsilon] <= delta", last_frac <= delta);
    out.tables.push(("gaps.csv".into(), rows));
    out.tables.push(("gap_summary.csv".into(), table));
    Ok(out)
}

fn mechanism_regret(ctx: &Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let model = ctx.population()?;
    let (space, mech) = ctx.space_and_mechanism()?;
    let space = align(space, &model)?;
    let sizes = cfg.sizes()?;
    let trials = cfg.trials()?;
    let members = space.enumerate(cfg.cap())?;
    // Scoring mechanisms are judged by their own population score.
    let objective = |c: &Profile| match &mech {
        Mechanism::Scoring(rule) => population_score(c, &model.saliency, &model.marginals, rule),
        _ => population_utility(c, &model.saliency, &model.marginals),
    };
    let best = members.iter().map(&objective).collect::<Result<Vec<_>>>()?;
    let best = max(&best);
    let sampler = model.sampler()?;

    let mut out = Outcome::default();
    out.warnings.extend(model.warnings());
    let mut rows = String::from("size,trial,objective,best,regret\n");
    let mut table = String::from("size,trials,mean_regret,max_regret\n");
    let mut means = Vec::new();
    for &size in sizes {
        let values = (0..trials)
            .into_par_iter()
            .map(|t| {
                let tally = sampler.sample_tally(size, derive_seed(ctx.seed, &[size as u64, t as u64]));
                objective(&mech.run(&tally, &space, cfg.cap())?)
            })
            .collect::<Result<Vec<_>>>()?;
        let regrets: Vec<f64> = values.iter().map(|v| best - v).collect();
        for (t, v) in values.iter().enumerate() {
            let _ = writeln!(rows, "{size},{t},{},{},{}", num(*v), num(best), num(best - v));
        }
        let _ = writeln!(table, "{size},{trials},{},{}", num(mean(&regrets)), num(max(&regrets)));
        out.lines.push(format!("n={size}: mean regret {}", num(mean(&regrets))));
        means.push(mean(&regrets));
    }
    out.summary.insert("mechanism".into(), json!(mech.to_string()));
    out.summary.insert("best_objective".into(), jnum(best));
    out.check(
        "mean regret at the largest size does not exceed the smallest",
        means.last() <= means.first(),
    );
    out.tables.push(("regret.csv".into(), rows));
    out.tables.push(("regret_summary.csv".into(), table));
    Ok(out)
}

fn parse_profile(map: &BTreeMap<String, String>, issues: &IssueSpace) -> Result<Profile> {
    let bad = |m: String| Error::config("axiom.profile", m);
    if map.len() != issues.len() {
        return Err(bad(format!("needs one order per issue ({} issues)", issues.len())));
    }
    let orders = issues
        .ids()
        .iter()
        .map(|id| {
            map.get(id)
                .ok_or_else(|| bad(format!("missing issue `{id}`")))?
                .parse()
                .map_err(|e: Error| bad(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Profile::new(orders).map_err(|e| bad(e.to_string()))
}

fn curve_outcome(out: &mut Outcome, curve: &DecayCurve) {
    let mut effective = String::from("size,mean_issue_samples\n");
    for p in &curve.points {
        let _ = writeln!(effective, "{},{}", p.size, num(p.mean_issue_samples));
        out.lines.push(format!(
            "n={}: failure rate {} [{}, {}]",
            p.size,
            num(p.rate),
            num(p.ci_low),
            num(p.ci_high)
        ));
    }
    if let Value::Object(m) = curve.summary() {
        out.summary.extend(m);
    }
    out.lines.push(format!("decay verdict: {}", if curve.passes { "pass" } else { "fail" }));
    out.check("failure rate decays exponentially", curve.passes);
    out.tables.push(("decay.csv".into(), curve.to_csv()));
    out.tables.push(("effective_sizes.csv".into(), effective));
}

fn axiom(ctx: &Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let ax = cfg.axiom.as_ref().ok_or_else(|| cfg.missing("axiom"))?;
    let sizes = cfg.sizes()?;
    let trials = cfg.trials()?;
    let (space, mech) = ctx.space_and_mechanism()?;
    let mut out = Outcome::default();
    out.summary.insert("axiom".into(), json!(ax));
    out.summary.insert("mechanism".into(), json!(mech.to_string()));

    let result = match ax.kind {
        AxiomKind::Decisive => {
            let mass = ax.coalition_mass.ok_or_else(|| Error::config("axiom.coalition_mass", "required for `decisive`"))?;
            let complement = match ax.complement {
                ComplementKind::Opposite => Complement::Opposite,
                ComplementKind::FieldExpansion => Complement::FieldExpansion {
                    middle: ax
                        .middle
                        .ok_or_else(|| Error::config("axiom.middle", "required for field-expansion"))?,
                },
            };
            decisiveness_probe(mass, ax.c, ax.c2, complement, &space, mech, sizes, trials, ctx.seed)
        }
        AxiomKind::Pnd => {
            let mass = ax.coalition_mass.ok_or_else(|| Error::config("axiom.coalition_mass", "required for `pnd`"))?;
            pnd_scenario(mass, ax.c, ax.c2, &space, mech)
                .and_then(|scn| estimate_axiom(&scn, sizes, trials, ctx.seed))
        }
        kind => {
            let model = ctx.population()?;
            let space = align(space, &model)?;
            let issue = ctx.issue_index(&model.issues)?;
            let (c, c2) = (ax.c, ax.c2);
            let target = match kind {
                AxiomKind::Ppe => {
                    let map = ax.profile.as_ref().ok_or_else(|| Error::config("axiom.profile", "required for `ppe`"))?;
                    AxiomTarget::Ppe {
                        issue,
                        profile: parse_profile(map, &model.issues)?,
                        c,
                        c2,
                    }
                }
                AxiomKind::WeakPc => AxiomTarget::WeakPc { issue, c, c2 },
                AxiomKind::StrongPc => AxiomTarget::StrongPc { issue, c, c2 },
                AxiomKind::WeakPiia => AxiomTarget::WeakPiia { issue, c, c2 },
                AxiomKind::StrongPiia => AxiomTarget::StrongPiia { issue, c, c2 },
                AxiomKind::Pnd | AxiomKind::Decisive => unreachable!("handled above"),
            };
            let mut scn = Scenario::new(model.issues.clone(), model.saliency.clone(), model.marginals.clone(), space, mech)?
                .with_target(target);
            scn.cap = cfg.cap();
            if matches!(kind, AxiomKind::WeakPiia | AxiomKind::StrongPiia) {
                let p = ax
                    .second_population
                    .as_ref()
                    .ok_or_else(|| Error::config("axiom.second_population", "required for PIIA"))?;
                let second = ctx.population_at("axiom.second_population", p)?;
                if second.issues != model.issues {
                    return Err(Error::config(
                        "axiom.second_population",
                        "must use the same issues, in the same order, as `population`",
                    ));
                }
                let coupling = match ax.coupling {
                    CouplingKind::Independent => PiiaCoupling::Independent,
                    CouplingKind::Shared => PiiaCoupling::SharedPairDraw,
                };
                scn = scn.with_second(second.marginals, coupling);
            }
            out.warnings.extend(model.warnings());
            estimate_axiom(&scn, sizes, trials, ctx.seed)
        }
    };
    match result {
        Ok(curve) => curve_outcome(&mut out, &curve),
        Err(Error::Vacuous(reason)) => {
            out.summary.insert("verdict".into(), json!("vacuous"));
            out.summary.insert("reason".into(), json!(reason));
            out.lines.push(format!("vacuous: {reason}"));
            out.warnings.push(format!("axiom premise unmet, nothing tested: {reason}"));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn privilege_analysis(ctx: &Ctx) -> Result<Outcome> {
    let space = ctx.space()?;
    let issues: Vec<usize> = match &ctx.cfg.issue {
        Some(_) => vec![ctx.issue_index(space.issues())?],
        None => (0..space.issues().len()).collect(),
    };
    let mut out = Outcome::default();
    let mut rows = String::from(
        "issue,edges,inferred_edges,transitive,scc_sizes,cyclically_privileged,long_simple_cycle\n",
    );
    let mut per_issue = BTreeMap::new();
    for i in issues {
        let a = analyze_issue(&space, i, ctx.cfg.cap())?;
        let id = space.issues().id(i).to_string();
        let sizes: Vec<String> = a.condensation.scc_members.iter().map(|c| c.len().to_string()).collect();
        let _ = writeln!(
            rows,
            "{id},{},{},{},{},{},{}",
            a.graph.edges().len(),
            a.inferred_edges.len(),
            a.transitive,
            sizes.join(";"),
            a.cyclic,
            a.long_simple_cycle
        );
        let stem = file_stem_safe(&id);
        out.tables.push((format!("graph_{stem}.txt"), a.graph.to_edge_list()));
        out.tables.push((format!("graph_{stem}.dot"), a.graph.to_dot()));
        if !a.transitive {
            out.warnings.push(format!(
                "issue `{id}`: privilege graph is not transitive ({} edges only implied by chains)",
                a.inferred_edges.len()
            ));
        }
        out.lines.push(format!("issue `{id}`: cyclically privileged: {}", a.cyclic));
        per_issue.insert(
            id,
            json!({
                "edges": a.graph.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
                "inferred_edges": a.inferred_edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>(),
                "components": a.condensation.scc_members,
                "topological_order": a.condensation.topo_order,
                "cyclically_privileged": a.cyclic,
                "long_simple_cycle": a.long_simple_cycle,
                "transitive": a.transitive,
            }),
        );
    }
    out.summary.insert("issues".into(), json!(per_issue));
    out.tables.insert(0, ("privilege.csv".into(), rows));
    Ok(out)
}

fn synthesize(ctx: &Ctx) -> Result<Outcome> {
    let set = ctx.graphs()?;
    let plan = set.synthesize()?;
    let mut out = Outcome::default();
    let mut rows = String::from("issue,input_edges,built_edges,supergraph\n");
    let mut all = true;
    for (i, input) in set.graphs.iter().enumerate() {
        let built = build_privilege_graph(plan.space(), i, ctx.cfg.cap())?;
        let sup = input.is_subgraph_of(&built);
        all &= sup;
        let _ = writeln!(rows, "{},{},{},{sup}", set.issues.id(i), input.edges().len(), built.edges().len());
        out.lines.push(format!(
            "issue `{}`: {} input edges, {} in the synthesized space",
            set.issues.id(i),
            input.edges().len(),
            built.edges().len()
        ));
    }
    out.summary.insert("space_size".into(), json!(plan.space().size().to_string()));
    out.check("synthesized graphs contain their inputs", all);
    out.tables.push(("supergraph.csv".into(), rows));
    out.tables.push(("plan.json".into(), plan.to_json() + "\n"));
    out.tables.push(("space.json".into(), plan.space().to_json() + "\n"));
    Ok(out)
}

fn condorcet_demo(ctx: &Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let space = match &cfg.space {
        Some(_) => ctx.space()?,
        None => CandidateSpace::full(IssueSpace::numbered(1, 3)?),
    };
    let mech = Mechanism::parse(cfg.mechanism.as_deref().unwrap_or("majority"), None)
        .map_err(|e| Error::config("mechanism", e.to_string()))?;
    let mut scn = cyclic_scenario(&space).map_err(|e| Error::config("space", e.to_string()))?;
    scn.mechanism = mech;
    scn.cap = cfg.cap();
    let report = cycle_violation_demo(&scn, cfg.sizes()?, cfg.trials()?, ctx.seed)?;
    let coalitions = condorcet_scenario(&space)?;
    let mut out = Outcome::default();
    let mut freq = String::from("majority,mass,violations\n");
    for &(a, b, p) in &report.majorities {
        let k = report.frequency.get(&(a, b)).copied().unwrap_or(0);
        let _ = writeln!(freq, "{a}>{b},{},{k}", num(p));
    }
    let share = report.trials.iter().filter(|t| !t.violated.is_empty()).count() as f64
        / report.trials.len() as f64;
    out.lines.push(format!(
        "{} trials, share violating a strict majority: {}",
        report.trials.len(),
        num(share)
    ));
    out.summary.insert("violating_share".into(), jnum(share));
    out.summary.insert(
        "three_coalition_pair_marginals".into(),
        json!({
            "0>1": jnum(coalitions.pair_marginal(0, 0, 1)?),
            "0>2": jnum(coalitions.pair_marginal(0, 0, 2)?),
            "2>1": jnum(coalitions.pair_marginal(0, 2, 1)?),
        }),
    );
    out.check("every output violates a strict pairwise majority", report.every_trial_violates);
    out.tables.push(("violations.csv".into(), report.to_csv()));
    out.tables.push(("violation_frequency.csv".into(), freq));
    Ok(out)
}

fn vc(ctx: &Ctx) -> Result<Outcome> {
    let space = ctx.space()?;
    let report = vc_dimension(&space, ctx.cfg.cap())?;
    let verified = is_shattered(&space, &report.witness, ctx.cfg.cap())?;
    let ids: Vec<&str> = report.witness.iter().map(|&i| space.issues().id(i)).collect();
    let mut out = Outcome::default();
    out.tables.push((
        "vc.csv".into(),
        format!("dimension,witness\n{},{}\n", report.dimension, ids.join(";")),
    ));
    out.lines.push(format!("VC dimension {} (witness: {})", report.dimension, ids.join(", ")));
    out.summary.insert("dimension".into(), json!(report.dimension));
    out.summary.insert("witness".into(), json!(ids));
    out.check("witness is shattered", verified);
    Ok(out)
}

fn rademacher(ctx: &Ctx) -> Result<Outcome> {
    let cfg = ctx.cfg;
    let model = ctx.population()?;
    let space = align(ctx.space()?, &model)?;
    let rule = ctx.scoring()?;
    let draws = cfg.sign_draws.unwrap_or(200);
    let size = space.size();
    if size > cfg.cap() {
        return Err(Error::Capacity {
            what: "candidate space enumeration".into(),
            needed: size,
            cap: cfg.cap(),
        });
    }
    let (lo, hi) = rule.bounds();
    let reach = lo.abs().max(hi.abs());
    let class = InducedLossClass { space, rule };
    let sampler = model.sampler()?;
    let mut out = Outcome::default();
    let mut rows = String::from("size,trial,estimate,stderr,massart_bound,within_bound\n");
    let mut all = true;
    for &n in cfg.sizes()? {
        if n == 0 {
            return Err(Error::config("sizes", "Rademacher estimates need nonempty samples"));
        }
        let bound = reach * (2.0 * (size as f64).ln() / n as f64).sqrt();
        for t in 0..cfg.trials()? {
            let sample = sampler.sample(n, derive_seed(ctx.seed, &[n as u64, t as u64]));
            let est = empirical_rademacher(&class, &sample, draws, derive_seed(ctx.seed, &[n as u64, t as u64, 2]), cfg.cap())?;
            let se = est.stderr.unwrap_or(0.0);
            let within = est.estimate <= bound + 3.0 * se;
            all &= within;
            let _ = writeln!(rows, "{n},{t},{},{},{},{within}", num(est.estimate), num(se), num(bound));
        }
    }
    out.summary.insert("class_size".into(), json!(size.to_string()));
    out.summary.insert("sign_draws".into(), json!(draws));
    out.check("estimate within Massart bound plus 3 standard errors", all);
    out.tables.push(("rademacher.csv".into(), rows));
    Ok(out)
}

/// Exit code for an error: 2 config, 3 capacity, 1 anything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } => 2,
        Error::Capacity { .. } => 3,
        _ => 1,
    }
}
