//! Verification battery: evaluates each structural claim about α, cfc and
//! the constructions over enumerated and generated corpora, and reports the
//! first counterexample per check.
//!
//! Exact values come from [`cfc_exact`] with [`LowerBoundPolicy::Trivial`]
//! so that no claim under test feeds the search that tests it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use web_time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::alpha::independence_number;
use crate::construct::{
    color_path_ruler, color_subdivided_star, color_subdivided_star_with_tails,
    color_tree_with_max_degree, color_within_alpha, ConstructError,
};
use crate::families::{self, FamilyError, FamilySpec};
use crate::graph::{canonical_form, Graph, GraphError};
use crate::solver::{
    ceil_log2, cfc_exact, has_optimal_coloring_with_singleton_class, CfcOptions, LowerBoundPolicy,
    SolverError, DEFAULT_EDGE_LIMIT,
};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
/// Trees in the subtree-monotonicity corpus stay at or below this order.
pub const SUBTREE_CHECK_MAX_N: usize = 9;
const SUBTREE_SAMPLES: usize = 5;
const SPOT_CHECK_RATE: f64 = 0.05;
const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{what} corpus with n = {n} exceeds the limit of {limit}")]
    CorpusTooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("memoized value {memo} disagrees with recomputed {fresh} on {edges:?}")]
    MemoMismatch {
        memo: usize,
        fresh: usize,
        edges: Vec<(usize, usize)>,
    },
    #[error("{check} on {edges:?}: {source}")]
    Instance {
        check: CheckId,
        edges: Vec<(usize, usize)>,
        #[source]
        source: Box<HarnessError>,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckId {
    Observation1,
    Theorem1,
    Theorem2,
    Corollary1,
    Corollary2,
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Lemma6,
    Lemma7,
    Lemma8,
    Lemma9,
    Lemma10,
    Lemma11,
    Example1,
    Remark1,
    Remark2,
}

impl CheckId {
    pub const ALL: [CheckId; 19] = [
        CheckId::Observation1,
        CheckId::Theorem1,
        CheckId::Theorem2,
        CheckId::Corollary1,
        CheckId::Corollary2,
        CheckId::Lemma1,
        CheckId::Lemma2,
        CheckId::Lemma3,
        CheckId::Lemma4,
        CheckId::Lemma5,
        CheckId::Lemma6,
        CheckId::Lemma7,
        CheckId::Lemma8,
        CheckId::Lemma9,
        CheckId::Lemma10,
        CheckId::Lemma11,
        CheckId::Example1,
        CheckId::Remark1,
        CheckId::Remark2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Observation1 => "observation1",
            CheckId::Theorem1 => "theorem1",
            CheckId::Theorem2 => "theorem2",
            CheckId::Corollary1 => "corollary1",
            CheckId::Corollary2 => "corollary2",
            CheckId::Lemma1 => "lemma1",
            CheckId::Lemma2 => "lemma2",
            CheckId::Lemma3 => "lemma3",
            CheckId::Lemma4 => "lemma4",
            CheckId::Lemma5 => "lemma5",
            CheckId::Lemma6 => "lemma6",
            CheckId::Lemma7 => "lemma7",
            CheckId::Lemma8 => "lemma8",
            CheckId::Lemma9 => "lemma9",
            CheckId::Lemma10 => "lemma10",
            CheckId::Lemma11 => "lemma11",
            CheckId::Example1 => "example1",
            CheckId::Remark1 => "remark1",
            CheckId::Remark2 => "remark2",
        }
    }

    /// The claim being checked, in words.
    pub fn claim(self) -> &'static str {
        match self {
            CheckId::Observation1 => {
                "connected, n >= 2: 1 <= alpha <= n-1; alpha = 1 iff complete; alpha = n-1 iff star"
            }
            CheckId::Theorem1 => {
                "connected: 1 <= cfc <= alpha <= n-1; cfc = 1 iff alpha = 1; cfc = n-1 iff alpha = n-1; \
                 the alpha-bounded construction stays within alpha"
            }
            CheckId::Theorem2 => {
                "trees with 2*maxdeg >= alpha + 2: cfc = maxdeg, and the tree construction uses maxdeg colors"
            }
            CheckId::Corollary1 => "connected with alpha = 2: cfc = 2",
            CheckId::Corollary2 => "trees: maxdeg <= cfc <= alpha; maxdeg = alpha implies cfc = maxdeg",
            CheckId::Lemma1 => "2-connected, non-complete: cfc = 2",
            CheckId::Lemma2 => "2-edge-connected, non-complete: cfc = 2",
            CheckId::Lemma3 => "connected, n >= 2: 1 <= cfc <= n-1; cfc = 1 iff complete; cfc = n-1 iff star",
            CheckId::Lemma4 => "connected with cut-edges: h <= cfc <= h + 1",
            CheckId::Lemma5 => {
                "h >= 2 and a unique cut-edge component attains h with an optimal coloring \
                 having a singleton color class: cfc = h"
            }
            CheckId::Lemma6 => "path with m edges: cfc = ceil(log2(m + 1)), matched by the ruler coloring",
            CheckId::Lemma7 => {
                "trees with maxdeg >= 3: max(maxdeg, log2 diameter) <= cfc <= \
                 (maxdeg - 2) log2 n / (log2 maxdeg - 1)"
            }
            CheckId::Lemma8 => "trees, n >= 2t + 2: cfc = n - t iff maxdeg = n - t",
            CheckId::Lemma9 => "subtree T1 of tree T2: cfc(T1) <= cfc(T2)",
            CheckId::Lemma10 => "subdivided star: cfc = k; the explicit k-coloring verifies",
            CheckId::Lemma11 => "subdivided star with tails: cfc = k; the explicit k-coloring verifies",
            CheckId::Example1 => "independence family on 8 vertices: alpha = l and cfc = k",
            CheckId::Remark1 => {
                "glued stars: fail the degree hypothesis with 2*maxdeg = alpha + 1, and cfc = k > maxdeg"
            }
            CheckId::Remark2 => "bridged stars: fail the degree hypothesis, yet cfc = maxdeg = k",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| HarnessError::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_n_graphs: usize,
    pub max_n_trees: usize,
    /// Extra random trees with up to 40 vertices for the tree construction.
    pub random_trees: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_n_graphs: 6,
            max_n_trees: 10,
            random_trees: 100,
        }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.max_n_graphs > families::MAX_GRAPH_ENUMERATION {
            return Err(HarnessError::CorpusTooLarge {
                what: "connected graph",
                n: self.max_n_graphs,
                limit: families::MAX_GRAPH_ENUMERATION,
            });
        }
        if self.max_n_trees > families::MAX_TREE_ENUMERATION {
            return Err(HarnessError::CorpusTooLarge {
                what: "tree",
                n: self.max_n_trees,
                limit: families::MAX_TREE_ENUMERATION,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: CheckId,
    pub bounds: Bounds,
    pub seed: u64,
}

/// A graph in edge-list form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphRecord {
    fn of(g: &Graph) -> Self {
        GraphRecord {
            n: g.n(),
            edges: g.edges().to_vec(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        Graph::from_edge_list(self.n, &self.edges)
    }
}

/// One unit of work for a check.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    /// Subtree for the monotonicity check.
    pub sub: Option<Graph>,
    /// Family parameters when the claim is about a named family.
    pub family: Option<FamilySpec>,
}

impl Instance {
    fn plain(graph: Graph) -> Self {
        Instance {
            graph,
            sub: None,
            family: None,
        }
    }

    fn of_family(spec: FamilySpec) -> Result<Self, HarnessError> {
        Ok(Instance {
            graph: families::gen(spec)?,
            sub: None,
            family: Some(spec),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub graph: GraphRecord,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subgraph: Option<GraphRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<FamilySpec>,
    pub reason: String,
    pub values: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: CheckId,
    pub claim: String,
    pub instances: usize,
    pub passed: bool,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub seed: u64,
    pub bounds: Bounds,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    /// Memoized exact values recomputed from scratch and compared.
    pub memo_spot_checks: u64,
    pub wall_time_ms: f64,
}

struct Outcome {
    ok: bool,
    reason: String,
    values: BTreeMap<String, Value>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            reason: String::new(),
            values: BTreeMap::new(),
        }
    }

    fn value(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    /// Records `reason` as a failure unless `holds`.
    fn require(&mut self, holds: bool, reason: impl FnOnce() -> String) -> &mut Self {
        if self.ok && !holds {
            self.ok = false;
            self.reason = reason();
        }
        self
    }
}

/// Exact values shared across checks, keyed by canonical form.
struct Memo {
    cfc: Mutex<HashMap<Vec<u8>, usize>>,
    alpha: Mutex<HashMap<Vec<u8>, usize>>,
    spot_checks: AtomicU64,
}

fn exact_options() -> CfcOptions {
    CfcOptions {
        budget_cap: None,
        edge_limit: DEFAULT_EDGE_LIMIT,
        lower_bounds: LowerBoundPolicy::Trivial,
    }
}

fn fresh_cfc(g: &Graph) -> Result<usize, HarnessError> {
    Ok(cfc_exact(g, &exact_options())?.value)
}

impl Memo {
    fn new() -> Self {
        Memo {
            cfc: Mutex::new(HashMap::new()),
            alpha: Mutex::new(HashMap::new()),
            spot_checks: AtomicU64::new(0),
        }
    }

    fn cached(
        &self,
        table: &Mutex<HashMap<Vec<u8>, usize>>,
        g: &Graph,
        rng: &mut ChaCha8Rng,
        compute: impl Fn(&Graph) -> Result<usize, HarnessError>,
    ) -> Result<usize, HarnessError> {
        let Ok(key) = canonical_form(g) else {
            return compute(g);
        };
        let known = table.lock().expect("memo lock").get(&key).copied();
        match known {
            Some(memo) => {
                if rng.gen_bool(SPOT_CHECK_RATE) {
                    self.spot_checks.fetch_add(1, Ordering::Relaxed);
                    let fresh = compute(g)?;
                    if fresh != memo {
                        return Err(HarnessError::MemoMismatch {
                            memo,
                            fresh,
                            edges: g.edges().to_vec(),
                        });
                    }
                }
                Ok(memo)
            }
            None => {
                let value = compute(g)?;
                table.lock().expect("memo lock").insert(key, value);
                Ok(value)
            }
        }
    }

    fn cfc(&self, g: &Graph, rng: &mut ChaCha8Rng) -> Result<usize, HarnessError> {
        self.cached(&self.cfc, g, rng, fresh_cfc)
    }

    fn alpha(&self, g: &Graph, rng: &mut ChaCha8Rng) -> Result<usize, HarnessError> {
        self.cached(&self.alpha, g, rng, |g| Ok(independence_number(g)?.value))
    }
}

/// `K_{1,n-1}`, including `K_2`.
fn is_spanning_star(g: &Graph) -> bool {
    g.n() >= 2 && g.m() == g.n() - 1 && g.max_degree() == g.n() - 1
}

/// The tree hypothesis `2Δ >= α + 2`.
pub fn satisfies_degree_hypothesis(max_degree: usize, alpha: usize) -> bool {
    2 * max_degree >= alpha + 2
}

/// Shared corpora, enumerated once per run.
struct Corpora {
    graphs: Vec<Graph>,
    trees: Vec<Graph>,
}

impl Corpora {
    fn build(bounds: &Bounds) -> Result<Self, HarnessError> {
        bounds.validate()?;
        let mut graphs = Vec::new();
        for n in 2..=bounds.max_n_graphs {
            graphs.extend(families::enumerate_connected_graphs(n)?);
        }
        let mut trees = Vec::new();
        for n in 2..=bounds.max_n_trees {
            trees.extend(families::enumerate_trees(n)?);
        }
        Ok(Corpora { graphs, trees })
    }
}

fn instance_rng(seed: u64, id: CheckId, index: usize) -> ChaCha8Rng {
    let stream = (id as u64) << 32 | index as u64;
    ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Leaf-deletion subtrees of `t`, each with at least two vertices.
fn sample_subtrees(t: &Graph, rng: &mut ChaCha8Rng) -> Vec<Graph> {
    (0..SUBTREE_SAMPLES)
        .map(|_| {
            let deletions = rng.gen_range(1..=t.n() - 2);
            let mut alive = vec![true; t.n()];
            let mut degree: Vec<usize> = (0..t.n()).map(|v| t.degree(v)).collect();
            for _ in 0..deletions {
                let leaves: Vec<usize> =
                    (0..t.n()).filter(|&v| alive[v] && degree[v] == 1).collect();
                let leaf = leaves[rng.gen_range(0..leaves.len())];
                alive[leaf] = false;
                for w in t.neighbors(leaf) {
                    if alive[w] {
                        degree[w] -= 1;
                    }
                }
            }
            let keep: Vec<usize> = (0..t.n()).filter(|&v| alive[v]).collect();
            t.induced_subgraph(&keep).graph
        })
        .collect()
}

/// Trees with up to 40 vertices drawn from a Prüfer sampler biased toward
/// vertex 0 (so that high-degree trees are common), kept when they satisfy
/// the degree hypothesis.
pub fn random_qualifying_trees(count: usize, seed: u64) -> Result<Vec<Graph>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(5..=40);
        let p = rng.gen_range(0.5..0.95);
        let t = families::random_tree_with(n, &mut rng, |r| {
            if r.gen_bool(p) {
                0
            } else {
                r.gen_range(0..n)
            }
        });
        if satisfies_degree_hypothesis(t.max_degree(), independence_number(&t)?.value) {
            out.push(t);
        }
    }
    Ok(out)
}

fn corpus(
    id: CheckId,
    spec: &CheckSpec,
    corpora: &Corpora,
    memo: &Memo,
) -> Result<Vec<Instance>, HarnessError> {
    let graphs = |keep: &dyn Fn(&Graph) -> bool| -> Vec<Instance> {
        corpora
            .graphs
            .iter()
            .filter(|g| keep(g))
            .cloned()
            .map(Instance::plain)
            .collect()
    };
    let trees = |keep: &dyn Fn(&Graph) -> bool| -> Vec<Instance> {
        corpora
            .trees
            .iter()
            .filter(|g| keep(g))
            .cloned()
            .map(Instance::plain)
            .collect()
    };
    let mut rng = instance_rng(spec.seed, id, usize::MAX);
    Ok(match id {
        CheckId::Observation1 | CheckId::Theorem1 | CheckId::Lemma3 => graphs(&|_| true),
        CheckId::Corollary1 => {
            let mut out = Vec::new();
            for g in &corpora.graphs {
                if memo.alpha(g, &mut rng)? == 2 {
                    out.push(Instance::plain(g.clone()));
                }
            }
            out
        }
        CheckId::Lemma1 => graphs(&|g| g.is_two_connected() && !g.is_complete()),
        CheckId::Lemma2 => graphs(&|g| g.is_two_edge_connected() && !g.is_complete()),
        CheckId::Lemma4 | CheckId::Lemma5 => graphs(&|g| !g.cut_edges().is_empty()),
        CheckId::Theorem2 => {
            let mut out = Vec::new();
            for t in &corpora.trees {
                let a = memo.alpha(t, &mut rng)?;
                if satisfies_degree_hypothesis(t.max_degree(), a) {
                    out.push(Instance::plain(t.clone()));
                }
            }
            let extra = random_qualifying_trees(spec.bounds.random_trees, spec.seed)?;
            out.extend(extra.into_iter().map(Instance::plain));
            out
        }
        CheckId::Corollary2 | CheckId::Lemma8 => trees(&|_| true),
        CheckId::Lemma7 => trees(&|t| t.max_degree() >= 3),
        CheckId::Lemma9 => {
            let mut out = Vec::new();
            for (i, t) in corpora.trees.iter().enumerate() {
                if t.n() < 3 || t.n() > SUBTREE_CHECK_MAX_N {
                    continue;
                }
                let mut r = instance_rng(spec.seed, id, i);
                for sub in sample_subtrees(t, &mut r) {
                    out.push(Instance {
                        graph: t.clone(),
                        sub: Some(sub),
                        family: None,
                    });
                }
            }
            out
        }
        CheckId::Lemma6 => (1..=10)
            .map(|m| Instance::of_family(FamilySpec::Path { m }))
            .collect::<Result<_, _>>()?,
        CheckId::Lemma10 => (3..=8)
            .map(|k| Instance::of_family(FamilySpec::SubdividedStar { k }))
            .collect::<Result<_, _>>()?,
        CheckId::Lemma11 => (3..=8)
            .map(|k| Instance::of_family(FamilySpec::SubdividedStarWithTails { k }))
            .collect::<Result<_, _>>()?,
        CheckId::Example1 => {
            let n = 8;
            let mut out = Vec::new();
            for l in 3..=n - 2 {
                for k in 2..=l {
                    out.push(Instance::of_family(FamilySpec::IndependenceFamily {
                        n,
                        l,
                        k,
                    })?);
                }
            }
            out
        }
        CheckId::Remark1 => (3..=4)
            .map(|k| Instance::of_family(FamilySpec::GluedStars { k }))
            .collect::<Result<_, _>>()?,
        CheckId::Remark2 => (3..=4)
            .map(|k| Instance::of_family(FamilySpec::BridgedStars { k }))
            .collect::<Result<_, _>>()?,
    })
}

/// Parameter `k` of a family instance.
fn family_k(inst: &Instance) -> usize {
    match inst.family {
        Some(FamilySpec::SubdividedStar { k })
        | Some(FamilySpec::SubdividedStarWithTails { k })
        | Some(FamilySpec::IndependenceFamily { k, .. })
        | Some(FamilySpec::GluedStars { k })
        | Some(FamilySpec::BridgedStars { k }) => k,
        _ => panic!("instance carries no k parameter"),
    }
}

/// Construction errors that mean the construction disagrees with the
/// claim, as opposed to errors in the input.
fn construction_failure(e: &ConstructError) -> bool {
    matches!(
        e,
        ConstructError::Unverified { .. }
            | ConstructError::InternalInvariant(_)
            | ConstructError::SearchFailed { .. }
    )
}

fn evaluate(
    id: CheckId,
    inst: &Instance,
    memo: &Memo,
    rng: &mut ChaCha8Rng,
) -> Result<Outcome, HarnessError> {
    let g = &inst.graph;
    let n = g.n();
    let delta = g.max_degree();
    let mut out = Outcome::new();
    out.value("n", n)
        .value("m", g.m())
        .value("max_degree", delta);
    match id {
        CheckId::Observation1 => {
            let a = memo.alpha(g, rng)?;
            out.value("alpha", a)
                .require(1 <= a && a < n, || {
                    format!("alpha = {a} outside [1, {}]", n - 1)
                })
                .require((a == 1) == g.is_complete(), || {
                    "alpha = 1 iff complete fails".into()
                })
                .require((a == n - 1) == is_spanning_star(g), || {
                    "alpha = n-1 iff star fails".into()
                });
        }
        CheckId::Theorem1 => {
            let a = memo.alpha(g, rng)?;
            let c = memo.cfc(g, rng)?;
            out.value("alpha", a).value("cfc", c);
            out.require(1 <= c && c <= a && a < n, || {
                format!("1 <= cfc = {c} <= alpha = {a} <= n-1 fails")
            })
            .require((c == 1) == (a == 1), || {
                "cfc = 1 iff alpha = 1 fails".into()
            })
            .require((c == n - 1) == (a == n - 1), || {
                "cfc = n-1 iff alpha = n-1 fails".into()
            });
            match color_within_alpha(g) {
                Ok(built) => {
                    let p = built.trace.palette;
                    out.value("construction_palette", p)
                        .require(p <= a, || format!("construction used {p} > alpha colors"));
                }
                Err(e) if construction_failure(&e) => {
                    out.require(false, || format!("construction failed: {e}"));
                }
                Err(e) => return Err(e.into()),
            }
        }
        CheckId::Theorem2 => {
            match color_tree_with_max_degree(g) {
                Ok(built) => {
                    let p = built.trace.palette;
                    out.value("construction_palette", p)
                        .require(p == delta, || format!("construction used {p} colors"));
                }
                Err(e) if construction_failure(&e) => {
                    out.require(false, || format!("construction failed: {e}"));
                }
                Err(e) => return Err(e.into()),
            }
            if g.m() <= DEFAULT_EDGE_LIMIT {
                let c = memo.cfc(g, rng)?;
                out.value("cfc", c)
                    .require(c == delta, || format!("cfc = {c} differs from maxdeg"));
            }
        }
        CheckId::Corollary1 | CheckId::Lemma1 | CheckId::Lemma2 => {
            let c = memo.cfc(g, rng)?;
            out.value("cfc", c)
                .require(c == 2, || format!("cfc = {c}, expected 2"));
        }
        CheckId::Corollary2 => {
            let a = memo.alpha(g, rng)?;
            let c = memo.cfc(g, rng)?;
            out.value("alpha", a)
                .value("cfc", c)
                .require(delta <= c && c <= a, || {
                    "maxdeg <= cfc <= alpha fails".into()
                })
                .require(delta != a || c == delta, || {
                    "maxdeg = alpha but cfc differs".into()
                });
        }
        CheckId::Lemma3 => {
            let c = memo.cfc(g, rng)?;
            out.value("cfc", c)
                .require(1 <= c && c < n, || format!("cfc = {c} outside [1, n-1]"))
                .require((c == 1) == g.is_complete(), || {
                    "cfc = 1 iff complete fails".into()
                })
                .require((c == n - 1) == is_spanning_star(g), || {
                    "cfc = n-1 iff star fails".into()
                });
        }
        CheckId::Lemma4 | CheckId::Lemma5 => {
            let c = memo.cfc(g, rng)?;
            let cut = g.cut_edge_subgraph();
            let mut values = Vec::new();
            for comp in cut.graph.components() {
                values.push((memo.cfc(&comp.graph, rng)?, comp.graph));
            }
            let h = values.iter().map(|(v, _)| *v).max().expect("has cut-edges");
            out.value("cfc", c).value("h", h);
            if id == CheckId::Lemma4 {
                out.require(h <= c && c <= h + 1, || {
                    format!("cfc = {c} outside [h, h+1]")
                });
            } else if h >= 2 {
                let top: Vec<&Graph> = values
                    .iter()
                    .filter(|(v, _)| *v == h)
                    .map(|(_, t)| t)
                    .collect();
                let condition =
                    top.len() == 1 && has_optimal_coloring_with_singleton_class(top[0], h)?;
                out.value("condition", condition)
                    .require(!condition || c == h, || {
                        format!("condition holds but cfc = {c}")
                    });
            }
        }
        CheckId::Lemma6 => {
            let m = g.m();
            let expected = ceil_log2(m + 1);
            let c = memo.cfc(g, rng)?;
            let ruler = color_path_ruler(m)?.palette_size();
            out.value("cfc", c)
                .value("expected", expected)
                .value("ruler_palette", ruler)
                .require(c == expected, || format!("cfc = {c}, expected {expected}"))
                .require(ruler == expected, || format!("ruler used {ruler} colors"));
        }
        CheckId::Lemma7 => {
            let c = memo.cfc(g, rng)?;
            let d = g.diameter()?;
            let lower = (delta as f64).max((d as f64).log2());
            let upper = (delta as f64 - 2.0) * (n as f64).log2() / ((delta as f64).log2() - 1.0);
            out.value("cfc", c)
                .value("diameter", d)
                .value("lower", lower)
                .value("upper", upper)
                .require(lower <= c as f64 + FLOAT_TOLERANCE, || {
                    format!("cfc = {c} below {lower}")
                })
                .require(c as f64 <= upper + FLOAT_TOLERANCE, || {
                    format!("cfc = {c} above {upper}")
                });
        }
        CheckId::Lemma8 => {
            let c = memo.cfc(g, rng)?;
            out.value("cfc", c);
            for t in (1..).take_while(|t| n >= 2 * t + 2) {
                out.require((c == n - t) == (delta == n - t), || {
                    format!("t = {t}: cfc = n-t iff maxdeg = n-t fails")
                });
            }
        }
        CheckId::Lemma9 => {
            let sub = inst.sub.as_ref().expect("subtree instance");
            let big = memo.cfc(g, rng)?;
            let small = memo.cfc(sub, rng)?;
            out.value("cfc", big)
                .value("subtree_cfc", small)
                .require(small <= big, || {
                    format!("subtree needs {small} > {big} colors")
                });
        }
        CheckId::Lemma10 | CheckId::Lemma11 => {
            let k = family_k(inst);
            let coloring = if id == CheckId::Lemma10 {
                color_subdivided_star(k)
            } else {
                color_subdivided_star_with_tails(k)
            };
            match coloring {
                Ok(c) => {
                    out.value("explicit_palette", c.palette_size())
                        .require(c.palette_size() == k, || {
                            "explicit coloring palette differs".into()
                        });
                }
                Err(e) if construction_failure(&e) => {
                    out.require(false, || format!("explicit coloring fails: {e}"));
                }
                Err(e) => return Err(e.into()),
            }
            // Exact values are confirmed up to k = 5.
            if k <= 5 {
                let c = memo.cfc(g, rng)?;
                out.value("cfc", c)
                    .require(c == k, || format!("cfc = {c}, expected {k}"));
            }
        }
        CheckId::Example1 => {
            let Some(FamilySpec::IndependenceFamily { l, k, .. }) = inst.family else {
                panic!("independence family instance expected");
            };
            let a = memo.alpha(g, rng)?;
            let c = memo.cfc(g, rng)?;
            out.value("l", l)
                .value("k", k)
                .value("alpha", a)
                .value("cfc", c)
                .require(a == l, || format!("alpha = {a}, expected {l}"))
                .require(c == k, || format!("cfc = {c}, expected {k}"));
        }
        CheckId::Remark1 | CheckId::Remark2 => {
            let k = family_k(inst);
            let a = memo.alpha(g, rng)?;
            let c = memo.cfc(g, rng)?;
            out.value("alpha", a)
                .value("cfc", c)
                .require(!satisfies_degree_hypothesis(delta, a), || {
                    "degree hypothesis unexpectedly holds".into()
                });
            if id == CheckId::Remark1 {
                out.require(2 * delta == a + 1, || "2*maxdeg = alpha + 1 fails".into())
                    .require(c == k && c > delta, || {
                        format!("cfc = {c}, expected {k} > maxdeg")
                    });
            } else {
                out.require(c == delta && c == k, || {
                    format!("cfc = {c}, expected maxdeg = {k}")
                });
            }
        }
    }
    Ok(out)
}

fn run_with(spec: &CheckSpec, corpora: &Corpora, memo: &Memo) -> Result<CheckReport, HarnessError> {
    let start = Instant::now();
    let id = spec.id;
    let instances = corpus(id, spec, corpora, memo)?;
    let outcomes: Vec<(usize, Outcome)> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let mut rng = instance_rng(spec.seed, id, i);
            evaluate(id, inst, memo, &mut rng)
                .map(|o| (i, o))
                .map_err(|e| HarnessError::Instance {
                    check: id,
                    edges: inst.graph.edges().to_vec(),
                    source: Box::new(e),
                })
        })
        .collect::<Result<_, _>>()?;
    let failures: Vec<&(usize, Outcome)> = outcomes.iter().filter(|(_, o)| !o.ok).collect();
    // Least canonical form among failures, so the choice is independent of
    // evaluation order.
    let first = failures
        .iter()
        .min_by_key(|(i, _)| {
            let inst = &instances[*i];
            (
                canonical_form(&inst.graph).unwrap_or_default(),
                inst.sub
                    .as_ref()
                    .map(|s| canonical_form(s).unwrap_or_default()),
                *i,
            )
        })
        .map(|(i, o)| {
            let inst = &instances[*i];
            Counterexample {
                graph: GraphRecord::of(&inst.graph),
                subgraph: inst.sub.as_ref().map(GraphRecord::of),
                family: inst.family,
                reason: o.reason.clone(),
                values: o.values.clone(),
            }
        });
    Ok(CheckReport {
        id,
        claim: id.claim().to_string(),
        instances: instances.len(),
        passed: failures.is_empty(),
        failures: failures.len(),
        counterexample: first,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run_check(spec: &CheckSpec) -> Result<CheckReport, HarnessError> {
    let corpora = Corpora::build(&spec.bounds)?;
    run_with(spec, &corpora, &Memo::new())
}

/// Runs the given checks (all of them when `ids` is empty) over shared
/// corpora and a shared memo.
pub fn run_checks(ids: &[CheckId], bounds: Bounds, seed: u64) -> Result<Report, HarnessError> {
    let start = Instant::now();
    let corpora = Corpora::build(&bounds)?;
    let memo = Memo::new();
    let ids = if ids.is_empty() {
        &CheckId::ALL[..]
    } else {
        ids
    };
    let checks = ids
        .iter()
        .map(|&id| run_with(&CheckSpec { id, bounds, seed }, &corpora, &memo))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        seed,
        bounds,
        passed: checks.iter().all(|c| c.passed),
        checks,
        memo_spot_checks: memo.spot_checks.load(Ordering::Relaxed),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run_all(bounds: Bounds, seed: u64) -> Result<Report, HarnessError> {
    run_checks(&[], bounds, seed)
}

/// Re-evaluates a reported counterexample from scratch; true when it still
/// fails.
pub fn recheck(id: CheckId, ce: &Counterexample) -> Result<bool, HarnessError> {
    let inst = Instance {
        graph: ce.graph.to_graph()?,
        sub: ce
            .subgraph
            .as_ref()
            .map(GraphRecord::to_graph)
            .transpose()?,
        family: ce.family,
    };
    let memo = Memo::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    Ok(!evaluate(id, &inst, &memo, &mut rng)?.ok)
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Bounds {
        Bounds {
            max_n_graphs: 5,
            max_n_trees: 7,
            random_trees: 5,
        }
    }

    #[test]
    fn ids_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), id);
            assert_eq!(serde_json::to_value(id).unwrap(), id.as_str());
        }
        assert!("lemma12".parse::<CheckId>().is_err());
    }

    #[test]
    fn small_run_passes() {
        let report = run_all(small(), 1).unwrap();
        assert_eq!(report.checks.len(), 19);
        for c in &report.checks {
            assert!(c.passed, "{}: {:?}", c.id, c.counterexample);
            assert!(c.instances > 0, "{}", c.id);
        }
        assert!(report.passed);
    }

    #[test]
    fn lemma6_values() {
        let spec = CheckSpec {
            id: CheckId::Lemma6,
            bounds: small(),
            seed: 0,
        };
        let memo = Memo::new();
        let corpora = Corpora::build(&spec.bounds).unwrap();
        let insts = corpus(CheckId::Lemma6, &spec, &corpora, &memo).unwrap();
        let mut rng = instance_rng(0, CheckId::Lemma6, 0);
        let values: Vec<u64> = insts
            .iter()
            .map(|i| {
                evaluate(CheckId::Lemma6, i, &memo, &mut rng)
                    .unwrap()
                    .values["cfc"]
                    .as_u64()
                    .unwrap()
            })
            .collect();
        assert_eq!(values, vec![1, 2, 2, 3, 3, 3, 3, 4, 4, 4]);
    }

    #[test]
    fn counterexamples_recheck() {
        // K_3 needs one color, so it fails the cfc = 2 claim when fed to
        // that check directly.
        let ce = Counterexample {
            graph: GraphRecord::of(&Graph::complete(3)),
            subgraph: None,
            family: None,
            reason: String::new(),
            values: BTreeMap::new(),
        };
        assert!(recheck(CheckId::Lemma2, &ce).unwrap());
        let p4 = families::path(3).unwrap();
        let ok = Counterexample {
            graph: GraphRecord::of(&p4),
            ..ce
        };
        assert!(!recheck(CheckId::Lemma3, &ok).unwrap());
    }

    #[test]
    fn corpus_limits() {
        let b = Bounds {
            max_n_graphs: 8,
            ..Bounds::default()
        };
        assert!(matches!(
            run_all(b, 0),
            Err(HarnessError::CorpusTooLarge { .. })
        ));
    }

    #[test]
    fn subtree_samples_are_trees() {
        let t = families::subdivided_star(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in sample_subtrees(&t, &mut rng) {
            assert!(s.is_tree() && s.n() >= 2 && s.n() < t.n());
        }
    }
}
