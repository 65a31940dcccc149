//! Exact conflict-free connection number.
//!
//! The search colors edges in a fixed order (BFS from a maximum-degree
//! vertex), restricting each edge to at most one more than the largest color
//! used so far. A vertex pair is checked as soon as every edge that lies on
//! some simple path between its endpoints is colored; nothing colored later
//! can change that pair's verdict, so a failure prunes the whole subtree.

use std::collections::VecDeque;
use web_time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{is_conflict_free_connected, ColoringError, EdgeColoring, PathFinder};
use crate::graph::{Graph, GraphError, Subgraph};

pub const DEFAULT_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("graph needs at least two vertices")]
    TooFewVertices,
    #[error("graph has {m} edges, above the solver limit of {limit}")]
    TooLarge { m: usize, limit: usize },
    #[error("no conflict-free connection coloring with at most {cap} colors")]
    BudgetExceeded { cap: usize },
    #[error("graph has no cut-edges")]
    NoCutEdges,
    #[error("largest cut-edge component value is {0}; at least 2 required")]
    HTooSmall(usize),
    #[error("lower bound {bound} contradicts a verified coloring with {found} colors")]
    InconsistentLowerBound { bound: usize, found: usize },
}

/// Which lower bound seeds the iterative deepening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LowerBoundPolicy {
    /// 1, or 2 for non-complete graphs. Nothing derived from structural
    /// theorems, so results can be used to test those theorems.
    Trivial,
    /// [`cfc_lower_bound`].
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CfcOptions {
    pub budget_cap: Option<usize>,
    pub edge_limit: usize,
    pub lower_bounds: LowerBoundPolicy,
}

impl Default for CfcOptions {
    fn default() -> Self {
        CfcOptions {
            budget_cap: None,
            edge_limit: DEFAULT_EDGE_LIMIT,
            lower_bounds: LowerBoundPolicy::Full,
        }
    }
}

impl CfcOptions {
    pub fn trivial() -> Self {
        CfcOptions {
            lower_bounds: LowerBoundPolicy::Trivial,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Partial assignments tried.
    pub nodes: u64,
    /// Complete colorings reached.
    pub colorings_examined: u64,
    /// Partial assignments rejected by a settled pair.
    pub prunes: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfcResult {
    pub value: usize,
    pub witness: EdgeColoring,
    /// The budget the search started from.
    pub lower_bound: usize,
    pub stats: SearchStats,
}

enum PairCheck {
    /// The pair is joined by exactly one path; these are its edges.
    UniquePath(Vec<usize>),
    /// Edges lying on at least one simple path between the pair.
    Pivots(Vec<usize>),
}

struct PairPlan {
    u: usize,
    v: usize,
    check: PairCheck,
}

/// Backtracking enumerator of conflict-free connection colorings.
pub(crate) struct ColoringSearch<'g> {
    order: Vec<usize>,
    plans: Vec<PairPlan>,
    /// Pair plans that become decidable once position `p` is colored.
    settle: Vec<Vec<usize>>,
    finder: PathFinder<'g>,
    colors: Vec<u32>,
    fixed: Vec<u32>,
    counts: Vec<u32>,
    budget: u32,
    stats: SearchStats,
}

/// Edges in BFS discovery order from the lowest-index vertex of maximum
/// degree, so that local structure is colored (and checked) early.
fn search_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.m());
    let mut seen_edge = vec![false; g.m()];
    let mut seen = vec![false; g.n()];
    let roots = g.max_degree_vertex().into_iter().chain(0..g.n());
    for root in roots {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(w, e) in g.incident(x) {
                if !seen_edge[e] {
                    seen_edge[e] = true;
                    order.push(e);
                }
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

fn tree_path_edges(g: &Graph, u: usize, v: usize) -> Vec<usize> {
    let mut via = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &(w, e) in g.incident(x) {
            if !seen[w] {
                seen[w] = true;
                via[w] = e;
                queue.push_back(w);
            }
        }
    }
    let mut edges = Vec::new();
    let mut cur = v;
    while cur != u {
        let e = via[cur];
        edges.push(e);
        let (a, b) = g.edge(e);
        cur = if a == cur { b } else { a };
    }
    edges.sort_unstable();
    edges
}

impl<'g> ColoringSearch<'g> {
    pub(crate) fn new(g: &'g Graph) -> Self {
        let order = search_order(g);
        let mut pos_of = vec![0; g.m()];
        for (p, &e) in order.iter().enumerate() {
            pos_of[e] = p;
        }
        let mut is_bridge = vec![false; g.m()];
        for e in g.cut_edges() {
            is_bridge[e.index()] = true;
        }
        let tree = g.is_tree();
        let mut finder = PathFinder::new(g);
        let mut plans = Vec::new();
        let mut settle = vec![Vec::new(); g.m()];
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                // Adjacent pairs are always served by their own edge.
                if g.has_edge(u, v) {
                    continue;
                }
                let relevant: Vec<usize> = if tree {
                    tree_path_edges(g, u, v)
                } else {
                    (0..g.m())
                        .filter(|&f| finder.path_through_edge(u, v, f, |_| false).is_some())
                        .collect()
                };
                let Some(last) = relevant.iter().map(|&e| pos_of[e]).max() else {
                    // Different components: never connected.
                    continue;
                };
                let check = if relevant.iter().all(|&e| is_bridge[e]) {
                    PairCheck::UniquePath(relevant)
                } else {
                    PairCheck::Pivots(relevant)
                };
                settle[last].push(plans.len());
                plans.push(PairPlan { u, v, check });
            }
        }
        // Cheap unique-path checks first.
        for list in &mut settle {
            list.sort_by_key(|&i| matches!(plans[i].check, PairCheck::Pivots(_)));
        }
        ColoringSearch {
            order,
            plans,
            settle,
            finder,
            colors: vec![0; g.m()],
            fixed: vec![0; g.m()],
            counts: Vec::new(),
            budget: 0,
            stats: SearchStats::default(),
        }
    }

    /// Pins edge colors (`0` = free). Pinning disables first-appearance
    /// symmetry breaking.
    pub(crate) fn with_fixed(mut self, fixed: &[u32]) -> Self {
        self.fixed = fixed.to_vec();
        self
    }

    fn pair_ok(&mut self, idx: usize) -> bool {
        let plan = &self.plans[idx];
        match &plan.check {
            PairCheck::UniquePath(edges) => {
                for &e in edges {
                    self.counts[self.colors[e] as usize] += 1;
                }
                let ok = edges
                    .iter()
                    .any(|&e| self.counts[self.colors[e] as usize] == 1);
                for &e in edges {
                    self.counts[self.colors[e] as usize] = 0;
                }
                ok
            }
            PairCheck::Pivots(pivots) => self
                .finder
                .conflict_free_path_among(&self.colors, plan.u, plan.v, pivots.iter().copied())
                .is_some(),
        }
    }

    fn settled_ok(&mut self, pos: usize) -> bool {
        for i in 0..self.settle[pos].len() {
            let idx = self.settle[pos][i];
            if !self.pair_ok(idx) {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, pos: usize, max_used: u32, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if pos == self.order.len() {
            self.stats.colorings_examined += 1;
            return visit(&self.colors);
        }
        let e = self.order[pos];
        let symmetric = self.fixed.iter().all(|&c| c == 0);
        let (lo, hi) = match self.fixed[e] {
            0 if symmetric => (1, (max_used + 1).min(self.budget)),
            0 => (1, self.budget),
            c => (c, c),
        };
        for c in lo..=hi {
            self.colors[e] = c;
            self.stats.nodes += 1;
            if self.settled_ok(pos) {
                if self.dfs(pos + 1, max_used.max(c), visit) {
                    self.colors[e] = 0;
                    return true;
                }
            } else {
                self.stats.prunes += 1;
            }
        }
        self.colors[e] = 0;
        false
    }

    /// Visits every conflict-free connection coloring with colors in
    /// `1..=budget` (one per color permutation class unless colors are
    /// pinned) until `visit` returns true. Returns whether it stopped early.
    pub(crate) fn run(&mut self, budget: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        self.budget = budget as u32;
        self.counts = vec![0; budget + 1];
        self.colors.iter_mut().for_each(|c| *c = 0);
        if self.fixed.iter().any(|&c| c as usize > budget) {
            return false;
        }
        self.dfs(0, 0, visit)
    }

    pub(crate) fn first(&mut self, budget: usize) -> Option<Vec<u32>> {
        let mut found = None;
        self.run(budget, &mut |colors| {
            found = Some(colors.to_vec());
            true
        });
        found
    }

    pub(crate) fn stats(&self) -> &SearchStats {
        &self.stats
    }
}

fn require_solvable(g: &Graph) -> Result<(), SolverError> {
    g.require_connected()?;
    if g.n() < 2 {
        return Err(SolverError::TooFewVertices);
    }
    Ok(())
}

/// 1 for complete graphs, otherwise 2: a monochromatic coloring leaves any
/// two non-adjacent vertices without a conflict-free path.
pub fn trivial_lower_bound(g: &Graph) -> Result<usize, SolverError> {
    require_solvable(g)?;
    Ok(if g.is_complete() { 1 } else { 2 })
}

/// Largest of the applicable lower bounds: the trivial one; for trees the
/// maximum degree and `⌈log₂ diameter⌉`; for graphs with cut-edges the
/// largest exact value over the tree components of the cut-edge subgraph.
pub fn cfc_lower_bound(g: &Graph) -> Result<usize, SolverError> {
    let mut bound = trivial_lower_bound(g)?;
    if g.is_tree() {
        let d = g.diameter()?;
        bound = bound.max(g.max_degree()).max(ceil_log2(d));
    } else if !g.cut_edges().is_empty() {
        bound = bound.max(h_value(g)?);
    }
    Ok(bound)
}

/// `⌈log₂ x⌉` for `x >= 1`.
pub fn ceil_log2(x: usize) -> usize {
    assert!(x >= 1, "log of zero");
    (usize::BITS - (x - 1).leading_zeros()) as usize
}

/// Smallest number of colors in a conflict-free connection coloring, with
/// a verified witness.
pub fn cfc_exact(g: &Graph, opts: &CfcOptions) -> Result<CfcResult, SolverError> {
    let start_time = Instant::now();
    require_solvable(g)?;
    if g.m() > opts.edge_limit {
        return Err(SolverError::TooLarge {
            m: g.m(),
            limit: opts.edge_limit,
        });
    }
    let lower_bound = match opts.lower_bounds {
        LowerBoundPolicy::Trivial => trivial_lower_bound(g)?,
        LowerBoundPolicy::Full => cfc_lower_bound(g)?,
    };
    // A rainbow coloring always works, so m colors suffice.
    let cap = opts.budget_cap.unwrap_or(g.m()).min(g.m());
    let mut search = ColoringSearch::new(g);
    for budget in lower_bound..=cap {
        if let Some(colors) = search.first(budget) {
            let witness = EdgeColoring::new(g, colors)?;
            let found = witness.palette_size();
            if found < lower_bound {
                return Err(SolverError::InconsistentLowerBound {
                    bound: lower_bound,
                    found,
                });
            }
            debug_assert_eq!(found, budget);
            assert!(
                is_conflict_free_connected(g, &witness)?.passed(),
                "search produced a coloring the verifier rejects"
            );
            let mut stats = search.stats().clone();
            stats.wall_time_ms = start_time.elapsed().as_secs_f64() * 1e3;
            return Ok(CfcResult {
                value: found,
                witness,
                lower_bound,
                stats,
            });
        }
    }
    Err(SolverError::BudgetExceeded {
        cap: opts.budget_cap.unwrap_or(cap),
    })
}

/// Some conflict-free connection coloring with at most `budget` colors,
/// optionally with some edge colors pinned (`0` = free).
pub fn find_coloring(
    g: &Graph,
    budget: usize,
    fixed: Option<&[u32]>,
) -> Result<Option<EdgeColoring>, SolverError> {
    require_solvable(g)?;
    let mut search = ColoringSearch::new(g);
    if let Some(fixed) = fixed {
        search = search.with_fixed(fixed);
    }
    match search.first(budget) {
        Some(colors) => Ok(Some(EdgeColoring::new(g, colors)?)),
        None => Ok(None),
    }
}

/// Exact values of the components of the cut-edge subgraph.
pub fn cut_edge_component_values(g: &Graph) -> Result<Vec<(Subgraph, CfcResult)>, SolverError> {
    require_solvable(g)?;
    let c = g.cut_edge_subgraph();
    if c.graph.m() == 0 {
        return Err(SolverError::NoCutEdges);
    }
    c.graph
        .components()
        .into_iter()
        .map(|comp| {
            // Lift the component's labels back to the original graph.
            let lifted = Subgraph {
                vertex_map: comp.vertex_map.iter().map(|&v| c.vertex_map[v]).collect(),
                edge_map: comp.edge_map.iter().map(|&e| c.edge_map[e]).collect(),
                graph: comp.graph,
            };
            let value = cfc_exact(&lifted.graph, &CfcOptions::default())?;
            Ok((lifted, value))
        })
        .collect()
}

/// Largest exact value over the components of the cut-edge subgraph.
pub fn h_value(g: &Graph) -> Result<usize, SolverError> {
    Ok(cut_edge_component_values(g)?
        .iter()
        .map(|(_, r)| r.value)
        .max()
        .expect("at least one component"))
}

/// Whether some optimal coloring of `g` (using exactly `cfc` colors) has a
/// color class of size one.
pub fn has_optimal_coloring_with_singleton_class(
    g: &Graph,
    cfc: usize,
) -> Result<bool, SolverError> {
    require_solvable(g)?;
    let mut search = ColoringSearch::new(g);
    let mut counts = vec![0usize; cfc + 1];
    Ok(search.run(cfc, &mut |colors| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &c in colors {
            counts[c as usize] += 1;
        }
        counts.contains(&1)
    }))
}

/// With `h ≥ 2` the largest cut-edge component value: true iff exactly one
/// component attains `h` and that component has an optimal coloring in
/// which some color is used on a single edge. When this holds the graph
/// needs exactly `h` colors.
pub fn satisfies_unique_component_condition(g: &Graph) -> Result<bool, SolverError> {
    let comps = cut_edge_component_values(g)?;
    let h = comps.iter().map(|(_, r)| r.value).max().expect("non-empty");
    if h < 2 {
        return Err(SolverError::HTooSmall(h));
    }
    let top: Vec<_> = comps.iter().filter(|(_, r)| r.value == h).collect();
    if top.len() != 1 {
        return Ok(false);
    }
    has_optimal_coloring_with_singleton_class(&top[0].0.graph, h)
}
