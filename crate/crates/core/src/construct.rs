//! Explicit conflict-free connection colorings.
//!
//! Besides the closed-form colorings (stars, ruler paths, subdivided stars)
//! there are two recursive procedures: [`color_within_alpha`] colors any
//! connected graph with at most α(G) colors, and
//! [`color_tree_with_max_degree`] colors a tree with Δ(T) colors whenever
//! `2Δ(T) >= α(T) + 2`. Both record the recursion in a
//! [`ConstructionTrace`] and verify their output before returning it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alpha::independence_number;
use crate::coloring::{is_conflict_free_connected, ColoringError, EdgeColoring};
use crate::graph::{Graph, GraphError};
use crate::solver::{find_coloring, SolverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("k = {0} is too small for this construction")]
    KTooSmall(usize),
    #[error("graph needs at least two vertices")]
    TooFewVertices,
    #[error("input is not a tree")]
    NotATree,
    #[error("2Δ >= α + 2 fails: Δ = {max_degree}, α = {alpha}")]
    HypothesisViolated { max_degree: usize, alpha: usize },
    #[error("bounded search found no coloring with {budget} colors")]
    SearchFailed { budget: usize },
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error("constructed coloring fails at pair {failing_pair:?}")]
    Unverified {
        colors: Vec<u32>,
        failing_pair: Option<(usize, usize)>,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// The rule applied at one node of a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Step {
    /// One vertex, nothing to color.
    SingleVertex,
    CompleteGraph,
    /// Rainbow star.
    Star,
    /// Non-complete graph without cut-edges, 2-colored by search.
    TwoEdgeConnectedBlock,
    /// Every cut-edge is pendant: pendant stars around a 2-edge-connected
    /// core, colored by search with one color more than the largest star.
    PendantStarsAroundCore {
        largest_star: usize,
    },
    /// Recurse on both sides of a cut-edge whose sides both have an edge
    /// or more; the cut-edge gets a fresh color.
    SplitAtCutEdge {
        edge: (usize, usize),
    },
    /// Path with two or three edges, ruler-colored.
    ShortPath,
    /// Restriction of the subdivided star coloring.
    SubdividedStarEmbedding {
        k: usize,
    },
    /// Restriction of the subdivided star with tails coloring.
    SubdividedStarWithTailsEmbedding {
        k: usize,
    },
    /// Split at the edge to a branch with at least three edges.
    SplitAtLargeBranch {
        edge: (usize, usize),
    },
    /// Split at the edge to a neighbor of degree at least three.
    SplitAtHeavyNeighbor {
        edge: (usize, usize),
    },
}

impl Step {
    pub fn is_base_case(&self) -> bool {
        !matches!(
            self,
            Step::SplitAtCutEdge { .. }
                | Step::SplitAtLargeBranch { .. }
                | Step::SplitAtHeavyNeighbor { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelegatedSearch {
    pub budget: usize,
    /// Edges whose colors were fixed before searching.
    pub pinned_edges: usize,
    /// The pinned search failed and the whole graph was searched instead.
    pub fell_back: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    #[serde(flatten)]
    pub step: Step,
    /// Vertices of this subproblem, in the input graph's labels.
    pub vertices: Vec<usize>,
    pub edges: usize,
    /// Distinct colors in this subproblem's coloring.
    pub palette: usize,
    /// Colors introduced here rather than inherited from children.
    pub fresh_colors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<DelegatedSearch>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    fn leaf(step: Step, labels: &[usize], g: &Graph, palette: usize) -> Self {
        TraceNode {
            step,
            vertices: labels.to_vec(),
            edges: g.m(),
            palette,
            fresh_colors: palette,
            search: None,
            children: Vec::new(),
        }
    }

    /// Every leaf is a base case, and no node uses more colors than its
    /// own fresh colors plus the largest child palette.
    pub fn is_consistent(&self) -> bool {
        if self.children.is_empty() {
            return self.step.is_base_case() && self.palette <= self.fresh_colors;
        }
        let inherited = self.children.iter().map(|c| c.palette).max().unwrap_or(0);
        !self.step.is_base_case()
            && self.palette <= inherited + self.fresh_colors
            && self.children.iter().all(TraceNode::is_consistent)
    }

    /// Pre-order walk over the nodes.
    pub fn nodes(&self) -> Vec<&TraceNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub palette: usize,
    pub root: TraceNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub coloring: EdgeColoring,
    pub trace: ConstructionTrace,
}

fn verified(g: &Graph, colors: Vec<u32>) -> Result<EdgeColoring, ConstructError> {
    let coloring = EdgeColoring::new(g, colors)?;
    let cert = is_conflict_free_connected(g, &coloring)?;
    if cert.passed() {
        Ok(coloring)
    } else {
        Err(ConstructError::Unverified {
            colors: coloring.colors().to_vec(),
            failing_pair: cert.failing_pair,
        })
    }
}

/// Rainbow coloring of `K_{1,k}`.
pub fn color_star(k: usize) -> Result<EdgeColoring, ConstructError> {
    if k == 0 {
        return Err(ConstructError::KTooSmall(k));
    }
    let g = crate::families::star(k).expect("k >= 1");
    verified(&g, (1..=k as u32).collect())
}

/// Edge `i` (1-based) gets `1 + v₂(i)`. Every interval of positions holds a
/// unique position of highest 2-adic valuation, so every subpath is
/// conflict-free.
fn ruler(m: usize) -> Vec<u32> {
    (1..=m as u32).map(|i| 1 + i.trailing_zeros()).collect()
}

/// Ruler coloring of the path with `m` edges; uses `⌈log₂(m+1)⌉` colors.
pub fn color_path_ruler(m: usize) -> Result<EdgeColoring, ConstructError> {
    if m == 0 {
        return Err(ConstructError::KTooSmall(m));
    }
    let g = crate::families::path(m).expect("m >= 1");
    verified(&g, ruler(m))
}

fn subdivided_star_colors(k: usize) -> Vec<u32> {
    // Edge order: (0, i) for i = 1..=k, then (i, k + i).
    let k32 = k as u32;
    let spokes = 1..=k32;
    let outer = std::iter::once(k32).chain(1..k32);
    spokes.chain(outer).collect()
}

/// `uu_i ↦ i`, `u_1v_1 ↦ k`, `u_iv_i ↦ i - 1` on the subdivided star.
pub fn color_subdivided_star(k: usize) -> Result<EdgeColoring, ConstructError> {
    if k < 3 {
        return Err(ConstructError::KTooSmall(k));
    }
    let g = crate::families::subdivided_star(k).expect("k >= 3");
    verified(&g, subdivided_star_colors(k))
}

fn subdivided_star_with_tails_colors(k: usize) -> Vec<u32> {
    let mut colors = subdivided_star_colors(k);
    colors.extend(std::iter::repeat_n(1, k - 2));
    colors
}

/// The subdivided star coloring plus color 1 on every tail `v_iw_i`.
pub fn color_subdivided_star_with_tails(k: usize) -> Result<EdgeColoring, ConstructError> {
    if k < 3 {
        return Err(ConstructError::KTooSmall(k));
    }
    let g = crate::families::subdivided_star_with_tails(k).expect("k >= 3");
    verified(&g, subdivided_star_with_tails_colors(k))
}

/// Colors of a subproblem, renumbered `1..=palette` by first appearance.
struct Part {
    colors: Vec<u32>,
    node: TraceNode,
}

fn normalize(colors: &mut [u32]) -> usize {
    let mut map = std::collections::HashMap::new();
    for c in colors.iter_mut() {
        let next = map.len() as u32 + 1;
        *c = *map.entry(*c).or_insert(next);
    }
    map.len()
}

/// Vertices reachable from `start` without passing through `avoid`.
fn side(g: &Graph, start: usize, avoid: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    seen[avoid] = true;
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        for w in g.neighbors(v) {
            if !std::mem::replace(&mut seen[w], true) {
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Colors both sides of edge `e` with the given procedures, then gives `e`
/// a color above both palettes.
fn split(
    g: &Graph,
    labels: &[usize],
    e: usize,
    step: Step,
    near: impl FnOnce(&Graph, &[usize]) -> Result<Part, ConstructError>,
    far: impl FnOnce(&Graph, &[usize]) -> Result<Part, ConstructError>,
) -> Result<Part, ConstructError> {
    let (a, b) = g.edge(e);
    let mut colors = vec![0u32; g.m()];
    let mut children = Vec::new();
    let mut top = 0;
    for (root, other, procedure) in [
        (
            a,
            b,
            Box::new(near) as Box<dyn FnOnce(&Graph, &[usize]) -> _>,
        ),
        (b, a, Box::new(far)),
    ] {
        let verts = side(g, root, other);
        let sub = g.induced_subgraph(&verts);
        let sub_labels: Vec<usize> = verts.iter().map(|&v| labels[v]).collect();
        let mut part = procedure(&sub.graph, &sub_labels)?;
        top = top.max(normalize(&mut part.colors));
        for (local, &parent) in sub.edge_map.iter().enumerate() {
            colors[parent] = part.colors[local];
        }
        children.push(part.node);
    }
    colors[e] = top as u32 + 1;
    Ok(Part {
        colors,
        node: TraceNode {
            step,
            vertices: labels.to_vec(),
            edges: g.m(),
            palette: top + 1,
            fresh_colors: 1,
            search: None,
            children,
        },
    })
}

fn within_alpha(g: &Graph, labels: &[usize]) -> Result<Part, ConstructError> {
    let leaf = |step, colors: Vec<u32>| {
        let palette = EdgeColoring::new(g, colors.clone())
            .map(|c| c.palette_size())
            .unwrap_or(0);
        Ok(Part {
            node: TraceNode::leaf(step, labels, g, palette),
            colors,
        })
    };
    if g.n() == 1 {
        return leaf(Step::SingleVertex, Vec::new());
    }
    if g.is_complete() {
        return leaf(Step::CompleteGraph, vec![1; g.m()]);
    }
    let cut = g.cut_edges();
    if cut.is_empty() {
        let c = find_coloring(g, 2, None)?.ok_or(ConstructError::SearchFailed { budget: 2 })?;
        let mut part = leaf(Step::TwoEdgeConnectedBlock, c.colors().to_vec())?;
        part.node.search = Some(DelegatedSearch {
            budget: 2,
            pinned_edges: 0,
            fell_back: false,
        });
        return Ok(part);
    }
    let non_pendant = cut.iter().map(|e| e.index()).find(|&e| {
        let (a, b) = g.edge(e);
        g.degree(a) > 1 && g.degree(b) > 1
    });
    if let Some(e) = non_pendant {
        let (a, b) = g.edge(e);
        let step = Step::SplitAtCutEdge {
            edge: (labels[a], labels[b]),
        };
        return split(g, labels, e, step, within_alpha, within_alpha);
    }
    if g.is_star() {
        return leaf(Step::Star, (1..=g.m() as u32).collect());
    }
    pendant_stars_around_core(g, labels)
}

/// Every cut-edge is pendant and at least three vertices have degree two
/// or more. Pendant edges at each core vertex get colors `1, 2, ...`; the
/// rest is found by search within one color more than the largest star.
fn pendant_stars_around_core(g: &Graph, labels: &[usize]) -> Result<Part, ConstructError> {
    let mut fixed = vec![0u32; g.m()];
    let mut largest = 0;
    for w in (0..g.n()).filter(|&w| g.degree(w) > 1) {
        let mut next = 0;
        for &(x, e) in g.incident(w) {
            if g.degree(x) == 1 {
                next += 1;
                fixed[e] = next;
            }
        }
        largest = largest.max(next as usize);
    }
    let budget = largest + 1;
    let pinned = fixed.iter().filter(|&&c| c != 0).count();
    let (coloring, fell_back) = match find_coloring(g, budget, Some(&fixed))? {
        Some(c) => (c, false),
        None => (
            find_coloring(g, budget, None)?.ok_or(ConstructError::SearchFailed { budget })?,
            true,
        ),
    };
    let palette = coloring.palette_size();
    let mut node = TraceNode::leaf(
        Step::PendantStarsAroundCore {
            largest_star: largest,
        },
        labels,
        g,
        palette,
    );
    node.search = Some(DelegatedSearch {
        budget,
        pinned_edges: pinned,
        fell_back,
    });
    Ok(Part {
        colors: coloring.colors().to_vec(),
        node,
    })
}

/// Conflict-free connection coloring with at most α(G) colors.
///
/// Complete graphs get one color, other cut-edge-free graphs two (by
/// search). A cut-edge with an edge on both sides is split on, reusing the
/// larger palette on both sides plus one fresh color for the cut-edge.
/// Stars are rainbow. What remains has only pendant cut-edges, and is
/// colored by search within one more color than its largest pendant star.
pub fn color_within_alpha(g: &Graph) -> Result<Construction, ConstructError> {
    g.require_connected()?;
    if g.n() < 2 {
        return Err(ConstructError::TooFewVertices);
    }
    let labels: Vec<usize> = (0..g.n()).collect();
    let mut part = within_alpha(g, &labels)?;
    let palette = normalize(&mut part.colors);
    let coloring = verified(g, part.colors)?;
    Ok(Construction {
        coloring,
        trace: ConstructionTrace {
            palette,
            root: part.node,
        },
    })
}

fn satisfies_degree_hypothesis(g: &Graph) -> Result<(bool, usize), ConstructError> {
    let alpha = independence_number(g)?.value;
    Ok((2 * g.max_degree() >= alpha + 2, alpha))
}

/// Ruler coloring of a tree that is a path, walking from its lowest leaf.
fn color_tree_path(g: &Graph) -> Vec<u32> {
    let mut colors = vec![0u32; g.m()];
    let ruler = ruler(g.m());
    let mut prev = usize::MAX;
    let mut v = g.leaves()[0];
    for &c in &ruler {
        let &(w, e) = g
            .incident(v)
            .iter()
            .find(|&&(w, _)| w != prev)
            .expect("path continues");
        colors[e] = c;
        prev = v;
        v = w;
    }
    colors
}

fn with_max_degree(t: &Graph, labels: &[usize]) -> Result<Part, ConstructError> {
    let k = t.max_degree();
    let (ok, alpha) = satisfies_degree_hypothesis(t)?;
    if !ok {
        return Err(ConstructError::InternalInvariant(format!(
            "subtree on {labels:?} lost the degree hypothesis (Δ = {k}, α = {alpha})"
        )));
    }
    let leaf = |step, colors: Vec<u32>| Part {
        node: TraceNode::leaf(step, labels, t, k),
        colors,
    };
    if k == 2 {
        return Ok(leaf(Step::ShortPath, color_tree_path(t)));
    }
    let u = t.max_degree_vertex().expect("non-empty");
    let neighbors: Vec<usize> = t.neighbors(u).collect();
    let u1 = *neighbors
        .iter()
        .max_by_key(|&&w| (t.degree(w), std::cmp::Reverse(w)))
        .expect("k >= 3");
    match t.degree(u1) {
        1 => Ok(leaf(Step::Star, (1..=t.m() as u32).collect())),
        2 => {
            // Branches hanging from each neighbor of u.
            let branches: Vec<Vec<usize>> = neighbors.iter().map(|&w| side(t, w, u)).collect();
            let largest = branches.iter().map(Vec::len).max().expect("k >= 3");
            match largest {
                1 | 2 => Ok(leaf(
                    Step::SubdividedStarEmbedding { k },
                    embed(t, u, &branches, false)?,
                )),
                3 => Ok(leaf(
                    Step::SubdividedStarWithTailsEmbedding { k },
                    embed(t, u, &branches, true)?,
                )),
                _ => {
                    let i = branches.iter().position(|b| b.len() >= 4).expect("exists");
                    let e = t.edge_index(u, neighbors[i]).expect("edge");
                    let step = Step::SplitAtLargeBranch {
                        edge: (labels[u], labels[neighbors[i]]),
                    };
                    split_tree(t, labels, e, step)
                }
            }
        }
        _ => {
            let e = t.edge_index(u, u1).expect("edge");
            let step = Step::SplitAtHeavyNeighbor {
                edge: (labels[u], labels[u1]),
            };
            split_tree(t, labels, e, step)
        }
    }
}

/// Splits at an edge at the max-degree vertex: its own side keeps the
/// degree hypothesis and is colored recursively, the far side gets at most
/// Δ - 1 colors from [`within_alpha`].
fn split_tree(t: &Graph, labels: &[usize], e: usize, step: Step) -> Result<Part, ConstructError> {
    let k = t.max_degree();
    let near_is_first = t.max_degree_vertex() == Some(t.edge(e).0);
    let near = |g: &Graph, l: &[usize]| with_max_degree(g, l);
    let far = |g: &Graph, l: &[usize]| -> Result<Part, ConstructError> {
        let part = within_alpha(g, l)?;
        if part.node.palette > k - 1 {
            return Err(ConstructError::InternalInvariant(format!(
                "branch on {l:?} needed {} colors, more than Δ - 1 = {}",
                part.node.palette,
                k - 1
            )));
        }
        Ok(part)
    };
    let part = if near_is_first {
        split(t, labels, e, step, near, far)?
    } else {
        let mut p = split(t, labels, e, step, far, near)?;
        p.node.children.reverse();
        p
    };
    if part.node.palette != k {
        return Err(ConstructError::InternalInvariant(format!(
            "split on {labels:?} used {} colors instead of {k}",
            part.node.palette
        )));
    }
    Ok(part)
}

/// Maps `t` (a max-degree vertex `u` with branches of at most two edges)
/// into the subdivided star, with or without tails, and restricts that
/// coloring. Branches with a tail take the highest leg indices, since legs
/// 1 and 2 have none.
fn embed(
    t: &Graph,
    u: usize,
    branches: &[Vec<usize>],
    with_tails: bool,
) -> Result<Vec<u32>, ConstructError> {
    let k = branches.len();
    let long = branches.iter().filter(|b| b.len() == 3).count();
    if long > k - 2 {
        return Err(ConstructError::InternalInvariant(format!(
            "{long} branches of two edges, at most {} allowed",
            k - 2
        )));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(branches[i].len()));
    // Legs 1..=k; long branches go to k, k-1, ..., the rest fill 1, 2, ...
    let mut leg = vec![0usize; k];
    for (rank, &i) in order.iter().enumerate() {
        leg[i] = if rank < long {
            k - rank
        } else {
            rank - long + 1
        };
    }
    let star_colors = if with_tails {
        subdivided_star_with_tails_colors(k)
    } else {
        subdivided_star_colors(k)
    };
    let host = if with_tails {
        crate::families::subdivided_star_with_tails(k)
    } else {
        crate::families::subdivided_star(k)
    }
    .expect("k >= 3");
    // Host vertex for every vertex of t.
    let mut image = vec![usize::MAX; t.n()];
    image[u] = 0;
    for (i, branch) in branches.iter().enumerate() {
        let j = leg[i];
        let ui = *branch
            .iter()
            .find(|&&x| t.has_edge(u, x))
            .expect("branch root");
        image[ui] = j;
        for &x in branch.iter().filter(|&&x| x != ui) {
            image[x] = if t.has_edge(ui, x) {
                k + j
            } else {
                2 * k + j - 2
            };
        }
    }
    t.edges()
        .iter()
        .map(|&(a, b)| {
            host.edge_index(image[a], image[b])
                .map(|he| star_colors[he])
                .ok_or_else(|| {
                    ConstructError::InternalInvariant(format!("edge {a}-{b} has no image"))
                })
        })
        .collect()
}

/// Conflict-free connection coloring of a tree with exactly Δ(T) colors,
/// for trees with `2Δ(T) >= α(T) + 2`.
///
/// Let `u` be the lowest-index vertex of maximum degree and `u_1` its
/// highest-degree neighbor. If `u_1` is a leaf the tree is a star. If
/// `u_1` has degree 2 and every branch at `u` has at most two edges, the
/// tree embeds in a subdivided star (with tails when some branch has two
/// edges) and inherits its coloring. Otherwise the tree is split at the
/// edge to a branch with three or more edges, or at `uu_1` when `u_1` has
/// degree at least 3.
pub fn color_tree_with_max_degree(t: &Graph) -> Result<Construction, ConstructError> {
    if t.n() == 0 {
        return Err(GraphError::EmptyGraph.into());
    }
    if !t.is_tree() {
        return Err(ConstructError::NotATree);
    }
    let (ok, alpha) = satisfies_degree_hypothesis(t)?;
    if !ok {
        return Err(ConstructError::HypothesisViolated {
            max_degree: t.max_degree(),
            alpha,
        });
    }
    let labels: Vec<usize> = (0..t.n()).collect();
    let mut part = with_max_degree(t, &labels)?;
    let palette = normalize(&mut part.colors);
    let coloring = verified(t, part.colors)?;
    Ok(Construction {
        coloring,
        trace: ConstructionTrace {
            palette,
            root: part.node,
        },
    })
}
