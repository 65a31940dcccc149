//! Named graph families and exhaustive enumeration of small trees and
//! connected graphs.
//!
//! Vertex labels are fixed per family so that witnesses are reproducible:
//!
//! * star: center 0, leaves `1..=k`.
//! * path: vertices `0..=m` in order.
//! * subdivided star (`H`): center 0, inner `u_i = i`, outer `v_i = k + i`.
//! * subdivided star with tails (`Q`): as above plus `w_i = 2k + i - 2`
//!   hanging from `v_i` for `3 <= i <= k`.
//! * independence family (`G_lk`, `k < l`): `w = 0`, `v = 1`, `u_i = i + 1`.
//!   For `k = l`: clique on `0..n-l`, star center `n - l`, whose leaves are
//!   clique vertex 0 and `n-l+1..n`.
//! * glued / bridged stars: centers 0 and 1, then the shared or joined
//!   leaves, then the remaining leaves of each star.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{canonical_form, Graph};

pub const MAX_TREE_ENUMERATION: usize = 12;
pub const MAX_GRAPH_ENUMERATION: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("enumeration on {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParameters(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Complete {
        n: usize,
    },
    Star {
        k: usize,
    },
    Path {
        m: usize,
    },
    #[serde(rename = "H")]
    SubdividedStar {
        k: usize,
    },
    #[serde(rename = "Q")]
    SubdividedStarWithTails {
        k: usize,
    },
    #[serde(rename = "G_lk")]
    IndependenceFamily {
        n: usize,
        l: usize,
        k: usize,
    },
    #[serde(rename = "remark1")]
    GluedStars {
        k: usize,
    },
    #[serde(rename = "remark2")]
    BridgedStars {
        k: usize,
    },
    RandomTree {
        n: usize,
        seed: u64,
    },
}

/// Family tag as used on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    Complete,
    Star,
    Path,
    H,
    Q,
    Glk,
    Remark1,
    Remark2,
    RandomTree,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 9] = [
        FamilyTag::Complete,
        FamilyTag::Star,
        FamilyTag::Path,
        FamilyTag::H,
        FamilyTag::Q,
        FamilyTag::Glk,
        FamilyTag::Remark1,
        FamilyTag::Remark2,
        FamilyTag::RandomTree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Complete => "complete",
            FamilyTag::Star => "star",
            FamilyTag::Path => "path",
            FamilyTag::H => "H",
            FamilyTag::Q => "Q",
            FamilyTag::Glk => "G_lk",
            FamilyTag::Remark1 => "remark1",
            FamilyTag::Remark2 => "remark2",
            FamilyTag::RandomTree => "random_tree",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| bad(format!("unknown family {s:?}")))
    }
}

pub fn gen(spec: FamilySpec) -> Result<Graph, FamilyError> {
    match spec {
        FamilySpec::Complete { n } => complete(n),
        FamilySpec::Star { k } => star(k),
        FamilySpec::Path { m } => path(m),
        FamilySpec::SubdividedStar { k } => subdivided_star(k),
        FamilySpec::SubdividedStarWithTails { k } => subdivided_star_with_tails(k),
        FamilySpec::IndependenceFamily { n, l, k } => independence_family(n, l, k),
        FamilySpec::GluedStars { k } => glued_stars(k),
        FamilySpec::BridgedStars { k } => bridged_stars(k),
        FamilySpec::RandomTree { n, seed } => random_tree(n, seed),
    }
}

fn build(n: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::from_edge_list(n, pairs).expect("family constructions are simple graphs")
}

pub fn complete(n: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(bad("complete graph needs n >= 1"));
    }
    Ok(Graph::complete(n))
}

/// `K_{1,k}`.
pub fn star(k: usize) -> Result<Graph, FamilyError> {
    if k == 0 {
        return Err(bad("star needs k >= 1 leaves"));
    }
    let pairs: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Ok(build(k + 1, &pairs))
}

/// Path with `m` edges.
pub fn path(m: usize) -> Result<Graph, FamilyError> {
    if m == 0 {
        return Err(bad("path needs m >= 1 edges"));
    }
    let pairs: Vec<_> = (0..m).map(|i| (i, i + 1)).collect();
    Ok(build(m + 1, &pairs))
}

/// `K_{1,k}` with every edge subdivided once.
pub fn subdivided_star(k: usize) -> Result<Graph, FamilyError> {
    if k < 3 {
        return Err(bad("subdivided star needs k >= 3"));
    }
    Ok(build(2 * k + 1, &subdivided_star_pairs(k)))
}

fn subdivided_star_pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| [(0, i), (i, k + i)]).collect()
}

/// Subdivided star with a pendant edge on `k - 2` of its leaves
/// (`v_3..v_k`).
pub fn subdivided_star_with_tails(k: usize) -> Result<Graph, FamilyError> {
    if k < 3 {
        return Err(bad("subdivided star with tails needs k >= 3"));
    }
    let mut pairs = subdivided_star_pairs(k);
    pairs.extend((3..=k).map(|i| (k + i, 2 * k + i - 2)));
    Ok(build(3 * k - 1, &pairs))
}

/// Graph on `n` vertices with independence number `l` and conflict-free
/// connection number `k`.
pub fn independence_family(n: usize, l: usize, k: usize) -> Result<Graph, FamilyError> {
    if l < 3 || l + 2 > n || k < 2 || k > l {
        return Err(bad(format!(
            "need 3 <= l <= n-2 and 2 <= k <= l, got n={n}, l={l}, k={k}"
        )));
    }
    if k == l {
        // Star K_{1,l} with one leaf identified with vertex 0 of K_{n-l}.
        let clique = n - l;
        let center = clique;
        let mut pairs: Vec<_> = (0..clique)
            .flat_map(|a| (a + 1..clique).map(move |b| (a, b)))
            .collect();
        pairs.push((0, center));
        pairs.extend((center + 1..n).map(|leaf| (center, leaf)));
        return Ok(build(n, &pairs));
    }
    let (w, v) = (0, 1);
    let u = |i: usize| i + 1;
    let mut pairs: Vec<_> = (1..=n - 2).map(|i| (w, u(i))).collect();
    pairs.extend((k + 1..=n - 2).map(|i| (v, u(i))));
    pairs.push((w, v));
    for i in l..=n - 2 {
        for j in i + 1..=n - 2 {
            pairs.push((u(i), u(j)));
        }
    }
    Ok(build(n, &pairs))
}

/// Two copies of `K_{1,k-1}` sharing one leaf.
pub fn glued_stars(k: usize) -> Result<Graph, FamilyError> {
    if k < 3 {
        return Err(bad("glued stars need k >= 3"));
    }
    // centers 0, 1; shared leaf 2; a's leaves 3..k+1; b's leaves after.
    let mut pairs = vec![(0, 2), (1, 2)];
    let mut next = 3;
    for center in [0, 1] {
        for _ in 0..k - 2 {
            pairs.push((center, next));
            next += 1;
        }
    }
    Ok(build(next, &pairs))
}

/// Two copies of `K_{1,k}` with an edge joining a leaf of one to a leaf of
/// the other.
pub fn bridged_stars(k: usize) -> Result<Graph, FamilyError> {
    if k < 3 {
        return Err(bad("bridged stars need k >= 3"));
    }
    // centers 0, 1; joined leaves 2 (of 0) and 3 (of 1).
    let mut pairs = vec![(0, 2), (1, 3), (2, 3)];
    let mut next = 4;
    for center in [0, 1] {
        for _ in 0..k - 1 {
            pairs.push((center, next));
            next += 1;
        }
    }
    Ok(build(next, &pairs))
}

/// Decodes a Prüfer sequence over `0..n` (length `n - 2`).
pub fn pruefer_decode(seq: &[usize], n: usize) -> Graph {
    assert!(
        n >= 2 && seq.len() == n - 2,
        "Prüfer sequence must have length n - 2"
    );
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut pairs = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n)
            .find(|&v| degree[v] == 1)
            .expect("a leaf always exists");
        pairs.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    pairs.push((rest[0], rest[1]));
    build(n, &pairs)
}

/// Uniform labelled tree from a seeded random Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(bad("random tree needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_tree_with(n, &mut rng, |rng| rng.gen_range(0..n)))
}

/// Random labelled tree whose Prüfer entries come from `draw`.
pub fn random_tree_with<R: Rng>(
    n: usize,
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> usize,
) -> Graph {
    match n {
        0 => Graph::empty(0),
        1 => Graph::empty(1),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| draw(rng)).collect();
            pruefer_decode(&seq, n)
        }
    }
}

fn dedupe(graphs: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let mut by_form = BTreeMap::new();
    for g in graphs {
        let form = canonical_form(&g).expect("within canonical form limits");
        by_form.entry(form).or_insert(g);
    }
    by_form.into_values().collect()
}

fn check_tree_n(n: usize) -> Result<(), FamilyError> {
    if n == 0 {
        return Err(bad("n >= 1 required"));
    }
    if n > MAX_TREE_ENUMERATION {
        return Err(FamilyError::TooLarge {
            n,
            limit: MAX_TREE_ENUMERATION,
        });
    }
    Ok(())
}

/// All non-isomorphic trees on `n` vertices, ordered by canonical form.
/// Built by attaching a leaf to every vertex of every tree on `n - 1`
/// vertices.
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>, FamilyError> {
    check_tree_n(n)?;
    let mut trees = vec![Graph::empty(1)];
    for size in 2..=n {
        trees = dedupe(trees.iter().flat_map(|t| {
            (0..size - 1).map(move |v| {
                let mut pairs = t.edges().to_vec();
                pairs.push((v, size - 1));
                build(size, &pairs)
            })
        }));
    }
    Ok(trees)
}

/// Same set as [`enumerate_trees`], reached through a different order:
/// every rooted tree is generated as a level sequence (Beyer–Hedetniemi
/// successor rule), then roots are forgotten by canonicalizing.
pub fn enumerate_trees_by_level_sequences(n: usize) -> Result<Vec<Graph>, FamilyError> {
    check_tree_n(n)?;
    let mut levels: Vec<usize> = (1..=n).collect();
    let mut all = Vec::new();
    loop {
        all.push(tree_from_levels(&levels));
        let Some(p) = levels.iter().rposition(|&l| l > 2) else {
            break;
        };
        let q = levels[..p]
            .iter()
            .rposition(|&l| l == levels[p] - 1)
            .expect("a shallower ancestor exists");
        for i in p..n {
            levels[i] = levels[i - (p - q)];
        }
    }
    Ok(dedupe(all))
}

fn tree_from_levels(levels: &[usize]) -> Graph {
    let mut pairs = Vec::with_capacity(levels.len().saturating_sub(1));
    // last[d] = most recent node seen at depth d
    let mut last = vec![0usize; levels.len() + 2];
    for (i, &l) in levels.iter().enumerate() {
        if i > 0 {
            pairs.push((last[l - 1], i));
        }
        last[l] = i;
    }
    build(levels.len(), &pairs)
}

/// Every labelled tree via all Prüfer sequences; exponential, used only
/// as a cross-check for small `n`.
pub fn enumerate_trees_by_pruefer(n: usize) -> Result<Vec<Graph>, FamilyError> {
    check_tree_n(n)?;
    if n > 8 {
        return Err(FamilyError::TooLarge { n, limit: 8 });
    }
    if n <= 2 {
        return Ok(vec![build(n, if n == 2 { &[(0, 1)] } else { &[] })]);
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    Ok(dedupe((0..total).map(|mut code| {
        let seq: Vec<usize> = (0..len)
            .map(|_| {
                let d = code % n;
                code /= n;
                d
            })
            .collect();
        pruefer_decode(&seq, n)
    })))
}

fn check_graph_n(n: usize) -> Result<(), FamilyError> {
    if n == 0 {
        return Err(bad("n >= 1 required"));
    }
    if n > MAX_GRAPH_ENUMERATION {
        return Err(FamilyError::TooLarge {
            n,
            limit: MAX_GRAPH_ENUMERATION,
        });
    }
    Ok(())
}

fn mask_connected(n: usize, adj: &[u32]) -> bool {
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == (1u32 << n) - 1
}

/// All non-isomorphic connected graphs on `n` vertices, ordered by
/// canonical form, from every edge subset of `K_n`.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>, FamilyError> {
    check_graph_n(n)?;
    let slots: Vec<(usize, usize)> = Graph::complete(n).edges().to_vec();
    let mut by_form = BTreeMap::new();
    let mut adj = vec![0u32; n];
    for mask in 0u64..1 << slots.len() {
        if (mask.count_ones() as usize) + 1 < n {
            continue;
        }
        adj.iter_mut().for_each(|a| *a = 0);
        for (i, &(u, v)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        if !mask_connected(n, &adj) {
            continue;
        }
        let pairs: Vec<_> = (0..slots.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| slots[i])
            .collect();
        let g = build(n, &pairs);
        let form = canonical_form(&g).expect("n within limit");
        by_form.entry(form).or_insert(g);
    }
    Ok(by_form.into_values().collect())
}

/// Same set as [`enumerate_connected_graphs`], grown one vertex at a time:
/// every connected graph has a vertex whose removal leaves it connected, so
/// joining a new vertex to each non-empty subset of each smaller graph
/// reaches them all.
pub fn enumerate_connected_graphs_by_extension(n: usize) -> Result<Vec<Graph>, FamilyError> {
    check_graph_n(n)?;
    let mut graphs = vec![Graph::empty(1)];
    for size in 2..=n {
        graphs = dedupe(graphs.iter().flat_map(|g| {
            (1u32..1 << (size - 1)).map(move |subset| {
                let mut pairs = g.edges().to_vec();
                pairs.extend(
                    (0..size - 1)
                        .filter(|&v| subset >> v & 1 == 1)
                        .map(|v| (v, size - 1)),
                );
                build(size, &pairs)
            })
        }));
    }
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::independence_number;

    fn forms(gs: &[Graph]) -> Vec<Vec<u8>> {
        gs.iter().map(|g| canonical_form(g).unwrap()).collect()
    }

    fn degree_multiset(g: &Graph) -> Vec<usize> {
        let mut d: Vec<_> = (0..g.n()).map(|v| g.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    #[test]
    fn subdivided_star_shape() {
        let h = subdivided_star(3).unwrap();
        assert_eq!((h.n(), h.m()), (7, 6));
        assert_eq!(degree_multiset(&h), vec![3, 2, 2, 2, 1, 1, 1]);
        assert_eq!(h.diameter().unwrap(), 4);
        for k in 3..9 {
            let h = subdivided_star(k).unwrap();
            assert_eq!((h.n(), h.m(), h.max_degree()), (2 * k + 1, 2 * k, k));
            let q = subdivided_star_with_tails(k).unwrap();
            assert_eq!((q.n(), q.m()), (3 * k - 1, 3 * k - 2));
            assert!(h.is_tree() && q.is_tree());
        }
        assert!(subdivided_star(2).is_err());
        assert!(subdivided_star_with_tails(2).is_err());
    }

    #[test]
    fn independence_family_structure() {
        let g = independence_family(8, 5, 3).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(independence_number(&g).unwrap().value, 5);
        // {v, w, u_l..u_{n-2}} is a clique on n - l + 1 vertices.
        let clique: Vec<usize> = [0, 1].into_iter().chain((5..=6).map(|i| i + 1)).collect();
        assert_eq!(clique.len(), 8 - 5 + 1);
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                assert!(g.has_edge(a, b), "{a}-{b}");
            }
        }
        let c = g.cut_edge_subgraph();
        assert_eq!(c.graph.components().len(), 1);
        assert!(c.graph.is_star() && c.graph.max_degree() == 3);

        let star_variant = independence_family(8, 4, 4).unwrap();
        assert_eq!(independence_number(&star_variant).unwrap().value, 4);
        assert!(independence_family(8, 7, 3).is_err());
        assert!(independence_family(8, 5, 1).is_err());
        assert!(independence_family(8, 2, 2).is_err());
    }

    #[test]
    fn glued_and_bridged_stars() {
        let t = glued_stars(3).unwrap();
        assert!(t.is_tree());
        assert_eq!(
            (t.n(), t.m(), t.max_degree(), t.diameter().unwrap()),
            (5, 4, 2, 4)
        );
        assert_eq!(independence_number(&t).unwrap().value, 3);
        let g = bridged_stars(3).unwrap();
        assert_eq!((g.n(), g.max_degree()), (8, 3));
        assert_eq!(independence_number(&g).unwrap().value, 5);
        for k in 3..7 {
            let t = glued_stars(k).unwrap();
            let a = independence_number(&t).unwrap().value;
            assert_eq!(2 * t.max_degree(), a + 1);
        }
    }

    #[test]
    fn random_tree_is_deterministic() {
        let a = random_tree(5, 1).unwrap();
        assert_eq!(a, random_tree(5, 1).unwrap());
        assert!(a.is_tree());
        assert_eq!(random_tree(1, 9).unwrap(), Graph::empty(1));
        assert_eq!(random_tree(2, 9).unwrap(), Graph::complete(2));
    }

    #[test]
    fn pruefer_decoding() {
        // Sequence (3, 3, 3) on 5 vertices is the star centered at 3.
        let s = pruefer_decode(&[3, 3, 3], 5);
        assert_eq!(s.degree(3), 4);
        let p = pruefer_decode(&[1, 2], 4);
        assert_eq!(p.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn small_tree_counts_agree_across_methods() {
        // Counts from the Prüfer cross-check, which enumerates every
        // labelled tree.
        for n in 1..=8 {
            let a = enumerate_trees(n).unwrap();
            let b = enumerate_trees_by_level_sequences(n).unwrap();
            let c = enumerate_trees_by_pruefer(n).unwrap();
            assert_eq!(forms(&a), forms(&b), "n = {n}");
            assert_eq!(forms(&a), forms(&c), "n = {n}");
            assert!(a.iter().all(Graph::is_tree));
        }
        assert_eq!(enumerate_trees(4).unwrap().len(), 2);
        assert_eq!(enumerate_trees(1).unwrap().len(), 1);
    }

    #[test]
    fn small_graph_counts_agree_across_methods() {
        for n in 1..=6 {
            let a = enumerate_connected_graphs(n).unwrap();
            let b = enumerate_connected_graphs_by_extension(n).unwrap();
            assert_eq!(forms(&a), forms(&b), "n = {n}");
        }
        assert_eq!(enumerate_connected_graphs(3).unwrap().len(), 2);
        assert_eq!(enumerate_connected_graphs(4).unwrap().len(), 6);
    }

    #[test]
    fn limits() {
        assert!(matches!(
            enumerate_trees(13),
            Err(FamilyError::TooLarge { .. })
        ));
        assert!(matches!(
            enumerate_connected_graphs(8),
            Err(FamilyError::TooLarge { .. })
        ));
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn tags_round_trip() {
        for t in FamilyTag::ALL {
            assert_eq!(t.as_str().parse::<FamilyTag>().unwrap(), t);
        }
        assert!("hk".parse::<FamilyTag>().is_err());
    }
}
