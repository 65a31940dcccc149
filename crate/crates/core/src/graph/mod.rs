//! Immutable simple undirected graphs and the structural queries used by the
//! solver, the constructive colorers and the harness.
//!
//! Vertices are dense indices `0..n`. The edge list is kept sorted by
//! `(min endpoint, max endpoint)`, so an edge index is stable for a given
//! graph and can be used as a key into colorings.

mod bridges;
mod canon;
pub mod io;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bridges::cut_edges_by_deletion;
pub use canon::{canonical_form, canonical_form_with_limit, DEFAULT_CANON_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph on {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Position of an edge in a graph's sorted edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef(pub usize);

impl EdgeRef {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// Per vertex: `(neighbor, edge index)`, sorted by neighbor.
    adj: Vec<Vec<(usize, usize)>>,
}

/// A graph carved out of a parent, together with the tables that map its
/// vertices and edges back to the parent's labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    /// `vertex_map[v]` is the parent label of local vertex `v`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[e]` is the parent edge index of local edge `e`.
    pub edge_map: Vec<usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, edges))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_sorted(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// `(neighbor, edge index)` pairs of `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Lowest-index vertex of maximum degree.
    pub fn max_degree_vertex(&self) -> Option<usize> {
        let d = self.max_degree();
        (0..self.n).find(|&v| self.degree(v) == d)
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Component label per vertex and the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        self.component_labels_without(|_| false)
    }

    /// Component labelling of the graph with every edge for which `skip`
    /// returns true removed.
    pub(crate) fn component_labels_without(
        &self,
        skip: impl Fn(usize) -> bool,
    ) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, e) in &self.adj[x] {
                    if label[y] == usize::MAX && !skip(e) {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if self.n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        Ok(self.component_count() == 1)
    }

    pub(crate) fn require_connected(&self) -> Result<(), GraphError> {
        if self.is_connected()? {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// Connected components, each with its vertex and edge mapping.
    pub fn components(&self) -> Vec<Subgraph> {
        let (label, count) = self.component_labels();
        (0..count)
            .map(|c| {
                let verts: Vec<usize> = (0..self.n).filter(|&v| label[v] == c).collect();
                self.induced_subgraph(&verts)
            })
            .collect()
    }

    /// Subgraph induced on `vertices`; local labels follow the order given.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Subgraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut pairs = Vec::new();
        let mut parent_edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                pairs.push((local[u], local[v]));
                parent_edges.push(e);
            }
        }
        self.subgraph_from_parts(vertices.to_vec(), pairs, parent_edges)
    }

    /// Subgraph spanned by a set of edges: its vertices are exactly the
    /// endpoints of those edges, in increasing parent order.
    pub fn edge_subgraph(&self, edge_set: &[usize]) -> Subgraph {
        let mut verts: Vec<usize> = edge_set
            .iter()
            .flat_map(|&e| {
                let (u, v) = self.edges[e];
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        let pairs = edge_set
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (local[u], local[v])
            })
            .collect();
        self.subgraph_from_parts(verts, pairs, edge_set.to_vec())
    }

    fn subgraph_from_parts(
        &self,
        vertex_map: Vec<usize>,
        pairs: Vec<(usize, usize)>,
        parent_edges: Vec<usize>,
    ) -> Subgraph {
        let graph = Graph::from_edge_list(vertex_map.len(), &pairs)
            .expect("subgraph of a simple graph is simple");
        // Local edges are re-sorted; recover the parent index for each.
        let edge_map = graph
            .edges
            .iter()
            .map(|&(a, b)| {
                let (pu, pv) = (vertex_map[a], vertex_map[b]);
                let e = self.edge_index(pu, pv).expect("edge exists in parent");
                debug_assert!(parent_edges.contains(&e));
                e
            })
            .collect();
        Subgraph {
            graph,
            vertex_map,
            edge_map,
        }
    }

    /// Copy of the graph with one edge removed (vertex set unchanged).
    pub fn without_edge(&self, e: usize) -> Graph {
        let mut edges = self.edges.clone();
        edges.remove(e);
        Self::from_sorted(self.n, edges)
    }

    /// Copy of the graph with one vertex removed; the remaining vertices
    /// keep their relative order.
    pub fn without_vertex(&self, v: usize) -> Subgraph {
        let keep: Vec<usize> = (0..self.n).filter(|&w| w != v).collect();
        self.induced_subgraph(&keep)
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::from_edge_list(self.n, &pairs).expect("relabeling preserves simplicity")
    }

    /// Adds one edge, returning a new graph.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let mut pairs = self.edges.clone();
        pairs.push((u, v));
        Graph::from_edge_list(self.n, &pairs)
    }

    /// BFS distances from `s`; unreachable vertices get `None`.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for w in self.neighbors(x) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn diameter(&self) -> Result<usize, GraphError> {
        self.require_connected()?;
        Ok((0..self.n)
            .flat_map(|s| self.distances_from(s))
            .map(|d| d.expect("connected"))
            .max()
            .unwrap_or(0))
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() == self.n - 1 && self.component_count() == 1
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    /// `K_{1,n-1}` with `n >= 3`: one vertex adjacent to all others and no
    /// other edges. `K_2` is reported as complete, not as a star.
    pub fn is_star(&self) -> bool {
        self.n >= 3 && self.m() == self.n - 1 && self.max_degree() == self.n - 1
    }

    /// Connected, at least two vertices, and no cut-edge.
    pub fn is_two_edge_connected(&self) -> bool {
        self.n >= 2 && self.component_count() == 1 && self.cut_edges().is_empty()
    }

    /// Connected, at least three vertices, and no vertex whose deletion
    /// disconnects the graph.
    pub fn is_two_connected(&self) -> bool {
        self.n >= 3
            && self.component_count() == 1
            && (0..self.n).all(|v| self.without_vertex(v).graph.component_count() == 1)
    }

    /// The bridges of the graph, in edge-index order.
    pub fn cut_edges(&self) -> Vec<EdgeRef> {
        bridges::cut_edges(self)
    }

    /// The subgraph formed by the cut-edges and their endpoints.
    pub fn cut_edge_subgraph(&self) -> Subgraph {
        let cut: Vec<usize> = self.cut_edges().into_iter().map(EdgeRef::index).collect();
        self.edge_subgraph(&cut)
    }

    /// Vertices of degree one.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    /// The one or two centers of a tree (vertices of minimum eccentricity),
    /// found by repeatedly stripping leaves.
    pub fn tree_centers(&self) -> Vec<usize> {
        debug_assert!(self.is_tree());
        if self.n <= 2 {
            return (0..self.n).collect();
        }
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let mut layer: Vec<usize> = self.leaves();
        let mut remaining = self.n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for w in self.neighbors(leaf) {
                    if deg[w] > 1 {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
                deg[leaf] = 0;
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(m: usize) -> Graph {
        let pairs: Vec<_> = (0..m).map(|i| (i, i + 1)).collect();
        Graph::from_edge_list(m + 1, &pairs).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    #[test]
    fn construction_and_rejections() {
        let k2 = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.m(), 1);
        assert!(k2.is_complete());
        let k3 = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3, Graph::complete(3));
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::from_edge_list(3, &[(1, 0), (0, 1)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::from_edge_list(3, &[(2, 2)]),
            Err(GraphError::LoopEdge(2))
        );
        assert_eq!(
            Graph::from_edge_list(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn edges_are_sorted_and_adjacency_consistent() {
        let g = Graph::from_edge_list(4, &[(3, 2), (1, 0), (2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (2, 3)]);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            assert_eq!(g.edge_index(u, v), Some(e));
            assert_eq!(g.edge_index(v, u), Some(e));
        }
        assert_eq!(g.edge_index(1, 3), None);
    }

    #[test]
    fn connectivity() {
        assert!(Graph::complete(3).is_connected().unwrap());
        assert!(!Graph::empty(2).is_connected().unwrap());
        assert!(path(4).is_connected().unwrap());
        assert!(Graph::empty(1).is_connected().unwrap());
        assert_eq!(Graph::empty(0).is_connected(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn components_of_two_triangles() {
        let g =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(c.graph, Graph::complete(3));
        }
        assert_eq!(comps[1].vertex_map, vec![3, 4, 5]);
        assert_eq!(path(3).components().len(), 1);
    }

    #[test]
    fn degree_diameter_and_predicates() {
        let star = Graph::from_edge_list(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(star.max_degree(), 4);
        assert_eq!(star.diameter().unwrap(), 2);
        assert!(star.is_tree());
        assert!(star.is_star());

        let c6 = cycle(6);
        assert!(c6.is_two_edge_connected());
        assert!(c6.is_two_connected());
        assert_eq!(c6.diameter().unwrap(), 3);
        assert!(!c6.is_tree());

        for m in 1..8 {
            assert_eq!(path(m).diameter().unwrap(), m);
        }
        for n in 2..7 {
            assert_eq!(Graph::complete(n).diameter().unwrap(), 1);
        }
        assert_eq!(Graph::empty(2).diameter(), Err(GraphError::Disconnected));
        assert!(!Graph::complete(2).is_star());
        assert!(!Graph::complete(2).is_two_edge_connected());
    }

    #[test]
    fn two_connected_vs_two_edge_connected() {
        // Two triangles sharing vertex 2: 2-edge-connected, but 2 is a cut-vertex.
        let bowtie =
            Graph::from_edge_list(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(bowtie.is_two_edge_connected());
        assert!(!bowtie.is_two_connected());
    }

    #[test]
    fn cut_edge_subgraph_of_triangle_with_pendant() {
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let c = g.cut_edge_subgraph();
        assert_eq!(c.graph, Graph::complete(2));
        assert_eq!(c.vertex_map, vec![2, 3]);
        assert_eq!(c.edge_map, vec![g.edge_index(2, 3).unwrap()]);
        assert_eq!(cycle(5).cut_edge_subgraph().graph.n(), 0);
        let t = path(4);
        assert_eq!(t.cut_edge_subgraph().graph, t);
    }

    #[test]
    fn tree_centers() {
        assert_eq!(path(4).tree_centers(), vec![2]);
        assert_eq!(path(3).tree_centers(), vec![1, 2]);
        assert_eq!(Graph::empty(1).tree_centers(), vec![0]);
    }
}
