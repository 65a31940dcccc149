//! Pivot-edge reduction.
//!
//! A simple `s`-`t` path uses edge `e = xy` of color `χ` as its only
//! `χ`-edge iff, after deleting every other `χ`-edge and `e` itself, there
//! are two vertex-disjoint paths pairing `{s, t}` with `{x, y}`. The general
//! case is a unit-vertex-capacity max-flow from `{s, t}` to `{x, y}`; the
//! cases where `s` or `t` is an endpoint of `e` reduce to a single BFS.

use std::collections::VecDeque;

use super::{ColoringError, EdgeColoring, Witness};
use crate::graph::Graph;

/// Reusable flow network over a fixed graph.
///
/// Node `2v` is the in-copy of vertex `v`, `2v + 1` its out-copy; the
/// super-source and super-sink come last. Arcs are stored in pairs so that
/// `a ^ 1` is the reverse of `a`.
pub struct PathFinder<'g> {
    g: &'g Graph,
    head: Vec<usize>,
    cap: Vec<u8>,
    base_cap: Vec<u8>,
    adj: Vec<Vec<usize>>,
    /// First arc of the four terminal arcs (S->s, S->t, x->T, y->T).
    terminal_arcs: usize,
    /// Arc index of `u_out -> v_in` for edge `e` with `u < v` is
    /// `edge_arc[e]`, and `v_out -> u_in` is `edge_arc[e] + 2`.
    edge_arc: Vec<usize>,
    /// Edge index carried by each arc, `NONE` for vertex and terminal arcs.
    arc_edge: Vec<usize>,
    parent_arc: Vec<usize>,
    blocked: Vec<bool>,
}

const NONE: usize = usize::MAX;

impl<'g> PathFinder<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let nodes = 2 * g.n() + 2;
        let mut pf = PathFinder {
            g,
            head: Vec::new(),
            cap: Vec::new(),
            base_cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
            terminal_arcs: 0,
            edge_arc: Vec::with_capacity(g.m()),
            arc_edge: Vec::new(),
            parent_arc: vec![NONE; nodes],
            blocked: vec![false; g.m()],
        };
        for v in 0..g.n() {
            pf.add_arc(2 * v, 2 * v + 1);
        }
        pf.arc_edge = vec![NONE; pf.head.len()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            pf.edge_arc.push(pf.head.len());
            pf.add_arc(2 * u + 1, 2 * v);
            pf.add_arc(2 * v + 1, 2 * u);
            pf.arc_edge.extend([e; 4]);
        }
        pf.terminal_arcs = pf.head.len();
        let (src, sink) = (nodes - 2, nodes - 1);
        // Endpoints are rewired per query.
        pf.add_arc(src, 0);
        pf.add_arc(src, 0);
        pf.add_arc(1, sink);
        pf.add_arc(1, sink);
        pf.arc_edge.resize(pf.head.len(), NONE);
        pf.base_cap = pf.cap.clone();
        pf
    }

    fn add_arc(&mut self, from: usize, to: usize) {
        let a = self.head.len();
        self.head.push(to);
        self.cap.push(1);
        self.head.push(from);
        self.cap.push(0);
        self.adj[from].push(a);
        self.adj[to].push(a + 1);
    }

    fn rewire(&mut self, arc: usize, from: usize, to: usize) {
        let old_from = self.head[arc + 1];
        let old_to = self.head[arc];
        self.adj[old_from].retain(|&x| x != arc);
        self.adj[old_to].retain(|&x| x != arc + 1);
        self.head[arc] = to;
        self.head[arc + 1] = from;
        self.adj[from].push(arc);
        self.adj[to].push(arc + 1);
    }

    fn source(&self) -> usize {
        2 * self.g.n()
    }

    fn sink(&self) -> usize {
        2 * self.g.n() + 1
    }

    /// A simple `s`-`t` path that contains edge `e` and avoids every edge
    /// for which `blocked` is true (other than `e` itself).
    pub fn path_through_edge(
        &mut self,
        s: usize,
        t: usize,
        e: usize,
        blocked: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        debug_assert_ne!(s, t);
        for f in 0..self.g.m() {
            self.blocked[f] = f == e || blocked(f);
        }
        let (x, y) = self.g.edge(e);
        if (s, t) == (x, y) || (s, t) == (y, x) {
            return Some(vec![s, t]);
        }
        if s == x || s == y {
            let other = if s == x { y } else { x };
            let mut p = self.bfs_avoiding(other, t, s)?;
            p.insert(0, s);
            return Some(p);
        }
        if t == x || t == y {
            let other = if t == x { y } else { x };
            let mut p = self.bfs_avoiding(s, other, t)?;
            p.push(t);
            return Some(p);
        }
        self.disjoint_pair(s, t, x, y)
    }

    /// Shortest `from`-`to` path in the unblocked graph minus `avoid`.
    fn bfs_avoiding(&self, from: usize, to: usize, avoid: usize) -> Option<Vec<usize>> {
        let n = self.g.n();
        let mut prev = vec![NONE; n];
        prev[from] = from;
        prev[avoid] = avoid;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &(w, f) in self.g.incident(v) {
                if prev[w] == NONE && !self.blocked[f] {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn disjoint_pair(&mut self, s: usize, t: usize, x: usize, y: usize) -> Option<Vec<usize>> {
        self.cap.copy_from_slice(&self.base_cap);
        for (f, &arc) in self.edge_arc.iter().enumerate() {
            if self.blocked[f] {
                self.cap[arc] = 0;
                self.cap[arc + 2] = 0;
            }
        }
        let (src, sink) = (self.source(), self.sink());
        let ta = self.terminal_arcs;
        self.rewire(ta, src, 2 * s);
        self.rewire(ta + 2, src, 2 * t);
        self.rewire(ta + 4, 2 * x + 1, sink);
        self.rewire(ta + 6, 2 * y + 1, sink);

        for _ in 0..2 {
            if !self.augment() {
                return None;
            }
        }
        let first = self.trace(s);
        let second = self.trace(t);
        debug_assert_ne!(first.last(), second.last());
        let mut path = first;
        path.extend(second.into_iter().rev());
        Some(path)
    }

    fn augment(&mut self) -> bool {
        let (src, sink) = (self.source(), self.sink());
        self.parent_arc.fill(NONE);
        let mut queue = VecDeque::from([src]);
        let mut reached = false;
        'bfs: while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.head[a];
                if self.cap[a] > 0 && w != src && self.parent_arc[w] == NONE {
                    self.parent_arc[w] = a;
                    if w == sink {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if !reached {
            return false;
        }
        let mut v = sink;
        while v != src {
            let a = self.parent_arc[v];
            self.cap[a] -= 1;
            self.cap[a ^ 1] += 1;
            v = self.head[a ^ 1];
        }
        true
    }

    /// Follows saturated arcs from `start` to the sink, returning the
    /// vertices visited.
    fn trace(&self, start: usize) -> Vec<usize> {
        let sink = self.sink();
        let mut path = vec![start];
        let mut node = 2 * start + 1;
        loop {
            let next = self.adj[node]
                .iter()
                .copied()
                .find(|&a| {
                    a % 2 == 0 && self.cap[a] == 0 && self.base_cap[a] == 1 && self.is_live(a)
                })
                .expect("unit flow leaves every vertex it enters");
            let w = self.head[next];
            if w == sink {
                return path;
            }
            let v = w / 2;
            path.push(v);
            node = 2 * v + 1;
        }
    }

    /// An arc with zero residual capacity carries flow unless it was
    /// blocked up front.
    fn is_live(&self, a: usize) -> bool {
        let f = self.arc_edge[a];
        f == NONE || !self.blocked[f]
    }

    /// First conflict-free `s`-`t` path found by trying pivot edges in
    /// index order.
    pub fn conflict_free_path(&mut self, c: &EdgeColoring, s: usize, t: usize) -> Option<Witness> {
        self.conflict_free_path_among(c.colors(), s, t, 0..self.g.m())
    }

    /// Like [`Self::conflict_free_path`] over a raw color slice, trying only
    /// the given pivots. Color `0` marks an uncolored edge; such edges are
    /// never pivots and never blocked.
    pub(crate) fn conflict_free_path_among(
        &mut self,
        colors: &[u32],
        s: usize,
        t: usize,
        pivots: impl IntoIterator<Item = usize>,
    ) -> Option<Witness> {
        for e in pivots {
            let chi = colors[e];
            if chi == 0 {
                continue;
            }
            if let Some(path) = self.path_through_edge(s, t, e, |f| colors[f] == chi) {
                return Some(Witness {
                    path,
                    pivot_color: chi,
                });
            }
        }
        None
    }
}

/// Decides whether a conflict-free `u`-`v` path exists, returning a witness.
pub fn exists_conflict_free_path(
    g: &Graph,
    c: &EdgeColoring,
    u: usize,
    v: usize,
) -> Result<Option<Witness>, ColoringError> {
    c.check_against(g)?;
    if u >= g.n() || v >= g.n() {
        return Err(crate::graph::GraphError::VertexOutOfRange {
            vertex: u.max(v),
            n: g.n(),
        }
        .into());
    }
    if u == v {
        return Err(ColoringError::SameVertex);
    }
    Ok(PathFinder::new(g).conflict_free_path(c, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_conflict_free_path;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    #[test]
    fn k2_pair() {
        let g = Graph::complete(2);
        let c = EdgeColoring::new(&g, vec![5]).unwrap();
        let w = exists_conflict_free_path(&g, &c, 0, 1).unwrap().unwrap();
        assert_eq!(w.path, vec![0, 1]);
        assert_eq!(w.pivot_color, 5);
    }

    #[test]
    fn monochromatic_p3_has_no_path_between_ends() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let c = EdgeColoring::monochromatic(&g);
        assert_eq!(exists_conflict_free_path(&g, &c, 0, 2).unwrap(), None);
    }

    #[test]
    fn monochromatic_c4() {
        let g = cycle(4);
        let c = EdgeColoring::monochromatic(&g);
        assert_eq!(exists_conflict_free_path(&g, &c, 0, 2).unwrap(), None);
        let w = exists_conflict_free_path(&g, &c, 0, 1).unwrap().unwrap();
        assert_eq!(w.path.len(), 2);
    }

    #[test]
    fn same_vertex_is_an_error() {
        let g = Graph::complete(2);
        let c = EdgeColoring::monochromatic(&g);
        assert_eq!(
            exists_conflict_free_path(&g, &c, 1, 1),
            Err(ColoringError::SameVertex)
        );
    }

    #[test]
    fn general_case_needs_two_disjoint_paths() {
        // C_6 with one red edge (color 2) opposite the pair (0, 3)'s short side:
        // 0-1-2-3 all color 1 except edge 1-2 color 2 → conflict-free.
        let g = cycle(6);
        let mut colors = vec![1; 6];
        colors[g.edge_index(1, 2).unwrap()] = 2;
        let c = EdgeColoring::new(&g, colors).unwrap();
        let w = exists_conflict_free_path(&g, &c, 0, 3).unwrap().unwrap();
        assert_eq!(w.pivot_color, 2);
        assert!(is_conflict_free_path(&g, &c, &w.path).unwrap());
        assert!(w.path.contains(&1) && w.path.contains(&2));
    }

    #[test]
    fn pivot_endpoint_degenerate_cases() {
        // Path 0-1-2-3 colored (2,1,1): pair (0,3) must start with the pivot.
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = EdgeColoring::new(&g, vec![2, 1, 1]).unwrap();
        let w = exists_conflict_free_path(&g, &c, 0, 3).unwrap().unwrap();
        assert_eq!(w.path, vec![0, 1, 2, 3]);
        let w = exists_conflict_free_path(&g, &c, 3, 0).unwrap().unwrap();
        assert_eq!(w.path, vec![3, 2, 1, 0]);
        assert_eq!(exists_conflict_free_path(&g, &c, 1, 3).unwrap(), None);
    }

    #[test]
    fn repeated_queries_reuse_the_network() {
        let g = cycle(5);
        let c = EdgeColoring::new(&g, vec![1, 2, 1, 2, 3]).unwrap();
        let mut pf = PathFinder::new(&g);
        for s in 0..5 {
            for t in 0..5 {
                if s != t {
                    let w = pf.conflict_free_path(&c, s, t).unwrap();
                    assert!(is_conflict_free_path(&g, &c, &w.path).unwrap());
                    assert_eq!(w.path.first(), Some(&s));
                    assert_eq!(w.path.last(), Some(&t));
                }
            }
        }
    }
}
