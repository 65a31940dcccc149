//! Reference checker: enumerate every simple path. Exponential; only for
//! cross-validation on small graphs.

use super::{unique_colors, ColoringError, EdgeColoring, Witness};
use crate::graph::{Graph, GraphError};

pub const DEFAULT_PATH_CAP: u64 = 10_000_000;

struct Enumerator<'a> {
    g: &'a Graph,
    c: &'a EdgeColoring,
    target: usize,
    on_path: Vec<bool>,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    paths: u64,
    cap: u64,
}

impl Enumerator<'_> {
    fn dfs(&mut self, v: usize) -> Result<Option<Witness>, ColoringError> {
        if v == self.target {
            self.paths += 1;
            if self.paths > self.cap {
                return Err(ColoringError::PathExplosion(self.cap));
            }
            return Ok(unique_colors(self.c, &self.edges)
                .first()
                .map(|&pivot_color| Witness {
                    path: self.vertices.clone(),
                    pivot_color,
                }));
        }
        for &(w, e) in self.g.incident(v) {
            if self.on_path[w] {
                continue;
            }
            self.on_path[w] = true;
            self.vertices.push(w);
            self.edges.push(e);
            let found = self.dfs(w)?;
            self.edges.pop();
            self.vertices.pop();
            self.on_path[w] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Same contract as [`super::exists_conflict_free_path`], decided by
/// enumerating simple paths until one is conflict-free.
pub fn exists_conflict_free_path_oracle(
    g: &Graph,
    c: &EdgeColoring,
    u: usize,
    v: usize,
    cap: u64,
) -> Result<Option<Witness>, ColoringError> {
    c.check_against(g)?;
    if u >= g.n() || v >= g.n() {
        return Err(GraphError::VertexOutOfRange {
            vertex: u.max(v),
            n: g.n(),
        }
        .into());
    }
    if u == v {
        return Err(ColoringError::SameVertex);
    }
    let mut en = Enumerator {
        g,
        c,
        target: v,
        on_path: vec![false; g.n()],
        vertices: vec![u],
        edges: Vec::new(),
        paths: 0,
        cap,
    };
    en.on_path[u] = true;
    en.dfs(u)
}
