//! Edge colorings and the conflict-free connectivity decision procedure.

mod certificate;
mod flow;
mod oracle;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

pub use certificate::{is_conflict_free_connected, Certificate, CertificateStatus, PairWitness};
pub use flow::{exists_conflict_free_path, PathFinder};
pub use oracle::{exists_conflict_free_path_oracle, DEFAULT_PATH_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("coloring has {found} entries but the graph has {expected} edges")]
    LengthMismatch { expected: usize, found: usize },
    #[error("edge {0} has color 0; colors start at 1")]
    ZeroColor(usize),
    #[error("vertex sequence is not a path in the graph")]
    NotAPath,
    #[error("vertex sequence repeats a vertex")]
    NotSimple,
    #[error("endpoints coincide")]
    SameVertex,
    #[error("path enumeration exceeded {0} paths")]
    PathExplosion(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A total map from edge index to a color `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeColoring {
    colors: Vec<u32>,
}

/// A conflict-free path together with the color that occurs exactly once on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub path: Vec<usize>,
    pub pivot_color: u32,
}

impl EdgeColoring {
    pub fn new(g: &Graph, colors: Vec<u32>) -> Result<Self, ColoringError> {
        if colors.len() != g.m() {
            return Err(ColoringError::LengthMismatch {
                expected: g.m(),
                found: colors.len(),
            });
        }
        if let Some(e) = colors.iter().position(|&c| c == 0) {
            return Err(ColoringError::ZeroColor(e));
        }
        Ok(EdgeColoring { colors })
    }

    /// Every edge gets its own color, `1..=m` in edge order.
    pub fn rainbow(g: &Graph) -> Self {
        EdgeColoring {
            colors: (1..=g.m() as u32).collect(),
        }
    }

    pub fn monochromatic(g: &Graph) -> Self {
        EdgeColoring {
            colors: vec![1; g.m()],
        }
    }

    pub fn color(&self, e: usize) -> u32 {
        self.colors[e]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of distinct colors used.
    pub fn palette_size(&self) -> usize {
        let mut seen: Vec<u32> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Renumbers colors `1..=palette_size` by order of first appearance.
    pub fn normalized(&self) -> Self {
        let mut map = HashMap::new();
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                let next = map.len() as u32 + 1;
                *map.entry(c).or_insert(next)
            })
            .collect();
        EdgeColoring { colors }
    }

    /// Number of edges of each color.
    pub fn class_sizes(&self) -> HashMap<u32, usize> {
        let mut sizes = HashMap::new();
        for &c in &self.colors {
            *sizes.entry(c).or_insert(0) += 1;
        }
        sizes
    }

    pub(crate) fn check_against(&self, g: &Graph) -> Result<(), ColoringError> {
        if self.colors.len() == g.m() {
            Ok(())
        } else {
            Err(ColoringError::LengthMismatch {
                expected: g.m(),
                found: self.colors.len(),
            })
        }
    }
}

/// Edge indices along a vertex sequence, validating that it is a simple path.
pub fn path_edges(g: &Graph, path: &[usize]) -> Result<Vec<usize>, ColoringError> {
    if path.is_empty() || path.iter().any(|&v| v >= g.n()) {
        return Err(ColoringError::NotAPath);
    }
    let mut seen = vec![false; g.n()];
    for &v in path {
        if std::mem::replace(&mut seen[v], true) {
            return Err(ColoringError::NotSimple);
        }
    }
    path.windows(2)
        .map(|w| g.edge_index(w[0], w[1]).ok_or(ColoringError::NotAPath))
        .collect()
}

/// The colors that occur exactly once on the given edges, in edge order.
pub(crate) fn unique_colors(c: &EdgeColoring, edges: &[usize]) -> Vec<u32> {
    edges
        .iter()
        .map(|&e| c.color(e))
        .filter(|&col| edges.iter().filter(|&&f| c.color(f) == col).count() == 1)
        .collect()
}

/// True iff some color appears on exactly one edge of `path`.
pub fn is_conflict_free_path(
    g: &Graph,
    c: &EdgeColoring,
    path: &[usize],
) -> Result<bool, ColoringError> {
    c.check_against(g)?;
    let edges = path_edges(g, path)?;
    Ok(!unique_colors(c, &edges).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn single_edge_path_is_conflict_free() {
        let g = p3();
        let c = EdgeColoring::monochromatic(&g);
        assert!(is_conflict_free_path(&g, &c, &[0, 1]).unwrap());
    }

    #[test]
    fn monochromatic_two_edge_path_is_not() {
        let g = p3();
        let c = EdgeColoring::monochromatic(&g);
        assert!(!is_conflict_free_path(&g, &c, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn one_two_one_path() {
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let c = EdgeColoring::new(&g, vec![1, 2, 1]).unwrap();
        assert!(is_conflict_free_path(&g, &c, &[0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn path_validation_errors() {
        let g = p3();
        let c = EdgeColoring::monochromatic(&g);
        assert_eq!(
            is_conflict_free_path(&g, &c, &[0, 2]),
            Err(ColoringError::NotAPath)
        );
        assert_eq!(
            is_conflict_free_path(&g, &c, &[0, 1, 0]),
            Err(ColoringError::NotSimple)
        );
        assert_eq!(
            is_conflict_free_path(&g, &c, &[]),
            Err(ColoringError::NotAPath)
        );
    }

    #[test]
    fn coloring_construction_and_normalization() {
        let g = Graph::complete(3);
        assert_eq!(
            EdgeColoring::new(&g, vec![1, 2]),
            Err(ColoringError::LengthMismatch {
                expected: 3,
                found: 2
            })
        );
        assert_eq!(
            EdgeColoring::new(&g, vec![1, 0, 2]),
            Err(ColoringError::ZeroColor(1))
        );
        let c = EdgeColoring::new(&g, vec![7, 3, 7]).unwrap();
        assert_eq!(c.palette_size(), 2);
        assert_eq!(c.normalized().colors(), &[1, 2, 1]);
        assert_eq!(EdgeColoring::rainbow(&g).palette_size(), 3);
    }
}
