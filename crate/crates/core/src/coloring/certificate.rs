use serde::{Deserialize, Serialize};

use super::{path_edges, unique_colors, ColoringError, EdgeColoring, PathFinder};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub u: usize,
    pub v: usize,
    pub path: Vec<usize>,
    pub pivot_color: u32,
}

/// Outcome of an all-pairs check. A passing certificate holds one witness
/// per unordered pair `u < v`, in lexicographic order; a failing one names
/// the first pair without a conflict-free path and keeps the witnesses
/// found before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: CertificateStatus,
    pub pairs: Vec<PairWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failing_pair: Option<(usize, usize)>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.status == CertificateStatus::Pass
    }

    /// Re-validates every witness independently of how it was found.
    pub fn recheck(&self, g: &Graph, c: &EdgeColoring) -> Result<bool, ColoringError> {
        for w in &self.pairs {
            if w.path.first() != Some(&w.u) || w.path.last() != Some(&w.v) {
                return Ok(false);
            }
            let edges = path_edges(g, &w.path)?;
            if !unique_colors(c, &edges).contains(&w.pivot_color) {
                return Ok(false);
            }
        }
        let expected = g.n() * g.n().saturating_sub(1) / 2;
        Ok(match self.status {
            CertificateStatus::Pass => self.pairs.len() == expected && self.failing_pair.is_none(),
            CertificateStatus::Fail => self.failing_pair.is_some(),
        })
    }
}

pub fn is_conflict_free_connected(
    g: &Graph,
    c: &EdgeColoring,
) -> Result<Certificate, ColoringError> {
    c.check_against(g)?;
    g.require_connected()?;
    let mut finder = PathFinder::new(g);
    let mut pairs = Vec::with_capacity(g.n() * g.n().saturating_sub(1) / 2);
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            match finder.conflict_free_path(c, u, v) {
                Some(w) => pairs.push(PairWitness {
                    u,
                    v,
                    path: w.path,
                    pivot_color: w.pivot_color,
                }),
                None => {
                    return Ok(Certificate {
                        status: CertificateStatus::Fail,
                        pairs,
                        failing_pair: Some((u, v)),
                    })
                }
            }
        }
    }
    Ok(Certificate {
        status: CertificateStatus::Pass,
        pairs,
        failing_pair: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphError;

    #[test]
    fn rainbow_tree_passes() {
        let t = Graph::from_edge_list(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]).unwrap();
        let c = EdgeColoring::rainbow(&t);
        let cert = is_conflict_free_connected(&t, &c).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.pairs.len(), 15);
        assert!(cert.recheck(&t, &c).unwrap());
    }

    #[test]
    fn monochromatic_p3_fails_at_end_pair() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let c = EdgeColoring::monochromatic(&g);
        let cert = is_conflict_free_connected(&g, &c).unwrap();
        assert_eq!(cert.status, CertificateStatus::Fail);
        assert_eq!(cert.failing_pair, Some((0, 2)));
        assert!(cert.recheck(&g, &c).unwrap());
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        let c = EdgeColoring::monochromatic(&g);
        assert_eq!(
            is_conflict_free_connected(&g, &c),
            Err(ColoringError::Graph(GraphError::Disconnected))
        );
    }

    #[test]
    fn json_shape() {
        let g = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        let c = EdgeColoring::monochromatic(&g);
        let cert = is_conflict_free_connected(&g, &c).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["status"], "fail");
        assert_eq!(json["failing_pair"], serde_json::json!([0, 2]));
        let c = EdgeColoring::new(&g, vec![1, 2]).unwrap();
        let cert = is_conflict_free_connected(&g, &c).unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["status"], "pass");
        assert!(json.get("failing_pair").is_none());
        assert_eq!(json["pairs"][1]["path"], serde_json::json!([0, 1, 2]));
    }
}
