//! Isomorphism-invariant byte encodings.
//!
//! Trees use the AHU parenthesis encoding rooted at the center (the smaller
//! of the two encodings when there are two centers). Other graphs use the
//! lexicographically greatest adjacency code over all vertex orders that
//! respect an iterated degree refinement, with prefix pruning.

use super::{Graph, GraphError};

pub const DEFAULT_CANON_LIMIT: usize = 10;

const TREE_TAG: u8 = b'T';
const GENERAL_TAG: u8 = b'G';

pub fn canonical_form(g: &Graph) -> Result<Vec<u8>, GraphError> {
    canonical_form_with_limit(g, DEFAULT_CANON_LIMIT)
}

/// Trees are accepted at any size; other graphs only up to `limit`
/// vertices (and never beyond 64).
pub fn canonical_form_with_limit(g: &Graph, limit: usize) -> Result<Vec<u8>, GraphError> {
    if g.is_tree() {
        return Ok(tree_form(g));
    }
    let limit = limit.min(64);
    if g.n() > limit {
        return Err(GraphError::TooLarge { n: g.n(), limit });
    }
    Ok(general_form(g))
}

fn tree_form(g: &Graph) -> Vec<u8> {
    let best = g
        .tree_centers()
        .into_iter()
        .map(|c| ahu(g, c, usize::MAX))
        .min()
        .expect("a tree has a center");
    let mut out = Vec::with_capacity(best.len() + 1);
    out.push(TREE_TAG);
    out.extend(best);
    out
}

fn ahu(g: &Graph, v: usize, parent: usize) -> Vec<u8> {
    let mut children: Vec<Vec<u8>> = g
        .neighbors(v)
        .filter(|&w| w != parent)
        .map(|w| ahu(g, w, v))
        .collect();
    children.sort_unstable();
    let mut out = Vec::with_capacity(2 + children.iter().map(Vec::len).sum::<usize>());
    out.push(b'(');
    for c in children {
        out.extend(c);
    }
    out.push(b')');
    out
}

/// Stable colour refinement starting from degrees. Colours are ranks of
/// sorted signatures, so they depend only on the isomorphism class.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = {
        let mut c = color.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).map(|w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        color = sigs
            .iter()
            .map(|s| sorted.binary_search(s).expect("present"))
            .collect();
        if sorted.len() == classes {
            return color;
        }
        classes = sorted.len();
    }
}

struct Search<'a> {
    adj: &'a [u64],
    /// Cell index for each position in the ordering.
    cell_of_pos: Vec<usize>,
    cells: Vec<Vec<usize>>,
    used: u64,
    order: Vec<usize>,
    rows: Vec<u64>,
    best: Option<Vec<u64>>,
}

impl Search<'_> {
    fn dfs(&mut self, pos: usize) {
        let n = self.cell_of_pos.len();
        if pos == n {
            self.best = Some(self.rows.clone());
            return;
        }
        let cell = self.cell_of_pos[pos];
        for i in 0..self.cells[cell].len() {
            let v = self.cells[cell][i];
            if self.used & (1 << v) != 0 {
                continue;
            }
            let mut row = 0u64;
            for (i, &p) in self.order.iter().enumerate() {
                if self.adj[v] & (1 << p) != 0 {
                    row |= 1 << (pos - 1 - i);
                }
            }
            self.rows.push(row);
            let worse = match &self.best {
                Some(best) => self.rows[..] < best[..=pos],
                None => false,
            };
            if !worse {
                self.used |= 1 << v;
                self.order.push(v);
                self.dfs(pos + 1);
                self.order.pop();
                self.used &= !(1 << v);
            }
            self.rows.pop();
        }
    }
}

fn general_form(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let color = refine(g);
    let ncells = color.iter().copied().max().map_or(0, |c| c + 1);
    let mut cells = vec![Vec::new(); ncells];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    let cell_of_pos: Vec<usize> = cells
        .iter()
        .enumerate()
        .flat_map(|(c, vs)| std::iter::repeat_n(c, vs.len()))
        .collect();
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).fold(0u64, |acc, w| acc | (1 << w)))
        .collect();
    let mut search = Search {
        adj: &adj,
        cell_of_pos,
        cells,
        used: 0,
        order: Vec::with_capacity(n),
        rows: Vec::with_capacity(n),
        best: None,
    };
    search.dfs(0);
    let rows = search.best.unwrap_or_default();

    let mut out = vec![GENERAL_TAG, n as u8];
    // The cell sizes are part of the invariant; include them so that the
    // adjacency bits alone never have to distinguish refinements.
    for c in &search.cells {
        out.push(c.len() as u8);
    }
    out.push(0xff);
    let mut acc = 0u8;
    let mut nbits = 0;
    for (pos, row) in rows.iter().enumerate() {
        for b in (0..pos).rev() {
            acc = (acc << 1) | ((row >> b) & 1) as u8;
            nbits += 1;
            if nbits == 8 {
                out.push(acc);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(acc << (8 - nbits));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relabelled_paths_agree() {
        let a = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::from_edge_list(4, &[(3, 1), (1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn triangle_differs_from_path() {
        let k3 = Graph::complete(3);
        let p3 = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_ne!(canonical_form(&k3).unwrap(), canonical_form(&p3).unwrap());
    }

    #[test]
    fn labelled_trees_on_four_vertices_give_two_forms() {
        // All 16 labelled trees on 4 vertices, from every 3-edge subset of K_4.
        let k4 = Graph::complete(4);
        let mut forms = std::collections::BTreeSet::new();
        let mut trees = 0;
        for mask in 0u32..64 {
            if mask.count_ones() != 3 {
                continue;
            }
            let pairs: Vec<_> = (0..6)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| k4.edge(i))
                .collect();
            let g = Graph::from_edge_list(4, &pairs).unwrap();
            if g.is_tree() {
                trees += 1;
                forms.insert(canonical_form(&g).unwrap());
            }
        }
        assert_eq!(trees, 16);
        assert_eq!(forms.len(), 2);
    }

    #[test]
    fn too_large_general_graph() {
        let g = Graph::complete(11);
        assert_eq!(
            canonical_form(&g),
            Err(GraphError::TooLarge { n: 11, limit: 10 })
        );
        assert!(canonical_form_with_limit(&g, 12).is_ok());
    }

    #[test]
    fn invariant_under_random_relabelling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let graphs = [
            // Petersen graph: highly symmetric, refinement gives one cell.
            Graph::from_edge_list(
                10,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 0),
                    (0, 5),
                    (1, 6),
                    (2, 7),
                    (3, 8),
                    (4, 9),
                    (5, 7),
                    (7, 9),
                    (9, 6),
                    (6, 8),
                    (8, 5),
                ],
            )
            .unwrap(),
            Graph::from_edge_list(
                7,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 0),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (5, 3),
                    (5, 6),
                ],
            )
            .unwrap(),
            Graph::from_edge_list(
                9,
                &[
                    (0, 1),
                    (0, 2),
                    (0, 3),
                    (1, 4),
                    (2, 5),
                    (3, 6),
                    (4, 7),
                    (6, 8),
                ],
            )
            .unwrap(),
        ];
        for g in &graphs {
            let base = canonical_form(g).unwrap();
            for _ in 0..100 {
                let mut perm: Vec<usize> = (0..g.n()).collect();
                perm.shuffle(&mut rng);
                assert_eq!(canonical_form(&g.relabel(&perm)).unwrap(), base);
            }
        }
    }

    #[test]
    fn distinguishes_cospectral_like_pairs() {
        // C_6 and two disjoint triangles are both 2-regular on 6 vertices.
        let c6 =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let tt =
            Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_ne!(canonical_form(&c6).unwrap(), canonical_form(&tt).unwrap());
    }
}
