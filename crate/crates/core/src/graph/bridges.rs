use super::{EdgeRef, Graph};

/// Lowpoint DFS. An edge `(parent, child)` of the DFS tree is a bridge iff no
/// back edge from the child's subtree reaches `parent` or above, i.e.
/// `low[child] > disc[parent]`.
pub(super) fn cut_edges(g: &Graph) -> Vec<EdgeRef> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut bridges = Vec::new();
    let mut time = 0;
    // (vertex, edge used to enter it, next incident position)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(top) = stack.last_mut() {
            let (v, in_edge, pos) = *top;
            if let Some(&(w, e)) = g.incident(v).get(pos) {
                top.2 += 1;
                if e == in_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.push(EdgeRef(in_edge));
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}

/// Definitional oracle: `e` is a cut-edge iff deleting it increases the
/// number of components.
pub fn cut_edges_by_deletion(g: &Graph) -> Vec<EdgeRef> {
    let base = g.component_count();
    (0..g.m())
        .filter(|&e| g.component_labels_without(|f| f == e).1 == base + 1)
        .map(EdgeRef)
        .collect()
}
