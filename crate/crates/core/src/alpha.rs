//! Exact maximum independent set.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaResult {
    pub value: usize,
    /// Sorted vertex labels of one maximum independent set.
    pub witness: Vec<usize>,
}

pub fn is_independent(g: &Graph, set: &[usize]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !g.has_edge(u, v)))
}

struct Solver<'a> {
    g: &'a Graph,
    adj: Vec<FixedBitSet>,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl Solver<'_> {
    fn degree_in(&self, v: usize, cand: &FixedBitSet) -> usize {
        self.adj[v].intersection(cand).count()
    }

    /// `|cand|` minus the size of a greedy matching inside `cand`: any
    /// matching edge contributes at most one vertex to an independent set.
    fn upper_bound(&self, cand: &FixedBitSet) -> usize {
        let mut free = cand.clone();
        let mut matched = 0;
        for v in cand.ones() {
            if !free.contains(v) {
                continue;
            }
            if let Some(w) = self.adj[v].ones().find(|&w| free.contains(w)) {
                free.set(v, false);
                free.set(w, false);
                matched += 1;
            }
        }
        cand.count_ones(..) - matched
    }

    fn take(&mut self, v: usize, cand: &mut FixedBitSet) {
        self.current.push(v);
        cand.set(v, false);
        cand.difference_with(&self.adj[v]);
    }

    fn search(&mut self, mut cand: FixedBitSet) {
        let depth = self.current.len();
        // Vertices of degree <= 1 inside `cand` belong to some maximum set.
        loop {
            let simple = cand.ones().find(|&v| self.degree_in(v, &cand) <= 1);
            match simple {
                Some(v) => self.take(v, &mut cand),
                None => break,
            }
        }
        if cand.is_clear() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
        } else if self.current.len() + self.upper_bound(&cand) > self.best.len() {
            // Branch on the lowest-index vertex of maximum degree.
            let (v, _) = cand
                .ones()
                .map(|v| (v, self.degree_in(v, &cand)))
                .fold((usize::MAX, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
            let mut with = cand.clone();
            self.take(v, &mut with);
            self.search(with);
            self.current.pop();

            let mut without = cand;
            without.set(v, false);
            self.search(without);
        }
        self.current.truncate(depth);
    }
}

/// Greedy minimum-degree independent set, used as the initial incumbent.
fn greedy(g: &Graph, adj: &[FixedBitSet]) -> Vec<usize> {
    let mut cand = FixedBitSet::with_capacity(g.n());
    cand.insert_range(..);
    let mut set = Vec::new();
    while let Some(v) = cand
        .ones()
        .min_by_key(|&v| (adj[v].intersection(&cand).count(), v))
    {
        set.push(v);
        cand.set(v, false);
        cand.difference_with(&adj[v]);
    }
    set
}

/// α(G) with a witness, by branch and bound.
pub fn independence_number(g: &Graph) -> Result<AlphaResult, GraphError> {
    if g.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let adj: Vec<FixedBitSet> = (0..g.n())
        .map(|v| {
            let mut s = FixedBitSet::with_capacity(g.n());
            g.neighbors(v).for_each(|w| s.insert(w));
            s
        })
        .collect();
    let best = greedy(g, &adj);
    let mut solver = Solver {
        g,
        adj,
        best,
        current: Vec::new(),
    };
    let mut all = FixedBitSet::with_capacity(g.n());
    all.insert_range(..);
    solver.search(all);
    let mut witness = solver.best;
    witness.sort_unstable();
    debug_assert!(is_independent(solver.g, &witness));
    Ok(AlphaResult {
        value: witness.len(),
        witness,
    })
}

/// Exhaustive subset search. Reference implementation for `n <= 20`.
pub fn independence_number_exhaustive(g: &Graph) -> Result<AlphaResult, GraphError> {
    const LIMIT: usize = 20;
    if g.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    if g.n() > LIMIT {
        return Err(GraphError::TooLarge {
            n: g.n(),
            limit: LIMIT,
        });
    }
    let adj: Vec<u32> = (0..g.n())
        .map(|v| g.neighbors(v).fold(0, |acc, w| acc | 1 << w))
        .collect();
    let mut best = 0u32;
    for mask in 0u32..1 << g.n() {
        if mask.count_ones() <= best.count_ones() {
            continue;
        }
        let independent = (0..g.n()).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0);
        if independent {
            best = mask;
        }
    }
    let witness: Vec<usize> = (0..g.n()).filter(|&v| best >> v & 1 == 1).collect();
    Ok(AlphaResult {
        value: witness.len(),
        witness,
    })
}
