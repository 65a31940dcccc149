//! Acceptance criteria. Runs as a plain binary (`harness = false`) so that
//! every criterion prints one PASS/FAIL line even when all of them pass.
//!
//! Expected values are computed here, independently of the library code
//! under test, wherever they are not fixed by the claim itself.

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cfc_core::alpha::{independence_number, independence_number_exhaustive};
use cfc_core::coloring::{
    exists_conflict_free_path, exists_conflict_free_path_oracle, is_conflict_free_connected,
    is_conflict_free_path, DEFAULT_PATH_CAP,
};
use cfc_core::construct::{
    color_path_ruler, color_subdivided_star, color_subdivided_star_with_tails,
    color_tree_with_max_degree, color_within_alpha,
};
use cfc_core::families::{
    self, enumerate_connected_graphs, enumerate_connected_graphs_by_extension, enumerate_trees,
    enumerate_trees_by_level_sequences,
};
use cfc_core::graph::{canonical_form, cut_edges_by_deletion};
use cfc_core::harness::random_qualifying_trees;
use cfc_core::solver::{cfc_exact, satisfies_unique_component_condition, CfcOptions, SolverError};
use cfc_core::{EdgeColoring, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn exact(g: &Graph) -> Result<usize, String> {
    cfc_exact(g, &CfcOptions::trivial())
        .map(|r| r.value)
        .map_err(|e| format!("{:?}: {e}", g.edges()))
}

fn alpha(g: &Graph) -> usize {
    independence_number(g).expect("non-empty").value
}

fn verifies(g: &Graph, c: &EdgeColoring) -> bool {
    is_conflict_free_connected(g, c)
        .expect("valid input")
        .passed()
}

/// Smallest `c` with `2^c >= x`.
fn log2_ceiling(x: usize) -> usize {
    let mut c = 0;
    while (1usize << c) < x {
        c += 1;
    }
    c
}

fn is_complete(g: &Graph) -> bool {
    g.m() == g.n() * (g.n() - 1) / 2
}

fn is_spanning_star(g: &Graph) -> bool {
    g.m() == g.n() - 1 && (0..g.n()).any(|v| g.degree(v) == g.n() - 1)
}

fn connected_graphs(max_n: usize) -> Vec<Graph> {
    (2..=max_n)
        .flat_map(|n| enumerate_connected_graphs(n).unwrap())
        .collect()
}

fn trees(max_n: usize) -> Vec<Graph> {
    (2..=max_n)
        .flat_map(|n| enumerate_trees(n).unwrap())
        .collect()
}

fn criterion1() -> Verdict {
    let mut values = Vec::new();
    for m in 1..=10 {
        let g = families::path(m).unwrap();
        let expected = log2_ceiling(m + 1);
        let c = exact(&g)?;
        ensure!(
            c == expected,
            "path with {m} edges: cfc {c}, expected {expected}"
        );
        let ruler = color_path_ruler(m).map_err(|e| e.to_string())?;
        ensure!(
            ruler.palette_size() == expected,
            "ruler palette {} on m = {m}",
            ruler.palette_size()
        );
        ensure!(verifies(&g, &ruler), "ruler coloring fails on m = {m}");
        values.push(c.to_string());
    }
    Ok(format!("cfc(P_m), m = 1..10: {}", values.join(",")))
}

fn criterion2() -> Verdict {
    for k in 3..=5 {
        let h = families::subdivided_star(k).unwrap();
        let q = families::subdivided_star_with_tails(k).unwrap();
        ensure!(exact(&h)? == k, "H_{k}: cfc differs from {k}");
        ensure!(exact(&q)? == k, "Q_{k}: cfc differs from {k}");
    }
    for k in 3..=8 {
        let h = families::subdivided_star(k).unwrap();
        let q = families::subdivided_star_with_tails(k).unwrap();
        let ch = color_subdivided_star(k).map_err(|e| e.to_string())?;
        let cq = color_subdivided_star_with_tails(k).map_err(|e| e.to_string())?;
        ensure!(
            verifies(&h, &ch) && ch.palette_size() == k,
            "H_{k} coloring"
        );
        ensure!(
            verifies(&q, &cq) && cq.palette_size() == k,
            "Q_{k} coloring"
        );
    }
    Ok("exact k for k = 3..5; explicit k-colorings verify for k = 3..8".into())
}

fn criterion3() -> Verdict {
    let corpus = connected_graphs(6);
    for g in &corpus {
        let n = g.n();
        let (c, a) = (exact(g)?, alpha(g));
        ensure!(
            1 <= c && c <= a && a < n,
            "{:?}: cfc {c}, alpha {a}",
            g.edges()
        );
        ensure!(
            (c == 1) == is_complete(g),
            "{:?}: cfc = 1 iff complete",
            g.edges()
        );
        ensure!(
            (c == n - 1) == is_spanning_star(g),
            "{:?}: cfc = n-1 iff star",
            g.edges()
        );
    }
    Ok(format!("{} connected graphs, 2 <= n <= 6", corpus.len()))
}

fn criterion4() -> Verdict {
    let mut exhaustive = 0;
    for t in trees(10) {
        let (d, a) = (
            t.max_degree(),
            independence_number_exhaustive(&t).unwrap().value,
        );
        if 2 * d < a + 2 {
            continue;
        }
        exhaustive += 1;
        ensure!(
            exact(&t)? == d,
            "{:?}: cfc differs from maxdeg {d}",
            t.edges()
        );
        let built = color_tree_with_max_degree(&t).map_err(|e| format!("{:?}: {e}", t.edges()))?;
        ensure!(
            built.coloring.palette_size() == d,
            "{:?}: construction palette",
            t.edges()
        );
        ensure!(
            verifies(&t, &built.coloring),
            "{:?}: construction fails",
            t.edges()
        );
    }
    let random = random_qualifying_trees(100, 2024).map_err(|e| e.to_string())?;
    let mut exact_checked = 0;
    for t in &random {
        let d = t.max_degree();
        ensure!(t.is_tree() && t.n() <= 40, "sampler produced a non-tree");
        ensure!(
            2 * d >= alpha(t) + 2,
            "sampler produced a non-qualifying tree"
        );
        let built = color_tree_with_max_degree(t).map_err(|e| format!("{:?}: {e}", t.edges()))?;
        ensure!(
            built.coloring.palette_size() == d,
            "{:?}: construction palette",
            t.edges()
        );
        ensure!(
            verifies(t, &built.coloring),
            "{:?}: construction fails",
            t.edges()
        );
        if t.m() <= 20 {
            exact_checked += 1;
            ensure!(
                exact(t)? == d,
                "{:?}: cfc differs from maxdeg {d}",
                t.edges()
            );
        }
    }
    Ok(format!(
        "{exhaustive} qualifying trees n <= 10; 100 random (n <= 40), {exact_checked} also exact"
    ))
}

fn criterion5() -> Verdict {
    let mut with_cut = 0;
    let mut condition_held = 0;
    for g in connected_graphs(6) {
        let bridges = cut_edges_by_deletion(&g);
        if bridges.is_empty() {
            continue;
        }
        with_cut += 1;
        let c = exact(&g)?;
        let span = g.edge_subgraph(&bridges.iter().map(|e| e.index()).collect::<Vec<_>>());
        let mut h = 0;
        for comp in span.graph.components() {
            h = h.max(exact(&comp.graph)?);
        }
        ensure!(h <= c && c <= h + 1, "{:?}: cfc {c}, h {h}", g.edges());
        match satisfies_unique_component_condition(&g) {
            Ok(true) => {
                condition_held += 1;
                ensure!(c == h, "{:?}: condition holds, cfc {c} != h {h}", g.edges());
            }
            Ok(false) => {}
            Err(SolverError::HTooSmall(_)) => ensure!(h < 2, "HTooSmall with h = {h}"),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!(
        "{with_cut} graphs with cut-edges; condition held on {condition_held}"
    ))
}

fn criterion6() -> Verdict {
    let n = 8;
    let mut cells = 0;
    for l in 3..=6 {
        for k in 2..=l {
            let g = families::independence_family(n, l, k).unwrap();
            let a = independence_number_exhaustive(&g).unwrap().value;
            ensure!(a == l, "(l, k) = ({l}, {k}): alpha {a}");
            let c = exact(&g)?;
            ensure!(c == k, "(l, k) = ({l}, {k}): cfc {c}");
            cells += 1;
        }
    }
    Ok(format!("{cells} (l, k) cells on 8 vertices"))
}

fn criterion7() -> Verdict {
    for k in 3..=4 {
        let t = families::glued_stars(k).unwrap();
        let (d, a, c) = (t.max_degree(), alpha(&t), exact(&t)?);
        ensure!(
            d == k - 1 && c == k && c > d,
            "glued stars k = {k}: cfc {c}, maxdeg {d}"
        );
        ensure!(2 * d == a + 1, "glued stars k = {k}: alpha {a}");
    }
    let g = families::bridged_stars(3).unwrap();
    let (d, a, c) = (g.max_degree(), alpha(&g), exact(&g)?);
    ensure!(c == 3 && d == 3, "bridged stars: cfc {c}, maxdeg {d}");
    ensure!(2 * d < a + 2, "bridged stars: alpha {a}");
    Ok("glued stars k = 3, 4: cfc = k > maxdeg; bridged stars k = 3: cfc = maxdeg".into())
}

fn compare_all_pairs(g: &Graph, c: &EdgeColoring) -> Result<usize, String> {
    let mut pairs = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let flow = exists_conflict_free_path(g, c, u, v).map_err(|e| e.to_string())?;
            let oracle = exists_conflict_free_path_oracle(g, c, u, v, DEFAULT_PATH_CAP)
                .map_err(|e| e.to_string())?;
            ensure!(
                flow.is_some() == oracle.is_some(),
                "{:?} colors {:?} pair ({u}, {v}): flow {} oracle {}",
                g.edges(),
                c.colors(),
                flow.is_some(),
                oracle.is_some()
            );
            if let Some(w) = flow {
                let ok = is_conflict_free_path(g, c, &w.path).map_err(|e| e.to_string())?;
                ensure!(
                    ok && w.path[0] == u && *w.path.last().unwrap() == v,
                    "bad witness"
                );
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    loop {
        let p = rng.gen_range(0.2..0.9);
        let pairs: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edge_list(n, &pairs).unwrap();
        if g.is_connected().unwrap() {
            return g;
        }
    }
}

fn criterion8() -> Verdict {
    // Connected graphs with at most 6 edges have at most 7 vertices; on 7
    // vertices they are exactly the trees.
    let mut corpus: Vec<Graph> = connected_graphs(6)
        .into_iter()
        .filter(|g| g.m() <= 6)
        .collect();
    corpus.extend(enumerate_trees(7).unwrap());
    let mut pairs = 0;
    let mut colorings = 0;
    for g in &corpus {
        for mask in 0u32..1 << g.m() {
            let colors = (0..g.m()).map(|e| 1 + (mask >> e & 1)).collect();
            let c = EdgeColoring::new(g, colors).unwrap();
            pairs += compare_all_pairs(g, &c)?;
            colorings += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..500 {
        let n = rng.gen_range(2..=7);
        let g = random_connected(&mut rng, n);
        let palette = rng.gen_range(1..=4);
        let colors = (0..g.m()).map(|_| rng.gen_range(1..=palette)).collect();
        let c = EdgeColoring::new(&g, colors).unwrap();
        pairs += compare_all_pairs(&g, &c)?;
        colorings += 1;
    }
    Ok(format!(
        "{colorings} colorings, {pairs} pairs, 0 disagreements"
    ))
}

fn criterion9() -> Verdict {
    let corpus = connected_graphs(6);
    for g in &corpus {
        let built = color_within_alpha(g).map_err(|e| format!("{:?}: {e}", g.edges()))?;
        let a = independence_number_exhaustive(g).unwrap().value;
        ensure!(
            built.coloring.palette_size() <= a,
            "{:?}: palette above alpha",
            g.edges()
        );
        ensure!(
            verifies(g, &built.coloring),
            "{:?}: coloring fails",
            g.edges()
        );
    }
    Ok(format!("{} connected graphs, 2 <= n <= 6", corpus.len()))
}

fn forms(gs: &[Graph]) -> Vec<Vec<u8>> {
    let mut f: Vec<Vec<u8>> = gs.iter().map(|g| canonical_form(g).unwrap()).collect();
    f.sort();
    f
}

fn criterion10() -> Verdict {
    let a = forms(&enumerate_trees(10).unwrap());
    let b = forms(&enumerate_trees_by_level_sequences(10).unwrap());
    ensure!(a == b, "tree orders disagree: {} vs {}", a.len(), b.len());
    let c = forms(&enumerate_connected_graphs(6).unwrap());
    let d = forms(&enumerate_connected_graphs_by_extension(6).unwrap());
    ensure!(c == d, "graph orders disagree: {} vs {}", c.len(), d.len());
    ensure!(a.len() == 106, "{} trees on 10 vertices", a.len());
    ensure!(c.len() == 112, "{} connected graphs on 6 vertices", c.len());
    Ok(format!(
        "{} trees on 10 vertices, {} connected graphs on 6; both orders agree",
        a.len(),
        c.len()
    ))
}

type Criterion = (&'static str, fn() -> Verdict, Duration);

fn main() -> ExitCode {
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let criteria: [Criterion; 10] = [
        ("path values", criterion1, Duration::from_secs(10)),
        ("subdivided stars", criterion2, minutes(2)),
        ("alpha bound, exhaustive", criterion3, minutes(10)),
        ("max-degree trees", criterion4, minutes(10)),
        ("cut-edge sandwich", criterion5, minutes(10)),
        ("independence family grid", criterion6, minutes(10)),
        ("sharpness examples", criterion7, minutes(10)),
        ("verifier vs oracle", criterion8, minutes(10)),
        ("alpha construction", criterion9, minutes(10)),
        ("corpus sanity", criterion10, minutes(10)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let verdict = match verdict {
            Ok(detail) if took > *limit => {
                Err(format!("{detail}; took {took:.1?}, limit {limit:?}"))
            }
            v => v,
        };
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({took:.1?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({took:.1?})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
