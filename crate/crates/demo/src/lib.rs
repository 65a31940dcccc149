//! Browser bindings. Each exported function takes and returns JSON text so
//! the page needs no generated glue beyond what wasm-bindgen emits. The
//! plain functions in [`api`] do the work and are what the native tests call.

use wasm_bindgen::prelude::*;

pub mod api {
    use cfc_core::alpha::independence_number;
    use cfc_core::coloring::{exists_conflict_free_path, is_conflict_free_connected};
    use cfc_core::construct::{
        color_subdivided_star, color_subdivided_star_with_tails, color_tree_with_max_degree,
        color_within_alpha,
    };
    use cfc_core::families::{self, FamilySpec};
    use cfc_core::graph::io::{parse_colored_edge_list, parse_graph_auto};
    use cfc_core::solver::{cfc_exact, CfcOptions};
    use cfc_core::{EdgeColoring, Graph};
    use serde::Serialize;

    /// Exact search is exponential; keep the page responsive.
    pub const MAX_EXACT_EDGES: usize = 16;

    #[derive(Debug, Serialize)]
    pub struct ColoredGraph {
        pub n: usize,
        pub edges: Vec<(usize, usize)>,
        pub colors: Vec<u32>,
        pub palette: usize,
        pub alpha: usize,
        pub max_degree: usize,
        pub method: &'static str,
        pub verified: bool,
    }

    #[derive(Debug, Serialize)]
    pub struct ExactResult {
        pub n: usize,
        pub edges: Vec<(usize, usize)>,
        pub value: usize,
        pub colors: Vec<u32>,
        pub lower_bound: usize,
        pub nodes: u64,
    }

    #[derive(Debug, Serialize)]
    pub struct PairPath {
        pub path: Option<Vec<usize>>,
        pub pivot_color: Option<u32>,
    }

    fn to_json<T: Serialize>(v: &T) -> String {
        serde_json::to_string(v).expect("plain data serializes")
    }

    /// Builds a family member and colors it with the most specific
    /// construction that applies.
    pub fn color_family(spec_json: &str) -> Result<String, String> {
        let spec: FamilySpec = serde_json::from_str(spec_json).map_err(|e| e.to_string())?;
        let g = families::gen(spec).map_err(|e| e.to_string())?;
        if g.n() > 60 {
            return Err(format!("{} vertices is too many to draw", g.n()));
        }
        let alpha = independence_number(&g).map_err(|e| e.to_string())?.value;
        let (coloring, method) = match spec {
            FamilySpec::SubdividedStar { k } => (
                color_subdivided_star(k).map_err(|e| e.to_string())?,
                "explicit",
            ),
            FamilySpec::SubdividedStarWithTails { k } => (
                color_subdivided_star_with_tails(k).map_err(|e| e.to_string())?,
                "explicit",
            ),
            _ if g.is_tree() && 2 * g.max_degree() >= alpha + 2 => (
                color_tree_with_max_degree(&g)
                    .map_err(|e| e.to_string())?
                    .coloring,
                "max-degree tree construction",
            ),
            _ => (
                color_within_alpha(&g).map_err(|e| e.to_string())?.coloring,
                "independence-number construction",
            ),
        };
        let verified = is_conflict_free_connected(&g, &coloring)
            .map_err(|e| e.to_string())?
            .passed();
        Ok(to_json(&ColoredGraph {
            n: g.n(),
            edges: g.edges().to_vec(),
            palette: coloring.palette_size(),
            colors: coloring.colors().to_vec(),
            alpha,
            max_degree: g.max_degree(),
            method,
            verified,
        }))
    }

    /// Exact value with an optimal coloring, for graphs given as an edge
    /// list or graph6 string.
    pub fn exact_cfc(graph_text: &str) -> Result<String, String> {
        let g = parse_graph_auto(graph_text).map_err(|e| e.to_string())?;
        if g.m() > MAX_EXACT_EDGES {
            return Err(format!(
                "{} edges; the page solves at most {MAX_EXACT_EDGES}",
                g.m()
            ));
        }
        let r = cfc_exact(&g, &CfcOptions::default()).map_err(|e| e.to_string())?;
        Ok(to_json(&ExactResult {
            n: g.n(),
            edges: g.edges().to_vec(),
            value: r.value,
            colors: r.witness.colors().to_vec(),
            lower_bound: r.lower_bound,
            nodes: r.stats.nodes,
        }))
    }

    /// A conflict-free path between `u` and `v` under the given coloring,
    /// or a null path when none exists.
    pub fn pair_witness(colored_text: &str, u: usize, v: usize) -> Result<String, String> {
        let (g, colors): (Graph, _) =
            parse_colored_edge_list(colored_text).map_err(|e| e.to_string())?;
        let c = EdgeColoring::new(&g, colors).map_err(|e| e.to_string())?;
        if u >= g.n() || v >= g.n() {
            return Err(format!("vertex out of range 0..{}", g.n()));
        }
        let w = exists_conflict_free_path(&g, &c, u, v).map_err(|e| e.to_string())?;
        Ok(to_json(&PairPath {
            pivot_color: w.as_ref().map(|w| w.pivot_color),
            path: w.map(|w| w.path),
        }))
    }
}

#[wasm_bindgen(js_name = colorFamily)]
pub fn color_family(spec_json: &str) -> Result<String, JsValue> {
    api::color_family(spec_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = exactCfc)]
pub fn exact_cfc(graph_text: &str) -> Result<String, JsValue> {
    api::exact_cfc(graph_text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = pairWitness)]
pub fn pair_witness(colored_text: &str, u: usize, v: usize) -> Result<String, JsValue> {
    api::pair_witness(colored_text, u, v).map_err(|e| JsValue::from_str(&e))
}
