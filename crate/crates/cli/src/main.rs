use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use cfc_core::alpha::independence_number;
use cfc_core::coloring::is_conflict_free_connected;
use cfc_core::construct::{
    color_path_ruler, color_star, color_subdivided_star, color_subdivided_star_with_tails,
    color_tree_with_max_degree, color_within_alpha,
};
use cfc_core::families::{self, FamilySpec, FamilyTag};
use cfc_core::graph::io::{
    parse_colored_edge_list, parse_graph_auto, write_colored_edge_list, write_edge_list,
    write_graph6,
};
use cfc_core::harness::{self, Bounds, CheckId};
use cfc_core::solver::{
    ceil_log2, cfc_exact, h_value, trivial_lower_bound, CfcOptions, SolverError, DEFAULT_EDGE_LIMIT,
};
use cfc_core::{EdgeColoring, Graph};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// `println!` that treats a closed stdout (e.g. piping into `head`) as a
/// normal end of output instead of panicking.
macro_rules! outln {
    ($($arg:tt)*) => {
        if let Err(e) = writeln!(io::stdout().lock(), $($arg)*) {
            stdout_closed(e)
        }
    };
}

fn stdout_closed(e: io::Error) -> ! {
    if e.kind() == io::ErrorKind::BrokenPipe {
        std::process::exit(0);
    }
    eprintln!("error: writing stdout: {e}");
    std::process::exit(3);
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<io::Error>())
        .any(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

#[derive(Parser)]
#[command(
    name = "cfc-lab",
    version,
    about = "Conflict-free connection colorings: exact values, constructions and claim checks"
)]
struct Cli {
    /// Worker threads for the harness (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Independence number with a maximum independent set.
    Alpha {
        /// Edge list or graph6 file, `-` for stdin.
        input: String,
    },
    /// Exact values, bounds and explicit colorings.
    Cfc {
        #[command(subcommand)]
        command: CfcCommand,
    },
    /// Checks that a colored edge list is conflict-free connected.
    VerifyColoring {
        input: String,
        /// Write the per-pair certificate as JSON here.
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Writes a member of a named family.
    Gen {
        #[arg(value_parser = parse_family)]
        family: FamilyTag,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Edge count, for paths.
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long, env = "CFC_LAB_SEED")]
        seed: Option<u64>,
        #[arg(short, long, default_value = "-")]
        output: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::EdgeList)]
        graph_format: GraphFormat,
    },
    /// Every non-isomorphic tree or connected graph on n vertices.
    Enum {
        #[arg(value_enum)]
        kind: EnumKind,
        n: usize,
        /// Directory for one edge-list file per graph; graph6 lines on
        /// stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive and randomized checks of the coloring claims.
    Harness {
        #[command(subcommand)]
        command: HarnessCommand,
    },
}

#[derive(Subcommand)]
enum CfcCommand {
    /// Exact conflict-free connection number.
    Exact {
        input: String,
        /// Give up above this many colors.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_EDGE_LIMIT)]
        edge_limit: usize,
        /// Write an optimal coloring as a colored edge list here.
        #[arg(long)]
        emit_witness: Option<String>,
        /// Report search statistics.
        #[arg(long)]
        stats: bool,
    },
    /// Builds a coloring by one of the explicit procedures.
    Construct {
        #[arg(long, value_enum)]
        method: Method,
        /// Input graph for the recursive methods.
        input: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(short, long, default_value = "-")]
        output: String,
        /// Write the recursion trace as JSON here (recursive methods only).
        #[arg(long)]
        trace: Option<String>,
    },
    /// Cheap lower and upper bounds.
    Bounds { input: String },
}

#[derive(Subcommand)]
enum HarnessCommand {
    Run {
        /// Run only these checks (repeatable).
        #[arg(long = "check", value_parser = parse_check)]
        checks: Vec<CheckId>,
        #[arg(long, default_value_t = Bounds::default().max_n_graphs)]
        max_n_graphs: usize,
        #[arg(long, default_value_t = Bounds::default().max_n_trees)]
        max_n_trees: usize,
        #[arg(long, default_value_t = Bounds::default().random_trees)]
        random_trees: usize,
        #[arg(long, env = "CFC_LAB_SEED", default_value_t = 0)]
        seed: u64,
        /// Full JSON report destination.
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Theorem1,
    Theorem2,
    Hk,
    Qk,
    Star,
    Path,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    #[value(name = "el")]
    EdgeList,
    #[value(name = "g6")]
    Graph6,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumKind {
    Trees,
    Graphs,
}

fn parse_family(s: &str) -> Result<FamilyTag, String> {
    s.parse().map_err(|e: families::FamilyError| e.to_string())
}

fn parse_check(s: &str) -> Result<CheckId, String> {
    s.parse().map_err(|e: harness::HarnessError| e.to_string())
}

enum Failure {
    /// Exit 1: a check or verification came out negative.
    Negative,
    /// Exit 2.
    Usage(String),
    /// Exit 3.
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type CliResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, content: &str) -> anyhow::Result<()> {
    if path == "-" {
        io::stdout()
            .write_all(content.as_bytes())
            .context("writing stdout")
    } else {
        fs::write(path, content).with_context(|| format!("writing {path}"))
    }
}

fn read_graph(path: &str) -> anyhow::Result<Graph> {
    let text = read_input(path)?;
    parse_graph_auto(&text).with_context(|| format!("parsing {path}"))
}

/// Prints `fields` as `key: value` lines, one JSON object, or a CSV row
/// with a header.
fn emit(format: Format, fields: &[(&str, Value)]) {
    match format {
        Format::Text => {
            for (k, v) in fields {
                match v {
                    Value::String(s) => outln!("{k}: {s}"),
                    other => outln!("{k}: {other}"),
                }
            }
        }
        Format::Json => {
            let obj: serde_json::Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            outln!("{}", Value::Object(obj));
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            outln!("{}", keys.join(","));
            let row: Vec<String> = fields
                .iter()
                .map(|(_, v)| match v {
                    Value::String(s) => s.clone(),
                    Value::Null => String::new(),
                    other => other.to_string().replace(',', ";"),
                })
                .collect();
            outln!("{}", row.join(","));
        }
    }
}

fn cmd_alpha(format: Format, input: &str) -> CliResult {
    let g = read_graph(input)?;
    let r = independence_number(&g).map_err(anyhow::Error::from)?;
    if format == Format::Text {
        outln!("{}", r.value);
        let set: Vec<String> = r.witness.iter().map(usize::to_string).collect();
        outln!("{}", set.join(" "));
    } else {
        emit(
            format,
            &[("alpha", json!(r.value)), ("witness", json!(r.witness))],
        );
    }
    Ok(())
}

fn cmd_exact(
    format: Format,
    input: &str,
    cap: Option<usize>,
    edge_limit: usize,
    emit_witness: Option<&str>,
    stats: bool,
) -> CliResult {
    let g = read_graph(input)?;
    let opts = CfcOptions {
        budget_cap: cap,
        edge_limit,
        ..CfcOptions::default()
    };
    let r = match cfc_exact(&g, &opts) {
        Ok(r) => r,
        Err(SolverError::BudgetExceeded { cap }) => {
            eprintln!("no conflict-free connection coloring with at most {cap} colors");
            return Err(Failure::Negative);
        }
        Err(e) => return Err(anyhow::Error::from(e).into()),
    };
    if let Some(path) = emit_witness {
        write_output(path, &write_colored_edge_list(&g, r.witness.colors()))?;
    }
    if format == Format::Text {
        outln!("{}", r.value);
        if stats {
            eprintln!(
                "lower bound {}, nodes {}, colorings {}, prunes {}, {:.1} ms",
                r.lower_bound,
                r.stats.nodes,
                r.stats.colorings_examined,
                r.stats.prunes,
                r.stats.wall_time_ms
            );
        }
    } else {
        let mut fields = vec![
            ("cfc", json!(r.value)),
            ("lower_bound", json!(r.lower_bound)),
        ];
        if stats {
            fields.push(("nodes", json!(r.stats.nodes)));
            fields.push(("colorings_examined", json!(r.stats.colorings_examined)));
            fields.push(("prunes", json!(r.stats.prunes)));
            fields.push(("wall_time_ms", json!(r.stats.wall_time_ms)));
        }
        emit(format, &fields);
    }
    Ok(())
}

fn need(value: Option<usize>, flag: &str, method: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| usage(format!("{method} needs --{flag}")))
}

fn cmd_construct(
    format: Format,
    method: Method,
    input: Option<&str>,
    k: Option<usize>,
    edges: Option<usize>,
    output: &str,
    trace_path: Option<&str>,
) -> CliResult {
    let recursive = matches!(method, Method::Theorem1 | Method::Theorem2);
    if trace_path.is_some() && !recursive {
        return Err(usage("--trace applies to theorem1 and theorem2 only"));
    }
    let (g, coloring, trace) = if recursive {
        let input = input.ok_or_else(|| usage("recursive methods need an input graph"))?;
        let g = read_graph(input)?;
        let built = match method {
            Method::Theorem1 => color_within_alpha(&g),
            _ => color_tree_with_max_degree(&g),
        }
        .map_err(anyhow::Error::from)?;
        (g, built.coloring, Some(built.trace))
    } else {
        let (g, c) = match method {
            Method::Hk => {
                let k = need(k, "k", "hk")?;
                (families::subdivided_star(k), color_subdivided_star(k))
            }
            Method::Qk => {
                let k = need(k, "k", "qk")?;
                (
                    families::subdivided_star_with_tails(k),
                    color_subdivided_star_with_tails(k),
                )
            }
            Method::Star => {
                let k = need(k, "k", "star")?;
                (families::star(k), color_star(k))
            }
            _ => {
                let m = need(edges, "edges", "path")?;
                (families::path(m), color_path_ruler(m))
            }
        };
        let g = g.map_err(|e| usage(e.to_string()))?;
        let c = c.map_err(|e| usage(e.to_string()))?;
        (g, c, None)
    };
    write_output(output, &write_colored_edge_list(&g, coloring.colors()))?;
    if let (Some(path), Some(trace)) = (trace_path, &trace) {
        let text = serde_json::to_string_pretty(trace).map_err(anyhow::Error::from)?;
        write_output(path, &(text + "\n"))?;
    }
    if output != "-" {
        emit(format, &[("palette", json!(coloring.palette_size()))]);
    }
    Ok(())
}

fn cmd_bounds(format: Format, input: &str) -> CliResult {
    let g = read_graph(input)?;
    let lower = trivial_lower_bound(&g).map_err(anyhow::Error::from)?;
    let alpha = independence_number(&g).map_err(anyhow::Error::from)?.value;
    let delta = g.max_degree();
    let mut fields = vec![
        ("n", json!(g.n())),
        ("m", json!(g.m())),
        ("max_degree", json!(delta)),
        ("alpha", json!(alpha)),
        ("trivial_lower", json!(lower)),
    ];
    let mut best_lower = lower;
    let mut best_upper = alpha.min(g.n() - 1);
    if g.is_tree() {
        let d = g.diameter().map_err(anyhow::Error::from)?;
        let tree_lower = delta.max(ceil_log2(d));
        best_lower = best_lower.max(tree_lower);
        fields.push(("diameter", json!(d)));
        fields.push(("tree_lower", json!(tree_lower)));
        if delta >= 3 {
            let up = (delta as f64 - 2.0) * (g.n() as f64).log2() / ((delta as f64).log2() - 1.0);
            best_upper = best_upper.min(up.floor() as usize);
            fields.push(("tree_upper", json!(up)));
        }
    } else if !g.cut_edges().is_empty() && g.m() <= DEFAULT_EDGE_LIMIT {
        match h_value(&g) {
            Ok(h) => {
                best_lower = best_lower.max(h);
                best_upper = best_upper.min(h + 1);
                fields.push(("h", json!(h)));
            }
            Err(e) => eprintln!("h unavailable: {e}"),
        }
    } else if g.cut_edges().is_empty() && !g.is_complete() {
        // No cut-edges and not complete: exactly two colors.
        best_upper = best_upper.min(2);
    }
    fields.push(("lower", json!(best_lower)));
    fields.push(("upper", json!(best_upper)));
    emit(format, &fields);
    Ok(())
}

fn cmd_verify(format: Format, input: &str, certificate: Option<&str>) -> CliResult {
    let text = read_input(input)?;
    let (g, colors) = parse_colored_edge_list(&text).with_context(|| format!("parsing {input}"))?;
    let c = EdgeColoring::new(&g, colors).map_err(anyhow::Error::from)?;
    let cert = is_conflict_free_connected(&g, &c).map_err(anyhow::Error::from)?;
    if let Some(path) = certificate {
        let text = serde_json::to_string_pretty(&cert).map_err(anyhow::Error::from)?;
        write_output(path, &(text + "\n"))?;
    }
    let yes = if cert.passed() { "yes" } else { "no" };
    let mut fields = vec![
        ("conflict-free connected", json!(yes)),
        ("pairs certified", json!(cert.pairs.len())),
        ("colors", json!(c.palette_size())),
    ];
    if let Some((u, v)) = cert.failing_pair {
        fields.push(("failing pair", json!(format!("{u} {v}"))));
    }
    emit(format, &fields);
    if cert.passed() {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: FamilyTag,
    n: Option<usize>,
    k: Option<usize>,
    l: Option<usize>,
    edges: Option<usize>,
    seed: Option<u64>,
    output: &str,
    graph_format: GraphFormat,
) -> CliResult {
    let name = family.as_str();
    let spec = match family {
        FamilyTag::Complete => FamilySpec::Complete {
            n: need(n, "n", name)?,
        },
        FamilyTag::Star => FamilySpec::Star {
            k: need(k, "k", name)?,
        },
        FamilyTag::Path => FamilySpec::Path {
            m: need(edges, "edges", name)?,
        },
        FamilyTag::H => FamilySpec::SubdividedStar {
            k: need(k, "k", name)?,
        },
        FamilyTag::Q => FamilySpec::SubdividedStarWithTails {
            k: need(k, "k", name)?,
        },
        FamilyTag::Glk => {
            let l = need(l, "l", name)?;
            FamilySpec::IndependenceFamily {
                n: n.unwrap_or(l + 3),
                l,
                k: need(k, "k", name)?,
            }
        }
        FamilyTag::Remark1 => FamilySpec::GluedStars {
            k: need(k, "k", name)?,
        },
        FamilyTag::Remark2 => FamilySpec::BridgedStars {
            k: need(k, "k", name)?,
        },
        FamilyTag::RandomTree => FamilySpec::RandomTree {
            n: need(n, "n", name)?,
            seed: seed.unwrap_or(0),
        },
    };
    let g = families::gen(spec).map_err(|e| usage(e.to_string()))?;
    let text = match graph_format {
        GraphFormat::EdgeList => write_edge_list(&g),
        GraphFormat::Graph6 => write_graph6(&g) + "\n",
    };
    write_output(output, &text)?;
    Ok(())
}

fn cmd_enum(kind: EnumKind, n: usize, output: Option<&PathBuf>) -> CliResult {
    let (graphs, label) = match kind {
        EnumKind::Trees => (families::enumerate_trees(n), "trees"),
        EnumKind::Graphs => (families::enumerate_connected_graphs(n), "graphs"),
    };
    let graphs = graphs.map_err(|e| usage(e.to_string()))?;
    match output {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (i, g) in graphs.iter().enumerate() {
                let path = dir.join(format!("{label}_{n}_{i:04}.el"));
                fs::write(&path, write_edge_list(g))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => {
            let mut out = io::stdout().lock();
            for g in &graphs {
                writeln!(out, "{}", write_graph6(g)).context("writing stdout")?;
            }
        }
    }
    eprintln!("{} {label} on {n} vertices", graphs.len());
    Ok(())
}

fn cmd_harness(
    format: Format,
    checks: &[CheckId],
    bounds: Bounds,
    seed: u64,
    output: Option<&str>,
) -> CliResult {
    bounds.validate().map_err(|e| usage(e.to_string()))?;
    let report = harness::run_checks(checks, bounds, seed).map_err(anyhow::Error::from)?;
    if let Some(path) = output {
        let text = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
        write_output(path, &(text + "\n"))?;
    }
    match format {
        Format::Json if output != Some("-") => {
            outln!("{}", report.to_json());
        }
        Format::Json => {}
        Format::Csv => {
            outln!("check,instances,passed,failures,wall_time_ms");
            for c in &report.checks {
                outln!(
                    "{},{},{},{},{:.1}",
                    c.id,
                    c.instances,
                    c.passed,
                    c.failures,
                    c.wall_time_ms
                );
            }
        }
        Format::Text => {
            let mut out: Box<dyn Write> = if output == Some("-") {
                Box::new(io::stderr())
            } else {
                Box::new(io::stdout())
            };
            for c in &report.checks {
                let verdict = if c.passed { "pass" } else { "FAIL" };
                writeln!(
                    out,
                    "{verdict} {:<13} {:>6} instances {:>10.1} ms",
                    c.id.as_str(),
                    c.instances,
                    c.wall_time_ms
                )
                .context("writing summary")?;
                if let Some(ce) = &c.counterexample {
                    writeln!(out, "     {}: {:?}", ce.reason, ce.graph.edges)
                        .context("writing summary")?;
                }
            }
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn run(cli: Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow!(e))?;
    }
    let format = cli.format;
    match cli.command {
        Command::Alpha { input } => cmd_alpha(format, &input),
        Command::Cfc { command } => match command {
            CfcCommand::Exact {
                input,
                cap,
                edge_limit,
                emit_witness,
                stats,
            } => cmd_exact(
                format,
                &input,
                cap,
                edge_limit,
                emit_witness.as_deref(),
                stats,
            ),
            CfcCommand::Construct {
                method,
                input,
                k,
                edges,
                output,
                trace,
            } => cmd_construct(
                format,
                method,
                input.as_deref(),
                k,
                edges,
                &output,
                trace.as_deref(),
            ),
            CfcCommand::Bounds { input } => cmd_bounds(format, &input),
        },
        Command::VerifyColoring { input, certificate } => {
            cmd_verify(format, &input, certificate.as_deref())
        }
        Command::Gen {
            family,
            n,
            k,
            l,
            edges,
            seed,
            output,
            graph_format,
        } => cmd_gen(family, n, k, l, edges, seed, &output, graph_format),
        Command::Enum { kind, n, output } => cmd_enum(kind, n, output.as_ref()),
        Command::Harness {
            command:
                HarnessCommand::Run {
                    checks,
                    max_n_graphs,
                    max_n_trees,
                    random_trees,
                    seed,
                    output,
                },
        } => cmd_harness(
            format,
            &checks,
            Bounds {
                max_n_graphs,
                max_n_trees,
                random_trees,
            },
            seed,
            output.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
