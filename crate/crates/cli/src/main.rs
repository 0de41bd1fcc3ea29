//! `rankconn`: cut-rank queries, pivot-minors, rank-width and chain reductions
//! on graph6 input.
//!
//! Exit status is 0 on success, 1 when a property or theorem check fails, and
//! 2 on bad input or usage.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use rankconn_core::connectivity::{is_rank_connected, main_chain_step_traced, DEFAULT_ORBIT_CAP};
use rankconn_core::graph6::read_graph6_stream;
use rankconn_core::search::DEFAULT_SEARCH_ORBIT_CAP;
use rankconn_core::{
    allys_step, check_rank_connectivity, find_split, find_triplets, is_prime, one_smaller_pivot_minors, parse_graph6,
    pivot, pivot_orbit, rank_connectivity, rank_decomposition, rank_width, run_suite, search_excluded, suite_names,
    to_graph6, Budget, ChainConfig, ChainError, Graph, Reduction, SearchConfig, VerifyError, VertexSet,
};

#[derive(Parser)]
#[command(
    name = "rankconn",
    version,
    about = "Cut-rank, pivot-minor and rank-width tools for graph6 graphs"
)]
struct Cli {
    /// Emit one JSON object per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// A graph6 string, or `-f FILE`, or standard input (one graph per line).
#[derive(Args)]
struct Input {
    graph: Option<String>,
    #[arg(short = 'f', long = "file", conflicts_with = "graph")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Jobs {
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "RANKCONN_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Cut-rank of a vertex set.
    Cutrank {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertices, e.g. 0,2,3.
        #[arg(short = 'x', long = "set", value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Primality, with a split as witness when not prime.
    Prime {
        #[command(flatten)]
        input: Input,
    },
    /// Whether the graph is k^{+l} rank-connected.
    Conn {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'l', default_value_t = 0)]
        l: usize,
    },
    /// Rank connectivity.
    Rankconn {
        #[command(flatten)]
        input: Input,
    },
    /// Pivot on an edge.
    Pivot {
        #[command(flatten)]
        input: Input,
        /// The edge as V,W.
        #[arg(short = 'e', long = "edge", value_parser = parse_edge)]
        edge: (usize, usize),
    },
    /// Every graph reachable by pivots, in breadth-first order.
    Orbit {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
    },
    /// Rank-width.
    Rwd {
        #[command(flatten)]
        input: Input,
        /// Also print an optimal rank decomposition.
        #[arg(long)]
        witness: bool,
    },
    /// One-vertex-smaller pivot-minors, up to pivot equivalence.
    Minors {
        #[command(flatten)]
        input: Input,
    },
    /// Triplets: 3-sets of cut-rank 2 whose deletions keep cut-rank 2.
    Triplets {
        #[command(flatten)]
        input: Input,
    },
    /// One-vertex-smaller pivot-minor keeping primality or 3^{+3} connectivity.
    Chain {
        #[command(flatten)]
        input: Input,
        /// Prime reduction of a prime graph on at least 5 vertices.
        #[arg(long, conflicts_with = "main")]
        allys: bool,
        /// Prime 3^{+3} reduction of a prime 3^{+2} graph on at least 10 vertices.
        #[arg(long)]
        main: bool,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
    },
    /// Excluded pivot-minors for rank-width at most k among the input graphs.
    SearchExcluded {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'k')]
        k: usize,
        /// Skip the connectivity filters and test every graph directly.
        #[arg(long)]
        no_prune: bool,
        /// Append-only progress log; an existing log is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_ORBIT_CAP)]
        orbit_cap: usize,
        /// Report elapsed time in the summary.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Run property suites; all of them unless --suite is given.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        /// Sample count for sampled suites.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        jobs: Jobs,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (v, w) = s.split_once(',').ok_or_else(|| format!("expected V,W, got {s:?}"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("not a vertex index: {t:?}"))
    };
    Ok((num(v)?, num(w)?))
}

/// Failure that maps to exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Violation,
}

struct Out {
    json: bool,
    buf: String,
    status: Status,
}

impl Out {
    fn emit(&mut self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            self.buf.push_str(&value.to_string());
        } else {
            self.buf.push_str(&text());
        }
        self.buf.push('\n');
    }
}

impl Input {
    fn reader(&self) -> Result<Box<dyn BufRead + Send>, InputError> {
        Ok(match (&self.graph, &self.file) {
            (Some(g), _) => Box::new(io::Cursor::new(format!("{g}\n").into_bytes())),
            (None, Some(path)) => {
                let f = std::fs::File::open(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
                Box::new(BufReader::new(f))
            }
            (None, None) => Box::new(BufReader::new(io::stdin())),
        })
    }

    /// Every graph in the input; the first malformed record is an error.
    fn graphs(&self) -> Result<Vec<Graph>, InputError> {
        if let Some(g) = &self.graph {
            return parse_graph6(g.trim())
                .map(|g| vec![g])
                .map_err(|e| InputError(format!("invalid graph6 {g:?}: {e}")));
        }
        let mut text = String::new();
        self.reader()?.read_to_string(&mut text)?;
        let lines: Vec<&str> = text.lines().collect();
        let mut out = Vec::new();
        for item in read_graph6_stream(text.as_bytes()) {
            let (line, parsed) = item?;
            let g = parsed
                .map_err(|e| InputError(format!("line {line}: invalid graph6 {:?}: {e}", lines[line - 1].trim())))?;
            out.push(g);
        }
        if out.is_empty() {
            return Err(InputError("no graph in input".into()));
        }
        Ok(out)
    }
}

fn set_json(x: VertexSet) -> Value {
    json!(x.to_vec())
}

fn set_text(x: VertexSet) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn reduction_json(r: &Reduction) -> Value {
    json!({
        "pivots": r.pivots.steps(),
        "deleted": r.deleted,
        "graph6": to_graph6(&r.result),
    })
}

fn reduction_text(r: &Reduction) -> String {
    let pivots: Vec<String> = r.pivots.steps().iter().map(|(v, w)| format!("{v},{w}")).collect();
    let pivots = if pivots.is_empty() {
        "none".to_string()
    } else {
        pivots.join(" ")
    };
    format!("{} (pivots {pivots}; delete {})", to_graph6(&r.result), r.deleted)
}

fn pool(jobs: &Jobs) -> Result<Option<rayon::ThreadPool>, InputError> {
    match jobs.jobs {
        None => Ok(None),
        Some(n) => Ok(Some(rayon::ThreadPoolBuilder::new().num_threads(n as usize).build()?)),
    }
}

fn run(cli: Cli) -> Result<Out, InputError> {
    let mut out = Out {
        json: cli.json,
        buf: String::new(),
        status: Status::Ok,
    };
    match cli.command {
        Command::Cutrank { input, set } => {
            for g in input.graphs()? {
                if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
                    return Err(InputError(format!("vertex {v} out of range for {} vertices", g.n())));
                }
                let x: VertexSet = set.iter().copied().collect();
                let r = g.cut_rank(x);
                out.emit(
                    json!({"graph6": to_graph6(&g), "set": set_json(x), "cut_rank": r}),
                    || r.to_string(),
                );
            }
        }
        Command::Prime { input } => {
            for g in input.graphs()? {
                let prime = is_prime(&g);
                let split = find_split(&g).map(|(x, _)| x);
                let disconnected = !prime && split.is_none();
                out.emit(
                    json!({"graph6": to_graph6(&g), "prime": prime, "split": split.map(set_json), "disconnected": disconnected}),
                    || match split {
                        Some(x) if !prime => format!("false split {}", set_text(x)),
                        _ if disconnected => "false disconnected".into(),
                        _ => prime.to_string(),
                    },
                );
            }
        }
        Command::Conn { input, k, l } => {
            for g in input.graphs()? {
                let verdict = check_rank_connectivity(&g, k, l);
                let witness = verdict.witness();
                out.emit(
                    json!({"graph6": to_graph6(&g), "k": k, "l": l, "holds": verdict.holds(), "witness": witness.map(set_json)}),
                    || match witness {
                        Some(x) => format!("violated {}", set_text(x)),
                        None => "holds".into(),
                    },
                );
            }
        }
        Command::Rankconn { input } => {
            for g in input.graphs()? {
                let r = rank_connectivity(&g);
                out.emit(json!({"graph6": to_graph6(&g), "rank_connectivity": r}), || {
                    r.to_string()
                });
            }
        }
        Command::Pivot { input, edge: (v, w) } => {
            for g in input.graphs()? {
                let h = pivot(&g, v, w)?;
                out.emit(
                    json!({"graph6": to_graph6(&g), "edge": [v, w], "result": to_graph6(&h)}),
                    || to_graph6(&h),
                );
            }
        }
        Command::Orbit { input, cap } => {
            for g in input.graphs()? {
                let orbit = pivot_orbit(&g, cap);
                let members: Vec<String> = orbit.members().iter().map(to_graph6).collect();
                out.emit(
                    json!({"graph6": to_graph6(&g), "size": members.len(), "overflow": orbit.overflowed(), "members": members}),
                    || {
                        let mut s = members.join("\n");
                        if orbit.overflowed() {
                            s.push_str(&format!("\n(stopped at {cap} members)"));
                        }
                        s
                    },
                );
            }
        }
        Command::Rwd { input, witness } => {
            for g in input.graphs()? {
                if witness && g.n() > 0 {
                    let d = rank_decomposition(&g)?;
                    out.emit(
                        json!({"graph6": to_graph6(&g), "rwd": d.width, "decomposition": d}),
                        || {
                            let mut s = d.width.to_string();
                            for (v, node) in d.leaf_of.iter().enumerate() {
                                s.push_str(&format!("\nleaf {v} node {node}"));
                            }
                            for ((a, b), w) in d.edges.iter().zip(&d.edge_widths) {
                                s.push_str(&format!("\nedge {a} {b} width {w}"));
                            }
                            s
                        },
                    );
                } else {
                    let r = rank_width(&g)?;
                    out.emit(json!({"graph6": to_graph6(&g), "rwd": r}), || r.to_string());
                }
            }
        }
        Command::Minors { input } => {
            for g in input.graphs()? {
                let minors = one_smaller_pivot_minors(&g);
                out.emit(
                    json!({"graph6": to_graph6(&g), "minors": minors.iter().map(reduction_json).collect::<Vec<_>>()}),
                    || minors.iter().map(reduction_text).collect::<Vec<_>>().join("\n"),
                );
            }
        }
        Command::Triplets { input } => {
            for g in input.graphs()? {
                let ts = find_triplets(&g);
                let vs: Vec<[usize; 3]> = ts.iter().map(|t| t.vertices()).collect();
                out.emit(json!({"graph6": to_graph6(&g), "triplets": vs}), || {
                    vs.iter()
                        .map(|t| format!("{},{},{}", t[0], t[1], t[2]))
                        .collect::<Vec<_>>()
                        .join("\n")
                });
            }
        }
        Command::Chain {
            input,
            allys,
            main,
            orbit_cap,
        } => {
            let cfg = ChainConfig { orbit_cap };
            for g in input.graphs()? {
                let use_main = main || (!allys && g.n() >= 10 && is_prime(&g) && is_rank_connected(&g, 3, 2));
                let result = if use_main {
                    main_chain_step_traced(&g, &cfg).map(|s| (Some(s.reduction), Some(s.route)))
                } else {
                    allys_step(&g, &cfg).map(|r| (r, None))
                };
                let theorem = if use_main { "main" } else { "allys" };
                match result {
                    Ok((Some(r), route)) => out.emit(
                        json!({"graph6": to_graph6(&g), "theorem": theorem, "reduction": reduction_json(&r), "route": route}),
                        || reduction_text(&r),
                    ),
                    Ok((None, _)) => out.emit(
                        json!({"graph6": to_graph6(&g), "theorem": theorem, "reduction": null, "reason": "pivot-equivalent to a cycle"}),
                        || "none: pivot-equivalent to a cycle".into(),
                    ),
                    Err(ChainError::TheoremViolation { graph6, detail }) => {
                        eprintln!("COUNTEREXAMPLE {graph6}: {detail}");
                        out.status = Status::Violation;
                        out.emit(json!({"graph6": graph6, "theorem": theorem, "violation": detail}), || {
                            format!("violation: {detail}")
                        });
                    }
                    Err(e) => return Err(InputError(format!("{}: {e}", to_graph6(&g)))),
                }
            }
        }
        Command::SearchExcluded {
            input,
            k,
            no_prune,
            checkpoint,
            orbit_cap,
            timing,
            jobs,
        } => {
            let cfg = SearchConfig {
                jobs: jobs.jobs.map(|j| j as usize),
                prune: !no_prune,
                orbit_cap,
                checkpoint,
                timing,
            };
            let report = search_excluded(input.reader()?, k, &cfg)?;
            if out.json {
                out.buf.push_str(&report.to_json_lines());
            } else {
                for r in &report.records {
                    out.buf.push_str(&format!("{} n={} rwd={}\n", r.canonical, r.n, r.rwd));
                }
                let s = &report.summary;
                out.buf.push_str(&format!(
                    "processed {} graphs, {} excluded, {} up to pivot equivalence\n",
                    s.processed, s.candidates, s.records
                ));
            }
            for e in &report.summary.line_errors {
                eprintln!("line {}: {}", e.line, e.message);
            }
            for v in &report.summary.violations {
                eprintln!("VIOLATION {v}");
            }
            if !report.summary.violations.is_empty() {
                out.status = Status::Violation;
            } else if !report.summary.line_errors.is_empty() {
                io::stdout().write_all(out.buf.as_bytes())?;
                return Err(InputError(format!(
                    "{} malformed input lines",
                    report.summary.line_errors.len()
                )));
            }
        }
        Command::Verify {
            suite,
            samples,
            seed,
            list,
            jobs,
        } => {
            if list {
                for name in suite_names() {
                    out.buf.push_str(name);
                    out.buf.push('\n');
                }
                return Ok(out);
            }
            let names: Vec<String> = match suite {
                Some(s) => vec![s],
                None => suite_names().iter().map(|s| s.to_string()).collect(),
            };
            let budget = Budget { samples, seed };
            let pool = pool(&jobs)?;
            for name in names {
                let report = match &pool {
                    Some(p) => p.install(|| run_suite(&name, &budget)),
                    None => run_suite(&name, &budget),
                };
                let report = match report {
                    Ok(r) => r,
                    Err(e @ VerifyError::UnknownSuite(_)) => {
                        return Err(InputError(format!("{e}; known suites: {}", suite_names().join(", "))))
                    }
                    Err(e) => return Err(e.into()),
                };
                if !report.passed {
                    out.status = Status::Violation;
                    for p in report.properties.iter().filter(|p| p.violations > 0) {
                        eprintln!(
                            "COUNTEREXAMPLE {} {}: {}",
                            report.suite,
                            p.name,
                            p.counterexample.as_deref().unwrap_or("?")
                        );
                    }
                }
                out.emit(serde_json::to_value(&report)?, || {
                    let mut s = format!("{}: {}", report.suite, if report.passed { "PASS" } else { "FAIL" });
                    for p in &report.properties {
                        s.push_str(&format!("\n  {} {}/{} violations", p.name, p.violations, p.checked));
                    }
                    s
                });
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if io::stdout().write_all(out.buf.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            match out.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Violation => ExitCode::from(1),
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
