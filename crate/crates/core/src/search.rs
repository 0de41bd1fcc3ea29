//! Search for excluded pivot-minors of graphs of rank-width at most `k`.
//!
//! A graph qualifies when its rank-width exceeds `k` while `G \ v` and `G/v`
//! have rank-width at most `k` for every vertex `v`. Every one-vertex-smaller
//! pivot-minor is pivot-equivalent to one of those, so this is the full
//! minimality test. Cheap necessary conditions run first: connectivity,
//! primality for `k >= 1`, and `3^{+2}` for `k >= 2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::max_excluded_vertices;
use crate::canon::{canonical_form, canonical_graph, CanonicalForm, CANON_MAX_VERTICES};
use crate::connectivity::{is_prime, is_rank_connected};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::graph6::read_graph6_stream;
use crate::pivot::{local_contract, pivot_orbit};
use crate::rankwidth::rank_width;

pub const SEARCH_MAX_VERTICES: usize = CANON_MAX_VERTICES;
pub const DEFAULT_SEARCH_ORBIT_CAP: usize = 10_000;

/// Lines parsed and classified per parallel batch.
const BATCH: usize = 4096;

/// A necessary condition checked before any rank-width computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Filter {
    #[serde(rename = "connected")]
    Connected,
    #[serde(rename = "prime")]
    Prime,
    #[serde(rename = "3+2")]
    ThreePlusTwo,
}

impl Filter {
    /// The filters that every excluded pivot-minor for `k` must pass.
    pub fn applicable(k: usize) -> Vec<Filter> {
        let mut out = vec![Filter::Connected];
        if k >= 1 {
            out.push(Filter::Prime);
        }
        if k >= 2 {
            out.push(Filter::ThreePlusTwo);
        }
        out
    }

    pub fn passes(self, g: &Graph) -> bool {
        match self {
            Filter::Connected => g.is_connected(),
            Filter::Prime => is_prime(g),
            Filter::ThreePlusTwo => is_rank_connected(g, 3, 2),
        }
    }
}

/// An excluded pivot-minor in canonical labelling, with its evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedRecord {
    #[serde(rename = "graph6")]
    pub canonical: CanonicalForm,
    pub n: usize,
    pub k: usize,
    pub rwd: usize,
    /// `rwd(G \ v)` for each vertex `v` of the canonical graph.
    pub deletions: Vec<usize>,
    /// `rwd(G/v)` for each vertex `v` of the canonical graph.
    pub contractions: Vec<usize>,
    pub filters_passed: Vec<Filter>,
    /// Pivot-invariant summary: how many singletons and pairs have each
    /// cut-rank.
    pub orbit_fingerprint: String,
    /// Other canonical forms found pivot-equivalent to this one.
    #[serde(default)]
    pub equivalents: Vec<CanonicalForm>,
    /// Orbit exploration hit the cap while deduplicating this record.
    #[serde(default)]
    pub orbit_overflow: bool,
}

/// Counts of cut-rank values over singletons and pairs; unchanged by
/// pivots and relabelling.
pub fn orbit_fingerprint(g: &Graph) -> String {
    let n = g.n();
    let mut singles = [0usize; 2];
    let mut pairs = [0usize; 3];
    for v in 0..n {
        singles[g.cut_rank(VertexSet::singleton(v))] += 1;
        for u in 0..v {
            pairs[g.cut_rank(VertexSet::from([u, v]))] += 1;
        }
    }
    format!(
        "{n}:{},{}:{},{},{}",
        singles[0], singles[1], pairs[0], pairs[1], pairs[2]
    )
}

fn check_search_size(g: &Graph) -> Result<(), GraphError> {
    if g.n() > SEARCH_MAX_VERTICES {
        return Err(GraphError::Unsupported(format!(
            "excluded pivot-minor test on {} vertices (limit {SEARCH_MAX_VERTICES})",
            g.n()
        )));
    }
    Ok(())
}

/// The definitional test with pruning filters applied first.
pub fn is_excluded_pivot_minor(g: &Graph, k: usize) -> Result<Option<ExcludedRecord>, GraphError> {
    excluded_record(g, k, true)
}

/// The definitional test; with `prune` off no filter short-circuits it.
pub fn excluded_record(g: &Graph, k: usize, prune: bool) -> Result<Option<ExcludedRecord>, GraphError> {
    check_search_size(g)?;
    let filters = Filter::applicable(k);
    if prune && !filters.iter().all(|f| f.passes(g)) {
        return Ok(None);
    }
    if rank_width(g)? <= k {
        return Ok(None);
    }
    let h = canonical_graph(g)?;
    let mut deletions = Vec::with_capacity(h.n());
    let mut contractions = Vec::with_capacity(h.n());
    // Stop at the first reduction that stays above k.
    for v in 0..h.n() {
        let d = rank_width(&h.delete_vertex(v)?.0)?;
        if d > k {
            return Ok(None);
        }
        let c = rank_width(&local_contract(&h, v).expect("vertex in range").0)?;
        if c > k {
            return Ok(None);
        }
        deletions.push(d);
        contractions.push(c);
    }
    Ok(Some(ExcludedRecord {
        canonical: canonical_form(&h)?,
        n: h.n(),
        k,
        rwd: rank_width(&h)?,
        deletions,
        contractions,
        filters_passed: filters.into_iter().filter(|f| f.passes(&h)).collect(),
        orbit_fingerprint: orbit_fingerprint(&h),
        equivalents: Vec::new(),
        orbit_overflow: false,
    }))
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub prune: bool,
    pub orbit_cap: usize,
    /// Append-only progress log; an existing log is resumed from.
    pub checkpoint: Option<PathBuf>,
    /// Include wall-clock time in the summary (breaks byte-identical output).
    pub timing: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            jobs: None,
            prune: true,
            orbit_cap: DEFAULT_SEARCH_ORBIT_CAP,
            checkpoint: None,
            timing: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("k must be 1 or 2, got {0}")]
    UnsupportedK(usize),
    #[error("reading input: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint {path}: {message}")]
    Checkpoint { path: String, message: String },
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchSummary {
    pub k: usize,
    pub processed: usize,
    pub candidates: usize,
    pub records: usize,
    pub line_errors: Vec<LineError>,
    /// Failed soundness or bound checks; never expected.
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub records: Vec<ExcludedRecord>,
    pub summary: SearchSummary,
}

impl SearchReport {
    /// One JSON object per record, then `{"summary": ...}`.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialise"));
            out.push('\n');
        }
        let summary = serde_json::json!({ "summary": self.summary });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }

    /// Every canonical form found, merged or not.
    pub fn all_canonical_forms(&self) -> BTreeSet<CanonicalForm> {
        self.records
            .iter()
            .flat_map(|r| std::iter::once(r.canonical.clone()).chain(r.equivalents.iter().cloned()))
            .collect()
    }
}

/// Checkpoint line: every input line up to `through` has been handled.
#[derive(Debug, Serialize, Deserialize)]
struct CheckpointEntry {
    through: usize,
    found: Vec<ExcludedRecord>,
    errors: Vec<LineError>,
    processed: usize,
}

/// Runs the search over a newline-separated graph6 stream.
pub fn search_excluded<R: BufRead + Send>(
    input: R,
    k: usize,
    config: &SearchConfig,
) -> Result<SearchReport, SearchError> {
    if !(1..=2).contains(&k) {
        return Err(SearchError::UnsupportedK(k));
    }
    match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?
            .install(|| run_search(input, k, config)),
        None => run_search(input, k, config),
    }
}

fn run_search<R: BufRead>(input: R, k: usize, config: &SearchConfig) -> Result<SearchReport, SearchError> {
    let start = Instant::now();
    let mut found = Vec::new();
    let mut errors = Vec::new();
    let mut processed = 0;
    let mut resume_after = 0;

    let mut log = None;
    if let Some(path) = &config.checkpoint {
        let cp_err = |message: String| SearchError::Checkpoint {
            path: path.display().to_string(),
            message,
        };
        if path.exists() {
            let file = File::open(path).map_err(|e| cp_err(e.to_string()))?;
            for line in BufReader::new(file).lines() {
                let line = line.map_err(|e| cp_err(e.to_string()))?;
                if line.trim().is_empty() {
                    continue;
                }
                let entry: CheckpointEntry = serde_json::from_str(&line).map_err(|e| cp_err(e.to_string()))?;
                resume_after = resume_after.max(entry.through);
                processed += entry.processed;
                found.extend(entry.found);
                errors.extend(entry.errors);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| cp_err(e.to_string()))?;
        log = Some(file);
    }

    let mut stream = read_graph6_stream(input).peekable();
    loop {
        let mut batch = Vec::with_capacity(BATCH);
        let mut last_line = resume_after;
        while batch.len() < BATCH {
            match stream.next() {
                None => break,
                Some(item) => {
                    let (line, parsed) = item?;
                    last_line = line;
                    if line > resume_after {
                        batch.push((line, parsed));
                    }
                }
            }
        }
        if batch.is_empty() {
            break;
        }
        let outcomes: Vec<Result<Option<ExcludedRecord>, LineError>> = batch
            .into_par_iter()
            .map(|(line, parsed)| {
                let g = parsed.map_err(|e| LineError {
                    line,
                    message: e.to_string(),
                })?;
                excluded_record(&g, k, config.prune).map_err(|e| LineError {
                    line,
                    message: e.to_string(),
                })
            })
            .collect();
        let mut batch_found = Vec::new();
        let mut batch_errors = Vec::new();
        let batch_processed = outcomes.len();
        for o in outcomes {
            match o {
                Ok(Some(r)) => batch_found.push(r),
                Ok(None) => {}
                Err(e) => batch_errors.push(e),
            }
        }
        if let Some(file) = log.as_mut() {
            let entry = CheckpointEntry {
                through: last_line,
                found: batch_found.clone(),
                errors: batch_errors.clone(),
                processed: batch_processed,
            };
            let line = serde_json::to_string(&entry).expect("checkpoint serialises");
            writeln!(file, "{line}")?;
            file.flush()?;
        }
        processed += batch_processed;
        found.extend(batch_found);
        errors.extend(batch_errors);
        if stream.peek().is_none() {
            break;
        }
    }

    let candidates = found.len();
    let records = collapse(found, config.orbit_cap);
    let violations = audit(&records, k);
    errors.sort_by_key(|e| e.line);
    Ok(SearchReport {
        summary: SearchSummary {
            k,
            processed,
            candidates,
            records: records.len(),
            line_errors: errors,
            violations,
            elapsed_ms: config.timing.then(|| start.elapsed().as_millis()),
        },
        records,
    })
}

/// Sorts by `(n, canonical)`, drops repeated canonical forms, then merges
/// each record into the first earlier record it is pivot-equivalent to.
fn collapse(mut found: Vec<ExcludedRecord>, orbit_cap: usize) -> Vec<ExcludedRecord> {
    found.sort_by(|a, b| (a.n, &a.canonical).cmp(&(b.n, &b.canonical)));
    found.dedup_by(|a, b| a.canonical == b.canonical);

    // Canonical forms of each record's orbit, computed on demand.
    let mut orbits: BTreeMap<usize, (BTreeSet<CanonicalForm>, bool)> = BTreeMap::new();
    let orbit_of = |r: &ExcludedRecord| -> (BTreeSet<CanonicalForm>, bool) {
        let g = crate::graph6::parse_graph6(r.canonical.graph6()).expect("canonical forms parse");
        let orbit = pivot_orbit(&g, orbit_cap);
        let forms = orbit
            .members()
            .par_iter()
            .map(|h| canonical_form(h).expect("within canonical limit"))
            .collect();
        (forms, orbit.overflowed())
    };

    let mut kept: Vec<usize> = Vec::new();
    let mut merged_into: Vec<Option<usize>> = vec![None; found.len()];
    for i in 0..found.len() {
        let peers: Vec<usize> = kept
            .iter()
            .copied()
            .filter(|&p| found[p].n == found[i].n && found[p].orbit_fingerprint == found[i].orbit_fingerprint)
            .collect();
        let mut target = None;
        for p in peers {
            orbits.entry(i).or_insert_with(|| orbit_of(&found[i]));
            orbits.entry(p).or_insert_with(|| orbit_of(&found[p]));
            let (mine, _) = &orbits[&i];
            let (theirs, _) = &orbits[&p];
            if mine.contains(&found[p].canonical) || theirs.contains(&found[i].canonical) {
                target = Some(p);
                break;
            }
        }
        match target {
            Some(p) => merged_into[i] = Some(p),
            None => kept.push(i),
        }
    }
    for (&i, (_, overflow)) in &orbits {
        if *overflow {
            let owner = merged_into[i].unwrap_or(i);
            found[owner].orbit_overflow = true;
        }
    }
    for i in 0..found.len() {
        if let Some(p) = merged_into[i] {
            let c = found[i].canonical.clone();
            found[p].equivalents.push(c);
        }
    }
    let mut out: Vec<ExcludedRecord> = kept.into_iter().map(|i| found[i].clone()).collect();
    for r in &mut out {
        r.equivalents.sort();
    }
    out
}

/// Re-checks filter soundness and the vertex bounds on every record.
fn audit(records: &[ExcludedRecord], k: usize) -> Vec<String> {
    let mut out = Vec::new();
    for r in records {
        let g = crate::graph6::parse_graph6(r.canonical.graph6()).expect("canonical forms parse");
        let missing: Vec<Filter> = Filter::applicable(k).into_iter().filter(|f| !f.passes(&g)).collect();
        if !missing.is_empty() {
            out.push(format!("{} fails necessary conditions {missing:?}", r.canonical));
        }
        if r.rwd != k + 1 || r.deletions.iter().chain(&r.contractions).any(|&w| w > k) {
            out.push(format!("{} has inconsistent rank-width evidence", r.canonical));
        }
        let three_plus_one = is_rank_connected(&g, 3, 1);
        if let Some(bound) = max_excluded_vertices(k as u32, three_plus_one) {
            if r.n as u64 > bound {
                out.push(format!("{} has {} vertices, above the bound {bound}", r.canonical, r.n));
            }
        }
    }
    out
}
