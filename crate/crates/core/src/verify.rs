//! Named property suites: exhaustive sweeps over small graphs and seeded
//! random samples beyond them.
//!
//! Each suite reports, per property, how many instances were checked, how
//! many failed, and the first failing instance in a fixed order. Work is
//! spread over the current rayon pool and merged in input order, so reports
//! do not depend on the number of threads.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::canonical_form;
use crate::connectivity::{
    allys_step, check_rank_connectivity, find_barrier, find_fully_closed_sets, find_split, find_triplets, is_prime,
    is_prime_3_3, is_rank_connected, is_triplet, main_chain_step_exhaustive, main_chain_step_traced, realize_triplet,
    reduce_fully_closed, ChainConfig, ConnectivityVerdict, Triplet,
};
use crate::enumerate::enumerate_graphs;
use crate::gf2::{rank_of_rows, BitMatrix};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::graph6::to_graph6;
use crate::pivot::{local_contract, pivot, pivot_orbit};
use crate::rankwidth::{is_k_branched, is_titanic, rank_decomposition, rank_width, rank_width_naive};
use crate::search::{search_excluded, SearchConfig};

pub const SUITES: &[&str] = &[
    "submodularity",
    "inequalities-n6",
    "pivot-n6",
    "rankconn-n8",
    "bixby-n8",
    "rwd-oracle-n6",
    "rwd-oracle-n7",
    "rwd-invariants",
    "tangle-n6",
    "tangle-n7",
    "allys-n5",
    "allys-n6",
    "allys-n7",
    "fully-n8",
    "triplet-n7",
    "primetriplet-n8",
    "intprime-n7",
    "main-sample",
    "triplet-sample",
    "search-k1-n7",
    "search-k2-n8",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Limits for sampled suites. `samples: None` uses each suite's default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { samples: None, seed: 1 }
    }
}

impl Budget {
    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
    /// Coverage counts, e.g. how often each branch of a search was taken.
    pub counters: BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

/// Per-work-item tallies, merged in input order.
#[derive(Debug, Default)]
struct Tally {
    props: Vec<PropertyResult>,
    counters: BTreeMap<String, u64>,
}

impl Tally {
    fn slot(&mut self, name: &str) -> &mut PropertyResult {
        let i = match self.props.iter().position(|p| p.name == name) {
            Some(i) => i,
            None => {
                self.props.push(PropertyResult {
                    name: name.to_string(),
                    checked: 0,
                    violations: 0,
                    counterexample: None,
                });
                self.props.len() - 1
            }
        };
        &mut self.props[i]
    }

    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        let p = self.slot(name);
        p.checked += 1;
        if !ok {
            p.violations += 1;
            if p.counterexample.is_none() {
                p.counterexample = Some(witness());
            }
        }
    }

    fn count(&mut self, name: &str) {
        *self.counters.entry(name.to_string()).or_default() += 1;
    }

    fn merge(&mut self, other: Tally) {
        for p in other.props {
            let mine = self.slot(&p.name);
            mine.checked += p.checked;
            mine.violations += p.violations;
            if mine.counterexample.is_none() {
                mine.counterexample = p.counterexample;
            }
        }
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
    }

    fn into_report(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            passed: self.props.iter().all(|p| p.violations == 0),
            properties: self.props,
            counters: self.counters,
        }
    }
}

/// Runs `f` on every item in parallel and merges the tallies in order.
fn sweep<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|x| {
            let mut t = Tally::default();
            f(x, &mut t);
            t
        })
        .collect();
    let mut all = Tally::default();
    for p in parts {
        all.merge(p);
    }
    all
}

fn graphs_up_to(max_n: usize) -> Result<Vec<Graph>, GraphError> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        out.extend(enumerate_graphs(n)?);
    }
    Ok(out)
}

fn g6(g: &Graph) -> String {
    to_graph6(g)
}

/// `rho_{G \ del}(x)`.
fn rho_del(g: &Graph, x: VertexSet, del: VertexSet) -> usize {
    g.cut_rank_within(x, g.vertices() - del)
}

pub fn suite_names() -> &'static [&'static str] {
    SUITES
}

pub fn run_suite(name: &str, budget: &Budget) -> Result<SuiteReport, VerifyError> {
    let tally = match name {
        "submodularity" => submodularity(budget)?,
        "inequalities-n6" => inequalities(6)?,
        "pivot-n6" => pivot_identities(6)?,
        "rankconn-n8" => rankconn(8)?,
        "bixby-n8" => bixby(8)?,
        "rwd-oracle-n6" => sweep(&graphs_up_to(6)?, rwd_oracle),
        "rwd-oracle-n7" => rwd_oracle_sample(budget),
        "rwd-invariants" => rwd_invariants()?,
        "tangle-n6" => sweep(&graphs_up_to(6)?, tangle),
        "tangle-n7" => sweep(&graphs_up_to(7)?, tangle),
        "allys-n5" => allys(5)?,
        "allys-n6" => allys(6)?,
        "allys-n7" => allys(7)?,
        "fully-n8" => fully(8)?,
        "triplet-n7" => triplet_realisation(7)?,
        "primetriplet-n8" => primetriplet(8)?,
        "intprime-n7" => intprime()?,
        "main-sample" => main_sample(budget),
        "triplet-sample" => triplet_sample(budget),
        "search-k1-n7" => search_k1(7)?,
        "search-k2-n8" => search_k2(8)?,
        _ => return Err(VerifyError::UnknownSuite(name.to_string())),
    };
    Ok(tally.into_report(name))
}

fn submodularity(budget: &Budget) -> Result<Tally, GraphError> {
    // Adjacency matrices: every (X1, Y1, X2, Y2) for every graph up to 6 vertices.
    let graphs = graphs_up_to(6)?;
    let mut tally = sweep(&graphs, |g, t| {
        let n = g.n();
        let size = 1usize << n;
        let adj = g.adjacency();
        let mut r = vec![0u8; size * size];
        for x in 0..size {
            let rows: Vec<u64> = VertexSet::from_bits(x as u64).iter().map(|v| adj[v]).collect();
            for y in 0..size {
                let masked: Vec<u64> = rows.iter().map(|row| row & y as u64).collect();
                r[x * size + y] = rank_of_rows(&masked) as u8;
            }
        }
        let mut checked = 0u64;
        let mut bad = None;
        for x1 in 0..size {
            for y1 in 0..size {
                let a = r[x1 * size + y1];
                for x2 in 0..size {
                    let (xi, xu) = (x1 & x2, x1 | x2);
                    for y2 in 0..size {
                        checked += 1;
                        let lhs = a + r[x2 * size + y2];
                        let rhs = r[xi * size + (y1 | y2)] + r[xu * size + (y1 & y2)];
                        if lhs < rhs && bad.is_none() {
                            bad = Some((x1, y1, x2, y2));
                        }
                    }
                }
            }
        }
        let p = t.slot("adjacency-submodular");
        p.checked += checked;
        if let Some((x1, y1, x2, y2)) = bad {
            p.violations += 1;
            p.counterexample = Some(format!("{} X1={x1:#b} Y1={y1:#b} X2={x2:#b} Y2={y2:#b}", g6(g)));
        }
    });

    // Random matrices up to 6 x 6 with random index subsets.
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let samples = budget.samples_or(100_000);
    let cases: Vec<(BitMatrix, [u64; 4])> = (0..samples)
        .map(|_| {
            let (r, c) = (rng.random_range(1..=6), rng.random_range(1..=6));
            let rows = (0..r).map(|_| rng.random::<u64>() & ((1 << c) - 1)).collect();
            let m = BitMatrix::from_rows(c, rows).expect("masked rows");
            let rm = (1u64 << r) - 1;
            let cm = (1u64 << c) - 1;
            (
                m,
                [
                    rng.random::<u64>() & rm,
                    rng.random::<u64>() & rm,
                    rng.random::<u64>() & cm,
                    rng.random::<u64>() & cm,
                ],
            )
        })
        .collect();
    let sub = |m: &BitMatrix, rows: u64, cols: u64| -> usize {
        let ri: Vec<usize> = VertexSet::from_bits(rows).to_vec();
        let ci: Vec<usize> = VertexSet::from_bits(cols).to_vec();
        m.submatrix(&ri, &ci).expect("in range").rank()
    };
    tally.merge(sweep(&cases, |(m, [x1, x2, y1, y2]), t| {
        let lhs = sub(m, *x1, *y1) + sub(m, *x2, *y2);
        let rhs = sub(m, x1 & x2, y1 | y2) + sub(m, x1 | x2, y1 & y2);
        t.check("matrix-submodular", lhs >= rhs, || {
            format!("{m:?} {x1:#b} {x2:#b} {y1:#b} {y2:#b}")
        });
    }));

    // Up to 8 x 8: transpose, row swaps and row additions keep the rank.
    let cases: Vec<(BitMatrix, usize, usize)> = (0..samples)
        .map(|_| {
            let (r, c) = (rng.random_range(1..=8), rng.random_range(1..=8));
            let rows = (0..r).map(|_| rng.random::<u64>() & ((1 << c) - 1)).collect();
            (
                BitMatrix::from_rows(c, rows).expect("masked rows"),
                rng.random_range(0..r),
                rng.random_range(0..r),
            )
        })
        .collect();
    tally.merge(sweep(&cases, |(m, i, j), t| {
        let rank = m.rank();
        t.check(
            "rank-transpose",
            m.transpose().is_ok_and(|tr| tr.rank() == rank),
            || format!("{m:?}"),
        );
        let mut rows = m.rows().to_vec();
        rows.swap(*i, *j);
        t.check("rank-row-swap", rank_of_rows(&rows) == rank, || {
            format!("{m:?} swap {i},{j}")
        });
        if i != j {
            rows[*i] ^= rows[*j];
        }
        t.check("rank-row-addition", rank_of_rows(&rows) == rank, || {
            format!("{m:?} add {j} to {i}")
        });
    }));
    Ok(tally)
}

fn inequalities(max_n: usize) -> Result<Tally, GraphError> {
    Ok(sweep(&graphs_up_to(max_n)?, |g, t| {
        let all = g.vertices();
        let n = g.n();
        let one = VertexSet::singleton;
        for bits in 0..1u64 << n {
            let x = VertexSet::from_bits(bits);
            let r = g.cut_rank(x);
            let rest = all - x;
            t.check("symmetry", r == g.cut_rank(rest), || format!("{} X={x}", g6(g)));
            t.check("bounds", r <= x.len().min(rest.len()), || format!("{} X={x}", g6(g)));
        }
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let ab = one(a) | one(b);
                for sa in 0..1u64 << n {
                    let big_a = VertexSet::from_bits(sa);
                    if big_a.contains(a) {
                        continue;
                    }
                    let lhs_a = rho_del(g, big_a, one(a));
                    for sb in 0..1u64 << n {
                        let big_b = VertexSet::from_bits(sb);
                        if big_b.contains(b) {
                            continue;
                        }
                        let rhs = lhs_a + rho_del(g, big_b, one(b));
                        let (i, u) = (big_a & big_b, big_a | big_b);
                        let witness = || format!("{} a={a} b={b} A={big_a} B={big_b}", g6(g));
                        match (big_a.contains(b), big_b.contains(a)) {
                            (false, false) => {
                                let lhs = g.cut_rank(i) + rho_del(g, u, ab);
                                t.check("gagb-1", lhs <= rhs, witness);
                            }
                            (true, false) => {
                                let lhs = rho_del(g, i, one(b)) + rho_del(g, u, one(a));
                                t.check("gagb-2", lhs <= rhs, witness);
                            }
                            (true, true) => {
                                let lhs = rho_del(g, i, ab) + g.cut_rank(u);
                                t.check("gagb-3", lhs <= rhs, witness);
                            }
                            (false, true) => {}
                        }
                    }
                }
            }
        }
        for x in 0..n {
            let rest = all.without(x);
            let del = one(x);
            let contracted = g.neighbors(x).first().map(|w| pivot(g, x, w).expect("neighbour"));
            let rho_con = |y: VertexSet| match &contracted {
                Some(h) => rho_del(h, y, del),
                None => rho_del(g, y, del),
            };
            for sx in 0..1u64 << n {
                let big_x = VertexSet::from_bits(sx);
                if !big_x.is_subset(rest) {
                    continue;
                }
                let rx = rho_del(g, big_x, del);
                for sy in 0..1u64 << n {
                    let big_y = VertexSet::from_bits(sy);
                    if !big_y.is_subset(rest) {
                        continue;
                    }
                    let witness = || format!("{} x={x} X={big_x} Y={big_y}", g6(g));
                    let (i, u) = (big_x & big_y, big_x | big_y);
                    let l1 = rho_del(g, i, del) + g.cut_rank(u.with(x));
                    t.check("gga-1", l1 <= rx + g.cut_rank(big_y.with(x)), witness);
                    let l2 = g.cut_rank(i) + rho_del(g, u, del);
                    t.check("gga-2", l2 <= rx + g.cut_rank(big_y), witness);
                    // (X, rest - X) and (Y, rest - Y) as the two partitions.
                    let (x2, y2) = (rest - big_x, rest - big_y);
                    let lhs = rx + rho_con(big_y);
                    let rhs = g.cut_rank(i) + g.cut_rank(x2 & y2);
                    t.check("bixby-inequality", lhs + 1 >= rhs, witness);
                }
            }
        }
    }))
}

fn pivot_identities(max_n: usize) -> Result<Tally, GraphError> {
    Ok(sweep(&graphs_up_to(max_n)?, |g, t| {
        let n = g.n();
        for (v, w) in g.edges() {
            let h = pivot(g, v, w).expect("edge");
            let witness = || format!("{} pivot {v},{w}", g6(g));
            t.check("involution", pivot(&h, v, w).ok().as_ref() == Some(g), witness);
            t.check("symmetric", pivot(g, w, v).ok().as_ref() == Some(&h), witness);
            let same = (0..1u64 << n).all(|x| {
                let x = VertexSet::from_bits(x);
                h.cut_rank(x) == g.cut_rank(x)
            });
            t.check("cut-rank-invariance", same, witness);
            for u in 0..n {
                if u == v || u == w {
                    continue;
                }
                let (gd, map) = g.delete_vertex(u).expect("in range");
                let (hd, hmap) = h.delete_vertex(u).expect("in range");
                let (v2, w2) = (map.get(v).expect("kept"), map.get(w).expect("kept"));
                let ok = map == hmap && pivot(&gd, v2, w2).ok() == Some(hd);
                t.check("deletion-commutes", ok, || {
                    format!("{} pivot {v},{w} delete {u}", g6(g))
                });
            }
        }
        for x in 0..n {
            let nbrs = g.neighbors(x).to_vec();
            for &y1 in &nbrs {
                for &y2 in &nbrs {
                    if y1 == y2 {
                        continue;
                    }
                    let lhs = pivot(g, x, y1).expect("edge");
                    let rhs = pivot(g, x, y2).and_then(|h| pivot(&h, y1, y2));
                    t.check("neighbour-choice", rhs.ok() == Some(lhs), || {
                        format!("{} x={x} y1={y1} y2={y2}", g6(g))
                    });
                }
            }
        }
    }))
}

fn rankconn(max_n: usize) -> Result<Tally, GraphError> {
    Ok(sweep(&graphs_up_to(max_n)?, |g, t| {
        let n = g.n();
        let witness = || g6(g);
        t.check(
            "graph6-round-trip",
            crate::graph6::parse_graph6(&g6(g)).ok().as_ref() == Some(g),
            witness,
        );
        for k in 1..=n / 2 {
            if !is_rank_connected(g, k, 0) {
                continue;
            }
            let mut ok = is_rank_connected(g, k - 1, 0);
            for v in 0..n {
                ok &= is_rank_connected(&g.delete_vertex(v).expect("in range").0, k - 1, 0);
            }
            t.check("rankconn-proposition", ok, || format!("{} k={k}", g6(g)));
        }
        if n > 7 {
            return;
        }
        // Below four vertices every graph is 2^{+0}, connected or not.
        if n >= 4 {
            t.check("2+0-iff-prime", is_rank_connected(g, 2, 0) == is_prime(g), witness);
        }
        t.check(
            "1+0-iff-connected",
            is_rank_connected(g, 1, 0) == g.is_connected(),
            witness,
        );
        let brute_split = (0..1u64 << n)
            .map(VertexSet::from_bits)
            .any(|a| a.len() >= 2 && n - a.len() >= 2 && g.cut_rank(a) <= 1);
        t.check("split-scan", brute_split == find_split(g).is_some(), witness);
        for k in 0..=3 {
            for l in 0..=2 {
                if let ConnectivityVerdict::Violated(x) = check_rank_connectivity(g, k, l) {
                    let ok = g.cut_rank(x) < k && x.len().min(n - x.len()) >= k + l;
                    t.check("witness-valid", ok, || format!("{} k={k} l={l} X={x}", g6(g)));
                }
            }
        }
    }))
}

fn bixby(max_n: usize) -> Result<Tally, GraphError> {
    Ok(sweep(&graphs_up_to(max_n)?, |g, t| {
        for k in 1..=3 {
            for l in 0..=2 {
                if !is_rank_connected(g, k, l) {
                    continue;
                }
                let target = 2 * l + k - 1;
                for v in 0..g.n() {
                    let del = g.delete_vertex(v).expect("in range").0;
                    let con = local_contract(g, v).expect("in range").0;
                    let ok = is_rank_connected(&del, k, target) || is_rank_connected(&con, k, target);
                    t.check("bixby-proposition", ok, || format!("{} k={k} l={l} v={v}", g6(g)));
                }
            }
        }
    }))
}

fn rwd_oracle(g: &Graph, t: &mut Tally) {
    let dp = rank_width(g).expect("small graph");
    let naive = rank_width_naive(g).expect("small graph");
    t.check("dp-equals-naive", dp == naive, || {
        format!("{} dp={dp} naive={naive}", g6(g))
    });
}

/// Uniform labelled graph with each edge present with probability 1/2.
fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.random_bool(0.5) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("valid edges")
}

fn rwd_oracle_sample(budget: &Budget) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let graphs: Vec<Graph> = (0..budget.samples_or(10_000))
        .map(|_| random_graph(&mut rng, 7))
        .collect();
    sweep(&graphs, rwd_oracle)
}

fn rwd_invariants() -> Result<Tally, GraphError> {
    let mut tally = sweep(&graphs_up_to(6)?, |g, t| {
        let r = rank_width(g).expect("small graph");
        for (v, w) in g.edges() {
            let h = pivot(g, v, w).expect("edge");
            t.check("pivot-invariance", rank_width(&h).expect("small graph") == r, || {
                format!("{} pivot {v},{w}", g6(g))
            });
        }
        if g.n() >= 1 {
            let d = rank_decomposition(g).expect("nonempty");
            t.check("decomposition-valid", d.is_valid_for(g) && d.width == r, || g6(g));
        }
    });
    tally.merge(sweep(&graphs_up_to(7)?, |g, t| {
        let r = rank_width(g).expect("small graph");
        for v in 0..g.n() {
            let d = rank_width(&g.delete_vertex(v).expect("in range").0).expect("small graph");
            t.check("deletion-bounds", d <= r && d + 1 >= r, || format!("{} v={v}", g6(g)));
        }
    }));
    Ok(tally)
}

fn tangle(g: &Graph, t: &mut Tally) {
    let k = rank_width(g).expect("small graph");
    let all = g.vertices();
    for bits in 0..1u64 << g.n() {
        let a = VertexSet::from_bits(bits);
        // The complement of the whole vertex set is empty, and the empty set
        // is never k-branched; the statement concerns proper subsets.
        if a == all || g.cut_rank(a) > k || !is_titanic(g, a) {
            continue;
        }
        let ok = is_k_branched(g, a.complement_in(all), k).expect("nonempty");
        t.check("tangle", ok, || format!("{} A={a} k={k}", g6(g)));
    }
}

fn allys(n: usize) -> Result<Tally, GraphError> {
    let primes: Vec<Graph> = enumerate_graphs(n)?.into_iter().filter(is_prime).collect();
    let cfg = ChainConfig::default();
    Ok(sweep(&primes, |g, t| {
        let orbit = pivot_orbit(g, cfg.orbit_cap);
        let cycle_equivalent = orbit.members().iter().any(Graph::is_cycle);
        t.count(if cycle_equivalent {
            "cycle-equivalent"
        } else {
            "reducible"
        });
        match allys_step(g, &cfg) {
            Ok(Some(r)) => {
                let ok = !cycle_equivalent && r.result.n() + 1 == n && is_prime(&r.result) && r.replays_from(g);
                t.check("allys", ok, || {
                    format!("{} reduced although cycle-equivalent or invalid", g6(g))
                });
            }
            Ok(None) => t.check("allys", cycle_equivalent && !orbit.overflowed(), || {
                format!("{} no reduction", g6(g))
            }),
            Err(e) => t.check("allys", false, || format!("{}: {e}", g6(g))),
        }
    }))
}

fn fully(n: usize) -> Result<Tally, GraphError> {
    let primes: Vec<Graph> = enumerate_graphs(n)?.into_iter().filter(is_prime).collect();
    let cfg = ChainConfig::default();
    Ok(sweep(&primes, |g, t| {
        for a in find_fully_closed_sets(g).expect("small graph") {
            t.count("fully-closed-sets");
            match reduce_fully_closed(g, a, &cfg) {
                Ok(r) => {
                    t.count(match r.pivots.len() {
                        0 => "deletion",
                        1 => "contraction",
                        _ => "via-orbit",
                    });
                    let ok = is_prime(&r.result) && r.result.n() + 1 == n && r.replays_from(g);
                    t.check("fully", ok, || format!("{} A={a}", g6(g)));
                    // G \ v or G / v for some v in A.
                    let direct = a.contains(r.deleted) && r.pivots.len() <= 1;
                    t.check("fully-direct", direct, || format!("{} A={a}", g6(g)));
                }
                Err(e) => t.check("fully", false, || format!("{} A={a}: {e}", g6(g))),
            }
        }
    }))
}

fn triplet_realisation(max_n: usize) -> Result<Tally, GraphError> {
    let primes: Vec<Graph> = graphs_up_to(max_n)?.into_iter().filter(is_prime).collect();
    Ok(sweep(&primes, |g, t| {
        let n = g.n();
        for c in 2..n {
            for b in 1..c {
                for a in 0..b {
                    let set = VertexSet::from([a, b, c]);
                    if g.cut_rank(set) != 2 {
                        continue;
                    }
                    let ok = match realize_triplet(g, [a, b, c]) {
                        Ok((h, seq)) => {
                            if !seq.is_empty() {
                                t.count("pivoted");
                            }
                            is_triplet(&h, set) && seq.len() <= 2 && seq.apply(g).ok() == Some(h)
                        }
                        Err(_) => false,
                    };
                    t.check("realize-triplet", ok, || format!("{} T={set}", g6(g)));
                }
            }
        }
        for tr in find_triplets(g) {
            t.check("triplet-predicate", is_triplet(g, tr.set()), || g6(g));
        }
    }))
}

/// The conclusion of the internal 4-primality statement for triplet `t`.
fn internally4prime_holds(g: &Graph, t: &Triplet) -> bool {
    let dels: Vec<Graph> = t
        .vertices()
        .iter()
        .map(|&x| g.delete_vertex(x).expect("in range").0)
        .collect();
    dels.iter().any(|h| is_prime(h) && is_rank_connected(h, 3, 2))
        || dels.iter().filter(|h| is_prime_3_3(h)).count() >= 2
}

fn primetriplet(n: usize) -> Result<Tally, GraphError> {
    let graphs: Vec<Graph> = enumerate_graphs(n)?
        .into_iter()
        .filter(|g| is_prime(g) && is_rank_connected(g, 3, 1))
        .collect();
    Ok(sweep(&graphs, |g, t| {
        for tr in find_triplets(g) {
            t.count("instances");
            let ok = tr
                .vertices()
                .iter()
                .all(|&x| is_prime(&g.delete_vertex(x).expect("in range").0));
            t.check("primetriplet", ok, || format!("{} T={}", g6(g), tr.set()));
            t.check("internally4prime", internally4prime_holds(g, &tr), || {
                format!("{} T={}", g6(g), tr.set())
            });
        }
    }))
}

fn splits_of(g: &Graph) -> Vec<VertexSet> {
    let n = g.n();
    (0..1u64 << n)
        .map(VertexSet::from_bits)
        .filter(|a| a.len() >= 2 && n - a.len() >= 2 && g.cut_rank(*a) <= 1)
        .collect()
}

/// Checks the three conclusions of the intermediate primality statement on
/// every prime 7- and 8-vertex graph.
fn intprime() -> Result<Tally, GraphError> {
    let mut graphs = enumerate_graphs(7)?;
    graphs.extend(enumerate_graphs(8)?);
    graphs.retain(is_prime);
    Ok(sweep(&graphs, |g, t| {
        let n = g.n();
        let all = g.vertices();
        for a in 0..n {
            let ga = g.delete_vertex(a).expect("in range").0;
            if !is_rank_connected(&ga, 2, 1) {
                continue;
            }
            for b in 0..n {
                if b == a {
                    continue;
                }
                let gb = g.delete_vertex(b).expect("in range").0;
                if !is_rank_connected(&gb, 2, 1) || is_prime(&gb) {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b || rho_del(g, VertexSet::from([b, c]), VertexSet::singleton(a)) > 1 {
                        continue;
                    }
                    let witness = || format!("{} a={a} b={b} c={c}", g6(g));
                    let others = g.neighbors(c) - VertexSet::from([a, b]);
                    if !others.is_empty() {
                        let gab = g.induced_subgraph(all - VertexSet::from([a, b])).0;
                        t.check("case-i", is_prime(&gab), witness);
                        continue;
                    }
                    let gc = g.delete_vertex(c).expect("in range").0;
                    if n > 7 {
                        t.check("case-ii", is_prime(&gc), witness);
                    } else if !is_prime(&gc) {
                        t.count("case-iii-instances");
                        let balanced = splits_of(&gc).iter().all(|s| s.len() == 3);
                        let pivoted = pivot(g, a, c)
                            .ok()
                            .map(|h| h.induced_subgraph(all - VertexSet::from([a, c])).0);
                        t.check("case-iii", balanced && pivoted.is_some_and(|h| is_prime(&h)), witness);
                    }
                }
            }
        }
    }))
}

/// Random graph with a planted set of `size` vertices whose outside
/// neighbourhoods span at most `rank` dimensions.
fn planted_graph(rng: &mut ChaCha8Rng, n: usize, size: usize, rank: usize) -> Graph {
    let g = random_graph(rng, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let set: VertexSet = order[..size].iter().copied().collect();
    let outside = g.vertices() - set;
    let basis: Vec<u64> = (0..rank).map(|_| rng.random::<u64>() & outside.bits()).collect();
    let mut adj = g.adjacency().to_vec();
    for x in set {
        let mut row = 0;
        while row == 0 {
            for b in &basis {
                if rng.random_bool(0.5) {
                    row ^= b;
                }
            }
            if basis.iter().all(|&b| b == 0) {
                break;
            }
        }
        adj[x] = (adj[x] & set.bits()) | row;
    }
    for y in outside {
        adj[y] &= !set.bits();
    }
    for x in set {
        for y in VertexSet::from_bits(adj[x]) & outside {
            adj[y] |= 1 << x;
        }
    }
    Graph::from_adjacency(adj).expect("symmetric by construction")
}

/// Draws graphs from `gen` until `keep` accepts `count` of them, giving up
/// after a fixed number of attempts.
fn sample(
    rng: &mut ChaCha8Rng,
    count: usize,
    mut gen: impl FnMut(&mut ChaCha8Rng, usize) -> Graph,
    keep: impl Fn(&Graph) -> bool,
) -> Vec<Graph> {
    let mut out = Vec::with_capacity(count);
    let mut attempt = 0;
    while out.len() < count && attempt < 200 * count.max(1) {
        let g = gen(rng, attempt);
        attempt += 1;
        if keep(&g) {
            out.push(g);
        }
    }
    out
}

fn main_sample(budget: &Budget) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let count = budget.samples_or(1000);
    let graphs = sample(
        &mut rng,
        count,
        |rng, i| {
            let n = 10 + i % 2;
            match (i / 2) % 3 {
                0 => random_graph(rng, n),
                1 => planted_graph(rng, n, 3, 2),
                _ => planted_graph(rng, n, 4, 2),
            }
        },
        |g| is_prime(g) && is_rank_connected(g, 3, 2),
    );
    let cfg = ChainConfig::default();
    let mut tally = sweep(&graphs, |g, t| {
        t.count(&format!("n={}", g.n()));
        match main_chain_step_traced(g, &cfg) {
            Ok(step) => {
                let r = &step.reduction;
                t.count(&format!(
                    "route={}",
                    serde_json::to_value(step.route).expect("route").as_str().unwrap_or("?")
                ));
                let n = r.result.n();
                let brute_prime = r.result.is_connected() && splits_of(&r.result).is_empty();
                let brute_33 = (0..1u64 << n)
                    .map(VertexSet::from_bits)
                    .all(|x| r.result.cut_rank(x) >= 3 || x.len().min(n - x.len()) < 6);
                let ok = n + 1 == g.n() && brute_prime && brute_33 && r.replays_from(g);
                t.check("main", ok, || format!("{} invalid reduction", g6(g)));
                let agree = main_chain_step_exhaustive(g, &cfg).is_ok_and(|e| is_prime_3_3(&e.result));
                t.check("structured-agrees-with-exhaustive", agree, || g6(g));
            }
            Err(e) => t.check("main", false, || format!("{}: {e}", g6(g))),
        }
    });
    tally.check("sample-size", graphs.len() == count, || {
        format!("only {} of {count} samples qualified", graphs.len())
    });
    tally
}

/// Sampled prime `3^{+1}` graphs on 11 and 12 vertices with triplets:
/// separation structure, internal 4-primality, and barrier scans checked
/// against brute-force bipartition enumeration.
fn triplet_sample(budget: &Budget) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let count = budget.samples_or(200);
    let graphs = sample(
        &mut rng,
        count,
        |rng, i| planted_graph(rng, 11 + i % 2, 3, 2),
        |g| is_prime(g) && is_rank_connected(g, 3, 1) && !find_triplets(g).is_empty(),
    );
    sweep(&graphs, |g, t| {
        let all = g.vertices();
        for tr in find_triplets(g) {
            t.count("triplets");
            t.check("internally4prime", internally4prime_holds(g, &tr), || {
                format!("{} T={}", g6(g), tr.set())
            });
            let [a, b, c] = tr.vertices();
            let mut brute = [false; 3];
            for (i, (x, p, q)) in [(a, b, c), (b, a, c), (c, a, b)].into_iter().enumerate() {
                let rest = all.without(x);
                let others = VertexSet::from([p, q]);
                for bits in 0..1u64 << g.n() {
                    let side = VertexSet::from_bits(bits);
                    let other = rest - side;
                    if !side.is_subset(rest)
                        || side.len() < 5
                        || other.len() < 5
                        || rho_del(g, side, VertexSet::singleton(x)) != 2
                    {
                        continue;
                    }
                    t.count("separations");
                    let one_each = (side & others).len() == 1;
                    let inner = side - others;
                    let outer = other - others;
                    let ranks_ok = g.block_rank(inner, other.with(x)) == 3 && g.block_rank(side.with(x), outer) == 3;
                    t.check("sep", one_each && ranks_ok, || {
                        format!("{} T={} x={x} X={side}", g6(g), tr.set())
                    });
                    if side.contains(p) && other.contains(q) {
                        brute[i] = true;
                    }
                }
            }
            let found = find_barrier(g, &tr).expect("triplet");
            if found.is_some() {
                t.count("barriers");
            }
            let valid = found.as_ref().is_none_or(|b| b.is_valid_for(g));
            t.check(
                "barrier-matches-brute-force",
                found.is_some() == brute.iter().all(|&x| x) && valid,
                || format!("{} T={}", g6(g), tr.set()),
            );
            let some_deletion_32 = tr
                .vertices()
                .iter()
                .any(|&x| is_rank_connected(&g.delete_vertex(x).expect("in range").0, 3, 2));
            if some_deletion_32 {
                t.check("no-barrier-when-a-deletion-is-3+2", found.is_none(), || {
                    format!("{} T={}", g6(g), tr.set())
                });
            }
        }
    })
}

/// Excluded pivot-minors straight from the definition, with the tree
/// enumeration oracle for every rank-width.
fn definitional_excluded(g: &Graph, k: usize) -> bool {
    let rw = |h: &Graph| rank_width_naive(h).expect("at most 7 vertices");
    rw(g) > k
        && (0..g.n()).all(|v| {
            rw(&g.delete_vertex(v).expect("in range").0) <= k && rw(&local_contract(g, v).expect("in range").0) <= k
        })
}

fn search_k1(max_n: usize) -> Result<Tally, GraphError> {
    let graphs = graphs_up_to(max_n)?;
    let input: String = graphs.iter().map(|g| to_graph6(g) + "\n").collect();
    let mut t = Tally::default();
    let oracle: BTreeSet<String> = graphs
        .par_iter()
        .filter(|g| definitional_excluded(g, 1))
        .map(|g| canonical_form(g).expect("small").into_string())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let pruned = search_excluded(input.as_bytes(), 1, &SearchConfig::default()).expect("valid input");
    let unpruned = search_excluded(
        input.as_bytes(),
        1,
        &SearchConfig {
            prune: false,
            ..SearchConfig::default()
        },
    )
    .expect("valid input");
    let found: BTreeSet<String> = pruned
        .all_canonical_forms()
        .into_iter()
        .map(|c| c.into_string())
        .collect();
    t.counters.insert("oracle-graphs".into(), oracle.len() as u64);
    t.counters.insert("records".into(), pruned.records.len() as u64);
    t.check("matches-oracle", found == oracle, || {
        let missing: Vec<_> = oracle.difference(&found).collect();
        let extra: Vec<_> = found.difference(&oracle).collect();
        format!("missing {missing:?} extra {extra:?}")
    });
    let c5 = canonical_form(&Graph::cycle(5).expect("valid"))
        .expect("small")
        .into_string();
    t.check("contains-c5", found.contains(&c5), || "C5 not found".into());
    t.check("prune-off-identical", pruned.records == unpruned.records, || {
        "pruning changed the record list".into()
    });
    t.check("no-violations", pruned.summary.violations.is_empty(), || {
        pruned.summary.violations.join("; ")
    });
    Ok(t)
}

fn search_k2(max_n: usize) -> Result<Tally, GraphError> {
    let graphs = graphs_up_to(max_n)?;
    let input: String = graphs.iter().map(|g| to_graph6(g) + "\n").collect();
    let mut t = Tally::default();
    let pruned = search_excluded(input.as_bytes(), 2, &SearchConfig::default()).expect("valid input");
    for r in &pruned.records {
        t.count("records");
        let g = crate::graph6::parse_graph6(r.canonical.graph6()).expect("canonical");
        t.check("prime-3+2", is_prime(&g) && is_rank_connected(&g, 3, 2), || {
            r.canonical.to_string()
        });
    }
    t.check("no-violations", pruned.summary.violations.is_empty(), || {
        pruned.summary.violations.join("; ")
    });
    let unpruned = search_excluded(
        input.as_bytes(),
        2,
        &SearchConfig {
            prune: false,
            ..SearchConfig::default()
        },
    )
    .expect("valid input");
    t.check("prune-off-identical", pruned.records == unpruned.records, || {
        "pruning changed the record list".into()
    });
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nope", &Budget::default()),
            Err(VerifyError::UnknownSuite(_))
        ));
    }

    #[test]
    fn planted_sets_have_low_cut_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..50 {
            let g = planted_graph(&mut rng, 10 + i % 3, 3 + i % 2, 2);
            let low = (0..1u64 << g.n())
                .map(VertexSet::from_bits)
                .any(|x| x.len() == 3 + i % 2 && g.cut_rank(x) <= 2);
            assert!(low);
        }
    }

    #[test]
    fn tally_keeps_first_counterexample() {
        let mut a = Tally::default();
        a.check("p", true, || unreachable!());
        let mut b = Tally::default();
        b.check("p", false, || "first".into());
        let mut c = Tally::default();
        c.check("p", false, || "second".into());
        a.merge(b);
        a.merge(c);
        let r = a.into_report("s");
        assert_eq!(r.properties[0].violations, 2);
        assert_eq!(r.properties[0].counterexample.as_deref(), Some("first"));
        assert!(!r.passed);
    }

    #[test]
    fn small_suites_pass() {
        for name in ["allys-n5", "rwd-oracle-n6", "tangle-n6"] {
            let r = run_suite(name, &Budget::default()).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
