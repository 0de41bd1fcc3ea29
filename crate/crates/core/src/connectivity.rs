//! Splits, primality, `k^{+l}` rank-connectivity, fully closed sets,
//! triplets, barriers, and the two chain-theorem reducers.
//!
//! All scans are exhaustive over vertex subsets and break ties by the
//! smallest bitmask, so results are reproducible bit for bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CutRankTable, Graph, GraphError, VertexSet};
use crate::graph6::to_graph6;
use crate::pivot::{
    contraction_reduction, one_smaller_pivot_minors, pivot, pivot_orbit, PivotError, PivotSequence, Reduction,
};

/// Pivot-orbit exploration budget used by the reducers before giving up.
pub const DEFAULT_ORBIT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("theorem violation on {graph6}: {detail}")]
    TheoremViolation { graph6: String, detail: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pivot(#[from] PivotError),
}

fn violation(g: &Graph, detail: impl Into<String>) -> ChainError {
    ChainError::TheoremViolation {
        graph6: to_graph6(g),
        detail: detail.into(),
    }
}

fn precondition(ok: bool, what: impl FnOnce() -> String) -> Result<(), ChainError> {
    if ok {
        Ok(())
    } else {
        Err(ChainError::Precondition(what()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    pub orbit_cap: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            orbit_cap: DEFAULT_ORBIT_CAP,
        }
    }
}

/// Outcome of a `k^{+l}` check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConnectivityVerdict {
    Holds,
    /// A set `X` with `rho(X) < k` and `min(|X|, |V - X|) >= k + l`.
    Violated(VertexSet),
}

impl ConnectivityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ConnectivityVerdict::Holds)
    }

    pub fn witness(&self) -> Option<VertexSet> {
        match self {
            ConnectivityVerdict::Holds => None,
            ConnectivityVerdict::Violated(x) => Some(*x),
        }
    }
}

/// Calls `f` on every subset of `universe` in increasing bitmask order,
/// stopping at the first `Some`.
fn scan_subsets<T>(universe: VertexSet, mut f: impl FnMut(VertexSet) -> Option<T>) -> Option<T> {
    let u = universe.bits();
    let mut s = 0u64;
    loop {
        if let Some(t) = f(VertexSet::from_bits(s)) {
            return Some(t);
        }
        if s == u {
            return None;
        }
        // Next submask of `u` in increasing order.
        s = (s | !u).wrapping_add(1) & u;
    }
}

/// The split `(A, V - A)` with the smallest mask `A`, if the graph has one.
pub fn find_split(g: &Graph) -> Option<(VertexSet, VertexSet)> {
    let n = g.n();
    if n < 4 {
        return None;
    }
    let all = g.vertices();
    // Of a split and its complement, the side without the top vertex has the
    // smaller mask.
    scan_subsets(all.without(n - 1), |a| {
        let k = a.len();
        (k >= 2 && n - k >= 2 && g.cut_rank(a) <= 1).then(|| (a, a.complement_in(all)))
    })
}

/// Connected with no split.
pub fn is_prime(g: &Graph) -> bool {
    g.is_connected() && find_split(g).is_none()
}

/// Scans `k + l <= |X| <= n/2` in mask order for a set with `rho(X) < k`.
pub fn check_rank_connectivity(g: &Graph, k: usize, l: usize) -> ConnectivityVerdict {
    let n = g.n();
    let lo = k + l;
    if k == 0 || lo > n / 2 {
        return ConnectivityVerdict::Holds;
    }
    let hi = n / 2;
    scan_subsets(g.vertices(), |x| {
        let s = x.len();
        (s >= lo && s <= hi && g.cut_rank(x) < k).then_some(x)
    })
    .map_or(ConnectivityVerdict::Holds, ConnectivityVerdict::Violated)
}

pub fn is_rank_connected(g: &Graph, k: usize, l: usize) -> bool {
    check_rank_connectivity(g, k, l).holds()
}

/// `m^{+0}` for every `m <= k`.
pub fn is_k_rank_connected(g: &Graph, k: usize) -> bool {
    (1..=k).all(|m| is_rank_connected(g, m, 0))
}

/// Largest `k <= n/2` such that the graph is `m^{+0}` for all `m <= k`.
///
/// `m^{+0}` fails exactly for `rho(X) < m <= |X|` with `|X| <= n/2`, so the
/// answer is the least `rho(X)` over sets with `rho(X) < |X|`, capped at `n/2`.
pub fn rank_connectivity(g: &Graph) -> usize {
    let n = g.n();
    let cap = n / 2;
    let mut best = cap;
    scan_subsets(g.vertices(), |x| {
        let s = x.len();
        if s >= 1 && s <= cap {
            let r = g.cut_rank(x);
            if r < s {
                best = best.min(r);
            }
        }
        (best == 0).then_some(())
    });
    best
}

/// `rho(X) = 2`, `|X| > 2`, and adding any outside vertex raises the cut-rank.
pub fn is_fully_closed(g: &Graph, x: VertexSet) -> bool {
    x.is_subset(g.vertices())
        && x.len() > 2
        && g.cut_rank(x) == 2
        && x.complement_in(g.vertices()).iter().all(|v| g.cut_rank(x.with(v)) > 2)
}

/// All fully closed sets, in mask order.
pub fn find_fully_closed_sets(g: &Graph) -> Result<Vec<VertexSet>, GraphError> {
    let table = CutRankTable::new(g)?;
    let all = g.vertices();
    let mut out = Vec::new();
    scan_subsets(all, |x| {
        if x.len() > 2 && table.get(x) == 2 && x.complement_in(all).iter().all(|v| table.get(x.with(v)) > 2) {
            out.push(x);
        }
        None::<()>
    });
    Ok(out)
}

/// Finds a vertex `v` of the fully closed set `a` such that `G \ v` or `G/v`
/// is prime, moving through the pivot orbit of `g` if the direct candidates
/// fail.
pub fn reduce_fully_closed(g: &Graph, a: VertexSet, cfg: &ChainConfig) -> Result<Reduction, ChainError> {
    precondition(g.n() >= 8, || format!("need at least 8 vertices, got {}", g.n()))?;
    precondition(is_prime(g), || "graph is not prime".into())?;
    precondition(is_fully_closed(g, a), || format!("{a} is not fully closed"))?;

    let found = search_orbit(g, cfg, |h, seq| {
        for v in a {
            let del = Reduction::after_pivots(seq.clone(), h, v).expect("vertex in range");
            if is_prime(&del.result) {
                return Some(del);
            }
            if seq.is_empty() {
                let con = contraction_reduction(h, v).expect("vertex in range");
                if is_prime(&con.result) {
                    return Some(con);
                }
            }
        }
        None
    });
    match found {
        OrbitSearch::Found(r) => Ok(r),
        OrbitSearch::Exhausted { overflow, .. } => Err(violation(
            g,
            format!(
                "no vertex of the fully closed set {a} has a prime deletion or contraction{}",
                if overflow { " (orbit cap reached)" } else { "" }
            ),
        )),
    }
}

enum OrbitSearch<T> {
    Found(T),
    Exhausted { overflow: bool, saw_cycle: bool },
}

/// Runs `probe` on `g` (empty pivot sequence) and then on every other member
/// of its pivot orbit, returning the first hit.
fn search_orbit<T>(
    g: &Graph,
    cfg: &ChainConfig,
    mut probe: impl FnMut(&Graph, &PivotSequence) -> Option<T>,
) -> OrbitSearch<T> {
    if let Some(t) = probe(g, &PivotSequence::new()) {
        return OrbitSearch::Found(t);
    }
    let orbit = pivot_orbit(g, cfg.orbit_cap);
    let mut saw_cycle = g.is_cycle();
    for (i, h) in orbit.members().iter().enumerate().skip(1) {
        saw_cycle |= h.is_cycle();
        if let Some(t) = probe(h, &orbit.sequence_to(i)) {
            return OrbitSearch::Found(t);
        }
    }
    OrbitSearch::Exhausted {
        overflow: orbit.overflowed(),
        saw_cycle,
    }
}

/// Three distinct vertices `T` with `rho(T) = 2` and
/// `rho_{G \ x}(T - x) = 2` for each `x` in `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triplet([usize; 3]);

impl Triplet {
    /// Sorts the vertices; `None` unless they are distinct.
    pub fn new(mut vs: [usize; 3]) -> Option<Self> {
        vs.sort_unstable();
        (vs[0] != vs[1] && vs[1] != vs[2]).then_some(Triplet(vs))
    }

    pub fn vertices(&self) -> [usize; 3] {
        self.0
    }

    pub fn set(&self) -> VertexSet {
        VertexSet::from(self.0)
    }
}

/// The triplet predicate on an arbitrary set.
pub fn is_triplet(g: &Graph, t: VertexSet) -> bool {
    t.len() == 3
        && t.is_subset(g.vertices())
        && g.cut_rank(t) == 2
        && t.iter()
            .all(|x| g.cut_rank_within(t.without(x), g.vertices().without(x)) == 2)
}

/// All triplets, in mask order.
pub fn find_triplets(g: &Graph) -> Vec<Triplet> {
    let n = g.n();
    let mut out = Vec::new();
    for c in 2..n {
        for b in 1..c {
            for a in 0..b {
                let t = VertexSet::from([a, b, c]);
                if is_triplet(g, t) {
                    out.push(Triplet([a, b, c]));
                }
            }
        }
    }
    out
}

/// Pivots `g` until the cut-rank-2 set `t` becomes a triplet.
///
/// While some `x` in `t` has `rho_{G \ x}(t - x) < 2`, pivot `x` with its
/// lowest neighbour outside `t`; two such pivots always suffice.
pub fn realize_triplet(g: &Graph, t: [usize; 3]) -> Result<(Graph, PivotSequence), ChainError> {
    let triple = Triplet::new(t).ok_or_else(|| ChainError::Precondition(format!("{t:?} are not distinct")))?;
    let set = triple.set();
    precondition(set.is_subset(g.vertices()), || format!("{set} out of range"))?;
    precondition(is_prime(g), || "graph is not prime".into())?;
    precondition(g.cut_rank(set) == 2, || format!("cut-rank of {set} is not 2"))?;

    let mut h = g.clone();
    let mut seq = PivotSequence::new();
    loop {
        let all = h.vertices();
        let failing = set
            .iter()
            .find(|&x| h.cut_rank_within(set.without(x), all.without(x)) < 2);
        let Some(x) = failing else {
            return Ok((h, seq));
        };
        if seq.len() == 2 {
            return Err(violation(g, format!("{set} is still not a triplet after two pivots")));
        }
        let Some(y) = (h.neighbors(x) - set).first() else {
            return Err(violation(g, format!("vertex {x} has no neighbour outside {set}")));
        };
        h = pivot(&h, x, y)?;
        seq.push(x, y);
    }
}

/// Partitions `(A_b, A_c)`, `(B_a, B_c)`, `(C_a, C_b)` of `V - a`, `V - b`,
/// `V - c` with every cut-rank 2, every part of size at least 5, and the
/// indexing vertex inside each part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Barrier {
    pub triplet: Triplet,
    /// `(A_b, A_c)`, partitioning `V - a`.
    pub a_sides: (VertexSet, VertexSet),
    /// `(B_a, B_c)`, partitioning `V - b`.
    pub b_sides: (VertexSet, VertexSet),
    /// `(C_a, C_b)`, partitioning `V - c`.
    pub c_sides: (VertexSet, VertexSet),
}

impl Barrier {
    /// Checks all three barrier conditions against `g` directly.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let [a, b, c] = self.triplet.vertices();
        let all = g.vertices();
        let parts = [
            (a, self.a_sides, b, c),
            (b, self.b_sides, a, c),
            (c, self.c_sides, a, b),
        ];
        parts.iter().all(|&(x, (p, q), in_p, in_q)| {
            let rest = all.without(x);
            (p & q).is_empty()
                && (p | q) == rest
                && g.cut_rank_within(p, rest) == 2
                && p.len() >= 5
                && q.len() >= 5
                && p.contains(in_p)
                && q.contains(in_q)
        })
    }
}

/// Smallest-mask barrier for the triplet `t`, if one exists.
pub fn find_barrier(g: &Graph, t: &Triplet) -> Result<Option<Barrier>, ChainError> {
    precondition(is_triplet(g, t.set()), || format!("{} is not a triplet", t.set()))?;
    let [a, b, c] = t.vertices();
    if g.n() < 11 {
        return Ok(None);
    }
    let side = |x: usize, p: usize, q: usize| -> Option<(VertexSet, VertexSet)> {
        let rest = g.vertices().without(x);
        let free = rest.without(p).without(q);
        scan_subsets(free, |s| {
            let part = s.with(p);
            let other = part.complement_in(rest);
            (part.len() >= 5 && other.len() >= 5 && g.cut_rank_within(part, rest) == 2).then_some((part, other))
        })
    };
    let (Some(a_sides), Some(b_sides), Some(c_sides)) = (side(a, b, c), side(b, a, c), side(c, a, b)) else {
        return Ok(None);
    };
    Ok(Some(Barrier {
        triplet: *t,
        a_sides,
        b_sides,
        c_sides,
    }))
}

/// One step of the chain theorem for prime graphs: a prime pivot-minor with
/// one vertex fewer, or `None` when `g` is pivot-equivalent to a cycle.
pub fn allys_step(g: &Graph, cfg: &ChainConfig) -> Result<Option<Reduction>, ChainError> {
    precondition(g.n() >= 5, || format!("need at least 5 vertices, got {}", g.n()))?;
    precondition(is_prime(g), || "graph is not prime".into())?;

    let found = search_orbit(g, cfg, |h, seq| {
        if seq.is_empty() {
            return one_smaller_pivot_minors(h).into_iter().find(|r| is_prime(&r.result));
        }
        (0..h.n())
            .map(|v| Reduction::after_pivots(seq.clone(), h, v).expect("vertex in range"))
            .find(|r| is_prime(&r.result))
    });
    match found {
        OrbitSearch::Found(r) => Ok(Some(r)),
        OrbitSearch::Exhausted { saw_cycle: true, .. } => Ok(None),
        OrbitSearch::Exhausted { overflow, .. } => Err(violation(
            g,
            if overflow {
                "no prime one-vertex reduction within the orbit cap"
            } else {
                "no prime one-vertex reduction and the pivot orbit contains no cycle"
            },
        )),
    }
}

/// Prime and `3^{+3}`: the target of [`main_chain_step`].
pub fn is_prime_3_3(g: &Graph) -> bool {
    is_prime(g) && is_rank_connected(g, 3, 3)
}

/// Which branch of the structured search produced a main-chain reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MainRoute {
    /// `g` is 3-rank-connected; a deletion or contraction works.
    ThreeRankConnected,
    /// `g` is not `3^{+1}`; reduce inside a 4-vertex fully closed set.
    FullyClosed,
    /// `g` is `3^{+1}` but not 3-rank-connected; delete from a triplet.
    Triplet,
    /// Exhaustive deletions and contractions, then the pivot orbit.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainStep {
    pub reduction: Reduction,
    pub route: MainRoute,
}

fn check_main_preconditions(g: &Graph) -> Result<(), ChainError> {
    precondition(g.n() >= 10, || format!("need at least 10 vertices, got {}", g.n()))?;
    precondition(is_prime(g), || "graph is not prime".into())?;
    precondition(is_rank_connected(g, 3, 2), || {
        "graph is not 3^{+2}-rank-connected".into()
    })
}

/// A prime `3^{+3}` pivot-minor of a prime `3^{+2}` graph on at least 10
/// vertices, with one vertex fewer.
pub fn main_chain_step(g: &Graph, cfg: &ChainConfig) -> Result<Reduction, ChainError> {
    main_chain_step_traced(g, cfg).map(|s| s.reduction)
}

/// [`main_chain_step`], also reporting which branch succeeded.
pub fn main_chain_step_traced(g: &Graph, cfg: &ChainConfig) -> Result<MainStep, ChainError> {
    check_main_preconditions(g)?;
    let step = |reduction, route| Ok(MainStep { reduction, route });

    if is_k_rank_connected(g, 3) {
        let hit = one_smaller_pivot_minors(g)
            .into_iter()
            .find(|r| is_prime_3_3(&r.result));
        if let Some(r) = hit {
            return step(r, MainRoute::ThreeRankConnected);
        }
    } else if let ConnectivityVerdict::Violated(_) = check_rank_connectivity(g, 3, 1) {
        // A 4-set of cut-rank 2; with 3^{+2} and n >= 10 it is fully closed.
        let x = first_set_with_rank(g, 4, 2);
        if let Some(x) = x {
            let hit = x
                .iter()
                .flat_map(|v| [Reduction::deletion(g, v).ok(), contraction_reduction(g, v).ok()])
                .flatten()
                .find(|r| is_prime_3_3(&r.result));
            if let Some(r) = hit {
                return step(r, MainRoute::FullyClosed);
            }
            if is_fully_closed(g, x) {
                let r = reduce_fully_closed(g, x, cfg)?;
                if is_prime_3_3(&r.result) {
                    return step(r, MainRoute::FullyClosed);
                }
            }
        }
    } else if let Some(t) = first_set_with_rank(g, 3, 2) {
        let [a, b, c]: [usize; 3] = t.to_vec().try_into().expect("three vertices");
        let (h, seq) = realize_triplet(g, [a, b, c])?;
        let hit = [a, b, c]
            .into_iter()
            .map(|v| Reduction::after_pivots(seq.clone(), &h, v).expect("vertex in range"))
            .find(|r| is_prime_3_3(&r.result));
        if let Some(r) = hit {
            return step(r, MainRoute::Triplet);
        }
    }

    let r = main_chain_step_exhaustive(g, cfg)?;
    step(r, MainRoute::Fallback)
}

/// The unstructured search: every deletion and contraction, then every
/// deletion from each pivot-equivalent graph.
pub fn main_chain_step_exhaustive(g: &Graph, cfg: &ChainConfig) -> Result<Reduction, ChainError> {
    check_main_preconditions(g)?;
    let found = search_orbit(g, cfg, |h, seq| {
        if seq.is_empty() {
            return one_smaller_pivot_minors(h)
                .into_iter()
                .find(|r| is_prime_3_3(&r.result));
        }
        (0..h.n())
            .map(|v| Reduction::after_pivots(seq.clone(), h, v).expect("vertex in range"))
            .find(|r| is_prime_3_3(&r.result))
    });
    match found {
        OrbitSearch::Found(r) => Ok(r),
        OrbitSearch::Exhausted { overflow, .. } => Err(violation(
            g,
            format!(
                "no prime 3^{{+3}} one-vertex pivot-minor{}",
                if overflow { " within the orbit cap" } else { "" }
            ),
        )),
    }
}

/// Smallest-mask set of the given size and cut-rank.
fn first_set_with_rank(g: &Graph, size: usize, rank: usize) -> Option<VertexSet> {
    scan_subsets(g.vertices(), |x| {
        (x.len() == size && g.cut_rank(x) == rank).then_some(x)
    })
}
