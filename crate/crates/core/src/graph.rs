//! Simple undirected graphs on at most 64 vertices, stored as one adjacency
//! word per vertex, together with the cut-rank queries built on them.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Sub};

use thiserror::Error;

use crate::gf2::{low_mask, rank_of_rows, MAX_COLS};

pub const MAX_VERTICES: usize = MAX_COLS;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex count {0} exceeds the {MAX_VERTICES}-vertex limit")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("adjacency is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("vertex sets overlap in {0}")]
    OverlappingSets(VertexSet),
    #[error("vertex set {set} is not contained in a graph on {n} vertices")]
    SetOutOfRange { set: VertexSet, n: usize },
    #[error("unsupported size: {0}")]
    Unsupported(String),
}

/// A subset of vertices, as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    /// The set `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    #[must_use]
    pub const fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    #[must_use]
    pub const fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1 << v))
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// `universe - self`.
    #[must_use]
    pub const fn complement_in(self, universe: VertexSet) -> Self {
        VertexSet(universe.0 & !self.0)
    }

    /// Lowest element, if any.
    pub const fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().fold(0, |acc, v| acc | 1 << v))
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(vs: [usize; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;
    fn into_iter(self) -> Members {
        Members(self.0)
    }
}

/// Iterator over the members of a [`VertexSet`] in increasing order.
#[derive(Debug, Clone)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitXor for VertexSet {
    type Output = VertexSet;
    fn bitxor(self, rhs: Self) -> Self {
        VertexSet(self.0 ^ rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Old-to-new vertex labels after a deletion or induced-subgraph step.
// Serialised as the sorted list of members.
impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let vs = <Vec<usize> as serde::Deserialize>::deserialize(d)?;
        if let Some(&v) = vs.iter().find(|&&v| v >= 64) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(vs.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexMap(Vec<Option<usize>>);

impl VertexMap {
    pub fn identity(n: usize) -> Self {
        VertexMap((0..n).map(Some).collect())
    }

    /// New label of `old`, or `None` if it was removed.
    pub fn get(&self, old: usize) -> Option<usize> {
        self.0.get(old).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.0
    }

    /// Image of a set of old labels; removed vertices are dropped.
    pub fn map_set(&self, set: VertexSet) -> VertexSet {
        set.iter().filter_map(|v| self.get(v)).collect()
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        VertexMap(self.0.iter().map(|o| o.and_then(|m| other.get(m))).collect())
    }
}

/// A simple undirected graph on `n <= 64` vertices.
///
/// Bit `j` of `adj[i]` is set iff `i` and `j` are adjacent. The adjacency is
/// symmetric, loop-free, and has no bits at positions `>= n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Validates and wraps raw adjacency words.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mask = low_mask(n);
        for (i, &row) in adj.iter().enumerate() {
            if row & !mask != 0 {
                let vertex = (row & !mask).trailing_zeros() as usize;
                return Err(GraphError::VertexOutOfRange { vertex, n });
            }
            if row >> i & 1 == 1 {
                return Err(GraphError::Loop(i));
            }
            for j in VertexSet(row) {
                if adj[j] >> i & 1 == 0 {
                    return Err(GraphError::Asymmetric(i, j));
                }
            }
        }
        Ok(Graph { n, adj })
    }

    pub(crate) fn from_adjacency_unchecked(adj: Vec<u64>) -> Self {
        debug_assert!(Graph::from_adjacency(adj.clone()).is_ok());
        Graph { n: adj.len(), adj }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        let all = low_mask(n);
        for (i, row) in g.adj.iter_mut().enumerate() {
            *row = all & !(1 << i);
        }
        Ok(g)
    }

    /// The cycle `0-1-..-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::Unsupported(format!("cycle on {n} vertices")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The path `0-1-..-(n-1)`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| VertexSet(self.adj[u] & !low_mask(u + 1)).iter().map(move |v| (u, v)))
            .collect()
    }

    pub(crate) fn adj_mut(&mut self) -> &mut [u64] {
        &mut self.adj
    }

    /// True for graphs on at most one vertex.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.component_of(0) == self.vertices()
    }

    pub fn component_of(&self, v: usize) -> VertexSet {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for u in VertexSet(frontier) {
                next |= self.adj[u];
            }
            frontier = next & !seen;
            seen |= next;
        }
        VertexSet(seen)
    }

    /// True iff the graph is a single cycle through all its vertices.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && (0..self.n).all(|v| self.degree(v) == 2) && self.is_connected()
    }

    /// `G[keep]`, relabelled to `0..|keep|` preserving order.
    pub fn induced_subgraph(&self, keep: VertexSet) -> (Graph, VertexMap) {
        debug_assert!(keep.is_subset(self.vertices()));
        let keep_list = keep.to_vec();
        let mut map = vec![None; self.n];
        for (new, &old) in keep_list.iter().enumerate() {
            map[old] = Some(new);
        }
        let adj = keep_list
            .iter()
            .map(|&old| compress(self.adj[old] & keep.0, keep.0))
            .collect();
        (
            Graph {
                n: keep_list.len(),
                adj,
            },
            VertexMap(map),
        )
    }

    /// `G \ v`, relabelled to a dense prefix.
    pub fn delete_vertex(&self, v: usize) -> Result<(Graph, VertexMap), GraphError> {
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(self.induced_subgraph(self.vertices().without(v)))
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut adj = vec![0u64; self.n];
        for (v, &row) in self.adj.iter().enumerate() {
            adj[perm[v]] = VertexSet(row).iter().fold(0, |acc, u| acc | 1 << perm[u]);
        }
        Graph { n: self.n, adj }
    }

    fn check_set(&self, x: VertexSet) {
        debug_assert!(
            x.is_subset(self.vertices()),
            "{x} not within a graph on {} vertices",
            self.n
        );
    }

    /// The cut-rank `rho(X)`: GF(2) rank of the `X x (V - X)` adjacency block.
    pub fn cut_rank(&self, x: VertexSet) -> usize {
        self.check_set(x);
        self.block_rank(x, x.complement_in(self.vertices()))
    }

    /// `rho(X, Y)`: rank of the `X x Y` adjacency block for disjoint `X`, `Y`.
    pub fn cut_rank_pair(&self, x: VertexSet, y: VertexSet) -> Result<usize, GraphError> {
        for set in [x, y] {
            if !set.is_subset(self.vertices()) {
                return Err(GraphError::SetOutOfRange { set, n: self.n });
            }
        }
        if !(x & y).is_empty() {
            return Err(GraphError::OverlappingSets(x & y));
        }
        Ok(self.block_rank(x, y))
    }

    /// Cut-rank of `X` in the induced subgraph `G[within]`, without relabelling.
    ///
    /// `cut_rank_within(x, V - {a})` is `rho_{G \ a}(X)` in the labels of `G`.
    pub fn cut_rank_within(&self, x: VertexSet, within: VertexSet) -> usize {
        debug_assert!(x.is_subset(within));
        self.block_rank(x, within - x)
    }

    /// Rank of `A[X, Y]` with no disjointness check.
    #[inline]
    pub fn block_rank(&self, x: VertexSet, y: VertexSet) -> usize {
        let mut rows = [0u64; MAX_COLS];
        let mut len = 0;
        for v in x {
            let r = self.adj[v] & y.0;
            if r != 0 {
                rows[len] = r;
                len += 1;
            }
        }
        rank_of_rows(&rows[..len])
    }
}

/// Packs the bits of `bits` selected by `mask` into the low positions.
fn compress(bits: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut i = 0;
    while m != 0 {
        let b = m.trailing_zeros();
        out |= (bits >> b & 1) << i;
        i += 1;
        m &= m - 1;
    }
    out
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({} {:?})", crate::graph6::to_graph6(self), self.edges())
    }
}

/// Cut-ranks of every subset of a graph's vertices, indexed by bitmask.
///
/// Needs `2^n` bytes, so it is only built for small graphs.
#[derive(Clone)]
pub struct CutRankTable {
    n: usize,
    ranks: Vec<u8>,
}

/// Largest graph for which a full cut-rank table is built.
pub const TABLE_MAX_VERTICES: usize = 24;

impl CutRankTable {
    pub fn new(g: &Graph) -> Result<Self, GraphError> {
        let n = g.n();
        if n > TABLE_MAX_VERTICES {
            return Err(GraphError::Unsupported(format!(
                "cut-rank table for {n} vertices (limit {TABLE_MAX_VERTICES})"
            )));
        }
        let full = low_mask(n);
        let size = 1usize << n;
        let mut ranks = vec![0u8; size];
        // rho(X) = rho(V - X): compute the half without the top vertex, mirror the rest.
        let half = if n == 0 { 1 } else { size / 2 };
        for mask in 0..half {
            let r = g.block_rank(VertexSet(mask as u64), VertexSet(!(mask as u64) & full)) as u8;
            ranks[mask] = r;
            ranks[(!(mask as u64) & full) as usize] = r;
        }
        Ok(CutRankTable { n, ranks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: VertexSet) -> usize {
        self.ranks[x.0 as usize] as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.ranks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;

    fn c5() -> Graph {
        Graph::cycle(5).unwrap()
    }

    #[test]
    fn from_edges_examples() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2, Graph::complete(2).unwrap());
        assert_eq!(Graph::from_edges(3, &[]).unwrap().edge_count(), 0);
        let dedup = Graph::from_edges(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(dedup.edges(), vec![(0, 1)]);
    }

    #[test]
    fn from_edges_errors() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert!(Graph::empty(65).is_err());
    }

    #[test]
    fn from_adjacency_validates() {
        assert_eq!(
            Graph::from_adjacency(vec![0b10, 0b00]),
            Err(GraphError::Asymmetric(0, 1))
        );
        assert_eq!(Graph::from_adjacency(vec![0b1]), Err(GraphError::Loop(0)));
        assert!(Graph::from_adjacency(vec![0b10, 0b01]).is_ok());
    }

    #[test]
    fn cut_rank_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(c5().cut_rank(VertexSet::EMPTY), 0);
        assert_eq!(k4.cut_rank(VertexSet::from([0, 1])), 1);
        // Oracle: the explicit {0,1} x {2,3,4} block of C5 through the matrix kernel.
        let block = BitMatrix::from_rows(3, vec![0b100, 0b001]).unwrap();
        assert_eq!(block.rank(), 2);
        assert_eq!(c5().cut_rank(VertexSet::from([0, 1])), 2);
    }

    #[test]
    fn cut_rank_pair_examples() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(
            k4.cut_rank_pair(VertexSet::from([0]), VertexSet::from([1, 2, 3])),
            Ok(1)
        );
        assert_eq!(c5().cut_rank_pair(VertexSet::from([0, 1]), VertexSet::from([3])), Ok(0));
        assert_eq!(c5().cut_rank_pair(VertexSet::from([0, 1]), VertexSet::EMPTY), Ok(0));
        assert_eq!(
            c5().cut_rank_pair(VertexSet::from([0, 1]), VertexSet::from([1, 2])),
            Err(GraphError::OverlappingSets(VertexSet::from([1])))
        );
    }

    #[test]
    fn delete_vertex_examples() {
        let (g, map) = Graph::complete(3).unwrap().delete_vertex(0).unwrap();
        assert_eq!(g, Graph::complete(2).unwrap());
        assert_eq!(map.as_slice(), &[None, Some(0), Some(1)]);

        for v in 0..5 {
            let (p, _) = c5().delete_vertex(v).unwrap();
            assert_eq!(p.n(), 4);
            assert_eq!(p.edge_count(), 3);
            assert!(p.is_connected());
            assert_eq!((0..4).map(|u| p.degree(u)).max(), Some(2));
        }
        assert_eq!(
            c5().delete_vertex(2).unwrap().0,
            Graph::from_edges(4, &[(2, 3), (3, 0), (0, 1)]).unwrap()
        );

        let (empty, _) = Graph::empty(1).unwrap().delete_vertex(0).unwrap();
        assert_eq!(empty.n(), 0);
        assert!(Graph::empty(1).unwrap().delete_vertex(1).is_err());
    }

    #[test]
    fn cut_rank_table_matches_direct() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 3), (1, 5)]).unwrap();
        let table = CutRankTable::new(&g).unwrap();
        for mask in 0..64u64 {
            assert_eq!(
                table.get(VertexSet::from_bits(mask)),
                g.cut_rank(VertexSet::from_bits(mask))
            );
        }
        let empty = CutRankTable::new(&Graph::empty(0).unwrap()).unwrap();
        assert_eq!(empty.get(VertexSet::EMPTY), 0);
    }

    #[test]
    fn cut_rank_within_is_deletion_cut_rank() {
        let g = c5();
        let (h, map) = g.delete_vertex(0).unwrap();
        let x = VertexSet::from([1, 2]);
        assert_eq!(
            g.cut_rank_within(x, g.vertices().without(0)),
            h.cut_rank(map.map_set(x))
        );
    }

    #[test]
    fn vertex_set_display() {
        assert_eq!(VertexSet::from([0, 2, 5]).to_string(), "{0,2,5}");
        assert_eq!(VertexSet::EMPTY.to_string(), "{}");
    }
}
