//! Pivoting an edge, the contraction `G/v`, pivot orbits, and the
//! one-vertex-smaller pivot-minors of a graph.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexMap, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PivotError {
    #[error("{v}{w} is not an edge")]
    NotAnEdge { v: usize, w: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Pivots applied in order; each pair must be an edge when it is reached.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PivotSequence(pub Vec<(usize, usize)>);

impl PivotSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, v: usize, w: usize) {
        self.0.push((v, w));
    }

    #[must_use]
    pub fn then(&self, v: usize, w: usize) -> Self {
        let mut s = self.clone();
        s.push(v, w);
        s
    }

    /// Replays the sequence from `base`.
    pub fn apply(&self, base: &Graph) -> Result<Graph, PivotError> {
        self.0.iter().try_fold(base.clone(), |g, &(v, w)| pivot(&g, v, w))
    }
}

/// A one-vertex-smaller pivot-minor together with its witness:
/// `result = delete_vertex(pivots.apply(base), deleted)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub pivots: PivotSequence,
    pub deleted: usize,
    pub result: Graph,
    pub index_map: VertexMap,
}

impl Reduction {
    /// Re-derives `result` from `base` and checks it matches.
    pub fn replays_from(&self, base: &Graph) -> bool {
        let Ok(pivoted) = self.pivots.apply(base) else {
            return false;
        };
        match pivoted.delete_vertex(self.deleted) {
            Ok((g, map)) => g == self.result && map == self.index_map,
            Err(_) => false,
        }
    }

    /// `G \ v` with no pivots.
    pub fn deletion(g: &Graph, v: usize) -> Result<Self, GraphError> {
        let (result, index_map) = g.delete_vertex(v)?;
        Ok(Reduction {
            pivots: PivotSequence::new(),
            deleted: v,
            result,
            index_map,
        })
    }

    /// Deletes `v` from `pivots.apply(base)`, where `pivoted` is that graph.
    pub(crate) fn after_pivots(pivots: PivotSequence, pivoted: &Graph, v: usize) -> Result<Self, GraphError> {
        let (result, index_map) = pivoted.delete_vertex(v)?;
        Ok(Reduction {
            pivots,
            deleted: v,
            result,
            index_map,
        })
    }
}

/// `G ∧ vw`.
///
/// Every pair split across two of the classes `N(v) - N(w)`, `N(w) - N(v)`
/// and `N(v) ∩ N(w)` (with `v`, `w` themselves excluded) has its adjacency
/// toggled, and then the labels of `v` and `w` are exchanged.
pub fn pivot(g: &Graph, v: usize, w: usize) -> Result<Graph, PivotError> {
    let n = g.n();
    for x in [v, w] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n }.into());
        }
    }
    if !g.has_edge(v, w) {
        return Err(PivotError::NotAnEdge { v, w });
    }
    let nv = g.adjacency()[v] & !(1 << w);
    let nw = g.adjacency()[w] & !(1 << v);
    let only_v = nv & !nw;
    let only_w = nw & !nv;
    let both = nv & nw;

    let mut h = g.clone();
    let adj = h.adj_mut();
    for x in VertexSet::from_bits(only_v) {
        adj[x] ^= only_w | both;
    }
    for x in VertexSet::from_bits(only_w) {
        adj[x] ^= only_v | both;
    }
    for x in VertexSet::from_bits(both) {
        adj[x] ^= only_v | only_w;
    }
    swap_labels(adj, v, w);
    Ok(h)
}

fn swap_labels(adj: &mut [u64], v: usize, w: usize) {
    adj.swap(v, w);
    let (bv, bw) = (1u64 << v, 1u64 << w);
    for row in adj.iter_mut() {
        let has_v = *row & bv != 0;
        let has_w = *row & bw != 0;
        if has_v != has_w {
            *row ^= bv | bw;
        }
    }
}

/// Lowest-labelled neighbour of `v`, used as the canonical pivot partner.
pub fn contraction_partner(g: &Graph, v: usize) -> Option<usize> {
    g.neighbors(v).first()
}

/// `G/v = (G ∧ vw) \ v` for the lowest neighbour `w`, or `G \ v` when `v` is
/// isolated.
pub fn local_contract(g: &Graph, v: usize) -> Result<(Graph, VertexMap), PivotError> {
    if v >= g.n() {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() }.into());
    }
    Ok(contraction(g, v)?
        .map(|r| (r.result, r.index_map))
        .unwrap_or_else(|| g.delete_vertex(v).expect("vertex checked in range")))
}

/// The contraction of `v` as a [`Reduction`]; `None` if `v` is isolated.
fn contraction(g: &Graph, v: usize) -> Result<Option<Reduction>, PivotError> {
    match contraction_partner(g, v) {
        None => Ok(None),
        Some(w) => {
            let pivoted = pivot(g, v, w)?;
            Ok(Some(Reduction::after_pivots(PivotSequence(vec![(v, w)]), &pivoted, v)?))
        }
    }
}

/// `G/v` as a [`Reduction`]; for isolated `v` it is the plain deletion.
pub fn contraction_reduction(g: &Graph, v: usize) -> Result<Reduction, PivotError> {
    match contraction(g, v)? {
        Some(r) => Ok(r),
        None => Ok(Reduction::deletion(g, v)?),
    }
}

/// For each vertex `v`, the deletion `G \ v` followed by the contraction `G/v`.
///
/// Every one-vertex-smaller pivot-minor of `g` is pivot-equivalent to one of
/// these, since deleting a vertex commutes with pivots on other edges.
pub fn one_smaller_pivot_minors(g: &Graph) -> Vec<Reduction> {
    let mut out = Vec::with_capacity(2 * g.n());
    for v in 0..g.n() {
        out.push(Reduction::deletion(g, v).expect("vertex in range"));
        out.push(contraction_reduction(g, v).expect("vertex in range"));
    }
    out
}

/// Members of a pivot orbit discovered by breadth-first search.
#[derive(Debug, Clone)]
pub struct PivotOrbit {
    members: Vec<Graph>,
    /// For each member, the member it was reached from and the pivot used.
    parents: Vec<Option<(usize, (usize, usize))>>,
    overflow: bool,
}

impl PivotOrbit {
    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True if the search stopped at the cap with unexplored members left.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.members.contains(g)
    }

    /// The pivots leading from the base graph to member `i`.
    pub fn sequence_to(&self, mut i: usize) -> PivotSequence {
        let mut steps = Vec::new();
        while let Some((p, step)) = self.parents[i] {
            steps.push(step);
            i = p;
        }
        steps.reverse();
        PivotSequence(steps)
    }
}

/// Breadth-first closure of `g` under single pivots, deduplicated by labelled
/// equality and truncated once `cap` members have been found.
pub fn pivot_orbit(g: &Graph, cap: usize) -> PivotOrbit {
    let cap = cap.max(1);
    let mut index: HashMap<Graph, usize> = HashMap::new();
    let mut members = vec![g.clone()];
    let mut parents = vec![None];
    index.insert(g.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut overflow = false;
    'bfs: while let Some(i) = queue.pop_front() {
        let current = members[i].clone();
        for (v, w) in current.edges() {
            let h = pivot(&current, v, w).expect("edge from edge list");
            if index.contains_key(&h) {
                continue;
            }
            if members.len() >= cap {
                overflow = true;
                break 'bfs;
            }
            index.insert(h.clone(), members.len());
            members.push(h);
            parents.push(Some((i, (v, w))));
            queue.push_back(members.len() - 1);
        }
    }
    PivotOrbit {
        members,
        parents,
        overflow,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &Graph) -> Vec<(usize, usize)> {
        g.edges()
    }

    #[test]
    fn pivot_k2_is_identity() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(pivot(&k2, 0, 1).unwrap(), k2);
    }

    #[test]
    fn pivot_p3_by_hand() {
        // a=0, b=1, c=2 with edges ab, bc: no toggles, then a and b swap labels.
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(edges(&pivot(&p3, 0, 1).unwrap()), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn pivot_c5_by_hand() {
        // N(0)-N(1)-{1} = {4}, N(1)-N(0)-{0} = {2}, common = {}: toggle 24, swap 0 and 1.
        let c5 = Graph::cycle(5).unwrap();
        let expected = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 4), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(pivot(&c5, 0, 1).unwrap(), expected);
        assert_eq!(pivot(&c5, 1, 0).unwrap(), expected);
    }

    #[test]
    fn pivot_rejects_non_edge() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(pivot(&c5, 0, 2), Err(PivotError::NotAnEdge { v: 0, w: 2 }));
        assert!(pivot(&c5, 0, 9).is_err());
    }

    #[test]
    fn local_contract_examples() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(local_contract(&g, 3).unwrap(), g.delete_vertex(3).unwrap());

        // Replay: pivot C5 on 01, then delete 0. Old labels 1..4 become 0..3.
        let (paw, map) = local_contract(&Graph::cycle(5).unwrap(), 0).unwrap();
        let expected = Graph::from_edges(4, &[(0, 3), (1, 3), (2, 3), (1, 2)]).unwrap();
        assert_eq!(paw, expected);
        assert_eq!(map.get(4), Some(3));

        let (k1, _) = local_contract(&Graph::complete(2).unwrap(), 0).unwrap();
        assert_eq!(k1, Graph::empty(1).unwrap());
    }

    #[test]
    fn orbit_examples() {
        let e = Graph::empty(4).unwrap();
        let orbit = pivot_orbit(&e, 10);
        assert_eq!(orbit.members(), &[e]);
        assert!(!orbit.overflowed());

        let k2 = Graph::complete(2).unwrap();
        assert_eq!(pivot_orbit(&k2, 10).len(), 1);

        let c5 = Graph::cycle(5).unwrap();
        let orbit = pivot_orbit(&c5, 100);
        assert!(!orbit.overflowed());
        assert!(orbit.contains(&c5));
        assert!(orbit.contains(&pivot(&c5, 0, 1).unwrap()));
        for (i, m) in orbit.members().iter().enumerate() {
            assert_eq!(&orbit.sequence_to(i).apply(&c5).unwrap(), m);
            for (v, w) in m.edges() {
                assert!(orbit.contains(&pivot(m, v, w).unwrap()));
            }
        }
    }

    #[test]
    fn orbit_cap_reports_overflow() {
        let c5 = Graph::cycle(5).unwrap();
        let orbit = pivot_orbit(&c5, 2);
        assert_eq!(orbit.len(), 2);
        assert!(orbit.overflowed());
    }

    #[test]
    fn one_smaller_examples() {
        let k1 = pivot_minors_of(&Graph::empty(1).unwrap());
        assert_eq!(k1, vec![Graph::empty(0).unwrap(); 2]);

        let k2 = pivot_minors_of(&Graph::complete(2).unwrap());
        assert_eq!(k2, vec![Graph::empty(1).unwrap(); 4]);

        let c5 = Graph::cycle(5).unwrap();
        let reductions = one_smaller_pivot_minors(&c5);
        assert_eq!(reductions.len(), 10);
        for (i, r) in reductions.iter().enumerate() {
            assert!(r.replays_from(&c5));
            assert_eq!(r.deleted, i / 2);
            let deg: Vec<usize> = {
                let mut d: Vec<usize> = (0..4).map(|u| r.result.degree(u)).collect();
                d.sort();
                d
            };
            if i % 2 == 0 {
                assert_eq!(deg, vec![1, 1, 2, 2], "P4");
            } else {
                assert_eq!(deg, vec![1, 2, 2, 3], "paw");
            }
        }
    }

    fn pivot_minors_of(g: &Graph) -> Vec<Graph> {
        one_smaller_pivot_minors(g).into_iter().map(|r| r.result).collect()
    }
}
