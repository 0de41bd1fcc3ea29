//! Canonical labelling of small graphs.
//!
//! Individualisation-refinement: the vertex partition is refined to an
//! equitable ordered partition by neighbour counts, then a non-singleton cell
//! is split by individualising each of its vertices in turn. Every discrete
//! leaf gives a relabelling; the canonical form is the leaf with the smallest
//! graph6 string. Subtrees are skipped when a stored automorphism fixing the
//! current prefix maps the candidate vertex onto an explored sibling.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};
use crate::graph6::to_graph6;

/// Largest graph accepted by the canonical labeller.
pub const CANON_MAX_VERTICES: usize = 16;

/// graph6 string of the canonical representative of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn graph6(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, GraphError> {
    Ok(CanonicalForm(to_graph6(&canonical_graph(g)?)))
}

pub fn canonical_graph(g: &Graph) -> Result<Graph, GraphError> {
    let perm = canonical_labeling(g)?;
    Ok(g.permute(&perm))
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_graph(a)? == canonical_graph(b)?)
}

/// Permutation `perm` with `g.permute(&perm)` canonical.
pub fn canonical_labeling(g: &Graph) -> Result<Vec<usize>, GraphError> {
    let n = g.n();
    if n > CANON_MAX_VERTICES {
        return Err(GraphError::Unsupported(format!(
            "canonical form of a {n}-vertex graph (limit {CANON_MAX_VERTICES})"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut search = Search {
        adj: g.adjacency(),
        n,
        best: None,
        first_key: None,
        first_inv: Vec::new(),
        autos: Vec::new(),
    };
    let mut cells = vec![(1u64 << n) - 1];
    refine(search.adj, &mut cells);
    let mut prefix = Vec::with_capacity(n);
    search.descend(cells, &mut prefix);
    let (_, inv) = search.best.expect("search visits at least one leaf");
    let mut perm = vec![0; n];
    for (pos, &v) in inv.iter().enumerate() {
        perm[v] = pos;
    }
    Ok(perm)
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    /// Smallest key so far and its position -> vertex map.
    best: Option<(u128, Vec<usize>)>,
    first_key: Option<u128>,
    first_inv: Vec<usize>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<u64>, prefix: &mut Vec<usize>) {
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i);
        let Some(ti) = target else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[ti];
        let mut explored: Vec<usize> = Vec::new();
        let mut bits = cell;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if !explored.is_empty() && self.same_orbit_as_any(prefix, v, &explored) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(1u64 << v);
            child.push(cell & !(1u64 << v));
            child.extend_from_slice(&cells[ti + 1..]);
            refine(self.adj, &mut child);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    fn leaf(&mut self, cells: &[u64]) {
        let inv: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let key = self.key(&inv);
        match self.first_key {
            None => {
                self.first_key = Some(key);
                self.first_inv = inv.clone();
            }
            Some(k) if k == key => {
                let auto = automorphism(&self.first_inv, &inv);
                self.autos.push(auto);
            }
            _ => {}
        }
        match &self.best {
            Some((bk, binv)) if *bk == key => {
                let auto = automorphism(binv, &inv);
                self.autos.push(auto);
            }
            Some((bk, _)) if *bk < key => {}
            _ => self.best = Some((key, inv)),
        }
    }

    /// Upper triangle in graph6 bit order, first bit most significant.
    fn key(&self, inv: &[usize]) -> u128 {
        let mut key = 0u128;
        for j in 1..self.n {
            let row = self.adj[inv[j]];
            for &vi in &inv[..j] {
                key = key << 1 | u128::from((row >> vi & 1) as u8);
            }
        }
        key
    }

    fn same_orbit_as_any(&self, prefix: &[usize], v: usize, explored: &[usize]) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for auto in &self.autos {
            if prefix.iter().all(|&u| auto[u] == u) {
                any = true;
                for (x, &y) in auto.iter().enumerate() {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }
}

/// The automorphism sending the vertex at each position of `a` to the vertex
/// at the same position of `b`.
fn automorphism(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut map = vec![0; a.len()];
    for (&x, &y) in a.iter().zip(b) {
        map[x] = y;
    }
    map
}

/// Refines an ordered partition until every cell is equitable with respect to
/// every other cell. Cells split into fragments ordered by neighbour count,
/// so the result depends only on the graph up to relabelling.
fn refine(adj: &[u64], cells: &mut Vec<u64>) {
    let mut groups = [0u64; 65];
    'again: loop {
        for s in 0..cells.len() {
            let splitter = cells[s];
            let mut split = false;
            let mut next = Vec::with_capacity(cells.len() + 1);
            for &cell in cells.iter() {
                if cell & (cell - 1) == 0 {
                    next.push(cell);
                    continue;
                }
                let mut bits = cell;
                let (mut lo, mut hi) = (64usize, 0usize);
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let c = (adj[v] & splitter).count_ones() as usize;
                    groups[c] |= 1 << v;
                    lo = lo.min(c);
                    hi = hi.max(c);
                }
                let before = next.len();
                for g in &mut groups[lo..=hi] {
                    if *g != 0 {
                        next.push(*g);
                        *g = 0;
                    }
                }
                split |= next.len() - before > 1;
            }
            if split {
                *cells = next;
                continue 'again;
            }
        }
        break;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force isomorphism by trying every permutation.
    fn iso_brute(a: &Graph, b: &Graph) -> bool {
        fn rec(a: &Graph, b: &Graph, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let k = perm.len();
            if k == a.n() {
                return a.permute(perm) == *b;
            }
            for t in 0..a.n() {
                if !used[t] {
                    // Partial check: edges among assigned vertices must match.
                    if (0..k).all(|i| a.has_edge(i, k) == b.has_edge(perm[i], t)) {
                        used[t] = true;
                        perm.push(t);
                        if rec(a, b, perm, used) {
                            return true;
                        }
                        perm.pop();
                        used[t] = false;
                    }
                }
            }
            false
        }
        a.n() == b.n() && rec(a, b, &mut Vec::new(), &mut vec![false; a.n()])
    }

    #[test]
    fn relabelled_paths_agree() {
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let q = Graph::from_edges(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
    }

    #[test]
    fn distinguishes_c4_from_triangle_plus_vertex() {
        let c4 = Graph::cycle(4).unwrap();
        let k3k1 = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_ne!(canonical_form(&c4).unwrap(), canonical_form(&k3k1).unwrap());
    }

    #[test]
    fn idempotent() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (2, 6)]).unwrap();
        let c = canonical_form(&g).unwrap();
        let again = canonical_form(&crate::graph6::parse_graph6(c.graph6()).unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn matches_brute_force_isomorphism_on_all_5_vertex_graphs() {
        let n = 5;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let graphs: Vec<Graph> = (0..1u32 << pairs.len())
            .map(|m| {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                Graph::from_edges(n, &edges).unwrap()
            })
            .collect();
        let forms: Vec<CanonicalForm> = graphs.iter().map(|g| canonical_form(g).unwrap()).collect();
        // Compare each graph with a fixed sample of others.
        for (i, g) in graphs.iter().enumerate().step_by(7) {
            for (j, h) in graphs.iter().enumerate().step_by(13) {
                assert_eq!(forms[i] == forms[j], iso_brute(g, h), "{g:?} vs {h:?}");
            }
        }
        let mut distinct = forms.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 34);
    }

    #[test]
    fn symmetric_16_vertex_graphs_finish() {
        for g in [
            Graph::empty(16).unwrap(),
            Graph::complete(16).unwrap(),
            Graph::cycle(16).unwrap(),
            Graph::from_edges(16, &(0..8).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>()).unwrap(),
        ] {
            let perm: Vec<usize> = (0..16).map(|i| (i * 5 + 3) % 16).collect();
            assert_eq!(canonical_form(&g).unwrap(), canonical_form(&g.permute(&perm)).unwrap());
        }
    }

    #[test]
    fn rejects_large_graphs() {
        assert!(canonical_form(&Graph::empty(17).unwrap()).is_err());
    }
}
