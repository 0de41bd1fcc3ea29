//! One representative per isomorphism class of small graphs.
//!
//! Graphs on `n` vertices are generated by attaching a new vertex, with every
//! possible neighbourhood, to each representative on `n - 1` vertices, then
//! deduplicated by canonical form. Output is the canonical representatives
//! sorted by graph6 string.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::canonical_graph;
use crate::graph::{Graph, GraphError};
use crate::graph6::to_graph6;

/// Largest order the enumerator supports; beyond it, feed graph6 streams
/// from an external generator.
pub const ENUMERATE_MAX_VERTICES: usize = 8;

/// Every simple graph on `n` vertices up to isomorphism, in a fixed order.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > ENUMERATE_MAX_VERTICES {
        return Err(GraphError::Unsupported(format!(
            "enumeration of {n}-vertex graphs (limit {ENUMERATE_MAX_VERTICES})"
        )));
    }
    let mut level = vec![Graph::empty(0)?];
    for m in 1..=n {
        level = extend(&level, m)?;
    }
    Ok(level)
}

/// All graphs on up to `max_n` vertices, grouped by increasing order.
pub fn enumerate_graphs_up_to(max_n: usize) -> Result<Vec<Graph>, GraphError> {
    if max_n > ENUMERATE_MAX_VERTICES {
        return enumerate_graphs(max_n);
    }
    let mut out = vec![Graph::empty(0)?];
    let mut level = out.clone();
    for m in 1..=max_n {
        level = extend(&level, m)?;
        out.extend(level.iter().cloned());
    }
    Ok(out)
}

fn extend(prev: &[Graph], m: usize) -> Result<Vec<Graph>, GraphError> {
    let new = m - 1;
    let found: Vec<(String, Graph)> = prev
        .par_iter()
        .flat_map_iter(|g| {
            (0..1u64 << new).map(move |nbrs| {
                let mut adj = g.adjacency().to_vec();
                for (u, row) in adj.iter_mut().enumerate() {
                    *row |= (nbrs >> u & 1) << new;
                }
                adj.push(nbrs);
                let h = Graph::from_adjacency_unchecked(adj);
                let c = canonical_graph(&h).expect("order within canonical limit");
                (to_graph6(&c), c)
            })
        })
        .collect();
    let unique: BTreeMap<String, Graph> = found.into_iter().collect();
    Ok(unique.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: all labelled graphs, deduplicated by the minimum graph6 string
    /// over every vertex permutation.
    fn brute_force_classes(n: usize) -> usize {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let ps = perms(n);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut seen = std::collections::BTreeSet::new();
        for m in 0..1u32 << pairs.len() {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let key = ps.iter().map(|p| to_graph6(&g.permute(p))).min().unwrap();
            seen.insert(key);
        }
        seen.len()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_graphs(1).unwrap().len(), 1);
        assert_eq!(brute_force_classes(3), 4);
        assert_eq!(enumerate_graphs(3).unwrap().len(), 4);
        assert_eq!(brute_force_classes(4), 11);
        assert_eq!(enumerate_graphs(4).unwrap().len(), 11);
        assert_eq!(brute_force_classes(5), 34);
        assert_eq!(enumerate_graphs(5).unwrap().len(), 34);
    }

    #[test]
    fn known_counts_up_to_7() {
        let counts: Vec<usize> = (0..=7).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
    }

    #[test]
    fn deterministic_order() {
        assert_eq!(enumerate_graphs(5).unwrap(), enumerate_graphs(5).unwrap());
        assert_eq!(enumerate_graphs_up_to(3).unwrap().len(), 1 + 1 + 2 + 4);
    }

    #[test]
    fn rejects_n_above_8() {
        assert!(enumerate_graphs(9).is_err());
    }
}
