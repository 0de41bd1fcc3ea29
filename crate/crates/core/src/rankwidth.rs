//! Exact rank-width by dynamic programming over vertex subsets, with
//! decomposition witnesses and the k-branched and titanic predicates.
//!
//! `W(S)` is the least width of a rooted binary tree on the leaves `S` whose
//! top edge is counted too: `W({v}) = rho({v})` and
//! `W(S) = max(rho(S), min over splits of max(W(S1), W(S2)))`. Since
//! `rho(V) = 0`, the rank-width is `W(V)` once `n >= 2`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::{CutRankTable, Graph, GraphError, VertexSet};

/// Largest graph accepted by the subset DP (`3^n` transitions).
pub const RANKWIDTH_MAX_VERTICES: usize = 20;

/// Largest graph accepted by the tree-enumeration oracle.
pub const NAIVE_MAX_VERTICES: usize = 7;

/// A subcubic tree with the graph's vertices on its leaves.
///
/// Tree nodes `0..n` are the leaves, with `leaf_of[v]` the leaf carrying
/// vertex `v`; internal nodes follow. One vertex gives a lone leaf and no
/// edges, two vertices give two leaves joined by one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDecomposition {
    pub n_nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub leaf_of: Vec<usize>,
    /// `rho` of the leaf set on the first endpoint's side of each edge.
    pub edge_widths: Vec<usize>,
    pub width: usize,
}

impl RankDecomposition {
    /// Vertices whose leaves lie on `from`'s side of the edge `(from, to)`.
    fn side(&self, adj: &[Vec<usize>], from: usize, to: usize) -> VertexSet {
        let mut on_side = vec![false; self.n_nodes];
        let mut stack = vec![from];
        on_side[from] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !on_side[y] && !(x == from && y == to) {
                    on_side[y] = true;
                    stack.push(y);
                }
            }
        }
        self.leaf_of
            .iter()
            .enumerate()
            .filter(|(_, &l)| on_side[l])
            .map(|(v, _)| v)
            .collect()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the tree shape, the leaf bijection, and every stored width
    /// against cut-ranks recomputed from `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.n();
        if self.leaf_of.len() != n || self.edge_widths.len() != self.edges.len() {
            return false;
        }
        let adj = self.adjacency();
        let is_tree = self.edges.len() + 1 == self.n_nodes && {
            let mut seen = vec![false; self.n_nodes];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        if !is_tree {
            return false;
        }
        let mut leaves: Vec<usize> = (0..self.n_nodes).filter(|&x| adj[x].len() <= 1).collect();
        let mut mapped = self.leaf_of.clone();
        leaves.sort_unstable();
        mapped.sort_unstable();
        let degrees_ok = adj.iter().all(|a| a.len() <= 1 || a.len() == 3);
        if !degrees_ok || leaves != mapped {
            return false;
        }
        let widths_ok = self
            .edges
            .iter()
            .zip(&self.edge_widths)
            .all(|(&(a, b), &w)| g.cut_rank(self.side(&adj, a, b)) == w);
        widths_ok && self.width == self.edge_widths.iter().copied().max().unwrap_or(0)
    }
}

fn check_size(n: usize, limit: usize, what: &str) -> Result<(), GraphError> {
    if n > limit {
        return Err(GraphError::Unsupported(format!(
            "{what} of a {n}-vertex graph (limit {limit})"
        )));
    }
    Ok(())
}

/// `W` for every subset, plus the chosen first part of each best split.
struct Dp {
    w: Vec<u8>,
    split: Vec<u32>,
}

fn run_dp(g: &Graph, keep_splits: bool) -> Result<Dp, GraphError> {
    let n = g.n();
    check_size(n, RANKWIDTH_MAX_VERTICES, "rank-width")?;
    let table = CutRankTable::new(g)?;
    let rho = table.as_slice();
    let size = 1usize << n;
    let mut w = vec![0u8; size];
    let mut split = if keep_splits { vec![0u32; size] } else { Vec::new() };
    for s in 1..size {
        if s & (s - 1) == 0 {
            w[s] = rho[s];
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let floor = rho[s];
        let mut best = u8::MAX;
        let mut best_part = 0;
        // First parts: `low` plus a proper submask of `rest`.
        let mut t = 0usize;
        loop {
            let s1 = low | t;
            let cand = w[s1].max(w[s ^ s1]);
            if cand < best {
                best = cand;
                best_part = s1;
                if best <= floor {
                    break;
                }
            }
            t = t.wrapping_sub(rest) & rest;
            if t == rest {
                break;
            }
        }
        w[s] = best.max(floor);
        if keep_splits {
            split[s] = best_part as u32;
        }
    }
    Ok(Dp { w, split })
}

/// Exact rank-width; 0 for graphs with at most one vertex.
pub fn rank_width(g: &Graph) -> Result<usize, GraphError> {
    if g.n() <= 1 {
        return Ok(0);
    }
    let dp = run_dp(g, false)?;
    Ok(usize::from(dp.w[(1usize << g.n()) - 1]))
}

/// A decomposition whose width equals [`rank_width`].
pub fn rank_decomposition(g: &Graph) -> Result<RankDecomposition, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::Unsupported("rank decomposition of the empty graph".into()));
    }
    let leaf_of: Vec<usize> = (0..n).collect();
    if n == 1 {
        return Ok(RankDecomposition {
            n_nodes: 1,
            edges: Vec::new(),
            leaf_of,
            edge_widths: Vec::new(),
            width: 0,
        });
    }
    let dp = run_dp(g, true)?;
    let mut next = n;
    let mut edges = Vec::with_capacity(2 * n - 3);
    let mut edge_widths = Vec::with_capacity(2 * n - 3);

    // Returns the node at the top of the subtree for `s`.
    fn build(
        s: usize,
        dp: &Dp,
        g: &Graph,
        next: &mut usize,
        edges: &mut Vec<(usize, usize)>,
        widths: &mut Vec<usize>,
    ) -> usize {
        if s & (s - 1) == 0 {
            return s.trailing_zeros() as usize;
        }
        let node = *next;
        *next += 1;
        let s1 = dp.split[s] as usize;
        for part in [s1, s ^ s1] {
            let child = build(part, dp, g, next, edges, widths);
            edges.push((child, node));
            widths.push(g.cut_rank(VertexSet::from_bits(part as u64)));
        }
        node
    }

    let full = (1usize << n) - 1;
    let s1 = dp.split[full] as usize;
    let a = build(s1, &dp, g, &mut next, &mut edges, &mut edge_widths);
    let b = build(full ^ s1, &dp, g, &mut next, &mut edges, &mut edge_widths);
    edges.push((a, b));
    edge_widths.push(g.cut_rank(VertexSet::from_bits(s1 as u64)));
    let width = edge_widths.iter().copied().max().unwrap_or(0);
    debug_assert_eq!(width, usize::from(dp.w[full]));
    Ok(RankDecomposition {
        n_nodes: next,
        edges,
        leaf_of,
        edge_widths,
        width,
    })
}

/// Rank-width by trying every unrooted binary tree on `n` labelled leaves.
///
/// Trees are grown by inserting leaf `i` into each edge of every tree on
/// leaves `0..i`; widths use direct cut-rank evaluation.
pub fn rank_width_naive(g: &Graph) -> Result<usize, GraphError> {
    let n = g.n();
    check_size(n, NAIVE_MAX_VERTICES, "naive rank-width")?;
    match n {
        0 | 1 => return Ok(0),
        2 => return Ok(g.cut_rank(VertexSet::singleton(0))),
        _ => {}
    }
    // Leaves are nodes 0..n; internal nodes are numbered from n.
    let star = vec![(0, n), (1, n), (2, n)];
    let mut best = usize::MAX;
    let mut stack = vec![(star, 3usize)];
    while let Some((edges, placed)) = stack.pop() {
        if placed == n {
            best = best.min(tree_width(g, &edges));
            continue;
        }
        let internal = n + placed - 2;
        for i in 0..edges.len() {
            let (a, b) = edges[i];
            let mut e = edges.clone();
            e[i] = (a, internal);
            e.push((internal, b));
            e.push((placed, internal));
            stack.push((e, placed + 1));
        }
    }
    Ok(best)
}

fn tree_width(g: &Graph, edges: &[(usize, usize)]) -> usize {
    let n = g.n();
    let nodes = 2 * n - 2;
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    edges
        .iter()
        .map(|&(a, b)| {
            let mut side = VertexSet::EMPTY;
            let mut seen = vec![false; nodes];
            seen[a] = true;
            seen[b] = true;
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                if x < n {
                    side.insert(x);
                }
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            g.cut_rank(side)
        })
        .max()
        .unwrap_or(0)
}

/// `rho(B) <= k`, and either `|B| = 1` or `B` splits into two k-branched parts.
pub fn is_k_branched(g: &Graph, b: VertexSet, k: usize) -> Result<bool, GraphError> {
    if b.is_empty() {
        return Err(GraphError::Unsupported("k-branched test of the empty set".into()));
    }
    if !b.is_subset(g.vertices()) {
        return Err(GraphError::SetOutOfRange { set: b, n: g.n() });
    }
    let mut memo = HashMap::new();
    Ok(branched(g, b.bits(), k, &mut memo))
}

fn branched(g: &Graph, b: u64, k: usize, memo: &mut HashMap<u64, bool>) -> bool {
    if let Some(&known) = memo.get(&b) {
        return known;
    }
    let result = g.cut_rank(VertexSet::from_bits(b)) <= k && {
        let low = b & b.wrapping_neg();
        let rest = b ^ low;
        rest == 0 || {
            let mut t = 0u64;
            let mut found = false;
            while !found {
                let s1 = low | t;
                found = branched(g, s1, k, memo) && branched(g, b ^ s1, k, memo);
                t = t.wrapping_sub(rest) & rest;
                if t == rest {
                    break;
                }
            }
            found
        }
    };
    memo.insert(b, result);
    result
}

/// Every partition of `a` into three parts, empty parts allowed, has a part
/// whose cut-rank is at least `rho(a)`.
pub fn is_titanic(g: &Graph, a: VertexSet) -> bool {
    let target = g.cut_rank(a);
    if target == 0 {
        return true;
    }
    let members = a.to_vec();
    // Restricted-growth labelling: each unordered partition is visited once.
    fn rec(g: &Graph, members: &[usize], i: usize, parts: &mut [VertexSet; 3], used: usize, target: usize) -> bool {
        if i == members.len() {
            return parts.iter().any(|&p| g.cut_rank(p) >= target);
        }
        let v = members[i];
        for p in 0..(used + 1).min(3) {
            parts[p].insert(v);
            let ok = rec(g, members, i + 1, parts, used.max(p + 1), target);
            parts[p].remove(v);
            if !ok {
                return false;
            }
        }
        true
    }
    rec(g, &members, 0, &mut [VertexSet::EMPTY; 3], 0, target)
}
