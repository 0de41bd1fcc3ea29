use proptest::prelude::*;
use rankconn_core::gf2::rank_of_rows;
use rankconn_core::{
    canonical_form, local_contract, parse_graph6, pivot, rank_width, to_graph6, BitMatrix, CutRankTable, Graph,
    VertexSet,
};

/// Gaussian elimination on a dense boolean matrix, kept apart from the
/// packed implementation.
fn dense_rank(mut m: Vec<Vec<bool>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_dense(m: &BitMatrix) -> Vec<Vec<bool>> {
    (0..m.n_rows())
        .map(|i| (0..m.n_cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..=20, 1usize..=20).prop_flat_map(|(r, c)| {
        prop::collection::vec(any::<u64>(), r).prop_map(move |rows| {
            let mask = (1u64 << c) - 1;
            BitMatrix::from_rows(c, rows.into_iter().map(|x| x & mask).collect()).unwrap()
        })
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for j in 0..n {
                for i in 0..j {
                    if it.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn graph_and_set(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let full = g.vertices().bits();
        (Just(g), any::<u64>().prop_map(move |b| VertexSet::from_bits(b & full)))
    })
}

proptest! {
    #[test]
    fn rank_matches_dense_elimination(m in matrix()) {
        prop_assert_eq!(m.rank(), dense_rank(to_dense(&m)));
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().unwrap().rank());
    }

    #[test]
    fn row_operations_keep_rank(m in matrix(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let mut rows = m.rows().to_vec();
        let (i, j) = (i.index(rows.len()), j.index(rows.len()));
        if i != j {
            rows[i] ^= rows[j];
        }
        rows.swap(0, i);
        prop_assert_eq!(rank_of_rows(&rows), m.rank());
    }

    #[test]
    fn cut_rank_is_symmetric_and_bounded((g, x) in graph_and_set(14)) {
        let r = g.cut_rank(x);
        let rest = x.complement_in(g.vertices());
        prop_assert_eq!(r, g.cut_rank(rest));
        prop_assert!(r <= x.len().min(rest.len()));
    }

    #[test]
    fn cut_rank_is_submodular((g, x) in graph_and_set(12), y in any::<u64>()) {
        let y = VertexSet::from_bits(y & g.vertices().bits());
        prop_assert!(g.cut_rank(x) + g.cut_rank(y) >= g.cut_rank(x & y) + g.cut_rank(x | y));
    }

    #[test]
    fn table_agrees_with_direct_cut_rank((g, x) in graph_and_set(10)) {
        let t = CutRankTable::new(&g).unwrap();
        prop_assert_eq!(t.get(x), g.cut_rank(x));
    }

    #[test]
    fn pivot_is_an_involution_preserving_cut_rank((g, x) in graph_and_set(12), e in any::<prop::sample::Index>()) {
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let (v, w) = edges[e.index(edges.len())];
        let h = pivot(&g, v, w).unwrap();
        prop_assert_eq!(&pivot(&h, v, w).unwrap(), &g);
        prop_assert_eq!(h.cut_rank(x), g.cut_rank(x));
    }

    #[test]
    fn pivots_at_a_vertex_differ_by_a_pivot(g in graph(11), x in any::<prop::sample::Index>()) {
        prop_assume!(g.n() > 0);
        let x = x.index(g.n());
        let nbrs = g.neighbors(x).to_vec();
        prop_assume!(nbrs.len() >= 2);
        let (y1, y2) = (nbrs[0], nbrs[nbrs.len() - 1]);
        let lhs = pivot(&g, x, y1).unwrap();
        let rhs = pivot(&pivot(&g, x, y2).unwrap(), y1, y2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn deletion_commutes_with_pivot(g in graph(11), e in any::<prop::sample::Index>(), u in any::<prop::sample::Index>()) {
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let (v, w) = edges[e.index(edges.len())];
        let u = u.index(g.n());
        prop_assume!(u != v && u != w);
        let (gd, map) = g.delete_vertex(u).unwrap();
        let (hd, _) = pivot(&g, v, w).unwrap().delete_vertex(u).unwrap();
        prop_assert_eq!(pivot(&gd, map.get(v).unwrap(), map.get(w).unwrap()).unwrap(), hd);
    }

    #[test]
    fn graph6_round_trips(g in graph(40)) {
        prop_assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn canonical_form_ignores_labels(g in graph(9), shuffled in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
        let perm: Vec<usize> = shuffled.into_iter().filter(|&v| v < g.n()).collect();
        let h = g.permute(&perm);
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn rank_width_drops_by_at_most_one(g in graph(9), v in any::<prop::sample::Index>()) {
        prop_assume!(g.n() > 0);
        let v = v.index(g.n());
        let r = rank_width(&g).unwrap();
        for h in [g.delete_vertex(v).unwrap().0, local_contract(&g, v).unwrap().0] {
            let s = rank_width(&h).unwrap();
            prop_assert!(s <= r && s + 1 >= r);
        }
    }
}
