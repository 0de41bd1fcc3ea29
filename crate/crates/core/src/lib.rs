//! Cut-rank calculus over GF(2).
//!
//! * [`gf2`]: bit-matrix rank, the kernel under every cut-rank query.
//! * [`graph`], [`graph6`], [`enumerate`]: the graph value type, interchange
//!   format and small-graph enumeration.
//! * [`pivot`]: pivots, contractions and pivot orbits.
//! * [`connectivity`]: splits, primality, `k^{+l}` rank-connectivity and the
//!   chain-theorem reducers.
//! * [`rankwidth`]: exact rank-width and its decomposition witnesses.
//! * [`canon`], [`search`], [`bounds`]: canonical forms, the excluded
//!   pivot-minor search and the vertex bounds it audits against.
//! * [`verify`]: named property suites used by the CLI and the test suites.
//!
//! ```
//! use rankconn_core::{is_prime, main_chain_step, parse_graph6, rank_width, ChainConfig};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let g = parse_graph6("IheA@GUAo")?;
//! assert!(is_prime(&g));
//! assert_eq!(rank_width(&g)?, 3);
//! let step = main_chain_step(&g, &ChainConfig::default())?;
//! assert!(step.replays_from(&g));
//! # Ok(())
//! # }
//! ```

pub mod bounds;
pub mod canon;
pub mod connectivity;
pub mod enumerate;
pub mod gf2;
pub mod graph;
pub mod graph6;
pub mod pivot;
pub mod rankwidth;
pub mod search;
pub mod verify;

pub use canon::{canonical_form, CanonicalForm};
pub use connectivity::{
    allys_step, check_rank_connectivity, find_barrier, find_fully_closed_sets, find_split, find_triplets, is_prime,
    main_chain_step, rank_connectivity, realize_triplet, reduce_fully_closed, Barrier, ChainConfig, ChainError,
    ConnectivityVerdict, Triplet,
};
pub use enumerate::enumerate_graphs;
pub use gf2::BitMatrix;
pub use graph::{CutRankTable, Graph, GraphError, VertexMap, VertexSet};
pub use graph6::{parse_graph6, to_graph6};
pub use pivot::{local_contract, one_smaller_pivot_minors, pivot, pivot_orbit, PivotSequence, Reduction};
pub use rankwidth::{is_k_branched, is_titanic, rank_decomposition, rank_width, rank_width_naive, RankDecomposition};
pub use search::{is_excluded_pivot_minor, search_excluded, ExcludedRecord, SearchConfig, SearchReport};
pub use verify::{run_suite, suite_names, Budget, PropertyResult, SuiteReport, VerifyError};
