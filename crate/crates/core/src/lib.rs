//! Degree-moment statistics of binary relations, an entropy linear program
//! that turns them into upper bounds on join and homomorphism counts, an
//! exact homomorphism counter, and a benchmark harness comparing the two.

pub mod bench;
pub mod cli;
pub mod entropy_lp;
pub mod error;
pub mod graph;
pub mod homcount;
pub mod simplex;
pub mod stats;
pub mod synth;

pub use entropy_lp::{build_lp, solve_bound, BoundReport, BoundStatus, EntropyLp, Query};
pub use error::{Error, Result};
pub use graph::{load_edge_list, Graph, VertexId};
pub use homcount::{catalog, catalog_pattern, count_homs, count_homs_with_budget, Pattern};
pub use stats::{
    bistar_moment, cat_n, cat_v, cat_w, compute_exact, compute_stat, star_norm, Orientation,
    StatKey, StatKind, StatRecord,
};
