//! Exact chain pair simplification under the discrete Fréchet distance.
//!
//! Given chains `A` and `B`, find subsequences `A'` and `B'` with
//! `d_dF(A, A') <= delta1`, `d_dF(B, B') <= delta2` and
//! `d_dF(A', B') <= delta3` that are as short (or as light) as possible.
//!
//! * [`geometry`]: points, chains and the discrete Fréchet distance.
//! * [`solver`]: the two-sided problem, unweighted and weighted.
//! * [`one_sided`]: simplifying one chain against a fixed other.
//! * [`oracle`]: exhaustive reference solvers and hard-instance generator.
//! * [`pdb_io`]: α-carbon traces from PDB files, plus csv/json chains.
//! * [`bench`]: the protein backbone benchmark behind `chainpair bench`.
//!
//! All vertex indices are 0-based.

// `!(x >= 0.0)` style checks are meant to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod cli;
pub mod geometry;
pub mod one_sided;
pub mod oracle;
pub mod pdb_io;
pub mod solver;

pub use geometry::{
    discrete_frechet, euclidean_distance, frechet_decision, verify_simplification, Chain, FrechetResult, GeometryError,
    Point,
};
pub use one_sided::{one_sided_cps3f_min, simplify_min_delta, simplify_min_k, Simplification};
pub use solver::{
    cps3f_decision, cps3f_min_doubling, cps3f_min_dp, cps3f_min_graph, obtainable_weights, wcps3f_decision, wcps3f_min,
    CpsError, CpsParams, CpsSolution, EndpointMode, SolveStats, WeightedSolution,
};
