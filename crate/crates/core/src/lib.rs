//! Exact low-rank and low-nonnegative-rank completion of partial matrices.
//!
//! Everything is computed over the rationals; there are no tolerances.
//! Matrix indices on the public surface are 1-based.

pub mod completion;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod nn3;
pub mod nnrank3;
pub mod partial;
pub mod poly;
pub mod rational;

pub use completion::{
    classify_one_missing, eval_boundary_sextic, extend_by_sparse_row, hole_value_via_minor,
    in_singular_image, nn_rank2_complete_3x3, nn_rank2_pattern_equivalence, perturb_unique_nmf,
    rank1_complete, CompletionOutcome, FactorSide, PerturbationSpec,
};
pub use error::{Error, Result};
pub use geometry::{
    contains, nested_triangle, polytopes_from_factorization, slack_matrix, HalfPlane, NestedPair,
    Point, Polygon2, Slice, Triangle,
};
pub use linalg::{matmul, minor, rank, solve_linear, Matrix, Solution};
pub use nn3::{
    decide_nn3_two_missing, family_11_21, family_11_22, simplicial_sign_check,
    special_case_low_rank, sufficient_11_21, NestedFamily, Nn3Certificate, TwoMissing, Verdict,
};
pub use nnrank3::{nn_rank_at_most_3, NnRank3};
pub use partial::{
    cycle_property, minors_zero_consistent, parse_partial, support_graph, zero_line_property,
    PartialMatrix, Pattern, SupportGraph, ZeroLine,
};
pub use poly::{Poly, RatFn};
pub use rational::{int, rat, Rational};
