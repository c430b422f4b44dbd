//! Two-missing-entry 4×4 patterns: one-parameter nested families, sufficient
//! conditions, and a decision procedure with exact certificates.

mod decide;
mod family;

pub use decide::{
    decide_nn3_two_missing, simplicial_sign_check, special_case_low_rank, sufficient_11_21,
    EnvelopePiece, Nn3Certificate, Normalization, Padded, Sample, Verdict, ENVELOPE_BUDGET,
    SPLIT_DEPTH,
};
pub use family::{
    family_11_21, family_11_22, End, FamilyMember, Interval, NestedFamily, TwoMissing,
};
