//! The δ-matrix machinery behind the inequality: Gram expansion, the real
//! and four-way complex bounds, duality, and end-to-end verification.

mod constants;
mod delta;
mod duality;
mod eigen;
mod extremal;
mod gram;
mod split;
mod theorem;

pub use constants::{cross_term, estimate_c1, estimate_c1_with, C1Estimate, CrossWitness};
pub use delta::{build_delta, build_delta_allowing_duplicates, DeltaMatrix, DeltaRow, DenseDelta};
pub use duality::{dual_quotient, duality_check, DualityReport, DUALITY_RTOL, TRIAL_RTOL};
pub use eigen::{top_eigenpair, top_eigenpair_seeded, EigenPair, DEFAULT_EIGEN_SEED, POWER_MAX_ITERATIONS, RESIDUAL_RTOL};
pub use extremal::{extremal_ratio, extremal_ratio_for, ExtremalReport, PullbackEntry};
pub use gram::{gram_matrix, gram_matrix_dense, GramMatrix};
pub use split::{four_way_bound, four_way_split, FourWayBound, FourWaySplit, SPLIT_PHASES};
pub use theorem::{variant_re_bound, verify_theorem, VerificationReport, WitnessEntry, PASS_RTOL};
