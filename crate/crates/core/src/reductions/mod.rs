//! Executable reductions to the query problems: k-sum, orthogonal vectors from
//! 4x4 determinants, and affine degeneracy testing.

mod degeneracy;
mod hopcroft;
mod ksum;

pub use degeneracy::{affinely_dependent, detect_affine_degeneracy, DegeneracyConfig, DegeneracyReport};
pub use hopcroft::{hopcroft_lift, lift_left, lift_right};
pub use ksum::{default_trials, ksum_lift, ksum_lift_with_slots, ksum_trial, solve_ksum, KSumConfig, KSumInstance, LiftedInstance, Solver};
