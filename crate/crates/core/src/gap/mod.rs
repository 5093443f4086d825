//! Mordell-Weil lattice geometry and the explicit-constant bookkeeping of the
//! gap principle.

pub mod chain;
mod cone;
mod lattice;
pub mod lemma61;

pub use chain::{
    amgm_min_sq, c_coefficient_sq, deduction_chain, lambda, mumford_bracket, mumford_rhs, optimal_deltas,
    sample_admissible_deltas, AssembledInequality, DeductionChain, MumfordBracket,
};
pub use cone::{
    cone_cover, cone_cover_with, cos_sq_20_lower, cos_sq_20_upper, cos_sq_40_lower, euclidean, finiteness_partition,
    ConeCover, ConeReport, ConeVerdict, PairViolation, PartitionReport,
};
pub use lattice::{MWLattice, Sign};
pub use lemma61::{admissible_params, bound_index_check, Lemma61Params, Lemma61Report, StepResult};
