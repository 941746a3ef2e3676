//! Duality sets and value functions, extremal points, regularity, the
//! closed-form dimension bounds with their witnesses, and the `K(b)` tables.

pub mod duality;
pub mod extremal;
pub mod regularity;
pub mod tables;
pub mod theorems;
pub mod witness;

pub use duality::{
    a_qmax, a_qmin, a_set, a_set_generic, b_set, b_value, b_value_primal, BValue, ConstraintMap, DualityData,
    TargetCone,
};
pub use extremal::{chain_subsets, extremal_points_aqmax, f_t, partial_sum_bounds_hold, ExtremalReport};
pub use regularity::{is_b_regular, min_over_permutations, regularity, PermutationMinimum, RegularityClass};
pub use tables::{k_polytopes, k_prime_checked, table2_points, KPolytopes};
pub use theorems::{theorem_bounds, BoundReport, Target};
pub use witness::{verify_witness_le_e, verify_witness_le_mu, witness_le_e, witness_le_mu, WitnessCheck};
