//! Exact engine for dimensions of Kisin varieties.
//!
//! Modules, bottom up:
//! - [`rational`]: exact scalars and vector helpers;
//! - [`perm`]: permutations, ord tableaux, admissible subsets, `rho_w`, the order `≼`;
//! - [`polyhedra`]: H/V conversions, cone duality, LP, max flow;
//! - [`kisin_model`]: coordinates `q`/`mu`, the cones, linear forms, `phi` functions;
//! - [`bounds`]: duality sets, closed-form bounds, witnesses, the `K(b)` tables;
//! - [`solver`]: exact dimensions by lattice-point optimization and closed forms.

pub mod bounds;
pub mod error;
pub mod index;
pub mod kisin_model;
pub mod perm;
pub mod polyhedra;
pub mod rational;
pub mod solver;

pub use error::{KisinError, Result};
pub use index::TriIndex;
pub use kisin_model::{KisinInstance, MuTriangle, PhiFunctions, QPoint};
pub use perm::{OrdTableau, Permutation};
pub use polyhedra::{HPolyhedron, Halfspace, VPolyhedron};
pub use rational::{Rational, RationalVector};
