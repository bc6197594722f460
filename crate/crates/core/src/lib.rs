//! Exact combinatorial and geometric toolkit: quadratic-field arithmetic,
//! simplicial and cubical complexes, non-revisiting facet paths, discrete
//! Morse matchings, subspace arrangement Betti numbers, cross-bedding cubical
//! tori and projective incidence constructions.

pub mod arrangement;
pub mod cct;
pub mod complexcore;
pub mod exactfield;
pub mod hirschpath;
pub mod morse;
pub mod projective;

pub use exactfield::{field_sign, solve_nullspace, FieldElem, MatF, Rat, Vec5, VecF};
