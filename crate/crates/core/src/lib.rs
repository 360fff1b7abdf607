//! Exact symbolic engine for vertex algebras built from formal calculus:
//! Newton forward differences, delta series, residue products and locality,
//! with concrete Heisenberg, affine `sl2` and Virasoro realizations.

pub mod fields;
pub mod formal;
pub mod liealg;
pub mod newton;
pub mod scalars;
pub mod vertex;
