//! Exact lattice, Weyl group and quotient bookkeeping for degree-2 del Pezzo surfaces.

pub mod piclattice;
pub mod weyl;
pub mod numberfield;
pub mod quotient;
pub mod iskovskikh;
pub mod classify;
pub mod family_cubic;
pub mod family_quartic;
pub mod cli;
