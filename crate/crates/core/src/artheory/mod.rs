//! Auslander–Reiten translate, almost split predicates relative to the
//! subspace representations, and the closure that builds a finite catalog
//! of indecomposables with its meshes.

mod almost_split;
mod catalog;
mod translate;

pub use almost_split::{
    is_left_almost_split, is_right_almost_split, is_split_epi, is_split_mono, verify_ar_sequence, ARSequence,
    LocalObject, MeshFailure, RANDOM_TESTS,
};
pub use catalog::{build_catalog, export_quiver, AlmostSplitMap, Catalog, IrreducibleArrow, Mesh, DEFAULT_BUDGET};
pub use translate::{
    cokernel, dtr, has_summand, indecomposable_injectives, indecomposable_projectives, injective, projective,
    radical_subrep, relative_translate_candidate, tau_inverse,
};
