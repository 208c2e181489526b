//! Solution families of homogeneous algebraic Riccati equations (HAREs).
//!
//! The equation `Q = A'QA - A'QB (R + B'QB)^-1 B'QA` always admits `Q = 0`;
//! when the dynamics matrix `A` is "mixed" (has eigenvalue pairs with
//! product one) the full solution set can contain infinitely many families.
//! Each family is generated from one solution `P_Delta` of the Stein
//! equation `A P A' - P = B R^-1 B'` through the explicit formula
//! `Q = [(I - Pi_S) P_Delta (I - Pi_S)]^+`, one solution per A-invariant
//! subspace `S`. This crate solves the Stein equation together with its
//! homogeneous kernel, enumerates the invariant-subspace lattice for
//! non-derogatory `A`, generates and deduplicates the families, and
//! classifies arbitrary symmetric candidates - including the detection of
//! *spurious* solutions that belong to no family at all.
//!
//! The `hare` binary in this crate exposes the same operations on JSON
//! problem files; see the repository README for the file formats.

pub mod error;
pub mod io;
pub mod linalg;
pub mod riccati;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{
    orthonormal_basis, projector, solve_vectorized, sym_kernel_basis, sym_pinv,
    sym_pinv_with_scale, sym_range_basis, Matrix, MatrixOperator, OperatorDomain, OperatorTerm,
    SolveOutcome, SymMatrix, TolerancePolicy,
};
pub use riccati::{
    classify_solution, default_delta_samples, enumerate_families, family_solution, hare_residual,
    homogeneous_kernel_dim, is_solution, riccati_to_stein, solve_stein_set, stein_residual,
    stein_to_riccati, theorem4_guarantee, Classification, FamilySolution, HareProblem,
    SteinSolutionSet,
};
pub use spectral::{
    analyze_spectrum, check_invariant, enumerate_invariant_subspaces, is_reachable, Completeness,
    EigenvalueClass, InvariantLattice, SpectrumReport, Subspace,
};
