//! Compatible transfer operators for nonsymmetric algebraic multigrid.
//!
//! For a nonsingular `A`, a CF-splitting and restriction/interpolation operators
//! `R`, `P`, the coarse-grid correction `Π = P (RᵀAP)⁻¹ RᵀA` is an oblique
//! projection. This crate builds pairs for which `Π` is orthogonal in a chosen
//! SPD norm `M` (`‖Π‖_M = 1`), and measures how far arbitrary pairs are from it:
//!
//! * [`linalg`]: partitioned blocks, Schur complements, SPD machinery, `M`-norms;
//! * [`transfer`]: ideal operators, compatible closed forms, ideal pairs and the
//!   full pair catalog;
//! * [`projection`]: `Π`, its `M`-norm, non-orthogonality and canonical angle;
//! * [`problems`]: advection, diffusion and random test matrices;
//! * [`solver`]: relaxation, two-grid propagators and convergence factors.
//!
//! All algebra is dense `f64`, aimed at problems up to a couple of thousand
//! unknowns.

pub mod error;
pub mod io;
pub mod linalg;
pub mod problems;
pub mod projection;
pub mod solver;
pub mod transfer;

pub use error::{Error, Result};
pub use linalg::{
    m_adjoint, operator_m_norm, partition, realize_norm, schur_c, schur_f, spd_check, CFPartition,
    Matrix, NormSpec, NormTag, PartitionedMatrix, Vector,
};
pub use problems::{default_splitting, generate, ProblemKind, ProblemSpec, SplitPolicy};
pub use projection::{
    analyze, build_pi, min_canonical_angle, nonorth_measure, orthogonality_checks, pi_m_norm,
    verify_compat_equation, CoarseOperator, OrthogonalityChecks, ProjectionReport,
};
pub use solver::{
    air_cpoint_residual, conv_factor, iterate, relax_propagator, two_grid_propagator,
    IterationHistory, RelaxKind, RelaxSpec, TwoGridSpec,
};
pub use transfer::{
    catalog_pairs, change_of_basis_pair, compatible_w_from_z, compatible_z_from_w, ideal_pair,
    ideal_w, ideal_z, Anchor, CatalogEntry, CompatNorm, IdealPair, QChoice, TransferPair,
};
