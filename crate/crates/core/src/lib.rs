//! Exact-arithmetic decision procedures for Gabor systems generated by
//! normalized indicator functions of rational box unions over rational
//! block-triangular time-frequency lattices of density 1.
//!
//! Everything is computed over arbitrary-precision rationals; verdicts come
//! with machine-checkable certificates (witness index pairs, decompositions,
//! normal forms, incompleteness frequencies) rather than floating-point
//! confidence.

pub mod boxset;
pub mod cyclo;
pub mod error;
pub mod expcomplete;
pub mod fourier;
pub mod gabor;
pub mod lattice;
pub mod matrix;
pub mod polygon;
pub mod rat;
pub mod window;

pub use boxset::{
    box_fundamental_domain, dyadic_tail_comb, fd_decomposition, is_packing, ks_decomposition,
    multitile_level_direct, packing_shift, reduce_mod, AxisBox, BoxSet, ReducedPiece, TileClass,
};
pub use cyclo::{cyclotomic_polynomial, CycloNum, DEFAULT_CONDUCTOR_BOUND};
pub use error::{Error, Result};
pub use expcomplete::{
    classify_2x2, expcomplete_1d, incompleteness_witness, prop_g_test, ExpClassification,
    ExpStatus, NormalForm,
};
pub use fourier::{
    ft_boxset, multitile_level_fourier, vanishes_on_affine_lattice, FourierValue, VanishWitness,
    Vanishing,
};
pub use gabor::{
    admissible_shift_solver, gabor_check, reduce_time_block, structure_report, GaborSpec,
    OrthogonalityWitness, ShiftConstraint, ShiftSolution, ShiftVerdict, StructureReport, Verdict,
    VerdictStatus,
};
pub use lattice::{coset_reps, kernel_lattice, ut_to_lt, RatLattice, UpperToLower};
pub use matrix::{column_hnf, hnf_lower, RatMatrix};
pub use polygon::{
    arrangement_cell_areas, multiplicity_at_point, multitile_verify_arrangement, octagon_pipeline,
    CellWitness, ConvexPolygon, MultitileCheck, OctagonReport, RefutedCase,
};
pub use rat::{rat, Rat, RatVec};
pub use window::{certify_construction, construct_window, WindowConstruction};
