//! Assessment, comparison and improvement of balanced lattice experimental
//! designs through pairwise coincidences.
//!
//! A *lattice design* is an `n x s` matrix of levels in `{0..q-1}`; it is
//! *balanced* (U-type) when every level appears `n/q` times in every column.
//! The library works with the vector of pairwise coincidences `beta_r` (the
//! number of coordinates in which two runs agree, over all run pairs), and
//! builds everything else on top of it:
//!
//! * [`majorization`] — the majorization partial order on PC vectors,
//!   admissibility classification of design pools, and the flattest
//!   integer benchmark vector;
//! * [`kernel`] / [`schur`] — convex kernels, the separable Schur criterion
//!   `sum psi(beta_r)` and its universal lower bound;
//! * [`classical`] — the classical criteria this machinery unifies:
//!   generalized word-length pattern, deviation pattern, Ave(chi^2) / E(s^2),
//!   categorical and L2 discrepancies, all with benchmarks;
//! * [`construction`] — the Robin Hood swap and an iterated descent that
//!   flattens a design's PC vector under a chosen kernel.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

pub mod classical;
pub mod construction;
pub mod design;
pub mod kernel;
pub mod krawtchouk;
pub mod majorization;
pub mod report;
pub mod schur;

mod rng;

pub use design::{
    coincidence_matrix, equidistance_class, parse_design, pc_vector, project, random_balanced,
    write_design, CoincidenceMatrix, Design, DesignError, DesignFile, EquidistanceClass, PCVector,
};
pub use kernel::{parse_kernel_spec, ConvexKernel, KernelError, KernelParseError, KernelSpec};
pub use majorization::{
    benchmark_pc, classify_pool, compare_pc, cumsum_profile, MajError, MajorizationRelation,
    PCBenchmark, PoolClassification, ProfileRow,
};
pub use schur::{benchmark_bound, benchmark_bound_exact, schur_psi, SchurValue};
