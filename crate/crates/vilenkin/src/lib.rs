//! Computational harmonic analysis on bounded Vilenkin groups.
//!
//! The crate provides, at finite resolution and in plain floating point
//! (with exact integer fast paths on Walsh groups):
//!
//! * the group model itself: digit arithmetic, cosets, the generalized
//!   number system, and the standard decomposition of the complement of a
//!   basic interval ([`group`]);
//! * characters and the Vilenkin-Fourier transform, both as a direct
//!   summation oracle and as a fast mixed-radix factorization
//!   ([`characters`], [`transform`]);
//! * Dirichlet, Fejer, and Norlund kernels together with their closed
//!   forms and decomposition identities ([`kernels`]), plus empirical
//!   constants for the classical kernel bounds ([`bounds`]);
//! * Norlund weight sequences and the growth/regularity conditions under
//!   which the summability theory applies ([`weights`]);
//! * summability means, function norms, atoms, weighted maximal operators,
//!   and the strong-convergence experiments built from them ([`analysis`],
//!   [`maximal`]);
//! * serializable verification reports ([`report`]).

pub mod analysis;
pub mod bounds;
pub mod characters;
pub mod error;
pub mod kernels;
pub mod group;
pub mod maximal;
pub mod report;
pub mod rng;
pub mod step;
pub mod transform;
pub mod weights;

pub use analysis::{Atom, AtomProfile};
pub use error::{Error, Result};
pub use maximal::{ExperimentGrid, MaximalConfig, MaximalSweep};
pub use group::{Coset, GeneratorSequence, GroupElement, LeadingTerm};
pub use rng::SplitMix64;
pub use report::VerificationReport;
pub use step::{Spectrum, StepFunction};
pub use weights::{Verdict, WeightKind, WeightSequence};
