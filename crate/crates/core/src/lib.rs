//! Measures on Hilbert space lattices and generalized effect algebras, made computable.
//!
//! The crate covers four layers:
//!
//! * [`hilbert`], [`forms`] and [`measures`]: finite-dimensional complex
//!   Hilbert spaces, bounded symmetric forms, frame functions and Gleason
//!   measures `M ↦ tr(T·P_M)` on the lattice of subspaces.
//! * [`gea`]: an exhaustive checker for finite generalized effect algebras
//!   (partial commutative monoids with cancellation and positivity).
//! * [`seq`] and [`ext`]: a symbolic engine for diagonal operators on ℓ²
//!   and for σ-finite measures with infinite values, including the partial
//!   sum of regular measures and the failure of σ-additive measures to
//!   form a sub-algebra.
//! * [`sobolev`]: a discretized `L²(0,1)` family of Dirichlet-type forms
//!   whose boundary part blows up under mesh refinement.
//!
//! [`suites`] bundles the randomized property checks used by the CLI and the
//! acceptance tests; [`report`] defines the JSON/CSV check records.

pub mod cli;
pub mod error;
pub mod ext;
pub mod forms;
pub mod gea;
pub mod hilbert;
pub mod measures;
pub mod random;
pub mod report;
pub mod seq;
pub mod sobolev;
pub mod suites;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;

pub use num_complex::Complex64;
