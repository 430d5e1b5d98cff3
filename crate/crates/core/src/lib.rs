//! Intuitionistic fuzzy metric spaces and fixed points of ψ-φ contractive maps.
//!
//! The crate is organised bottom-up:
//!
//! * [`norm`]: continuous t-norms / t-conorms and their axiom checks.
//! * [`space`]: point domains and the membership (μ) / non-membership (ν)
//!   structure, in Archimedean or non-Archimedean form.
//! * [`audit`]: seeded sampling of the space axioms with witness shrinking.
//! * [`contraction`]: control functions ψ, φ and the contraction conditions.
//! * [`solver`]: Picard iteration with convergence diagnostics, orbit-cycle
//!   solving on finite domains and the joint-continuity check.
//! * [`cli`]: configuration loading and the `ifm` subcommands.

pub mod audit;
pub mod cli;
pub mod contraction;
pub mod error;
pub mod norm;
pub mod solver;
pub mod space;

pub use error::{Error, Result};

/// Tolerance for algebraic identities and one-sided inequality checks.
pub const TOL: f64 = 1e-12;
