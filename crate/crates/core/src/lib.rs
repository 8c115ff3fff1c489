//! Verification workbench for Gessel walks in the quarter plane.
//!
//! The crate ties together several independent routes to the same numbers:
//!
//! - exact enumeration of walks and the closed-form excursion count
//!   ([`walk_counting`]);
//! - the kernel curve, its branch points and the order-8 group of the walk
//!   ([`kernel_curve`]);
//! - Weierstrass `℘`, `℘′` and `ζ` on arbitrary lattices of full periods
//!   ([`weierstrass`]);
//! - the elliptic parametrisation of the kernel curve, its periods and the
//!   algebraic values `T_ℓ` ([`uniformization`]);
//! - the `ζ`-function representations of the boundary generating functions
//!   ([`zeta_gf`]);
//! - hypergeometric closed forms and exact power series identities
//!   ([`hypergeometric`], [`series`]).
//!
//! Every numerical check returns a [`report::VerificationReport`] so that the
//! command line tool and the test-suite can share the same code paths.

pub mod error;
pub mod hypergeometric;
pub mod kernel_curve;
pub mod quad;
pub mod report;
pub mod sampling;
pub mod series;
pub mod suite;
pub mod uniformization;
pub mod walk_counting;
pub mod weierstrass;
pub mod zeta_gf;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default grid of `z` values used by the verification suites.
pub const DEFAULT_Z_GRID: [f64; 6] = [0.02, 0.05, 0.1, 0.15, 0.2, 0.24];
