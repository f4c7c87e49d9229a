//! Acyclic closures, minimal models and homotopy invariants of standard graded
//! algebras `k[x_1..x_n]/I`, computed exactly inside a truncation window.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`]: polynomials over ℚ or 𝔽ₚ, Gröbner bases, ideal operations;
//! * [`presentation`]: validated graded presentations and pairs of quotients;
//! * [`dg`]: free graded-commutative DG algebras with exterior, polynomial and
//!   divided-power variables;
//! * [`homology`]: per-bidegree homology and minimal cycle generators;
//! * [`tate`]: acyclic closures, minimal models and maps between them;
//! * [`invariants`]: Betti numbers, Poincaré series, Tor, and the theorem checks.

pub mod dg;
pub mod error;
pub mod field;
pub mod homology;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod tate;
pub mod window;

pub use error::{Error, ParseError};
pub use field::{Field, Scalar};
pub use window::Window;
