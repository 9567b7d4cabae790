//! Exact diagram calculus for the Deligne category Rep(S_t).
//!
//! Morphisms are sparse rational(-function) combinations of partition
//! diagrams; objects of the Karoubi envelope are idempotent endomorphisms of
//! tensor powers of the generating object h.  On top of that live the
//! interpolated coset-algebra families (one per subgroup H of S_k), their
//! symbolic axiom and simplicity certificates, and the honest symmetric-group
//! side used to validate everything at integer fibers t = n.

pub mod accept;
pub mod algebras;
pub mod config;
pub mod diagrams;
pub mod error;
pub mod fiber;
pub mod karoubi;
pub mod linalg;
pub mod partitions;
pub mod scalars;
pub mod symgroup;

pub use error::{Error, Result};
