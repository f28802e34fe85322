//! Self-similar dendrites generated by polygonal tree systems.
//!
//! A system is a convex polygon `P` with contracting similarities whose images
//! sit inside `P`, meet only at common vertices, cover every vertex of `P` and
//! form a contractible union. The attractor of such a system is a dendrite.

pub mod analysis;
pub mod attractor;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod maintree;
pub mod morphism;
pub mod render;
pub mod system;

pub use error::{Error, Result};
