//! Contextuality for event, bundle and simplicial scenarios.
//!
//! The crate builds finite scenarios and their morphisms, tensor products and
//! mapping scenarios, and decides contextuality of empirical models by exact
//! rational linear feasibility. Every verdict carries a checkable witness:
//! a distribution over global sections, or a Farkas vector.

pub mod bundle;
pub mod complex;
pub mod dist;
pub mod error;
pub mod event;
pub mod io;
pub mod laws;
pub mod report;
pub mod solve;
pub mod sset;

pub use error::{Error, Result};
