//! Hybrid zonotopes with sharpness-preserving set operations, an RLT
//! hierarchy that tightens convex relaxations up to the convex hull, and
//! LP-based oracles for membership, support and sharpness.
//!
//! Sets come in two factor forms ([`FactorForm`]); every operation accepts
//! either and documents the form of its output.

pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod ops;
pub mod oracle;
pub mod pipeline;
pub mod relu;
pub mod rlt;
pub mod set;

pub use error::{Error, Result};
pub use linalg::{Mat, Vector};
pub use set::{
    BinaryAssignment, ComplexityTuple, ConstrainedZonotope, FactorForm, HybridZonotope, LeafOptions,
    DEFAULT_ENUMERATION_CAP,
};
