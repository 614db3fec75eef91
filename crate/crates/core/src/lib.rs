//! Executable clone theory over finite and homogeneous structures.
//!
//! The crate computes type spaces of structures, decides canonicity of
//! operations, factors canonical clones onto finite type clones, decides
//! satisfiability of finite equation systems (in a clone, in the projection
//! clone, and modulo unary maps applied from the outside), lifts type-clone
//! solutions back to concrete functions over growing finite sets, and builds
//! a clone of polymorphisms of (ℚ,<) whose unique homomorphism to the
//! projection clone is not continuous.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod canonical;
pub mod cli;
pub mod clones;
pub mod equations;
pub mod error;
pub mod lifting;
pub mod operation;
pub mod plmap;
pub mod qclone;
pub mod rational;
pub mod structures;
pub mod term;

pub use error::{Error, Result};
pub use rational::Rational;
