//! Exact non-Archimedean arithmetic and the machinery to probe it: p-adic
//! and trivial valuations on the rationals, truncated Q_p elements with
//! honest precision tracking, three ultrametric space instances, isometry
//! and additivity oracles with a counterexample gallery, and contraction
//! fixed points with closed-ball geometry. All comparisons are exact
//! integer comparisons; nothing is ever rounded through floating point.

pub mod error;
pub mod fixed_point;
pub mod gallery;
pub mod isometry;
pub mod maps;
pub mod padic;
pub mod rational;
pub mod sample;
pub mod space;
pub mod valuation;

pub use error::{Error, Result};
pub use maps::MapSpec;
pub use padic::{DigitExpansion, PAdicNumber, DEFAULT_PRECISION};
pub use rational::ExactRational;
pub use space::{Scalar, SearchSet, SpaceDescriptor, SpacePoint};
pub use valuation::{Base, ExtInt, NormValue, Valuation};
