//! Chain dynamics of free semigroup actions on finite metric discretizations.
//!
//! A system of `m` maps on a finite metric space is turned into per-generator
//! δ-chain relations ([`graph`]); from those the crate computes pseudo-orbit
//! and orbit entropy estimates ([`entropy`]), chain recurrence and mixing
//! times ([`recurrence`]) and the cyclic decomposition of chain transitive
//! systems ([`structure`]).

pub mod budget;
pub mod corpus;
pub mod entropy;
pub mod error;
pub mod graph;
pub mod recurrence;
pub mod solve;
pub mod space;
pub mod structure;
pub mod system;

pub use budget::Budget;
pub use error::{Error, Result};
pub use space::{FiniteMetricSpace, PointId, ScaleLadder};
pub use system::{Chain, GeneratorSystem, MapSpec, Word};
