//! Classification engine for binary rate one-half linear codes and for
//! invertible matrices over GF(2) up to row and column permutations.
//!
//! Objects are turned into colored bipartite graphs, canonically labeled by
//! an individualization-refinement search, and deduplicated by canonical key
//! in an orderly-generation loop. The pipelines built on top classify
//! GL(n, F2) classes, complementary information set (CIS) codes, and
//! `[n, k, >= d]` codes grown along subcode chains.

pub mod canon;
pub mod cli;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod orderly;
pub mod pipelines;

pub use canon::{CanonicalKey, ColoredBipartiteGraph};
pub use codes::{InfoSetCertificate, LinearCode, WeightDistribution};
pub use error::{Error, Result};
pub use gf2::{BitVec, Gf2Matrix};
pub use orderly::{CanonStore, ClassRecord, GenerateOptions, Tags};
