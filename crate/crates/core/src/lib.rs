//! Derivative-free black-box optimization with a-priori algorithm selection.
//!
//! All optimizers follow one ask/tell/recommend contract ([`Optimizer`]).
//! [`selector::select`] maps a [`ProblemDescriptor`] (dimension, budget,
//! parallelism, noise, domain kind) to a configured optimizer from the
//! portfolio in [`optimizers`], [`local_search`] and [`combinators`].

pub mod archive;
pub mod combinators;
pub mod domain;
pub mod error;
pub mod local_search;
pub mod optimizer;
pub mod optimizers;
pub mod seed;
pub mod selector;
pub mod transforms;

pub use archive::{Archive, ArchiveEntry};
pub use domain::{Domain, ProblemDescriptor, Value, VariableSpec};
pub use error::{Error, Result};
pub use optimizer::{minimize, Algorithm, BoxedOptimizer, Candidate, Engine, Optimizer};
pub use selector::{select, Leaf, RoutingDecision};
pub use transforms::{encode_dimension, sample_decode, Codec, SearchSpace};
