//! Higher-dimensional walks on ordinals.
//!
//! This crate implements n-dimensional C-sequences with their coherence
//! condition, the signed trace-tree walk recursion, the walk characteristics
//! (signed step counts and their free-abelian enrichment), and an analysis
//! layer that mechanically checks the structural properties of walks on
//! desk-scale ordinal universes below `w^w`.

pub mod analysis;
pub mod canon;
pub mod chars;
pub mod club;
pub mod cseq;
pub mod error;
pub mod game;
pub mod group;
pub mod ordinal;
pub mod rng;
pub mod specfile;
pub mod stepped;
pub mod walk;

pub use club::{Club, ClubForm};
pub use cseq::CSequence;
pub use error::{ClubError, ParseError, SeqError, WalkError};
pub use group::GroupElement;
pub use ordinal::{OrdTuple, Ordinal, OrdinalClass, TupleKind};
pub use walk::{Sign, WalkTree};
