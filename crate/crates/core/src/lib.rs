//! Logical difference between ELH^r terminologies.
//!
//! The crate parses terminologies in an s-expression syntax, normalizes and
//! classifies them, builds canonical models, checks simulations and computes
//! concept, instance and query difference witnesses with example inclusions.

pub mod canonical;
pub mod diff;
pub mod error;
pub mod model;
pub mod normalize;
mod par;
pub mod reasoner;
mod rules;
pub mod simulation;
pub mod syntax;

pub use canonical::{build_canonical, build_generating, instance_check, Element, Interpretation, KnowledgeBase};
pub use diff::{compute_diff, DiffOptions, Direction, Inclusion, Mode, ModeReport, Strategy, WitnessKey, WitnessReport};
pub use error::{Error, Result};
pub use model::{Abox, Assertion, Axiom, Concept, ConceptName, IndividualName, RoleName, Signature, Terminology};
pub use normalize::{normalize, NormalizedTerminology};
pub use reasoner::{classify, SubsumptionIndex};
