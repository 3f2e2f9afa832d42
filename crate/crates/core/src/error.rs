use thiserror::Error;

use crate::model::{ConceptName, IndividualName};
use crate::syntax::SourceLocation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{loc}: {msg}")]
    Syntax { loc: SourceLocation, msg: String },

    #[error("{loc}: name `{name}` uses the reserved `@` prefix")]
    ReservedName { loc: SourceLocation, name: String },

    #[error("concept `{0}` is defined more than once")]
    DuplicateDefinition(ConceptName),

    #[error("invalid axiom: {0}")]
    InvalidAxiom(String),

    #[error("`{0}` is declared both as a concept and as a role")]
    SignatureClash(String),

    #[error("signature contains reserved name `{0}`")]
    ReservedInSignature(String),

    #[error("an ABox must contain at least one assertion")]
    EmptyAbox,

    #[error("unknown individual `{0}`")]
    UnknownIndividual(IndividualName),

    #[error("concept outside the permitted family: {0}")]
    Family(String),

    #[error("terminology is cyclic; the NotWitness strategy needs acyclic input")]
    Cyclic,

    #[error("the EL NotWitness recursion needs normalized terminologies without role, domain or range axioms")]
    NotEl,

    #[error("ABox contains no role names")]
    NoRoles,

    #[error("example verification failed for `{0}`")]
    Verification(String),
}
