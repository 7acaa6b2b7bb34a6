//! Finite-category colimit calculus.
//!
//! Everything here works with *total composition tables*: a finite category
//! is its full list of objects, morphisms, identities and composites, so
//! every law (associativity, functoriality, naturality) can be checked
//! exhaustively and every construction terminates. On top of that base the
//! crate builds comma-style fibers and twisted-arrow categories
//! ([`constructions`]), the calculus of Set-valued diagrams — colimits,
//! restrictions, left Kan extensions and weighted colimits by two
//! independent routes ([`setfun`]) — rational nerve homology and acyclicity
//! certificates ([`homotopy`]), cofinality deciders and a randomized
//! verification harness ([`cofinality`]), and a symmetric-algebra
//! cross-check in rational vector spaces ([`symalg`]).

pub mod cofinality;
pub mod constructions;
pub mod fincat;
pub mod homotopy;
pub mod setfun;
pub mod symalg;

/// Crate-wide error type.
///
/// Validation errors carry the ids of the offending cells so a failing
/// table can be repaired by hand.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown label `{label}` in the carrier of `{object}`")]
    UnknownLabel { object: String, label: String },
    #[error("no composite assigned for `{g}` after `{f}`")]
    MissingComposite { g: String, f: String },
    #[error("composite `{gf}` of `{g}` after `{f}` has the wrong endpoints")]
    CompositeTypeMismatch { g: String, f: String, gf: String },
    #[error("`{g}` after `{f}` is not a composable pair")]
    NotComposable { g: String, f: String },
    #[error("associativity fails on the triple (`{h}`, `{g}`, `{f}`)")]
    AssociativityViolation { h: String, g: String, f: String },
    #[error("unit law fails at `{f}`")]
    UnitViolation { f: String },
    #[error("functor does not preserve the composite of (`{g}`, `{f}`)")]
    CompositionNotPreserved { g: String, f: String },
    #[error("functor does not preserve the identity of `{object}`")]
    IdentityNotPreserved { object: String },
    #[error("typing mismatch for `{item}`: {detail}")]
    TypingMismatch { item: String, detail: String },
    #[error("diagram is not functorial on the pair (`{g}`, `{f}`)")]
    FunctorialityViolation { g: String, f: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("generated closure exceeds the cap of {cap} morphisms")]
    GeneratorClosureTooLarge { cap: usize },
    #[error("simplex budget exceeded in degree {degree}: {count} > {budget}")]
    SimplexBudgetExceeded {
        degree: usize,
        count: usize,
        budget: usize,
    },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("random generation gave up after {retries} retries")]
    GenerationRetryExceeded { retries: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
