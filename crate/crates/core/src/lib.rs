//! Reasoning with the typicality operator in SROEL(⊓,×) knowledge bases.
//!
//! A knowledge base is normalized, translated into program facts and solved
//! natively: answer sets are found by backtracking over rank and
//! auxiliary-membership guesses with saturation after every decision.
//! Entailment is available under the rational, T-minimal and
//! ABox-minimal semantics.

pub mod encode;
pub mod engine;
pub mod fixtures;
pub mod minimal;
pub mod model;
pub mod normalize;
pub mod parser;
pub mod pdlp;
pub mod replicate;
pub mod split;

pub use encode::{emit_asp, translate, Atom, Pred, ProgramFacts, Term};
pub use engine::{compile, AnswerSet, Budget, EngineError, Program, RankedModel};
pub use minimal::{entails, Answer, EntailOptions, RankProfile, ReasonError, Verdict};
pub use model::{Axiom, Concept, ConceptName, IndividualName, KnowledgeBase, Mode, Query, RoleName};
pub use normalize::{normalize, NormalizedKB};
pub use parser::{parse_document, parse_kb, parse_query, ParseError};
