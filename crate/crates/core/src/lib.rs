//! Accreditation-aware exam authoring.
//!
//! Questions are judged by their action verb: each ABET subpoint has an
//! approved verb row, each verb carries Bloom levels, and both the outcome and
//! the levels map onto NCAAA domains. On top of that sit a repair rule, an
//! LLM-backed generation loop and exam coverage reporting.

pub mod blueprint;
pub mod client;
pub mod config;
pub mod error;
pub mod formats;
pub mod generator;
pub mod parser;
pub mod taxonomy;
pub mod validator;

pub use blueprint::{assemble, coverage_matrix, BlueprintRequirement, CourseSpec, CoverageMatrix, Exam, Filler};
pub use client::{ClientParams, CompletionClient, HttpCompletionClient, ScriptedClient};
pub use error::{Error, Result};
pub use generator::{build_prompt, generate, offline_generate, parse_generation_output, Backend, GenerationRequest, GenerationResult};
pub use parser::{extract_action_verbs, normalize_token, tokenize, TokenSpan, VerbHit};
pub use taxonomy::{load_registry, BloomLevel, NcaaaDomain, SubpointId, SubpointSpec, Taxonomy, VerbRegistry};
pub use validator::{suggest_repair, validate_bank, validate_question, Question, QuestionSource, ValidationReport};
